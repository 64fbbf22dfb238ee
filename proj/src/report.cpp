#include "podles/report.hpp"

#include <cmath>
#include <cstdio>

namespace podles {

std::string format17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void emit(std::string& out, const Json& j, int depth)
{
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close(2 * depth, ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + Json(it.key()).dump() + ": ";
            emit(out, it.value(), depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ",\n";
            first = false;
            out += pad;
            emit(out, v, depth + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case Json::value_t::number_float: {
        double v = j.get<double>();
        out += std::isfinite(v) ? format17(v) : "null";
        return;
    }
    default:
        out += j.dump();
    }
}

Json opt_number(const std::optional<double>& v)
{
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

} // namespace

std::string dump_json(const Json& j)
{
    std::string out;
    emit(out, j, 0);
    out += "\n";
    return out;
}

Json context_json(const ModelContext& ctx, int N2, const SuiteOptions& opt)
{
    Json c;
    c["q"] = ctx.q;
    c["t"] = ctx.t;
    c["lmax2"] = ctx.lmax2;
    c["N2"] = N2;
    c["prec"] = ctx.prec_bits;
    c["arith"] = use_binary64(ctx.prec_bits) ? "binary64" : "mpfr";
    c["guard"] = opt.guard;
    c["tol"] = opt.tol;
    if (ctx.dirac.kind == DiracSchedule::Kind::Linear) {
        c["dirac"] = {{"c1", ctx.dirac.c1}, {"c2", ctx.dirac.c2}};
    } else {
        Json vals = Json::array();
        for (const auto& [l2, d] : ctx.dirac.custom) vals.push_back({l2, d});
        c["dirac"] = {{"custom", vals}};
    }
    return c;
}

Json check_json(const CheckReport& r)
{
    Json j;
    j["id"] = r.id;
    j["mode"] = to_string(r.mode);
    j["pass"] = r.pass;
    j["residual"] = opt_number(r.residual);
    j["slope"] = opt_number(r.slope);
    j["r2"] = opt_number(r.r2);
    j["expected"] = opt_number(r.expected);
    j["tol"] = r.tol;
    j["ms"] = opt_number(r.ms);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json suite_json(const ModelContext& ctx, int N2, const SuiteOptions& opt, const std::vector<CheckReport>& checks)
{
    Json j;
    j["ctx"] = context_json(ctx, N2, opt);
    Json arr = Json::array();
    int pass = 0;
    for (const auto& r : checks) {
        arr.push_back(check_json(r));
        if (r.pass) ++pass;
    }
    j["checks"] = arr;
    j["summary"] = {{"pass", pass}, {"fail", static_cast<int>(checks.size()) - pass}};
    return j;
}

void write_series_csv(std::ostream& os, const std::vector<CheckReport>& checks)
{
    os << "check,component,l2,norm\n";
    for (const auto& r : checks)
        for (const auto& s : r.series)
            for (const auto& [l2, v] : s.norms) os << r.id << ',' << s.component << ',' << l2 << ',' << format17(v) << '\n';
}

void write_text(std::ostream& os, const std::vector<CheckReport>& checks)
{
    for (const auto& r : checks) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s  %-14s %-9s", r.pass ? "PASS" : "FAIL", r.id.c_str(), to_string(r.mode));
        os << buf;
        if (r.residual) os << "  residual=" << format17(*r.residual);
        if (r.slope) os << "  slope=" << format17(*r.slope);
        if (r.r2) os << "  r2=" << format17(*r.r2);
        if (r.expected) os << "  expected=" << format17(*r.expected);
        if (r.ms) os << "  ms=" << format17(*r.ms);
        if (!r.note.empty()) os << "  (" << r.note << ")";
        os << '\n';
    }
}

} // namespace podles
