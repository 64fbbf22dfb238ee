#include "cli.hpp"

#include "podles/analysis.hpp"
#include "podles/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace podles::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_common(CLI::App* sub, CliConfig& cfg)
{
    sub->add_option("--q", cfg.q, "deformation parameter in (0,1)");
    sub->add_option("--t", cfg.t, "sphere parameter in [0,1]");
    sub->add_option("--lmax2", cfg.lmax2, "twice the largest spin kept");
    sub->add_option("--prec", cfg.prec, "mantissa bits; up to 64 runs in binary64");
    sub->add_option("--tol", cfg.tol, "residual tolerance");
    sub->add_option("--guard", cfg.guard, "guard band in generator steps");
    sub->add_option("--N2", cfg.N2, "twice the winding number N");
    sub->add_option("--c1", cfg.c1, "Dirac eigenvalue slope");
    sub->add_option("--c2", cfg.c2, "Dirac eigenvalue offset");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_flag("--timing", cfg.timing, "record elapsed milliseconds per check");
}

ModelContext make_context(const CliConfig& cfg)
{
    ModelContext ctx;
    ctx.q = cfg.q;
    ctx.t = cfg.t;
    ctx.lmax2 = cfg.lmax2;
    ctx.prec_bits = cfg.prec;
    ctx.dirac.c1 = cfg.c1;
    ctx.dirac.c2 = cfg.c2;
    ctx.validate();
    return ctx;
}

SuiteOptions make_options(const CliConfig& cfg)
{
    SuiteOptions opt;
    opt.guard = cfg.guard;
    opt.tol = cfg.tol;
    opt.timing = cfg.timing;
    return opt;
}

std::string pick_format(const CliConfig& cfg, const char* fallback)
{
    return cfg.format.empty() ? fallback : cfg.format;
}

template <class R> int cmd_verify(const CliConfig& cfg, const ModelContext& ctx, std::ostream& os)
{
    auto g = build_geometry<R>(ctx, cfg.N2);
    auto opt = make_options(cfg);
    auto checks = run_algebraic_checks(g, opt);
    auto decay = run_decay_checks(g, opt);
    checks.insert(checks.end(), decay.begin(), decay.end());
    const std::string fmt = pick_format(cfg, "json");
    if (fmt == "json")
        os << dump_json(suite_json(ctx, cfg.N2, opt, checks));
    else if (fmt == "csv")
        write_series_csv(os, checks);
    else
        write_text(os, checks);
    for (const auto& r : checks)
        if (!r.pass) return kExitFail;
    return kExitPass;
}

template <class R> int cmd_decay(const CliConfig& cfg, const ModelContext& ctx, std::ostream& os)
{
    auto g = build_geometry<R>(ctx, cfg.N2);
    auto opt = make_options(cfg);
    auto checks = run_decay_checks(g, opt);
    const std::string fmt = pick_format(cfg, "csv");
    if (fmt == "json")
        os << dump_json(suite_json(ctx, cfg.N2, opt, checks));
    else if (fmt == "csv")
        write_series_csv(os, checks);
    else
        write_text(os, checks);
    for (const auto& r : checks)
        if (!r.pass) return kExitFail;
    return kExitPass;
}

template <class R> int cmd_index(const CliConfig& cfg, const ModelContext& ctx, std::ostream& os)
{
    PairingMethod method;
    if (cfg.method == "trace")
        method = PairingMethod::Trace;
    else if (cfg.method == "series")
        method = PairingMethod::Series;
    else
        throw UsageError("--method must be trace or series");
    auto g = build_geometry<R>(ctx, cfg.N2);
    if (!g.invertible) throw std::invalid_argument("the pairing needs an invertible Dirac operator");
    auto res = chern_pairing(g, method);
    const std::string fmt = pick_format(cfg, "text");
    const double value = to_double(res.value);
    const double bound = to_double(res.bound);
    if (fmt == "json") {
        Json j;
        j["ctx"] = context_json(ctx, cfg.N2, make_options(cfg));
        j["method"] = cfg.method;
        j["value"] = value;
        j["bound"] = bound;
        j["converged"] = res.converged;
        os << dump_json(j);
    } else if (fmt == "csv") {
        os << "l2,term\n";
        for (const auto& [l2, v] : res.level_terms) os << l2 << ',' << format17(to_double(v)) << '\n';
    } else {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.8f ± %.3g\n", value, bound);
        os << buf;
        if (!res.converged) os << "warning: level terms are not decreasing; raise --prec or --lmax2\n";
    }
    return res.converged ? kExitPass : kExitFail;
}

template <class R> int cmd_zeta(const CliConfig& cfg, const ModelContext& ctx, std::ostream& os)
{
    auto g = build_geometry<R>(ctx, cfg.N2);
    const std::string fmt = pick_format(cfg, "text");
    BandedOperator<R> op;
    int degree = 0;
    std::string label;
    bool scalar = false;
    if (cfg.bb > 0) {
        if (std::abs(cfg.N2) != 1) throw std::invalid_argument("--bb needs N2 = +-1");
        auto h = build_hat(g);
        op = beta_monomial(h, cfg.bb);
        degree = 2;
        label = "P(beta beta^*)^" + std::to_string(cfg.bb) + "Q";
    } else {
        auto a = parse_element(cfg.elem, g.q(), g.t());
        op = represent(a, g);
        degree = a.degree();
        scalar = a.is_scalar();
        label = cfg.elem;
    }
    Json j;
    j["ctx"] = context_json(ctx, cfg.N2, make_options(cfg));
    j["elem"] = label;
    int code = kExitPass;
    if (cfg.residue != 0) {
        auto res = residue_at(cfg.residue, op, degree, g);
        const double value = to_double(res.value);
        const double error = to_double(res.error);
        if (!res.converged) code = kExitFail;
        if (fmt == "json") {
            j["pole"] = cfg.residue;
            j["value"] = value;
            j["error"] = error;
            j["converged"] = res.converged;
            os << dump_json(j);
        } else {
            char buf[128];
            std::snprintf(buf, sizeof buf, "residue_at(%d) = %.10g ± %.3g\n", cfg.residue, value, error);
            os << buf;
            if (!res.converged) os << "warning: level traces did not settle\n";
        }
    } else {
        Cplx<R> z(from_decimal<R>(cfg.z), from_decimal<R>(cfg.zim));
        auto v = zeta_partial(op, degree, z, g, scalar);
        const double re = to_double(v.re);
        const double im = to_double(v.im);
        if (fmt == "json") {
            j["z"] = {to_double(z.re), to_double(z.im)};
            j["value"] = {re, im};
            os << dump_json(j);
        } else {
            os << "zeta(" << cfg.z << (cfg.zim == "0" ? "" : "+" + cfg.zim + "i") << ") = " << format17(re);
            if (im != 0) os << " + " << format17(im) << "i";
            os << '\n';
        }
    }
    return code;
}

template <class R> int cmd_dump(const CliConfig& cfg, const ModelContext& ctx, std::ostream& os)
{
    auto g = build_geometry<R>(ctx, cfg.N2);
    const std::map<std::string, std::function<BandedOperator<R>()>> ops = {
        {"xm1", [&] { return g.x(-1); }},
        {"x0", [&] { return g.x(0); }},
        {"xp1", [&] { return g.x(1); }},
        {"zm1", [&] { return g.zi(-1); }},
        {"z0", [&] { return g.zi(0); }},
        {"zp1", [&] { return g.zi(1); }},
        {"D", [&] { return g.D; }},
        {"absD", [&] { return g.absD; }},
        {"F", [&] { return g.F; }},
        {"gamma", [&] { return g.gamma; }},
        {"J", [&] { return g.J.linear_part(); }},
        {"J0", [&] { return g.J0.linear_part(); }},
        {"Lq", [&] { return g.Lq; }},
        {"k", [&] { return build_uq(UqGen::K, g.basis, g.table()); }},
        {"kinv", [&] { return build_uq(UqGen::Kinv, g.basis, g.table()); }},
        {"e", [&] { return build_uq(UqGen::E, g.basis, g.table()); }},
        {"f", [&] { return build_uq(UqGen::F, g.basis, g.table()); }},
        {"elem", [&] { return represent(parse_element(cfg.elem, g.q(), g.t()), g); }},
    };
    auto it = ops.find(cfg.op);
    if (it == ops.end()) throw UsageError("unknown --op " + cfg.op);
    dump(os, it->second());
    return kExitPass;
}

using Handler = int (*)(const CliConfig&, const ModelContext&, std::ostream&);

struct Handlers {
    Handler binary64;
    Handler mpfr;
};

int dispatch(const CliConfig& cfg, std::ostream& os)
{
    static const std::map<std::string, Handlers> table = {
        {"verify", {&cmd_verify<double>, &cmd_verify<Mp>}},
        {"index", {&cmd_index<double>, &cmd_index<Mp>}},
        {"zeta", {&cmd_zeta<double>, &cmd_zeta<Mp>}},
        {"decay", {&cmd_decay<double>, &cmd_decay<Mp>}},
        {"dump", {&cmd_dump<double>, &cmd_dump<Mp>}},
    };
    const auto& h = table.at(cfg.subcommand);
    ModelContext ctx = make_context(cfg);
    if (use_binary64(ctx.prec_bits)) return h.binary64(cfg, ctx, os);
    PrecisionScope scope(ctx.prec_bits);
    return h.mpfr(cfg, ctx, os);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CliConfig cfg;
    CLI::App app{"Finite-truncation spectral triples on the Podles spheres"};
    app.name("podles");
    app.require_subcommand(1);
    const std::pair<const char*, const char*> commands[] = {
        {"verify", "run the algebraic and decay checks, JSON report"},
        {"index", "index pairing with the Bott projection"},
        {"zeta", "zeta function value or residue"},
        {"decay", "block-norm series of the decay checks, CSV"},
        {"dump", "entries of one operator"},
    };
    for (auto [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub, cfg);
        if (std::string(name) == "index") sub->add_option("--method", cfg.method, "trace or series");
        if (std::string(name) == "zeta") {
            sub->add_option("--residue", cfg.residue, "pole 1 or 2; 0 evaluates at --z");
            sub->add_option("--z", cfg.z, "real part of the evaluation point");
            sub->add_option("--zim", cfg.zim, "imaginary part of the evaluation point");
            sub->add_option("--elem", cfg.elem, "algebra element, e.g. \"(x0 - t)^2/(1+q^2)^2\"");
            sub->add_option("--bb", cfg.bb, "use P(beta beta^*)^k Q instead of --elem");
        }
        if (std::string(name) == "dump") {
            sub->add_option("--op", cfg.op, "xm1 x0 xp1 zm1 z0 zp1 D absD F gamma J J0 Lq k kinv e f elem");
            sub->add_option("--elem", cfg.elem, "algebra element for --op elem");
        }
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (const char* env = std::getenv("PODLES_PREC_BITS")) {
        try {
            cfg.prec = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            err << "error: PODLES_PREC_BITS must be a positive integer\n";
            return kExitUsage;
        }
    }

    try {
        if (cfg.out.empty()) return dispatch(cfg, out);
        std::ostringstream buf;
        int code = dispatch(cfg, buf);
        std::ofstream file(cfg.out, std::ios::binary);
        if (!file) {
            err << "error: cannot write " << cfg.out << '\n';
            return kExitUsage;
        }
        file << buf.str();
        return code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

} // namespace podles::cli
