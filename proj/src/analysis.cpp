#include "podles/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

namespace podles {

const char* to_string(CheckMode m)
{
    switch (m) {
    case CheckMode::Exact: return "exact";
    case CheckMode::Residual: return "residual";
    case CheckMode::DecayFit: return "decay-fit";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

template <class R> using Op = BandedOperator<R>;
template <class R> using Series = std::vector<std::pair<int, R>>;

/// Runs `body` and stamps the elapsed time when requested.
CheckReport timed(bool timing, const std::function<CheckReport()>& body)
{
    auto start = Clock::now();
    CheckReport r = body();
    if (timing) r.ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return r;
}

template <class R> bool default_schedule(const SpinGeometry<R>& g)
{
    const auto& d = g.ctx.dirac;
    return d.kind == DiracSchedule::Kind::Linear && d.c1 == 1.0 && d.c2 == 0.5;
}

template <class R> Cplx<R> cexp(const Cplx<R>& w)
{
    using std::cos;
    using std::exp;
    using std::sin;
    R m = exp(w.re);
    return {m * cos(w.im), m * sin(w.im)};
}

/// x^{w} for real x > 0.
template <class R> Cplx<R> cpow(const R& x, const Cplx<R>& w)
{
    using std::log;
    R lx = log(x);
    return cexp(Cplx<R>(w.re * lx, w.im * lx));
}

template <class R> R aitken(const R& x0, const R& x1, const R& x2)
{
    R d1 = x1 - x0;
    R d2 = x2 - x1;
    R den = d2 - d1;
    using std::abs;
    if (den == 0 || abs(den) <= abs(d2) * std::numeric_limits<double>::epsilon()) return x2;
    return x2 - d2 * d2 / den;
}

std::string format_g(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

/// max |a - b| on the guard interior over the largest entry of any of the
/// terms that make up the identity.
template <class R> R scaled_residual(const Op<R>& a, const Op<R>& b, const std::vector<Op<R>>& terms, int guard)
{
    R diff = interior_restrict(sub(a, b), guard).max_abs();
    R scale_ref(0);
    for (const auto& term : terms) {
        R m = interior_restrict(term, guard).max_abs();
        if (m > scale_ref) scale_ref = m;
    }
    return scale_ref > 0 ? diff / scale_ref : diff;
}

/// Removes every row and column on the lowest level l = |N|.
template <class R> Op<R> drop_lowest(const Op<R>& a)
{
    const int l0 = a.in().levels().front();
    return a.filtered([l0](const Index& r, const Index& c) { return r.l2 != l0 && c.l2 != l0; });
}

/// Largest |a - b| on the rows and columns of the lowest level.
template <class R> R lowest_defect(const Op<R>& a, const Op<R>& b)
{
    const int l0 = a.in().levels().front();
    return sub(a, b).filtered([l0](const Index& r, const Index& c) { return r.l2 == l0 || c.l2 == l0; }).max_abs();
}

template <class R> Op<R> uq(const SpinGeometry<R>& g, UqGen h) { return build_uq(h, g.basis, g.table()); }

} // namespace

template <class R>
DecayFit estimate_decay_slope(const std::vector<std::pair<int, R>>& norms, int lo2, int hi2, const R& floor)
{
    DecayFit fit;
    std::vector<double> xs;
    std::vector<double> ys;
    int in_window = 0;
    for (const auto& [l2, v] : norms) {
        if (l2 < lo2 || l2 > hi2) continue;
        ++in_window;
        if (!(v > floor)) {
            ++fit.dropped;
            continue;
        }
        using std::log;
        xs.push_back(l2 / 2.0);
        ys.push_back(to_double(R(log(v))));
    }
    fit.used = static_cast<int>(xs.size());
    if (in_window > 0 && fit.used == 0) {
        fit.vanishes = true;
        fit.ok = true;
        fit.note = "vanishes to working precision";
        return fit;
    }
    if (fit.used < 4) {
        fit.note = "fewer than 4 usable points in window";
        return fit;
    }
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
        syy += (ys[k] - my) * (ys[k] - my);
    }
    fit.slope = sxy / sxx;
    double ssr = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        double e = ys[k] - (my + fit.slope * (xs[k] - mx));
        ssr += e * e;
    }
    fit.r2 = syy > 0 ? 1.0 - ssr / syy : 1.0;
    fit.ok = true;
    if (fit.dropped > 0) fit.note = std::to_string(fit.dropped) + " points below the precision floor dropped";
    return fit;
}

std::pair<int, int> fit_window(int lmin2, int lmax2, int degree, const SuiteOptions& opt)
{
    int hi2 = opt.hi2 >= 0 ? std::min(opt.hi2, lmax2 - 2 * degree) : lmax2 - 2 * degree;
    int lo2 = std::max(opt.lo2, lmin2);
    if ((hi2 - lo2) / 2 + 1 >= 8) return {lo2, hi2};
    // too few levels above the transient: fit the upper half of what exists
    const int avail = (hi2 - lmin2) / 2 + 1;
    const int keep = std::min(avail, std::max(4, avail / 2));
    return {hi2 - 2 * (keep - 1), hi2};
}

template <class R> R norm_floor() { return R(1000) * working_epsilon<R>(); }

namespace {

/// Keeps the columns on the guard interior and every row they reach, so
/// each kept column is exactly the untruncated one.
template <class R> Op<R> interior_columns(const Op<R>& a, int guard)
{
    const Basis& in = a.in();
    return a.filtered([&in, guard](const Index&, const Index& c) { return in.in_interior(c, guard); });
}

} // namespace

template <class R> std::vector<std::pair<int, R>> appr_norms(const SpinGeometry<R>& g, int i)
{
    return block_norms(interior_columns(sub(g.x(i), g.zi(i)), 1));
}

template <class R> std::vector<std::pair<int, R>> commutant_norms(const SpinGeometry<R>& g, int i, int j)
{
    auto jx = g.J.conjugate(g.x(j));
    return block_norms(interior_columns(commutator(g.x(i), jx), 2));
}

template <class R> std::vector<std::pair<int, R>> first_order_norms(const SpinGeometry<R>& g, int i, int j)
{
    auto jx = g.J.conjugate(g.x(j));
    return block_norms(interior_columns(commutator(commutator(g.D, g.x(i)), jx), 2));
}

template <class R> std::vector<std::pair<int, R>> fredholm_norms(const SpinGeometry<R>& g, int i)
{
    return block_norms(interior_columns(commutator(g.F, g.x(i)), 1));
}

namespace {

/// Residual-mode report from a list of (label, relative residual).
template <class R>
CheckReport residual_report(const std::string& id, const std::vector<std::pair<std::string, R>>& parts, double tol)
{
    CheckReport r;
    r.id = id;
    r.mode = CheckMode::Residual;
    r.tol = tol;
    double worst = 0;
    std::string worst_part;
    for (const auto& [label, v] : parts) {
        double d = to_double(v);
        if (std::isnan(d)) d = std::numeric_limits<double>::infinity();
        if (d > worst || (worst_part.empty() && &v == &parts.front().second)) {
            worst = std::max(worst, d);
            worst_part = label;
        }
    }
    r.residual = worst;
    r.pass = worst < tol;
    if (!worst_part.empty()) r.note = "worst: " + worst_part;
    return r;
}

/// Exact-mode report: every pair must agree entrywise; the residual of
/// the worst pair is reported alongside.
template <class R>
CheckReport exact_report(const std::string& id, const std::vector<std::tuple<std::string, Op<R>, Op<R>>>& parts,
                         int guard)
{
    CheckReport r;
    r.id = id;
    r.mode = CheckMode::Exact;
    r.tol = 0;
    bool all = true;
    double worst = 0;
    std::string failed;
    for (const auto& [label, a, b] : parts) {
        bool same = equal_exact(a, b, guard);
        if (!same) {
            all = false;
            if (failed.empty()) failed = label;
            worst = std::max(worst, to_double(relative_residual(a, b, guard)));
        }
    }
    r.residual = worst;
    r.pass = all;
    if (!all) r.note = "first mismatch: " + failed;
    return r;
}

const char* gen_name(int i) { return i < 0 ? "xm1" : (i == 0 ? "x0" : "xp1"); }

} // namespace

template <class R> std::vector<CheckReport> run_algebraic_checks(const SpinGeometry<R>& g, const SuiteOptions& opt)
{
    using C = Cplx<R>;
    std::vector<CheckReport> out;
    const R& q = g.q();
    const R& t = g.t();
    const auto& T = g.table();
    const R two = T.num2(4);
    const auto& one = g.unit;
    const int g1 = std::max(opt.guard, 1);
    const int g2 = std::max(opt.guard, 2);
    const double tol = opt.tol;

    // Relations whose lowest level carries a known boundary defect are
    // checked with that level removed; the size of the defect goes in the note.
    auto relations = [&](const Gens<R>& x, const Op<R>& rhs3, const Op<R>& rhs4, const std::string& prefix,
                         bool split_lowest) {
        auto xt = sub(x[1], scale(one, C(t)));
        auto check = [&](const std::string& id, const std::vector<Op<R>>& terms, const Op<R>& rhs, bool split) {
            return timed(opt.timing, [&] {
                Op<R> lhs(g.basis);
                for (const auto& term : terms) lhs = add(lhs, term);
                std::vector<Op<R>> all = terms;
                all.push_back(rhs);
                if (!split) return residual_report<R>(id, {{"", scaled_residual(lhs, rhs, all, g2)}}, tol);
                auto r = residual_report<R>(id, {{"", scaled_residual(drop_lowest(lhs), drop_lowest(rhs), all, g2)}}, tol);
                r.note = "lowest level excluded, defect there " + format_g(to_double(lowest_defect(lhs, rhs)));
                return r;
            });
        };
        std::vector<CheckReport> rs;
        rs.push_back(check(prefix + "1", {compose(x[0], xt), scale(compose(xt, x[0]), C(-q * q))}, Op<R>(g.basis),
                           split_lowest));
        rs.push_back(check(prefix + "2", {compose(x[2], xt), scale(compose(xt, x[2]), C(-1 / (q * q)))}, Op<R>(g.basis),
                           split_lowest));
        rs.push_back(check(prefix + "3",
                           {scale(compose(x[0], x[2]), C(-two)), compose(scale(x[1], C(q * q)) + scale(one, C(t)), xt)},
                           rhs3, false));
        rs.push_back(check(prefix + "4",
                           {scale(compose(x[2], x[0]), C(-two)), compose(scale(x[1], C(1 / (q * q))) + scale(one, C(t)), xt)},
                           rhs4, false));
        return rs;
    };

    const auto rhs = scale(one, C(two * two * (1 - t)));
    for (auto& r : relations(g.pi_x, rhs, rhs, "sphere.rel", false)) out.push_back(std::move(r));

    out.push_back(timed(opt.timing, [&] {
        std::vector<std::pair<std::string, R>> parts;
        for (int i = -1; i <= 1; ++i) {
            auto s = represent(star(AlgebraElement<R>::generator(i), q), g);
            parts.push_back({gen_name(i), relative_residual(adjoint(g.x(i)), s, g1)});
        }
        return residual_report<R>("sphere.star", parts, tol);
    }));

    const auto k = uq(g, UqGen::K);
    const auto ki = uq(g, UqGen::Kinv);
    const auto e = uq(g, UqGen::E);
    const auto f = uq(g, UqGen::F);

    out.push_back(timed(opt.timing, [&] {
        std::vector<std::pair<std::string, R>> parts;
        parts.push_back({"ke=q^-1ek", relative_residual(compose(k, e), scale(compose(e, k), C(1 / q)), opt.guard)});
        parts.push_back({"kf=qfk", relative_residual(compose(k, f), scale(compose(f, k), C(q)), opt.guard)});
        parts.push_back({"k2-k-2", relative_residual(sub(compose(k, k), compose(ki, ki)),
                                                     scale(sub(compose(f, e), compose(e, f)), C(q - 1 / q)), opt.guard)});
        parts.push_back({"kk^-1=1", relative_residual(compose(k, ki), one, opt.guard)});
        return residual_report<R>("uq.rel", parts, tol);
    }));

    out.push_back(timed(opt.timing, [&] {
        std::vector<std::pair<std::string, R>> parts;
        for (int i = -1; i <= 1; ++i) {
            const auto& x = g.x(i);
            auto act = [&](UqGen h) { return represent(left_action(h, i, T), g); };
            parts.push_back({std::string("k.") + gen_name(i),
                             relative_residual(compose(k, x), compose(act(UqGen::K), k), g1)});
            parts.push_back({std::string("f.") + gen_name(i),
                             relative_residual(compose(f, x), compose(act(UqGen::F), k) + compose(act(UqGen::Kinv), f), g1)});
            parts.push_back({std::string("e.") + gen_name(i),
                             relative_residual(compose(e, x), compose(act(UqGen::E), k) + compose(act(UqGen::Kinv), e), g1)});
        }
        return residual_report<R>("crossed", parts, tol);
    }));

    if (std::abs(g.N2) == 1) {
        // defect projections onto the lowest level, m = -1/2 and m = +1/2
        const int l0 = std::abs(g.N2);
        auto proj = [&](int m2) {
            return BandedOperator<R>::diagonal(g.basis, [&](const Index& ix) {
                return C(R(ix.l2 == l0 && ix.m2 == m2 ? 1 : 0));
            });
        };
        const R half = T.num2(1);
        const R c = q * two * (1 - t + half * half * t * t);
        auto rhs3 = sub(rhs, scale(proj(-1), C(c)));
        auto rhs4 = sub(rhs, scale(proj(1), C(c / (q * q))));
        for (auto& r : relations(g.z, rhs3, rhs4, "z.rel", true)) out.push_back(std::move(r));
    }

    out.push_back(timed(opt.timing, [&] {
        std::vector<std::tuple<std::string, Op<R>, Op<R>>> parts;
        const Op<R> zero(g.basis);
        parts.emplace_back("k", commutator(g.D, k), zero);
        parts.emplace_back("e", commutator(g.D, e), zero);
        parts.emplace_back("f", commutator(g.D, f), zero);
        return exact_report<R>("equiv.D", parts, 0);
    }));

    out.push_back(timed(opt.timing, [&] {
        std::vector<std::tuple<std::string, Op<R>, Op<R>>> parts;
        parts.emplace_back("k", g.J.conjugate(k), ki);
        parts.emplace_back("f", g.J.conjugate(f), scale(e, C(R(-1))));
        parts.emplace_back("e", g.J.conjugate(e), scale(f, C(R(-1))));
        return exact_report<R>("equiv.J", parts, 0);
    }));

    out.push_back(timed(opt.timing, [&] {
        std::vector<std::tuple<std::string, Op<R>, Op<R>>> parts;
        const R jsign = (g.N2 % 2 != 0) ? R(-1) : R(1);
        const auto& L = g.J.linear_part();
        parts.emplace_back("J^2", g.J.square(), scale(one, C(jsign)));
        parts.emplace_back("J0^2", g.J0.square(), scale(one, C(jsign)));
        parts.emplace_back("JD=DJ", compose(L, conj(g.D)), compose(g.D, L));
        parts.emplace_back("Jgamma=-gammaJ", compose(L, conj(g.gamma)), scale(compose(g.gamma, L), C(R(-1))));
        parts.emplace_back("gammaD=-Dgamma", compose(g.gamma, g.D), scale(compose(g.D, g.gamma), C(R(-1))));
        parts.emplace_back("gamma^2", compose(g.gamma, g.gamma), one);
        parts.emplace_back("gamma*", adjoint(g.gamma), g.gamma);
        parts.emplace_back("F^2", compose(g.F, g.F), one);
        parts.emplace_back("D=F|D|", compose(g.F, g.absD), g.D);
        for (int i = -1; i <= 1; ++i)
            parts.emplace_back(std::string("gamma.") + gen_name(i), compose(g.gamma, g.x(i)), compose(g.x(i), g.gamma));
        return exact_report<R>("real.even", parts, 0);
    }));

    out.push_back(timed(opt.timing, [&] {
        std::vector<std::pair<std::string, R>> parts;
        R defect(0);
        for (int j = -1; j <= 1; ++j) {
            auto jz = g.J0.conjugate(g.zi(j));
            for (int i = -1; i <= 1; ++i) {
                auto ab = compose(g.zi(i), jz);
                auto ba = compose(jz, g.zi(i));
                parts.push_back({std::string(gen_name(i)) + "," + gen_name(j),
                                 scaled_residual(drop_lowest(ab), drop_lowest(ba), {ab, ba}, g2)});
                R d = lowest_defect(ab, ba);
                if (d > defect) defect = d;
            }
        }
        auto r = residual_report<R>("commutant.J0z", parts, tol);
        r.note += "; lowest level excluded, defect there " + format_g(to_double(defect));
        return r;
    }));

    out.push_back(timed(opt.timing, [&] {
        std::vector<std::tuple<std::string, Op<R>, Op<R>>> parts;
        for (int i = -1; i <= 1; ++i)
            for (int nu = -1; nu <= 1; ++nu) {
                auto part = l_shift_part(g.x(i), 2 * nu);
                parts.emplace_back(std::string(gen_name(i)) + "^" + std::to_string(nu), commutator(g.absD, part),
                                   scale(part, C(R(nu))));
            }
        return exact_report<R>("regular.delta", parts, g1);
    }));

    return out;
}

namespace {

struct DecayRule {
    std::string id;
    double expected = 0;
    double band = 0.05;
    bool two_sided = false;
};

template <class R>
CheckReport decay_report(const DecayRule& rule, const std::vector<std::pair<std::string, Series<R>>>& comps,
                         std::pair<int, int> window, const R& floor, double min_r2)
{
    CheckReport r;
    r.id = rule.id;
    r.mode = CheckMode::DecayFit;
    r.expected = rule.expected;
    r.tol = rule.band;
    bool pass = true;
    bool any = false;
    double worst_slope = -std::numeric_limits<double>::infinity();
    double worst_r2 = 1.0;
    std::vector<std::string> notes;
    int vanished = 0;
    for (const auto& [name, s] : comps) {
        DecaySeries ds;
        ds.component = name;
        for (const auto& [l2, v] : s) ds.norms.push_back({l2, to_double(v)});
        r.series.push_back(std::move(ds));
        DecayFit fit = estimate_decay_slope(s, window.first, window.second, floor);
        if (!fit.ok) {
            pass = false;
            notes.push_back(name + ": " + fit.note);
            continue;
        }
        if (fit.vanishes) {
            ++vanished;
            continue;
        }
        any = true;
        bool ok = rule.two_sided ? std::abs(fit.slope - rule.expected) <= rule.band * std::abs(rule.expected)
                                 : fit.slope <= (1 - rule.band) * rule.expected;
        if (fit.r2 < min_r2) ok = false;
        if (!ok) {
            pass = false;
            notes.push_back(name + " slope " + std::to_string(fit.slope) + " r2 " + std::to_string(fit.r2));
        }
        worst_slope = std::max(worst_slope, fit.slope);
        worst_r2 = std::min(worst_r2, fit.r2);
    }
    if (any) {
        r.slope = worst_slope;
        r.r2 = worst_r2;
    }
    if (vanished > 0)
        notes.push_back(std::to_string(vanished) + " of " + std::to_string(comps.size()) +
                        " components vanish to working precision");
    notes.push_back("window l2 [" + std::to_string(window.first) + "," + std::to_string(window.second) + "]");
    for (std::size_t k = 0; k < notes.size(); ++k) r.note += (k ? "; " : "") + notes[k];
    r.pass = pass;
    return r;
}

} // namespace

template <class R> std::vector<CheckReport> run_decay_checks(const SpinGeometry<R>& g, const SuiteOptions& opt)
{
    std::vector<CheckReport> out;
    using std::log;
    const double lnq = to_double(R(log(g.q())));
    const bool t_one = g.t() == 1;
    const double k_exp = t_one ? 1.0 : 2.0;
    const int lmin2 = std::abs(g.N2);
    const int lmax2 = g.basis->lmax2();
    const R floor = norm_floor<R>();

    out.push_back(timed(opt.timing, [&] {
        std::vector<std::pair<std::string, Series<R>>> comps;
        for (int i = -1; i <= 1; ++i) comps.push_back({gen_name(i), appr_norms(g, i)});
        return decay_report<R>({"appr.xz", k_exp * lnq, 0.05, true}, comps, fit_window(lmin2, lmax2, 1, opt), floor,
                               opt.min_r2);
    }));

    out.push_back(timed(opt.timing, [&] {
        CheckReport r;
        r.id = "bdd.Dx";
        r.mode = CheckMode::DecayFit;
        r.tol = 0.05;
        ModelContext big = g.ctx;
        big.lmax2 = 2 * lmax2;
        if ((big.lmax2 - lmin2) % 2 != 0) big.lmax2 += 1;
        auto g2 = build_geometry<R>(big, g.N2);
        double sup1 = 0;
        double sup2 = 0;
        double worst_slope = -std::numeric_limits<double>::infinity();
        for (int i = -1; i <= 1; ++i) {
            auto n1 = block_norms(interior_columns(commutator(g.D, g.x(i)), 1));
            auto n2 = block_norms(interior_columns(commutator(g2.D, g2.x(i)), 1));
            for (auto& [l2, v] : n1) sup1 = std::max(sup1, to_double(v));
            for (auto& [l2, v] : n2) sup2 = std::max(sup2, to_double(v));
            DecaySeries ds;
            ds.component = gen_name(i);
            for (auto& [l2, v] : n1) ds.norms.push_back({l2, to_double(v)});
            r.series.push_back(std::move(ds));
            auto w = fit_window(lmin2, lmax2, 1, opt);
            auto fit = estimate_decay_slope(n1, w.first, w.second, floor);
            if (fit.ok && !fit.vanishes) worst_slope = std::max(worst_slope, fit.slope);
        }
        if (std::isfinite(worst_slope)) r.slope = worst_slope;
        r.residual = sup1 > 0 ? sup2 / sup1 - 1 : 0;
        r.pass = sup2 <= (1 + r.tol) * sup1;
        r.note = "sup at lmax2=" + std::to_string(lmax2) + ": " + std::to_string(sup1) + ", at lmax2=" +
                 std::to_string(big.lmax2) + ": " + std::to_string(sup2);
        return r;
    }));

    out.push_back(timed(opt.timing, [&] {
        std::vector<std::pair<std::string, Series<R>>> comps;
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j)
                comps.push_back({std::string(gen_name(i)) + "," + gen_name(j), first_order_norms(g, i, j)});
        return decay_report<R>({"first.order", k_exp * lnq, 0.05, false}, comps, fit_window(lmin2, lmax2, 2, opt),
                               floor, opt.min_r2);
    }));

    out.push_back(timed(opt.timing, [&] {
        std::vector<std::pair<std::string, Series<R>>> comps;
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j)
                comps.push_back({std::string(gen_name(i)) + "," + gen_name(j), commutant_norms(g, i, j)});
        return decay_report<R>({"commutant", k_exp * lnq, 0.05, false}, comps, fit_window(lmin2, lmax2, 2, opt),
                               floor, opt.min_r2);
    }));

    out.push_back(timed(opt.timing, [&] {
        std::vector<std::pair<std::string, Series<R>>> comps;
        for (int i = -1; i <= 1; ++i) comps.push_back({gen_name(i), fredholm_norms(g, i)});
        auto r = decay_report<R>({"fredholm.Fx", lnq, 0.5, false}, comps, fit_window(lmin2, lmax2, 1, opt), floor,
                                 opt.min_r2);
        return r;
    }));

    out.push_back(timed(opt.timing, [&] {
        std::vector<std::pair<std::string, Series<R>>> comps;
        for (int i = -1; i <= 1; ++i) {
            Series<R> s;
            for (int l2 = lmin2; l2 <= lmax2; l2 += 2) {
                R worst(0);
                for (int m2 = -l2; m2 <= l2; m2 += 2) {
                    using std::abs;
                    R d = abs(g.coeffs->alpha_coeff(i, 1, l2, m2, std::abs(g.N2)) -
                              g.coeffs->alpha_coeff(i, 1, l2, m2, -std::abs(g.N2)));
                    if (d > worst) worst = d;
                }
                s.push_back({l2, worst});
            }
            comps.push_back({gen_name(i), s});
        }
        return decay_report<R>({"coeff.pm", lnq, 0.05, false}, comps, fit_window(lmin2, lmax2, 0, opt), floor,
                               opt.min_r2);
    }));

    if (std::abs(g.N2) == 1) {
        out.push_back(timed(opt.timing, [&] {
            auto h = build_hat(g);
            std::vector<std::pair<std::string, Series<R>>> comps;
            for (int i = -1; i <= 1; ++i) {
                auto d = interior_columns(sub(compose(g.x(i), h.P), compose(h.P, h.phi_x(i))), 2);
                Series<R> s;
                for (int l2 : h.basis->levels())
                    if (l2 > 0 && l2 % 2 != 0) s.push_back({l2, block_norm(d, l2)});
                comps.push_back({gen_name(i), s});
            }
            return decay_report<R>({"smooth.phi", lnq, 0.5, false}, comps, fit_window(lmin2, lmax2, 2, opt), floor,
                                   opt.min_r2);
        }));
    }
    return out;
}

template <class R> std::array<std::array<AlgebraElement<R>, 2>, 2> projection_p(const R& q, const R& t)
{
    using E = AlgebraElement<R>;
    using C = Cplx<R>;
    using std::sqrt;
    const R qq = 1 + q * q;
    const C c(1 / ((2 - t) * qq));
    const R s = sqrt(qq);
    E p00 = E::scalar(C(qq - t)) + E::generator(0);
    E p01 = C(-s) * E::generator(1);
    E p10 = C(q * s) * E::generator(-1);
    E p11 = E::scalar(C(qq - t)) + C(-q * q) * E::generator(0);
    return {{{c * p00, c * p01}, {c * p10, c * p11}}};
}

template <class R> std::pair<R, R> projection_residuals(const SpinGeometry<R>& g, int guard)
{
    auto p = projection_p(g.q(), g.t());
    std::array<std::array<Op<R>, 2>, 2> P;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) P[a][b] = represent(p[a][b], g);
    R idem(0);
    R selfadj(0);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            auto sq = add(compose(P[a][0], P[0][b]), compose(P[a][1], P[1][b]));
            R r1 = relative_residual(sq, P[a][b], guard);
            R r2 = relative_residual(adjoint(P[b][a]), P[a][b], guard);
            if (r1 > idem) idem = r1;
            if (r2 > selfadj) selfadj = r2;
        }
    return {idem, selfadj};
}

template <class R>
std::vector<std::pair<int, Cplx<R>>> level_traces(const BandedOperator<R>& a, int degree)
{
    std::vector<std::pair<int, Cplx<R>>> out;
    const int limit = a.in().lmax2() - 2 * degree;
    for (int l2 : a.in().levels()) {
        if (l2 > limit) break;
        out.push_back({l2, Cplx<R>()});
    }
    for (std::size_t c = 0; c < a.cols(); ++c) {
        const Index& ix = a.in().at(c);
        if (ix.l2 > limit) continue;
        auto v = a.at(static_cast<int>(c), static_cast<int>(c));
        if (v.is_zero()) continue;
        auto it = std::lower_bound(out.begin(), out.end(), ix.l2,
                                   [](const auto& e, int l2) { return e.first < l2; });
        it->second += v;
    }
    return out;
}

template <class R> std::vector<std::pair<int, R>> chern0_levels(const SpinGeometry<R>& g, const BandedOperator<R>& a)
{
    auto T = compose(g.gamma, compose(g.F, commutator(g.F, a)));
    std::vector<std::pair<int, R>> out;
    for (auto& [l2, v] : level_traces(T, 0)) out.push_back({l2, v.re / 2});
    return out;
}

namespace {

template <class R> void finish_pairing(PairingResult<R>& res)
{
    R total(0);
    for (auto& [l2, v] : res.level_terms) total += v;
    res.value = total;
    const auto& lt = res.level_terms;
    if (lt.size() < 3) {
        res.converged = false;
        res.bound = R(std::numeric_limits<double>::infinity());
        return;
    }
    using std::abs;
    R a0 = abs(lt[lt.size() - 3].second);
    R a1 = abs(lt[lt.size() - 2].second);
    R a2 = abs(lt[lt.size() - 1].second);
    if (a2 == 0) {
        res.bound = R(0);
        return;
    }
    R ratio = a2 / a1;
    if (!(a2 < a1 && a1 < a0) || !(ratio < 1)) {
        res.converged = false;
        res.bound = R(std::numeric_limits<double>::infinity());
        return;
    }
    res.bound = a2 * ratio / (1 - ratio);
}

} // namespace

template <class R> PairingResult<R> chern_pairing(const SpinGeometry<R>& g, PairingMethod method)
{
    PairingResult<R> res;
    const auto& T = g.table();
    const R& q = g.q();
    if (method == PairingMethod::Trace) {
        auto p = projection_p(q, g.t());
        auto l0 = chern0_levels(g, represent(p[0][0], g));
        auto l1 = chern0_levels(g, represent(p[1][1], g));
        for (std::size_t k = 0; k < l0.size(); ++k) res.level_terms.push_back({l0[k].first, l0[k].second + l1[k].second});
    } else {
        const int a2 = std::abs(g.N2);
        const R pref = (1 - q * q) * (1 - q * q) / (q * q) * T.num2(2 * a2);
        for (int l2 : g.basis->levels()) {
            R s(0);
            for (int m2 = -l2; m2 <= l2; m2 += 2) s += T.num2(l2 - m2 + 2) * T.num2(l2 + m2);
            res.level_terms.push_back({l2, pref * s / (T.num2(2 * l2) * T.num2(2 * l2 + 4))});
        }
    }
    finish_pairing(res);
    return res;
}

template <class R> Cplx<R> power_tail(const R& L, const Cplx<R>& z)
{
    using C = Cplx<R>;
    C two_mz = C(R(2)) - z;
    C one_mz = C(R(1)) - z;
    C t1 = cpow(L, two_mz) / (z - C(R(2)));
    C t2 = R(1) / R(2) * cpow(L, one_mz);
    C t3 = (one_mz * cpow(L, -z)) / C(R(12));
    return t1 - t2 - t3;
}

template <class R>
Cplx<R> zeta_partial(const BandedOperator<R>& a, int degree, const Cplx<R>& z, const SpinGeometry<R>& g,
                     bool identity_tail)
{
    if (!g.invertible) throw std::invalid_argument("|D| is not invertible for this schedule");
    using C = Cplx<R>;
    C total;
    auto traces = level_traces(a, degree);
    for (const auto& [l2, c] : traces) {
        const int col = g.basis->find(Index{l2, l2, 1});
        R d = g.absD.at(col, col).re;
        total += c * cpow(d, -z);
    }
    if (identity_tail && !traces.empty()) {
        if (!default_schedule(g)) throw std::invalid_argument("the tail estimate assumes |D| = l + 1/2");
        const int l2 = traces.back().first;
        const C kappa = traces.back().second / C(R(2 * (l2 + 1)));
        const R L = R(l2 + 1) / 2;
        total += R(4) * (kappa * power_tail(L, z));
    }
    return total;
}

template <class R> Cplx<R> zeta_partial(const AlgebraElement<R>& a, const Cplx<R>& z, const SpinGeometry<R>& g)
{
    return zeta_partial(represent(a, g), a.degree(), z, g, a.is_scalar());
}

template <class R>
ResidueResult<R> residue_at(int pole, const BandedOperator<R>& a, int degree, const SpinGeometry<R>& g)
{
    if (pole != 1 && pole != 2) throw std::invalid_argument("residues are only defined at z = 1 and z = 2");
    if (!default_schedule(g)) throw std::invalid_argument("residues assume |D| = l + 1/2");
    ResidueResult<R> res;
    auto traces = level_traces(a, degree);
    bool all_zero = true;
    for (auto& [l2, c] : traces)
        if (!c.is_zero()) all_zero = false;
    if (all_zero) return res;
    if (traces.size() < 6) throw std::invalid_argument("too few interior levels for a residue estimate");
    const std::size_t n = traces.size();
    std::vector<R> c(n);
    std::vector<R> l(n);
    for (std::size_t k = 0; k < n; ++k) {
        c[k] = traces[k].second.re;
        l[k] = R(traces[k].first) / 2;
    }
    std::vector<R> d(n - 1);
    for (std::size_t k = 1; k < n; ++k) d[k - 1] = c[k] - c[k - 1];
    const std::size_t m = d.size();
    R r2 = aitken(d[m - 3], d[m - 2], d[m - 1]);
    R r2_prev = aitken(d[m - 4], d[m - 3], d[m - 2]);
    using std::abs;
    if (pole == 2) {
        res.value = r2;
        res.error = abs(r2 - r2_prev);
    } else {
        std::vector<R> e(n);
        for (std::size_t k = 0; k < n; ++k) e[k] = c[k] - r2 * (l[k] + R(1) / 2);
        R r1 = aitken(e[n - 3], e[n - 2], e[n - 1]);
        R r1_prev = aitken(e[n - 4], e[n - 3], e[n - 2]);
        res.value = r1;
        res.error = abs(r1 - r1_prev) + abs(r2 - r2_prev) * (l[n - 1] + 1);
    }
    R scale_ref = abs(res.value) > 1 ? abs(res.value) : R(1);
    res.converged = res.error <= R(1e-6) * scale_ref;
    return res;
}

template <class R> ResidueResult<R> residue_at(int pole, const AlgebraElement<R>& a, const SpinGeometry<R>& g)
{
    return residue_at(pole, represent(a, g), a.degree(), g);
}

template <class R> BandedOperator<R> beta_monomial(const HatSpace<R>& h, int k)
{
    auto bb = compose(h.beta, adjoint(h.beta));
    auto acc = h.unit;
    for (int j = 0; j < k; ++j) acc = compose(bb, acc);
    return compose(h.P, compose(acc, h.Q));
}

template <class R> R phi0_contour(const SpinGeometry<R>& g, const BandedOperator<R>& a, int degree)
{
    if (!g.invertible) throw std::invalid_argument("|D| is not invertible for this schedule");
    using C = Cplx<R>;
    auto w = level_traces(compose(g.gamma, a), degree);
    const int nodes = 64;
    const R radius = R(1) / 2;
    const R pi = pi_value<R>();
    C acc;
    for (int k = 0; k < nodes; ++k) {
        using std::cos;
        using std::sin;
        R th = 2 * pi * R(k) / R(nodes);
        C z(radius * cos(th), radius * sin(th));
        C psi;
        for (const auto& [l2, v] : w) {
            const int col = g.basis->find(Index{l2, l2, 1});
            R d = g.absD.at(col, col).re;
            psi += v * cpow(d, C(R(-2)) * z);
        }
        acc += psi;
    }
    return acc.re / R(nodes);
}

template <class R>
std::vector<CheckReport> check_local_index(const SpinGeometry<R>& g, const HatSpace<R>& h, const LocalIndexOptions& opt)
{
    using C = Cplx<R>;
    std::vector<CheckReport> out;
    {
        CheckReport r;
        r.id = "local.phi2";
        r.mode = CheckMode::Residual;
        r.tol = opt.tol;
        std::array<Op<R>, 3> ft;
        std::array<Op<R>, 3> dft;
        for (int i = -1; i <= 1; ++i) {
            ft[i + 1] = phi_tilde(AlgebraElement<R>::generator(i), h);
            dft[i + 1] = commutator(g.absD, ft[i + 1]);
        }
        auto dinv2 = BandedOperator<R>::diagonal(g.basis, [&](const Index& ix) {
            R d = R(g.ctx.dirac.value(ix.l2));
            return C(R(1) / (d * d));
        });
        double worst = 0;
        for (int a0 = 0; a0 < 3; ++a0)
            for (int a1 = 0; a1 < 3; ++a1)
                for (int a2 = 0; a2 < 3; ++a2) {
                    auto T = compose(g.gamma, compose(ft[a0], compose(dft[a1], compose(dft[a2], dinv2))));
                    R total(0);
                    R scale_ref(0);
                    R level_worst(0);
                    for (const auto& [l2, v] : level_traces(T, 3)) {
                        total += v.re;
                        using std::abs;
                        if (abs(v) > level_worst) level_worst = abs(v);
                    }
                    for (std::size_t c = 0; c < T.cols(); ++c) scale_ref += abs(T.at(static_cast<int>(c), static_cast<int>(c)));
                    using std::abs;
                    R rel = (abs(total) > level_worst ? abs(total) : level_worst) / (scale_ref > 1 ? scale_ref : R(1));
                    worst = std::max(worst, to_double(rel));
                }
        r.residual = worst;
        r.pass = worst <= opt.tol;
        r.note = "27 generator triples, per-level traces";
        out.push_back(r);
    }
    {
        CheckReport r;
        r.id = "local.phi0";
        r.mode = CheckMode::Residual;
        r.tol = opt.tol;
        std::mt19937 rng(opt.seed);
        std::uniform_int_distribution<int> len(1, opt.max_word);
        std::uniform_int_distribution<int> letter(-1, 1);
        double worst = 0;
        for (int s = 0; s < opt.samples; ++s) {
            Word w(len(rng));
            for (int& x : w) x = letter(rng);
            auto a = represent(AlgebraElement<R>::word(w), g);
            const int deg = static_cast<int>(w.size());
            R ch(0);
            for (const auto& [l2, v] : chern0_levels(g, interior_restrict(a, deg))) ch += v;
            R ph = phi0_contour(g, a, deg);
            using std::abs;
            R rel = abs(ph - ch) / (abs(ch) > 1 ? abs(ch) : R(1));
            worst = std::max(worst, to_double(rel));
        }
        r.residual = worst;
        r.pass = worst <= opt.tol;
        r.note = std::to_string(opt.samples) + " random words";
        out.push_back(r);
    }
    return out;
}

#define PODLES_INSTANTIATE(R)                                                                                      \
    template DecayFit estimate_decay_slope(const std::vector<std::pair<int, R>>&, int, int, const R&);             \
    template std::vector<CheckReport> run_algebraic_checks(const SpinGeometry<R>&, const SuiteOptions&);           \
    template std::vector<CheckReport> run_decay_checks(const SpinGeometry<R>&, const SuiteOptions&);               \
    template std::vector<std::pair<int, R>> appr_norms(const SpinGeometry<R>&, int);                               \
    template std::vector<std::pair<int, R>> commutant_norms(const SpinGeometry<R>&, int, int);                     \
    template std::vector<std::pair<int, R>> first_order_norms(const SpinGeometry<R>&, int, int);                   \
    template std::vector<std::pair<int, R>> fredholm_norms(const SpinGeometry<R>&, int);                           \
    template R norm_floor<R>();                                                                                    \
    template std::array<std::array<AlgebraElement<R>, 2>, 2> projection_p(const R&, const R&);                     \
    template std::pair<R, R> projection_residuals(const SpinGeometry<R>&, int);                                    \
    template PairingResult<R> chern_pairing(const SpinGeometry<R>&, PairingMethod);                                \
    template std::vector<std::pair<int, R>> chern0_levels(const SpinGeometry<R>&, const BandedOperator<R>&);      \
    template std::vector<std::pair<int, Cplx<R>>> level_traces(const BandedOperator<R>&, int);                     \
    template Cplx<R> zeta_partial(const BandedOperator<R>&, int, const Cplx<R>&, const SpinGeometry<R>&, bool);    \
    template Cplx<R> zeta_partial(const AlgebraElement<R>&, const Cplx<R>&, const SpinGeometry<R>&);               \
    template ResidueResult<R> residue_at(int, const BandedOperator<R>&, int, const SpinGeometry<R>&);              \
    template ResidueResult<R> residue_at(int, const AlgebraElement<R>&, const SpinGeometry<R>&);                   \
    template BandedOperator<R> beta_monomial(const HatSpace<R>&, int);                                             \
    template R phi0_contour(const SpinGeometry<R>&, const BandedOperator<R>&, int);                                \
    template std::vector<CheckReport> check_local_index(const SpinGeometry<R>&, const HatSpace<R>&,                \
                                                        const LocalIndexOptions&);                                 \
    template Cplx<R> power_tail(const R&, const Cplx<R>&);

PODLES_INSTANTIATE(double)
PODLES_INSTANTIATE(Mp)

#undef PODLES_INSTANTIATE

} // namespace podles
