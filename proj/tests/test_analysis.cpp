#include "podles/analysis.hpp"

#include <doctest.h>

#include <boost/math/special_functions/zeta.hpp>

#include <cmath>

using namespace podles;

namespace {

ModelContext context(const char* q, const char* t, int lmax2)
{
    ModelContext ctx;
    ctx.q = q;
    ctx.t = t;
    ctx.lmax2 = lmax2;
    return ctx;
}

const CheckReport& find(const std::vector<CheckReport>& rs, const std::string& id)
{
    for (const auto& r : rs)
        if (r.id == id) return r;
    throw std::runtime_error("missing check " + id);
}

} // namespace

TEST_SUITE("analysis")
{
    TEST_CASE("slope fit recovers an exact exponential")
    {
        std::vector<std::pair<int, double>> s;
        for (int l2 = 1; l2 <= 41; l2 += 2) s.push_back({l2, 3.0 * std::pow(0.5, l2)});
        auto fit = estimate_decay_slope<double>(s, 16, 41, 1e-300);
        CHECK(fit.ok);
        CHECK(fit.slope == doctest::Approx(2 * std::log(0.5)).epsilon(1e-12));
        CHECK(fit.r2 == doctest::Approx(1.0));
        CHECK(fit.used == 13);
    }

    TEST_CASE("slope fit edge cases")
    {
        std::vector<std::pair<int, double>> few{{17, 1.0}, {19, 0.5}, {21, 0.25}};
        CHECK_FALSE(estimate_decay_slope<double>(few, 16, 21, 0.0).ok);
        std::vector<std::pair<int, double>> tiny{{17, 1e-20}, {19, 0.0}, {21, 1e-18}, {23, 0.0}, {25, 0.0}};
        auto fit = estimate_decay_slope<double>(tiny, 16, 25, 1e-13);
        CHECK(fit.vanishes);
        CHECK(fit.ok);
    }

    TEST_CASE("fit window")
    {
        SuiteOptions opt;
        CHECK(fit_window(1, 61, 2, opt) == std::pair<int, int>{16, 57});
        auto w = fit_window(1, 21, 2, opt);
        CHECK(w.second == 17);
        CHECK((w.second - w.first) / 2 + 1 >= 4);
    }

    TEST_CASE("the projection is idempotent and self-adjoint on the interior")
    {
        for (const char* t : {"0", "0.5", "1"}) {
            auto g = build_geometry<double>(context("0.5", t, 21));
            auto [idem, sa] = projection_residuals(g, 2);
            CHECK(idem < 1e-10);
            CHECK(sa < 1e-10);
        }
    }

    TEST_CASE("the index pairing with p is one")
    {
        for (const char* t : {"0", "0.5", "1"}) {
            auto g = build_geometry<double>(context("0.5", t, 41));
            for (auto m : {PairingMethod::Trace, PairingMethod::Series}) {
                auto r = chern_pairing(g, m);
                CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
                CHECK(r.converged);
                CHECK(r.bound < 1e-8);
            }
        }
    }

    TEST_CASE("trace and series methods agree away from q = 1/2")
    {
        auto g = build_geometry<double>(context("0.3", "0", 41));
        auto a = chern_pairing(g, PairingMethod::Trace);
        auto b = chern_pairing(g, PairingMethod::Series);
        CHECK(std::abs(a.value - b.value) < 1e-8);
    }

    TEST_CASE("higher charge gives index 2N")
    {
        auto g2 = build_geometry<double>(context("0.5", "0", 40), 2);
        CHECK(chern_pairing(g2, PairingMethod::Series).value == doctest::Approx(2.0).epsilon(1e-6));
        auto g3 = build_geometry<double>(context("0.5", "0", 41), 3);
        CHECK(chern_pairing(g3, PairingMethod::Series).value == doctest::Approx(3.0).epsilon(1e-6));
    }

    TEST_CASE("the pairing series is stable under truncation")
    {
        auto a = chern_pairing(build_geometry<double>(context("0.5", "0", 31)), PairingMethod::Series);
        auto b = chern_pairing(build_geometry<double>(context("0.5", "0", 41)), PairingMethod::Series);
        CHECK(std::abs(a.value - b.value) < 1e-8);
    }

    TEST_CASE("zeta of the identity at 4 matches 4 zeta(3)")
    {
        auto g = build_geometry<double>(context("0.5", "0", 41));
        auto z = zeta_partial(AlgebraElement<double>::one(), Cplx<double>(4.0), g);
        CHECK(z.re == doctest::Approx(4 * boost::math::zeta(3.0)).epsilon(1e-6));
        CHECK(std::abs(z.im) < 1e-15);
    }

    TEST_CASE("power tail against a direct sum")
    {
        for (double z : {3.0, 4.5}) {
            double direct = 0;
            for (int n = 11; n < 2000000; ++n) direct += std::pow(double(n), 1 - z);
            CHECK(power_tail<double>(10.0, Cplx<double>(z)).re == doctest::Approx(direct).epsilon(1e-6));
        }
    }

    TEST_CASE("residues of sample elements")
    {
        struct Case {
            const char* t;
            int pole;
            const char* elem;
            double expect;
        };
        const double q2 = 0.25;
        const Case cases[] = {
            {"0", 2, "1", 4.0},
            {"0", 1, "1", 0.0},
            {"0", 1, "(x0 - t)^2/(1 + q^2)^2", 4.266666666666667},
            {"0.5", 2, "x0", 2.0},
            {"0.5", 1, "xm1*x0", 0.0},
        };
        (void)q2;
        for (const auto& c : cases) {
            auto g = build_geometry<double>(context("0.5", c.t, 41));
            auto a = parse_element<double>(c.elem, 0.5, g.t());
            auto r = residue_at(c.pole, a, g);
            CAPTURE(c.elem);
            if (c.expect == 0)
                CHECK(std::abs(r.value) < 1e-2);
            else
                CHECK(r.value == doctest::Approx(c.expect).epsilon(1e-2));
        }
    }

    TEST_CASE("off-diagonal elements have vanishing level traces")
    {
        auto g = build_geometry<double>(context("0.5", "0.5", 41));
        auto a = parse_element<double>("xm1*x0", 0.5, 0.5);
        auto r = residue_at(1, a, g);
        CHECK(r.value == 0.0);
    }

    TEST_CASE("residues are stable under truncation")
    {
        auto a41 = build_geometry<double>(context("0.5", "0", 41));
        auto a61 = build_geometry<double>(context("0.5", "0", 61));
        auto e = parse_element<double>("(x0 - t)^2/(1 + q^2)^2", 0.5, 0);
        double r41 = residue_at(1, e, a41).value;
        double r61 = residue_at(1, e, a61).value;
        CHECK(std::abs(r41 - r61) < 5e-3 * std::abs(r61));
    }

    TEST_CASE("phi0 by contour quadrature")
    {
        auto g = build_geometry<double>(context("0.5", "0.5", 41));
        CHECK(std::abs(phi0_contour(g, g.unit, 0)) < 1e-10);
        auto p = projection_p(0.5, 0.5);
        double phi = phi0_contour(g, represent(p[0][0], g), 1) + phi0_contour(g, represent(p[1][1], g), 1);
        double ch = chern_pairing(g, PairingMethod::Trace).value;
        CHECK(phi == doctest::Approx(ch).epsilon(1e-6));
    }

    TEST_CASE("local index formula")
    {
        for (const char* t : {"0", "1"}) {
            auto g = build_geometry<double>(context("0.5", t, 21));
            auto h = build_hat(g);
            for (const auto& r : check_local_index(g, h, LocalIndexOptions{})) {
                CAPTURE(r.id);
                CHECK(r.pass);
            }
        }
    }

    TEST_CASE("algebraic checks at binary64")
    {
        auto g = build_geometry<double>(context("0.8", "1", 21));
        auto rs = run_algebraic_checks(g, SuiteOptions{});
        for (const auto& r : rs) {
            CAPTURE(r.id);
            CHECK(r.pass);
        }
        CHECK(*find(rs, "sphere.rel1").residual < 1e-11);
        CHECK(*find(rs, "crossed").residual < 1e-10);
        CHECK(find(rs, "real.even").mode == CheckMode::Exact);
    }

    TEST_CASE("the z relations carry a defect on the lowest level only")
    {
        auto g = build_geometry<double>(context("0.5", "0.5", 21));
        auto xt = sub(g.zi(0), scale(g.unit, Cplx<double>(0.5)));
        auto lhs = sub(compose(g.zi(-1), xt), scale(compose(xt, g.zi(-1)), Cplx<double>(0.25)));
        // independent evaluation of the printed coefficients
        CHECK(lhs.at(Index{1, -1, 1}, Index{1, 1, 1}).re == doctest::Approx(-0.621129993749941582).epsilon(1e-12));
        auto rest = lhs.filtered([](const Index& r, const Index& c) { return r.l2 > 1 && c.l2 > 1 && c.l2 < 17; });
        CHECK(rest.max_abs() < 1e-13);
    }
}
