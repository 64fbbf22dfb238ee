#include "podles/analysis.hpp"
#include "podles/embedding.hpp"

#include <doctest.h>

using namespace podles;

namespace {

SpinGeometry<double> geometry(const char* t)
{
    ModelContext ctx;
    ctx.q = "0.5";
    ctx.t = t;
    ctx.lmax2 = 21;
    return build_geometry<double>(ctx);
}

} // namespace

TEST_SUITE("embedding")
{
    TEST_CASE("alpha and beta satisfy the quantum group relations inside the cutoffs")
    {
        auto g = geometry("0.5");
        auto h = build_hat(g);
        const double q = 0.5;
        const auto& a = h.alpha;
        const auto& b = h.beta;
        auto as = adjoint(a);
        auto bs = adjoint(b);
        CHECK(relative_residual(compose(a, as) + compose(b, bs), h.unit, 2) < 1e-14);
        CHECK(relative_residual(compose(as, a) + scale(compose(bs, b), Cplx<double>(q * q)), h.unit, 2) < 1e-14);
        CHECK(relative_residual(compose(b, a), scale(compose(a, b), Cplx<double>(q)), 2) < 1e-14);
        CHECK(relative_residual(compose(bs, a), scale(compose(a, bs), Cplx<double>(q)), 2) < 1e-14);
        CHECK(relative_residual(compose(b, bs), compose(bs, b), 2) < 1e-14);
    }

    TEST_CASE("phi respects the sphere relations on the hat interior")
    {
        for (const char* t : {"0", "0.5", "1"}) {
            auto g = geometry(t);
            auto h = build_hat(g);
            const double q = 0.5;
            const double tv = g.t();
            auto xt = sub(h.phi_x(0), scale(h.unit, Cplx<double>(tv)));
            auto r1 = relative_residual(compose(h.phi_x(-1), xt), scale(compose(xt, h.phi_x(-1)), Cplx<double>(q * q)), 3);
            auto r3 = relative_residual(
                sub(compose(scale(h.phi_x(0), Cplx<double>(q * q)) + scale(h.unit, Cplx<double>(tv)), xt),
                    scale(compose(h.phi_x(-1), h.phi_x(1)), Cplx<double>(q + 1 / q))),
                scale(h.unit, Cplx<double>((q + 1 / q) * (q + 1 / q) * (1 - tv))), 3);
            CHECK(r1 < 1e-13);
            if (tv < 1) CHECK(r3 < 1e-13);
            CHECK(relative_residual(adjoint(h.phi_x(0)), h.phi_x(0), 3) < 1e-14);
        }
    }

    TEST_CASE("P is a partial isometry with PQ = 1")
    {
        auto g = geometry("0.5");
        auto h = build_hat(g);
        CHECK(equal_exact(compose(h.P, h.Q), g.unit));
        CHECK(equal_exact(h.P, adjoint(h.Q)));
        CHECK(equal_exact(compose(h.Q, g.F), compose(h.Fp, h.Q), 2));
    }

    TEST_CASE("P beta beta* Q has residue 2 / (1 - q^2)")
    {
        ModelContext ctx;
        ctx.q = "0.5";
        ctx.lmax2 = 41;
        auto g = build_geometry<double>(ctx);
        auto h = build_hat(g);
        for (int k = 1; k <= 2; ++k) {
            auto r = residue_at(1, beta_monomial(h, k), 2 * k, g);
            CHECK(r.value == doctest::Approx(2 / (1 - std::pow(0.25, k))).epsilon(1e-6));
        }
    }

    TEST_CASE("results are stable when the hat cutoffs are doubled")
    {
        ModelContext ctx;
        ctx.q = "0.5";
        ctx.t = "0.5";
        ctx.lmax2 = 41;
        auto g = build_geometry<double>(ctx);
        auto a = build_hat(g);
        auto b = build_hat(g, HatCutoffs{0, 4 * 41, 2 * kDefaultHatKmax});
        for (int k = 1; k <= 2; ++k) {
            auto ra = residue_at(1, beta_monomial(a, k), 2 * k, g).value;
            auto rb = residue_at(1, beta_monomial(b, k), 2 * k, g).value;
            CHECK(ra == doctest::Approx(rb).epsilon(1e-12));
        }
        auto e = parse_element<double>("xm1*x0*x1 + x0*x0", 0.5, 0.5);
        CHECK(relative_residual(phi_tilde(e, a), phi_tilde(e, b), 3) < 1e-13);
    }

    TEST_CASE("the smooth part of pi(x_i) - P phi(x_i) Q decays")
    {
        auto g = geometry("0.5");
        auto checks = run_decay_checks(g, SuiteOptions{});
        bool found = false;
        for (const auto& c : checks)
            if (c.id == "smooth.phi") {
                found = true;
                CHECK(c.pass);
            }
        CHECK(found);
    }
}
