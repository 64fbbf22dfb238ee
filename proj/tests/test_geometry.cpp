#include "podles/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace podles;

namespace {

SpinGeometry<double> geometry(const char* q, const char* t, int lmax2, int N2 = 1)
{
    ModelContext ctx;
    ctx.q = q;
    ctx.t = t;
    ctx.lmax2 = lmax2;
    return build_geometry<double>(ctx, N2);
}

} // namespace

TEST_SUITE("geometry")
{
    TEST_CASE("D equals W0^* diag(d, -d) W0 blockwise")
    {
        auto g = geometry("0.5", "0.5", 15);
        auto D = dirac_from_w<double>(g.basis, g.ctx.dirac, [](int) { return w0<double>(); });
        CHECK(relative_residual(D, g.D, 0) < 1e-15);
        auto w = w0<double>();
        // W0 is unitary
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                Cplx<double> s;
                for (int k = 0; k < 2; ++k) s += conj(w[k][a]) * w[k][b];
                CHECK(s.re == doctest::Approx(a == b ? 1.0 : 0.0));
                CHECK(std::abs(s.im) < 1e-15);
            }
    }

    TEST_CASE("D squared is (l + 1/2)^2 and D anticommutes with gamma")
    {
        auto g = geometry("0.5", "0", 15);
        auto D2 = compose(g.D, g.D);
        auto expect = BandedOperator<double>::diagonal(g.basis, [](const Index& ix) {
            double d = ix.l2 / 2.0 + 0.5;
            return Cplx<double>(d * d);
        });
        CHECK(equal_exact(D2, expect));
        CHECK(equal_exact(compose(g.gamma, g.D), scale(compose(g.D, g.gamma), Cplx<double>(-1.0))));
    }

    TEST_CASE("J^2 = (-1)^{2N}")
    {
        auto half = geometry("0.5", "0.5", 15, 1);
        CHECK(equal_exact(half.J.square(), scale(half.unit, Cplx<double>(-1.0))));
        CHECK(equal_exact(half.J0.square(), scale(half.unit, Cplx<double>(-1.0))));
        auto one = geometry("0.5", "0.5", 16, 2);
        CHECK(equal_exact(one.J.square(), one.unit));
    }

    TEST_CASE("L_q has block norm q^l and commutes with gamma, F and D")
    {
        auto g = geometry("0.5", "0.5", 15);
        CHECK(block_norm(g.Lq, 5) == doctest::Approx(std::pow(0.5, 2.5)).epsilon(1e-15));
        CHECK(equal_exact(compose(g.Lq, g.F), compose(g.F, g.Lq)));
        CHECK(equal_exact(compose(g.Lq, g.D), compose(g.D, g.Lq)));
        CHECK(equal_exact(compose(g.Lq, g.gamma), compose(g.gamma, g.Lq)));
    }

    TEST_CASE("z_i commutes with F exactly")
    {
        auto g = geometry("0.3", "0.5", 15);
        for (int i = -1; i <= 1; ++i) CHECK(equal_exact(compose(g.F, g.zi(i)), compose(g.zi(i), g.F)));
    }

    TEST_CASE("L_q^{-1}(pi(x_i) - z_i) stays bounded at t = 1")
    {
        auto g = geometry("0.5", "1", 41);
        for (int i = -1; i <= 1; ++i) {
            auto d = interior_restrict(sub(g.x(i), g.zi(i)), 1);
            double worst = 0;
            for (auto [l2, n] : block_norms(d)) {
                if (l2 > 39) continue;
                worst = std::max(worst, n / std::pow(0.5, l2 / 2.0));
            }
            CHECK(worst < 10.0);
        }
    }

    TEST_CASE("configuration errors")
    {
        CHECK_THROWS_WITH_AS(geometry("1.5", "0", 21), "q must lie in (0,1)", std::domain_error);
        CHECK_THROWS_AS(geometry("0.5", "2", 21), std::invalid_argument);
        CHECK_THROWS_AS(geometry("0.5", "0", 3), std::invalid_argument);
        CHECK_THROWS_AS(geometry("0.5", "0", 20, 1), std::invalid_argument);
    }

    TEST_CASE("a vanishing schedule value makes |D| non-invertible")
    {
        ModelContext ctx;
        ctx.dirac.kind = DiracSchedule::Kind::Custom;
        for (int l2 = 1; l2 <= 21; l2 += 2) ctx.dirac.custom[l2] = l2 == 5 ? 0.0 : l2 / 2.0 + 0.5;
        auto g = build_geometry<double>(ctx, 1);
        CHECK_FALSE(g.invertible);
    }
}
