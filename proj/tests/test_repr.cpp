#include "podles/geometry.hpp"
#include "podles/repr.hpp"

#include <doctest.h>

#include <cmath>

using namespace podles;

// Reference values below were evaluated independently at 30 digits from
// the closed-form coefficient formulas.

TEST_SUITE("repr")
{
    TEST_CASE("beta_{1/2}(1/2) = 20/21 at q = 1/2, t = 0")
    {
        Coefficients<double> co(0.5, 0.0);
        CHECK(co.beta_N(1, 1) == doctest::Approx(20.0 / 21.0).epsilon(1e-15));
    }

    TEST_CASE("coefficient spot values at q = 1/2, t = 1/2")
    {
        Coefficients<double> co(0.5, 0.5);
        CHECK(co.beta_N(1, 1) == doctest::Approx(6.0 / 7.0).epsilon(1e-15));
        CHECK(co.alpha_N(3, 1) == doctest::Approx(0.75314466788015071295).epsilon(1e-14));
        CHECK(co.alpha_coeff(1, 1, 1, 1, 1) == doctest::Approx(0.75314466788015071295).epsilon(1e-14));
        CHECK(co.alpha_coeff(0, 0, 1, 1, 1) == doctest::Approx(0.85714285714285714286).epsilon(1e-14));
        CHECK(co.alpha_coeff(-1, -1, 3, 1, -1) == doctest::Approx(-1.4535629116261951766).epsilon(1e-14));
        CHECK(co.alpha_coeff(0, 1, 5, -3, 1) == doctest::Approx(0.42690522925180576226).epsilon(1e-14));
        CHECK(co.alpha_coeff(1, 0, 3, -1, -1) == doctest::Approx(-0.060889995197941487334).epsilon(1e-13));
    }

    TEST_CASE("coefficients vanish on invalid targets")
    {
        Coefficients<double> co(0.5, 0.5);
        CHECK(co.alpha_coeff(1, 0, 1, 1, 1) == 0.0);    // |m + 1| > l
        CHECK(co.alpha_coeff(0, -1, 1, 1, 1) == 0.0);   // l - 1 < |N|
        CHECK(co.alpha_coeff(-1, -1, 1, -1, 0) == 0.0); // l - 1 < 0
    }

    TEST_CASE("192-bit coefficients round to the binary64 ones")
    {
        Coefficients<double> lo(0.3, 0.7);
        PrecisionScope scope(192);
        Coefficients<Mp> hi(from_decimal<Mp>("0.3"), from_decimal<Mp>("0.7"));
        for (int i = -1; i <= 1; ++i)
            for (int nu = -1; nu <= 1; ++nu)
                for (int l2 = 1; l2 <= 15; l2 += 2)
                    for (int m2 = -l2; m2 <= l2; m2 += 2)
                        CHECK(to_double(hi.alpha_coeff(i, nu, l2, m2, 1)) ==
                              doctest::Approx(lo.alpha_coeff(i, nu, l2, m2, 1)).epsilon(1e-12));
    }

    TEST_CASE("Casimir acts as q^{2l+1} + q^{-2l-1}")
    {
        QTable<double> T(0.5);
        auto b = Basis::spinor(15, 1);
        auto C = casimir(b, T);
        auto closed = casimir_closed(b, T);
        CHECK(relative_residual(C, closed, 0) < 1e-14);
        CHECK(closed.at(Index{1, 1, 1}, Index{1, 1, 1}).re == doctest::Approx(4.25));
    }

    TEST_CASE("left action table")
    {
        const double q = 0.5;
        QTable<double> T(q);
        const double s2 = std::sqrt(T.num2(4));
        auto f_m1 = left_action(UqGen::F, -1, T);
        CHECK(f_m1.terms().at(Word{0}).re == doctest::Approx(s2));
        CHECK(left_action(UqGen::F, 1, T).is_zero());
        CHECK(left_action(UqGen::E, -1, T).is_zero());
        CHECK(left_action(UqGen::E, 1, T).terms().at(Word{0}).re == doctest::Approx(s2));
        CHECK(left_action(UqGen::K, 1, T).terms().at(Word{1}).re == doctest::Approx(q));
        CHECK(left_action(UqGen::Kinv, -1, T).terms().at(Word{-1}).re == doctest::Approx(q));
    }

    TEST_CASE("each pi_N satisfies the sphere relations on a line space at 192 bits")
    {
        PrecisionScope scope(192);
        ModelContext ctx;
        ctx.q = "0.4";
        ctx.t = "0.3";
        ctx.lmax2 = 17;
        ctx.prec_bits = 192;
        Coefficients<Mp> co(ctx);
        for (int N2 : {1, -1, 3}) {
            auto xm = build_xi<Mp>(-1, N2, co, 17);
            auto x0 = build_xi<Mp>(0, N2, co, 17);
            auto one = BandedOperator<Mp>::identity(x0.in_ptr());
            Mp q = co.q();
            Mp t = co.t();
            auto xt = sub(x0, scale(one, Cplx<Mp>(t)));
            auto r = relative_residual(compose(xm, xt), scale(compose(xt, xm), Cplx<Mp>(q * q)), 2);
            CHECK(to_double(r) < 1e-50);
        }
    }
}
