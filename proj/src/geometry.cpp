#include "podles/geometry.hpp"

#include <cstdlib>
#include <stdexcept>

namespace podles {

namespace {

/// (-1)^{m + |N|}, with m + |N| an integer on every spinor level.
int parity_sign(int m2, int N2)
{
    int e = (m2 + std::abs(N2)) / 2;
    return (e % 2 == 0) ? 1 : -1;
}

} // namespace

template <class R> Gens<R> build_spin_rep(const Coefficients<R>& co, const BasisPtr& spinor)
{
    const int N2 = spinor->N2();
    Gens<R> g;
    for (int i = -1; i <= 1; ++i)
        g[i + 1] = build_coefficient_operator<R>(i, co, spinor, [N2](const Index& ix) { return ix.s * N2; });
    return g;
}

template <class R> Gens<R> build_zi(const Coefficients<R>& co, const BasisPtr& spinor)
{
    Gens<R> g;
    for (int i = -1; i <= 1; ++i)
        g[i + 1] = build_coefficient_operator<R>(i, co, spinor, [](const Index&) { return 0; });
    return g;
}

template <class R> BandedOperator<R> build_Lq(const BasisPtr& basis, const QTable<R>& qt)
{
    return BandedOperator<R>::diagonal(basis, [&](const Index& ix) { return Cplx<R>(qt.pow2(ix.l2)); });
}

template <class R> DiracParts<R> build_dirac(const BasisPtr& spinor, const DiracSchedule& sched)
{
    DiracParts<R> p{BandedOperator<R>(spinor), BandedOperator<R>(spinor), BandedOperator<R>(spinor),
                    BandedOperator<R>(spinor), true};
    for (std::size_t c = 0; c < spinor->size(); ++c) {
        const Index& ix = spinor->at(c);
        const Index flip{ix.l2, ix.m2, -ix.s};
        R d = sched.kind == DiracSchedule::Kind::Linear
                  ? R(sched.c1) * R(ix.l2) / 2 + R(sched.c2)
                  : R(sched.value(ix.l2));
        if (d == 0) p.invertible = false;
        using std::abs;
        R ad = abs(d);
        p.D.add(flip, ix, Cplx<R>(d));
        p.absD.add(ix, ix, Cplx<R>(ad));
        p.F.add(flip, ix, Cplx<R>(R(d < 0 ? -1 : 1)));
        p.gamma.add(ix, ix, Cplx<R>(R(ix.s)));
    }
    return p;
}

template <class R> AntilinearOperator<R> build_J(const BasisPtr& spinor)
{
    BandedOperator<R> L(spinor);
    for (const Index& ix : spinor->indices())
        L.add(Index{ix.l2, -ix.m2, -ix.s}, ix, Cplx<R>(R(parity_sign(ix.m2, spinor->N2()))));
    return AntilinearOperator<R>(std::move(L));
}

template <class R> AntilinearOperator<R> build_J0(const BasisPtr& spinor)
{
    BandedOperator<R> L(spinor);
    for (const Index& ix : spinor->indices())
        L.add(Index{ix.l2, -ix.m2, ix.s}, ix, Cplx<R>(R(parity_sign(ix.m2, spinor->N2()))));
    return AntilinearOperator<R>(std::move(L));
}

template <class R> Mat2<R> w0()
{
    using std::sqrt;
    R h = 1 / sqrt(R(2));
    return Mat2<R>{{{Cplx<R>(h), Cplx<R>(h)}, {Cplx<R>(R(0), -h), Cplx<R>(R(0), h)}}};
}

template <class R>
BandedOperator<R> dirac_from_w(const BasisPtr& spinor, const DiracSchedule& sched,
                               const std::function<Mat2<R>(int l2)>& w)
{
    BandedOperator<R> D(spinor);
    for (int l2 : spinor->levels()) {
        const Mat2<R> W = w(l2);
        R d = sched.kind == DiracSchedule::Kind::Linear ? R(sched.c1) * R(l2) / 2 + R(sched.c2)
                                                        : R(sched.value(l2));
        const R delta[2] = {d, -d};
        for (int m2 = -l2; m2 <= l2; m2 += 2)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    Cplx<R> b;
                    for (int k = 0; k < 2; ++k) b += conj(W[k][i]) * (delta[k] * W[k][j]);
                    D.add(Index{l2, m2, i == 0 ? -1 : 1}, Index{l2, m2, j == 0 ? -1 : 1}, b);
                }
    }
    return D;
}

template <class R> SpinGeometry<R> build_geometry(const ModelContext& ctx, int N2)
{
    ctx.validate();
    if (std::abs(N2) < 1) throw std::invalid_argument("N2 must be non-zero for the spinor space");
    if ((ctx.lmax2 - std::abs(N2)) % 2 != 0)
        throw std::invalid_argument("lmax2 must have the parity of N2 (odd for the spinor space)");
    if (ctx.lmax2 < std::abs(N2) + 4) throw std::invalid_argument("lmax2 leaves fewer than three levels");
    SpinGeometry<R> g;
    g.ctx = ctx;
    g.N2 = N2;
    g.basis = Basis::spinor(ctx.lmax2, N2);
    g.coeffs = std::make_shared<const Coefficients<R>>(ctx);
    g.pi_x = build_spin_rep(*g.coeffs, g.basis);
    g.z = build_zi(*g.coeffs, g.basis);
    g.unit = BandedOperator<R>::identity(g.basis);
    g.Lq = build_Lq(g.basis, g.coeffs->table());
    auto dp = build_dirac<R>(g.basis, ctx.dirac);
    g.D = std::move(dp.D);
    g.absD = std::move(dp.absD);
    g.F = std::move(dp.F);
    g.gamma = std::move(dp.gamma);
    g.invertible = dp.invertible;
    g.J = build_J<R>(g.basis);
    g.J0 = build_J0<R>(g.basis);
    return g;
}

template <class R> BandedOperator<R> represent(const AlgebraElement<R>& a, const SpinGeometry<R>& g)
{
    return represent(a, g.pi_x, g.unit);
}

#define PODLES_INSTANTIATE(R)                                                                          \
    template Gens<R> build_spin_rep(const Coefficients<R>&, const BasisPtr&);                          \
    template Gens<R> build_zi(const Coefficients<R>&, const BasisPtr&);                                \
    template BandedOperator<R> build_Lq(const BasisPtr&, const QTable<R>&);                            \
    template DiracParts<R> build_dirac<R>(const BasisPtr&, const DiracSchedule&);                      \
    template AntilinearOperator<R> build_J<R>(const BasisPtr&);                                        \
    template AntilinearOperator<R> build_J0<R>(const BasisPtr&);                                       \
    template Mat2<R> w0<R>();                                                                          \
    template BandedOperator<R> dirac_from_w(const BasisPtr&, const DiracSchedule&,                     \
                                            const std::function<Mat2<R>(int)>&);                       \
    template SpinGeometry<R> build_geometry<R>(const ModelContext&, int);                              \
    template BandedOperator<R> represent(const AlgebraElement<R>&, const SpinGeometry<R>&);

PODLES_INSTANTIATE(double)
PODLES_INSTANTIATE(Mp)

#undef PODLES_INSTANTIATE

} // namespace podles
