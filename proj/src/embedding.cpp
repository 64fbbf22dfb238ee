#include "podles/embedding.hpp"

#include <cstdlib>
#include <stdexcept>

namespace podles {

template <class R>
std::pair<BandedOperator<R>, BandedOperator<R>> build_alpha_beta(const BasisPtr& hat, const QTable<R>& qt)
{
    BandedOperator<R> a(hat);
    BandedOperator<R> b(hat);
    using std::sqrt;
    for (const Index& ix : hat->indices()) {
        const int n = (ix.l2 + ix.m2) / 2;
        a.add(Index{ix.l2 + 1, ix.m2 + 1, ix.s}, ix, Cplx<R>(R(sqrt(1 - qt.pow2(4 * (n + 1))))));
        b.add(Index{ix.l2 + 1, ix.m2 - 1, ix.s}, ix, Cplx<R>(qt.pow2(2 * n)));
    }
    return {std::move(a), std::move(b)};
}

template <class R>
Gens<R> build_phi(const BandedOperator<R>& alpha, const BandedOperator<R>& beta, const R& q, const R& t)
{
    using std::sqrt;
    using C = Cplx<R>;
    const R st = sqrt(1 - t);
    const R qq = 1 + q * q;
    auto as = adjoint(alpha);
    auto bs = adjoint(beta);
    auto unit = BandedOperator<R>::identity(alpha.in_ptr());
    auto x1 = scale(scale(compose(alpha, alpha) - scale(compose(bs, bs), C(q)), C(st)) - scale(compose(bs, alpha), C(t)),
                    C(R(sqrt(qq))));
    auto x0 = scale(scale(compose(alpha, beta) + compose(bs, as), C(st)) - scale(compose(beta, bs), C(t)), C(qq)) +
              scale(unit, C(t));
    auto xm1 = scale(adjoint(x1), C(R(-1 / q)));
    return Gens<R>{std::move(xm1), std::move(x0), std::move(x1)};
}

template <class R>
std::pair<BandedOperator<R>, BandedOperator<R>> build_PQ(const BasisPtr& hat, const BasisPtr& spinor)
{
    if (spinor->lmax2() > hat->lmax2()) throw std::invalid_argument("build_PQ: spinor truncation exceeds the hat one");
    BandedOperator<R> Q(spinor, hat);
    for (std::size_t c = 0; c < spinor->size(); ++c) {
        int row = hat->find(spinor->at(c));
        if (row < 0) throw std::invalid_argument("build_PQ: spinor label missing from the hat space");
        Q.add(row, static_cast<int>(c), Cplx<R>(R(1)));
    }
    auto P = adjoint(Q);
    return {std::move(P), std::move(Q)};
}

template <class R> HatSpace<R> build_hat(const SpinGeometry<R>& g, HatCutoffs cut)
{
    if (std::abs(g.N2) != 1) throw std::invalid_argument("the auxiliary space embeds the N = 1/2 spinor space only");
    HatSpace<R> h;
    const int lmax2 = cut.lmax2 > 0 ? cut.lmax2 : g.basis->lmax2();
    const int nmax = cut.nmax >= 0 ? cut.nmax : lmax2;
    h.basis = Basis::hat(lmax2, nmax, cut.kmax);
    auto [a, b] = build_alpha_beta(h.basis, g.table());
    h.alpha = std::move(a);
    h.beta = std::move(b);
    h.unit = BandedOperator<R>::identity(h.basis);
    h.Dp = BandedOperator<R>(h.basis);
    h.absDp = BandedOperator<R>(h.basis);
    h.Fp = BandedOperator<R>(h.basis);
    for (const Index& ix : h.basis->indices()) {
        R d = R(ix.l2) / 2 + R(1) / 2;
        Index flip{ix.l2, ix.m2, -ix.s};
        h.Dp.add(flip, ix, Cplx<R>(d));
        using std::abs;
        h.absDp.add(ix, ix, Cplx<R>(R(abs(d))));
        h.Fp.add(flip, ix, Cplx<R>(R(1)));
    }
    h.phi = build_phi(h.alpha, h.beta, g.q(), g.t());
    auto [P, Q] = build_PQ<R>(h.basis, g.basis);
    h.P = std::move(P);
    h.Q = std::move(Q);
    return h;
}

template <class R> BandedOperator<R> phi_tilde(const AlgebraElement<R>& a, const HatSpace<R>& h)
{
    return compose(h.P, compose(represent(a, h.phi, h.unit), h.Q));
}

#define PODLES_INSTANTIATE(R)                                                                             \
    template std::pair<BandedOperator<R>, BandedOperator<R>> build_alpha_beta(const BasisPtr&,            \
                                                                              const QTable<R>&);          \
    template Gens<R> build_phi(const BandedOperator<R>&, const BandedOperator<R>&, const R&, const R&);   \
    template std::pair<BandedOperator<R>, BandedOperator<R>> build_PQ<R>(const BasisPtr&, const BasisPtr&); \
    template HatSpace<R> build_hat(const SpinGeometry<R>&, HatCutoffs);                                   \
    template BandedOperator<R> phi_tilde(const AlgebraElement<R>&, const HatSpace<R>&);

PODLES_INSTANTIATE(double)
PODLES_INSTANTIATE(Mp)

#undef PODLES_INSTANTIATE

} // namespace podles
