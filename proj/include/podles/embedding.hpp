#pragma once

#include "podles/algebra.hpp"
#include "podles/geometry.hpp"
#include "podles/operator.hpp"

namespace podles {

/// Default third cutoff: l - m >= -kmax. Words of length w only reach
/// k >= -w from the embedded spinor space, so 8 covers every shipped word.
inline constexpr int kDefaultHatKmax = 8;

struct HatCutoffs {
    int lmax2 = 0;
    int nmax = -1;  ///< -1 selects lmax2, i.e. l + m <= 2 lmax
    int kmax = kDefaultHatKmax;
};

template <class R> struct HatSpace {
    BasisPtr basis;
    BandedOperator<R> alpha;
    BandedOperator<R> beta;
    BandedOperator<R> unit;
    /// D'|l,m>_{+-} = (l + 1/2)|l,m>_{-+}, with |D'| and F' alongside.
    BandedOperator<R> Dp;
    BandedOperator<R> absDp;
    BandedOperator<R> Fp;
    Gens<R> phi;  ///< phi(x_{-1}), phi(x_0), phi(x_1)
    BandedOperator<R> P;  ///< hat -> spinor
    BandedOperator<R> Q;  ///< spinor -> hat

    const BandedOperator<R>& phi_x(int i) const { return phi[i + 1]; }
};

/// alpha|l,m> = sqrt(1 - q^{2(l+m+1)}) |l+1/2, m+1/2>,
/// beta|l,m> = q^{l+m} |l+1/2, m-1/2>.
template <class R>
std::pair<BandedOperator<R>, BandedOperator<R>> build_alpha_beta(const BasisPtr& hat, const QTable<R>& qt);

/// phi(x_1) = sqrt(1+q^2) (sqrt(1-t)(alpha^2 - q beta*^2) - t beta* alpha),
/// phi(x_0) = (1+q^2)(sqrt(1-t)(alpha beta + beta* alpha*) - t beta beta*) + t,
/// phi(x_{-1}) = -q^{-1} phi(x_1)*.
template <class R>
Gens<R> build_phi(const BandedOperator<R>& alpha, const BandedOperator<R>& beta, const R& q, const R& t);

/// Q v_{m,+-} = |l,m>_{+-}; P = Q^*.
template <class R>
std::pair<BandedOperator<R>, BandedOperator<R>> build_PQ(const BasisPtr& hat, const BasisPtr& spinor);

/// Builds the auxiliary space compatible with the geometry; cut.lmax2 = 0
/// selects the spinor lmax2.
template <class R> HatSpace<R> build_hat(const SpinGeometry<R>& g, HatCutoffs cut = {});

/// P phi(a) Q
template <class R> BandedOperator<R> phi_tilde(const AlgebraElement<R>& a, const HatSpace<R>& h);

} // namespace podles
