#pragma once

#include "podles/context.hpp"
#include "podles/operator.hpp"
#include "podles/repr.hpp"

#include <array>
#include <functional>
#include <memory>

namespace podles {

template <class R> using Gens = std::array<BandedOperator<R>, 3>;

/// pi_{-N} (+) pi_{N}: generator images acting diagonally in the sign label.
template <class R> Gens<R> build_spin_rep(const Coefficients<R>& co, const BasisPtr& spinor);
/// Approximants z_i: charge-zero coefficients on the spinor basis,
/// acting identically on both signs.
template <class R> Gens<R> build_zi(const Coefficients<R>& co, const BasisPtr& spinor);
/// Diagonal q^l.
template <class R> BandedOperator<R> build_Lq(const BasisPtr& basis, const QTable<R>& qt);

template <class R> struct DiracParts {
    BandedOperator<R> D;
    BandedOperator<R> absD;
    BandedOperator<R> F;
    BandedOperator<R> gamma;
    bool invertible = true;
};

/// D v_{m,+-} = d_l v_{m,-+}, gamma = +-1, F the sign swap, |D| = |d_l|.
template <class R> DiracParts<R> build_dirac(const BasisPtr& spinor, const DiracSchedule& sched);

/// J v_{m,+-} = (-1)^{m+N} v_{-m,-+}
template <class R> AntilinearOperator<R> build_J(const BasisPtr& spinor);
/// J0 v_{m,+-} = (-1)^{m+N} v_{-m,+-}
template <class R> AntilinearOperator<R> build_J0(const BasisPtr& spinor);

/// 2x2 unitary acting on span{v_{m,-}, v_{m,+}}, rows and columns ordered (-, +).
template <class R> using Mat2 = std::array<std::array<Cplx<R>, 2>, 2>;

/// (1/sqrt 2) [[1, 1], [-i, i]]
template <class R> Mat2<R> w0();

/// D assembled blockwise as W_l^* diag(d_l, -d_l) W_l; with W_l = W_0
/// this reproduces build_dirac. Any unitary family may be supplied.
template <class R>
BandedOperator<R> dirac_from_w(const BasisPtr& spinor, const DiracSchedule& sched,
                               const std::function<Mat2<R>(int l2)>& w);

/// Everything the checks need for one (q, t, lmax, N) at one precision.
template <class R> struct SpinGeometry {
    ModelContext ctx;
    int N2 = 1;
    BasisPtr basis;
    std::shared_ptr<const Coefficients<R>> coeffs;
    Gens<R> pi_x;
    Gens<R> z;
    BandedOperator<R> unit;
    BandedOperator<R> Lq;
    BandedOperator<R> D;
    BandedOperator<R> absD;
    BandedOperator<R> F;
    BandedOperator<R> gamma;
    bool invertible = true;
    AntilinearOperator<R> J;
    AntilinearOperator<R> J0;

    const BandedOperator<R>& x(int i) const { return pi_x[i + 1]; }
    const BandedOperator<R>& zi(int i) const { return z[i + 1]; }
    const QTable<R>& table() const { return coeffs->table(); }
    const R& q() const { return coeffs->q(); }
    const R& t() const { return coeffs->t(); }
};

/// Validates ctx and builds the geometry. When R is Mp the caller must
/// hold a PrecisionScope of ctx.prec_bits for as long as results are used.
template <class R> SpinGeometry<R> build_geometry(const ModelContext& ctx, int N2 = 1);

/// pi(a) for an algebra element.
template <class R> BandedOperator<R> represent(const AlgebraElement<R>& a, const SpinGeometry<R>& g);

} // namespace podles
