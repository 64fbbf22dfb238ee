#pragma once

#include "podles/algebra.hpp"
#include "podles/context.hpp"
#include "podles/operator.hpp"
#include "podles/qarith.hpp"

#include <functional>
#include <unordered_map>

namespace podles {

/// Matrix coefficients of the irreducible representations pi_N, all
/// indices given as twice-values. Construct inside the PrecisionScope of
/// the build when R is Mp.
template <class R> class Coefficients {
public:
    explicit Coefficients(const ModelContext& ctx);
    Coefficients(const R& q, const R& t);

    const R& q() const { return table_.q(); }
    const R& t() const { return t_; }
    const QTable<R>& table() const { return table_; }

    /// beta_N(l); the sign of N = 0 is taken as +1, which is harmless
    /// because the corresponding term carries [0].
    R beta_N(int l2, int N2) const;
    /// alpha_N(l) >= 0, requires l >= |N|.
    R alpha_N(int l2, int N2) const;
    /// alpha^nu_i(l, m; N); zero whenever the target label is invalid.
    R alpha_coeff(int i, int nu, int l2, int m2, int N2) const;

private:
    QTable<R> table_;
    R t_;
    mutable std::unordered_map<long long, R> alpha_memo_;
    mutable std::unordered_map<long long, R> beta_memo_;
};

/// Builds sum_nu alpha^nu_i(l,m;N(ix)) |l+nu, m+i, s><l, m, s| on `basis`,
/// where the charge N is chosen per basis vector.
template <class R>
BandedOperator<R> build_coefficient_operator(int i, const Coefficients<R>& co, const BasisPtr& basis,
                                             const std::function<int(const Index&)>& charge2);

/// pi_N(x_i) on the single-summand space of charge N.
template <class R> BandedOperator<R> build_xi(int i, int N2, const Coefficients<R>& co, int lmax2);
template <class R> BandedOperator<R> build_xi(int i, int N2, const ModelContext& ctx);

enum class UqGen { K, Kinv, E, F };

/// Generators of U_q(su(2)) acting blockwise in l, identically on both signs.
template <class R> BandedOperator<R> build_uq(UqGen g, const BasisPtr& basis, const QTable<R>& qt);
/// q k^2 + q^{-1} k^{-2} + (q - q^{-1}) e f assembled from the generators.
template <class R> BandedOperator<R> casimir(const BasisPtr& basis, const QTable<R>& qt);
/// Diagonal q^{2l+1} + q^{-2l-1}.
template <class R> BandedOperator<R> casimir_closed(const BasisPtr& basis, const QTable<R>& qt);

/// h acting on a generator x_i: k, k^{-1} scale by q^{+-i}; e and f
/// follow the action table with [2]^{1/2} weights.
template <class R> AlgebraElement<R> left_action(UqGen h, int i, const QTable<R>& qt);

} // namespace podles
