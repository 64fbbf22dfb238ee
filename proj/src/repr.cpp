#include "podles/repr.hpp"

#include <cstdlib>
#include <stdexcept>

namespace podles {

namespace {

long long memo_key(int l2, int N2) { return (static_cast<long long>(l2) << 32) ^ static_cast<unsigned>(N2); }

} // namespace

template <class R>
Coefficients<R>::Coefficients(const ModelContext& ctx)
    : Coefficients(from_decimal<R>(ctx.q), from_decimal<R>(ctx.t))
{
}

template <class R> Coefficients<R>::Coefficients(const R& q, const R& t) : table_(q), t_(t)
{
    if (!(t >= 0 && t <= 1)) throw std::invalid_argument("t must lie in [0,1]");
}

template <class R> R Coefficients<R>::beta_N(int l2, int N2) const
{
    auto key = memo_key(l2, N2);
    if (auto it = beta_memo_.find(key); it != beta_memo_.end()) return it->second;
    const auto& T = table_;
    const R& q = T.q();
    const int a2 = std::abs(N2);
    const int eps = N2 >= 0 ? 1 : -1;
    const R q_eps = eps > 0 ? q : T.pow2(-2);
    R num = R(eps) * T.num2(2 * a2) * (T.pow2(-2) + q - q_eps * t_) +
            t_ * (q - T.pow2(-2)) * (T.num2(a2) * T.num2(a2 + 2) - T.num2(l2) * T.num2(l2 + 2));
    R v = num / (q * T.num2(2 * l2 + 4));
    return beta_memo_.emplace(key, v).first->second;
}

template <class R> R Coefficients<R>::alpha_N(int l2, int N2) const
{
    if (l2 == 0) return R(0);
    auto key = memo_key(l2, N2);
    if (auto it = alpha_memo_.find(key); it != alpha_memo_.end()) return it->second;
    const auto& T = table_;
    R pref = T.sqrt_num2(4) * T.sqrt_num2(l2 + N2) * T.sqrt_num2(l2 - N2) * T.sqrt_num2(2 * l2) /
             (T.sqrt_num2(2 * l2 + 2) * T.num2(l2));
    R ratio = T.num2(l2) / T.num2(2 * l2);
    R shift = t_ - 1 + T.pow2(2 * N2);
    R rad = 1 - t_ + T.pow2(-2 * N2) * ratio * ratio * shift * shift;
    using std::sqrt;
    R v = pref * sqrt(rad);
    return alpha_memo_.emplace(key, v).first->second;
}

template <class R> R Coefficients<R>::alpha_coeff(int i, int nu, int l2, int m2, int N2) const
{
    if (i < -1 || i > 1 || nu < -1 || nu > 1) throw std::invalid_argument("alpha_coeff: i and nu must be in {-1,0,1}");
    const int tl2 = l2 + 2 * nu;
    const int tm2 = m2 + 2 * i;
    if (tl2 < std::abs(N2) || std::abs(tm2) > tl2 || (nu == 0 && l2 == 0)) return R(0);
    const auto& T = table_;
    auto S = [&](int x) -> const R& { return T.sqrt_num2(x); };
    auto Q = [&](int x) -> const R& { return T.num2(x); };
    auto P = [&](int x) -> const R& { return T.pow2(x); };
    switch (i) {
    case 1:
        if (nu == 1)
            return P(-l2 + m2) * S(l2 + m2 + 2) * S(l2 + m2 + 4) / (S(2 * l2 + 2) * S(2 * l2 + 4)) *
                   alpha_N(l2 + 2, N2);
        if (nu == 0) return -P(m2 + 4) * S(l2 - m2) * S(l2 + m2 + 2) * S(4) / Q(2 * l2) * beta_N(l2, N2);
        return -P(l2 + m2 + 2) * S(l2 - m2 - 2) * S(l2 - m2) / (S(2 * l2 - 2) * S(2 * l2)) * alpha_N(l2, N2);
    case 0:
        if (nu == 1)
            return P(m2) * S(l2 - m2 + 2) * S(l2 + m2 + 2) * S(4) / (S(2 * l2 + 2) * S(2 * l2 + 4)) *
                   alpha_N(l2 + 2, N2);
        if (nu == 0)
            return (Q(l2 - m2 + 2) * Q(l2 + m2) - P(4) * Q(l2 - m2) * Q(l2 + m2 + 2)) / Q(2 * l2) * beta_N(l2, N2);
        return P(m2) * S(l2 - m2) * S(l2 + m2) * S(4) / (S(2 * l2 - 2) * S(2 * l2)) * alpha_N(l2, N2);
    default:
        if (nu == 1)
            return P(l2 + m2) * S(l2 - m2 + 2) * S(l2 - m2 + 4) / (S(2 * l2 + 2) * S(2 * l2 + 4)) *
                   alpha_N(l2 + 2, N2);
        if (nu == 0) return P(m2) * S(l2 - m2 + 2) * S(l2 + m2) * S(4) / Q(2 * l2) * beta_N(l2, N2);
        return -P(-l2 + m2 - 2) * S(l2 + m2 - 2) * S(l2 + m2) / (S(2 * l2 - 2) * S(2 * l2)) * alpha_N(l2, N2);
    }
}

template <class R>
BandedOperator<R> build_coefficient_operator(int i, const Coefficients<R>& co, const BasisPtr& basis,
                                             const std::function<int(const Index&)>& charge2)
{
    BandedOperator<R> op(basis);
    for (std::size_t c = 0; c < basis->size(); ++c) {
        const Index& ix = basis->at(c);
        const int N2 = charge2(ix);
        for (int nu = -1; nu <= 1; ++nu) {
            Index target{ix.l2 + 2 * nu, ix.m2 + 2 * i, ix.s};
            int row = basis->find(target);
            if (row < 0) continue;
            R v = co.alpha_coeff(i, nu, ix.l2, ix.m2, N2);
            if (v != 0) op.add(row, static_cast<int>(c), Cplx<R>(v));
        }
    }
    return op;
}

template <class R> BandedOperator<R> build_xi(int i, int N2, const Coefficients<R>& co, int lmax2)
{
    return build_coefficient_operator<R>(i, co, Basis::line(lmax2, N2), [N2](const Index&) { return N2; });
}

template <class R> BandedOperator<R> build_xi(int i, int N2, const ModelContext& ctx)
{
    ctx.validate();
    PrecisionScope scope(ctx.prec_bits);
    Coefficients<R> co(ctx);
    return build_xi<R>(i, N2, co, ctx.lmax2);
}

template <class R> BandedOperator<R> build_uq(UqGen g, const BasisPtr& basis, const QTable<R>& qt)
{
    BandedOperator<R> op(basis);
    for (std::size_t c = 0; c < basis->size(); ++c) {
        const Index& ix = basis->at(c);
        const int l2 = ix.l2;
        const int m2 = ix.m2;
        switch (g) {
        case UqGen::K: op.add(static_cast<int>(c), static_cast<int>(c), Cplx<R>(qt.pow2(m2))); break;
        case UqGen::Kinv: op.add(static_cast<int>(c), static_cast<int>(c), Cplx<R>(qt.pow2(-m2))); break;
        case UqGen::F:
            if (m2 < l2)
                op.add(Index{l2, m2 + 2, ix.s}, ix, Cplx<R>(qt.sqrt_num2(l2 - m2) * qt.sqrt_num2(l2 + m2 + 2)));
            break;
        case UqGen::E:
            if (m2 > -l2)
                op.add(Index{l2, m2 - 2, ix.s}, ix, Cplx<R>(qt.sqrt_num2(l2 - m2 + 2) * qt.sqrt_num2(l2 + m2)));
            break;
        }
    }
    return op;
}

template <class R> BandedOperator<R> casimir(const BasisPtr& basis, const QTable<R>& qt)
{
    const R& q = qt.q();
    auto k = build_uq(UqGen::K, basis, qt);
    auto ki = build_uq(UqGen::Kinv, basis, qt);
    auto e = build_uq(UqGen::E, basis, qt);
    auto f = build_uq(UqGen::F, basis, qt);
    return scale(compose(k, k), Cplx<R>(q)) + scale(compose(ki, ki), Cplx<R>(1 / q)) +
           scale(compose(e, f), Cplx<R>((q - 1 / q) * (q - 1 / q)));
}

template <class R> BandedOperator<R> casimir_closed(const BasisPtr& basis, const QTable<R>& qt)
{
    return BandedOperator<R>::diagonal(basis, [&](const Index& ix) {
        return Cplx<R>(qt.pow2(2 * ix.l2 + 2) + qt.pow2(-2 * ix.l2 - 2));
    });
}

template <class R> AlgebraElement<R> left_action(UqGen h, int i, const QTable<R>& qt)
{
    using E = AlgebraElement<R>;
    if (i < -1 || i > 1) throw std::invalid_argument("left_action: not a generator");
    const Cplx<R> s2(qt.sqrt_num2(4));
    switch (h) {
    case UqGen::K: return Cplx<R>(qt.pow2(2 * i)) * E::generator(i);
    case UqGen::Kinv: return Cplx<R>(qt.pow2(-2 * i)) * E::generator(i);
    case UqGen::F: return i == 1 ? E() : s2 * E::generator(i + 1);
    case UqGen::E: return i == -1 ? E() : s2 * E::generator(i - 1);
    }
    return E();
}

#define PODLES_INSTANTIATE(R)                                                                                   \
    template class Coefficients<R>;                                                                             \
    template BandedOperator<R> build_coefficient_operator(int, const Coefficients<R>&, const BasisPtr&,          \
                                                          const std::function<int(const Index&)>&);             \
    template BandedOperator<R> build_xi(int, int, const Coefficients<R>&, int);                                 \
    template BandedOperator<R> build_xi<R>(int, int, const ModelContext&);                                      \
    template BandedOperator<R> build_uq(UqGen, const BasisPtr&, const QTable<R>&);                              \
    template BandedOperator<R> casimir(const BasisPtr&, const QTable<R>&);                                      \
    template BandedOperator<R> casimir_closed(const BasisPtr&, const QTable<R>&);                               \
    template AlgebraElement<R> left_action(UqGen, int, const QTable<R>&);

PODLES_INSTANTIATE(double)
PODLES_INSTANTIATE(Mp)

#undef PODLES_INSTANTIATE

} // namespace podles
