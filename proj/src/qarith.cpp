#include "podles/qarith.hpp"

#include <cstdio>
#include <stdexcept>

namespace podles {

template <class R> void require_q(const R& q)
{
    if (!(q > 0 && q < 1)) throw std::domain_error("q must lie in (0,1)");
}

template <class R> R qnum(HalfInt n, const R& q)
{
    require_q(q);
    if (n.twice == 0) return R(0);
    if (n.twice == 2) return R(1);
    if (n.twice == -2) return R(-1);
    if (n.twice < 0) return -qnum(HalfInt{-n.twice}, q);
    using std::pow;
    R e = R(n.twice) / 2;
    // both terms positive for n > 0
    return (pow(q, -e) - pow(q, e)) / (1 / q - q);
}

template <class R> R qnum_halfpow(HalfInt n, const R& q)
{
    if (n.twice < 0) {
        std::fprintf(stderr, "qnum_halfpow: negative argument %d/2\n", n.twice);
        std::abort();
    }
    if (n.twice == 0) return R(0);
    if (n.twice == 2) return R(1);
    using std::sqrt;
    return sqrt(qnum(n, q));
}

template <class R> QTable<R>::QTable(const R& q) : q_(q)
{
    require_q(q);
    using std::sqrt;
    sqrt_q_ = sqrt(q_);
    denom_ = 1 / q_ - q_;
}

template <class R> const R& QTable<R>::pow2(int e2) const
{
    auto it = pow_.find(e2);
    if (it != pow_.end()) return it->second;
    R v;
    if (e2 == 0) {
        v = R(1);
    } else if (e2 % 2 == 0) {
        using std::pow;
        v = pow(q_, e2 / 2);
    } else {
        using std::pow;
        v = pow(sqrt_q_, e2);
    }
    return pow_.emplace(e2, v).first->second;
}

template <class R> const R& QTable<R>::num2(int n2) const
{
    auto it = num_.find(n2);
    if (it != num_.end()) return it->second;
    R v;
    if (n2 == 0) v = R(0);
    else if (n2 == 2) v = R(1);
    else if (n2 < 0) v = -num2(-n2);
    else v = (pow2(-n2) - pow2(n2)) / denom_;
    return num_.emplace(n2, v).first->second;
}

template <class R> const R& QTable<R>::sqrt_num2(int n2) const
{
    auto it = sqrt_num_.find(n2);
    if (it != sqrt_num_.end()) return it->second;
    if (n2 < 0) {
        std::fprintf(stderr, "QTable::sqrt_num2: negative argument %d/2\n", n2);
        std::abort();
    }
    using std::sqrt;
    R v = n2 == 0 ? R(0) : (n2 == 2 ? R(1) : R(sqrt(num2(n2))));
    return sqrt_num_.emplace(n2, v).first->second;
}

template void require_q<double>(const double&);
template void require_q<Mp>(const Mp&);
template double qnum<double>(HalfInt, const double&);
template Mp qnum<Mp>(HalfInt, const Mp&);
template double qnum_halfpow<double>(HalfInt, const double&);
template Mp qnum_halfpow<Mp>(HalfInt, const Mp&);
template class QTable<double>;
template class QTable<Mp>;

} // namespace podles
