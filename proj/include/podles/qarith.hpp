#pragma once

#include "podles/precision.hpp"

#include <cstdlib>
#include <unordered_map>
#include <vector>

namespace podles {

/// Half-integer stored as twice its value so indices stay exact.
struct HalfInt {
    int twice = 0;

    static constexpr HalfInt from_twice(int t) { return HalfInt{t}; }
    static constexpr HalfInt whole(int n) { return HalfInt{2 * n}; }

    constexpr bool is_integer() const { return twice % 2 == 0; }
    double value() const { return twice / 2.0; }

    friend constexpr bool operator==(HalfInt a, HalfInt b) { return a.twice == b.twice; }
    friend constexpr auto operator<=>(HalfInt a, HalfInt b) { return a.twice <=> b.twice; }
};

/// Throws std::domain_error unless 0 < q < 1.
template <class R> void require_q(const R& q);

/// q-number [n] = (q^{-n} - q^n) / (q^{-1} - q).
template <class R> R qnum(HalfInt n, const R& q);

/// Square root of [n]; aborts on a negative argument, which can only come
/// from an indexing error upstream.
template <class R> R qnum_halfpow(HalfInt n, const R& q);

/// Memoised powers of q and q-numbers for one value of q, all keyed by
/// twice-values. Not thread-safe; each model build owns its own table.
template <class R> class QTable {
public:
    explicit QTable(const R& q);

    const R& q() const { return q_; }

    /// q^{e2/2}
    const R& pow2(int e2) const;
    /// [n2/2]
    const R& num2(int n2) const;
    /// [n2/2]^{1/2}, n2 >= 0
    const R& sqrt_num2(int n2) const;

private:
    R q_;
    R sqrt_q_;
    R denom_;
    mutable std::unordered_map<int, R> pow_;
    mutable std::unordered_map<int, R> num_;
    mutable std::unordered_map<int, R> sqrt_num_;
};

} // namespace podles
