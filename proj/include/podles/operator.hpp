#pragma once

#include "podles/basis.hpp"
#include "podles/precision.hpp"

#include <functional>
#include <ostream>
#include <utility>
#include <vector>

namespace podles {

/// Sparse linear map between two truncated bases, stored column by
/// column with rows ascending. Entries are complex; most operators in
/// practice are real and report so through is_real().
template <class R> class BandedOperator {
public:
    using Value = Cplx<R>;
    using Entry = std::pair<int, Value>;
    using Column = std::vector<Entry>;

    BandedOperator() = default;
    BandedOperator(BasisPtr in, BasisPtr out);
    explicit BandedOperator(BasisPtr both) : BandedOperator(both, both) {}

    static BandedOperator identity(BasisPtr b);
    static BandedOperator diagonal(BasisPtr b, const std::function<Value(const Index&)>& f);

    const Basis& in() const { return *in_; }
    const Basis& out() const { return *out_; }
    const BasisPtr& in_ptr() const { return in_; }
    const BasisPtr& out_ptr() const { return out_; }

    std::size_t cols() const { return cols_.size(); }
    const Column& column(std::size_t c) const { return cols_[c]; }

    /// Adds v to the (row, col) entry; zero sums are removed.
    void add(int row, int col, const Value& v);
    /// Same, addressed by labels; entries outside the truncation are dropped.
    void add(const Index& row, const Index& col, const Value& v);

    Value at(int row, int col) const;
    Value at(const Index& row, const Index& col) const;

    std::size_t nnz() const;
    /// Largest |l2_out - l2_in| over stored entries.
    int band() const;
    bool is_real() const;
    bool is_diagonal() const;
    R max_abs() const;

    /// Keeps only entries where both labels satisfy keep().
    BandedOperator filtered(const std::function<bool(const Index& row, const Index& col)>& keep) const;

private:
    BasisPtr in_;
    BasisPtr out_;
    std::vector<Column> cols_;
};

template <class R> BandedOperator<R> compose(const BandedOperator<R>& a, const BandedOperator<R>& b);
template <class R> BandedOperator<R> add(const BandedOperator<R>& a, const BandedOperator<R>& b);
template <class R> BandedOperator<R> sub(const BandedOperator<R>& a, const BandedOperator<R>& b);
template <class R> BandedOperator<R> scale(const BandedOperator<R>& a, const Cplx<R>& s);
template <class R> BandedOperator<R> adjoint(const BandedOperator<R>& a);
/// Entrywise complex conjugate.
template <class R> BandedOperator<R> conj(const BandedOperator<R>& a);
/// AB - BA. A diagonal factor is applied through differences of its
/// entries, which keeps identities like [|D|, T] = T exact.
template <class R> BandedOperator<R> commutator(const BandedOperator<R>& a, const BandedOperator<R>& b);
/// Drops every row and column whose l exceeds lmax - guard (on the
/// auxiliary space the l+m and l-m cutoffs get the same margin).
template <class R> BandedOperator<R> interior_restrict(const BandedOperator<R>& a, int guard);
/// Part of `a` that shifts l by exactly nu2/2.
template <class R> BandedOperator<R> l_shift_part(const BandedOperator<R>& a, int nu2);

template <class R> BandedOperator<R> operator+(const BandedOperator<R>& a, const BandedOperator<R>& b)
{
    return add(a, b);
}
template <class R> BandedOperator<R> operator-(const BandedOperator<R>& a, const BandedOperator<R>& b)
{
    return sub(a, b);
}
template <class R> BandedOperator<R> operator*(const BandedOperator<R>& a, const BandedOperator<R>& b)
{
    return compose(a, b);
}
template <class R> BandedOperator<R> operator*(const Cplx<R>& s, const BandedOperator<R>& a)
{
    return scale(a, s);
}

/// Spectral norm of the columns with input level l2.
template <class R> R block_norm(const BandedOperator<R>& a, int l2);
/// (l2, block norm) for every input level.
template <class R> std::vector<std::pair<int, R>> block_norms(const BandedOperator<R>& a);

/// max |a - b| over the guard interior divided by the larger of max |a|
/// and max |b| there (or undivided when both vanish).
template <class R> R relative_residual(const BandedOperator<R>& a, const BandedOperator<R>& b, int guard);
/// Entrywise identity of the stored patterns and values.
template <class R> bool equal_exact(const BandedOperator<R>& a, const BandedOperator<R>& b);
/// Same, restricted to the guard interior.
template <class R> bool equal_exact(const BandedOperator<R>& a, const BandedOperator<R>& b, int guard);

/// Text lines `l2_in m2_in s_in l2_out m2_out s_out re im`, sorted.
template <class R> void dump(std::ostream& os, const BandedOperator<R>& a);

/// Antilinear map v -> L conj(v).
template <class R> class AntilinearOperator {
public:
    AntilinearOperator() = default;
    explicit AntilinearOperator(BandedOperator<R> linear) : linear_(std::move(linear)) {}

    const BandedOperator<R>& linear_part() const { return linear_; }
    static constexpr bool conjugates_first = true;

    std::vector<Cplx<R>> apply(const std::vector<Cplx<R>>& v) const;

    /// The linear operator this o other = L conj(L_other).
    BandedOperator<R> then(const AntilinearOperator& other) const;
    BandedOperator<R> square() const { return then(*this); }
    /// Antilinear this o X.
    AntilinearOperator after(const BandedOperator<R>& x) const;
    /// J X J^{-1} for unitary L.
    BandedOperator<R> conjugate(const BandedOperator<R>& x) const;

private:
    BandedOperator<R> linear_;
};

} // namespace podles
