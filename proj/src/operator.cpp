#include "podles/operator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <tuple>

namespace podles {

namespace {

template <class R> void normalize(typename BandedOperator<R>::Column& col)
{
    std::stable_sort(col.begin(), col.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::size_t w = 0;
    for (std::size_t i = 0; i < col.size();) {
        int row = col[i].first;
        Cplx<R> sum = col[i].second;
        std::size_t j = i + 1;
        for (; j < col.size() && col[j].first == row; ++j) sum += col[j].second;
        if (!sum.is_zero()) col[w++] = {row, sum};
        i = j;
    }
    col.resize(w);
}

} // namespace

template <class R>
BandedOperator<R>::BandedOperator(BasisPtr in, BasisPtr out)
    : in_(std::move(in)), out_(std::move(out)), cols_(in_->size())
{
}

template <class R> BandedOperator<R> BandedOperator<R>::identity(BasisPtr b)
{
    BandedOperator r(b, b);
    for (std::size_t i = 0; i < b->size(); ++i) r.cols_[i].push_back({static_cast<int>(i), Value(R(1))});
    return r;
}

template <class R>
BandedOperator<R> BandedOperator<R>::diagonal(BasisPtr b, const std::function<Value(const Index&)>& f)
{
    BandedOperator r(b, b);
    for (std::size_t i = 0; i < b->size(); ++i) {
        Value v = f(b->at(i));
        if (!v.is_zero()) r.cols_[i].push_back({static_cast<int>(i), v});
    }
    return r;
}

template <class R> void BandedOperator<R>::add(int row, int col, const Value& v)
{
    if (v.is_zero()) return;
    auto& c = cols_.at(col);
    auto it = std::lower_bound(c.begin(), c.end(), row, [](const Entry& e, int r) { return e.first < r; });
    if (it != c.end() && it->first == row) {
        it->second += v;
        if (it->second.is_zero()) c.erase(it);
    } else {
        c.insert(it, {row, v});
    }
}

template <class R> void BandedOperator<R>::add(const Index& row, const Index& col, const Value& v)
{
    int r = out_->find(row);
    int c = in_->find(col);
    if (r < 0 || c < 0) return;
    add(r, c, v);
}

template <class R> Cplx<R> BandedOperator<R>::at(int row, int col) const
{
    const auto& c = cols_.at(col);
    auto it = std::lower_bound(c.begin(), c.end(), row, [](const Entry& e, int r) { return e.first < r; });
    if (it != c.end() && it->first == row) return it->second;
    return Value();
}

template <class R> Cplx<R> BandedOperator<R>::at(const Index& row, const Index& col) const
{
    int r = out_->find(row);
    int c = in_->find(col);
    if (r < 0 || c < 0) return Value();
    return at(r, c);
}

template <class R> std::size_t BandedOperator<R>::nnz() const
{
    std::size_t n = 0;
    for (const auto& c : cols_) n += c.size();
    return n;
}

template <class R> int BandedOperator<R>::band() const
{
    int b = 0;
    for (std::size_t c = 0; c < cols_.size(); ++c)
        for (const auto& e : cols_[c]) b = std::max(b, std::abs(out_->at(e.first).l2 - in_->at(c).l2));
    return b;
}

template <class R> bool BandedOperator<R>::is_real() const
{
    for (const auto& c : cols_)
        for (const auto& e : c)
            if (!e.second.is_real()) return false;
    return true;
}

template <class R> bool BandedOperator<R>::is_diagonal() const
{
    if (!in_->same_as(*out_)) return false;
    for (std::size_t c = 0; c < cols_.size(); ++c)
        for (const auto& e : cols_[c])
            if (e.first != static_cast<int>(c)) return false;
    return true;
}

template <class R> R BandedOperator<R>::max_abs() const
{
    R m(0);
    for (const auto& c : cols_)
        for (const auto& e : c) {
            R a = abs(e.second);
            if (a > m) m = a;
        }
    return m;
}

template <class R>
BandedOperator<R> BandedOperator<R>::filtered(const std::function<bool(const Index&, const Index&)>& keep) const
{
    BandedOperator r(in_, out_);
    for (std::size_t c = 0; c < cols_.size(); ++c)
        for (const auto& e : cols_[c])
            if (keep(out_->at(e.first), in_->at(c))) r.cols_[c].push_back(e);
    return r;
}

template <class R> BandedOperator<R> compose(const BandedOperator<R>& a, const BandedOperator<R>& b)
{
    require_same(a.in(), b.out(), "compose");
    BandedOperator<R> r(b.in_ptr(), a.out_ptr());
    typename BandedOperator<R>::Column acc;
    for (std::size_t c = 0; c < b.cols(); ++c) {
        acc.clear();
        for (const auto& [k, v] : b.column(c))
            for (const auto& [row, w] : a.column(k)) acc.push_back({row, w * v});
        normalize<R>(acc);
        for (const auto& [row, v] : acc) r.add(row, static_cast<int>(c), v);
    }
    return r;
}

template <class R> BandedOperator<R> add(const BandedOperator<R>& a, const BandedOperator<R>& b)
{
    require_same(a.in(), b.in(), "add");
    require_same(a.out(), b.out(), "add");
    BandedOperator<R> r(a.in_ptr(), a.out_ptr());
    typename BandedOperator<R>::Column acc;
    for (std::size_t c = 0; c < a.cols(); ++c) {
        acc = a.column(c);
        acc.insert(acc.end(), b.column(c).begin(), b.column(c).end());
        normalize<R>(acc);
        for (const auto& [row, v] : acc) r.add(row, static_cast<int>(c), v);
    }
    return r;
}

template <class R> BandedOperator<R> sub(const BandedOperator<R>& a, const BandedOperator<R>& b)
{
    return add(a, scale(b, Cplx<R>(R(-1))));
}

template <class R> BandedOperator<R> scale(const BandedOperator<R>& a, const Cplx<R>& s)
{
    BandedOperator<R> r(a.in_ptr(), a.out_ptr());
    if (s.is_zero()) return r;
    for (std::size_t c = 0; c < a.cols(); ++c)
        for (const auto& [row, v] : a.column(c)) r.add(row, static_cast<int>(c), s * v);
    return r;
}

template <class R> BandedOperator<R> adjoint(const BandedOperator<R>& a)
{
    BandedOperator<R> r(a.out_ptr(), a.in_ptr());
    std::vector<typename BandedOperator<R>::Column> cols(a.out().size());
    for (std::size_t c = 0; c < a.cols(); ++c)
        for (const auto& [row, v] : a.column(c)) cols[row].push_back({static_cast<int>(c), conj(v)});
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (const auto& [row, v] : cols[c]) r.add(row, static_cast<int>(c), v);
    return r;
}

template <class R> BandedOperator<R> conj(const BandedOperator<R>& a)
{
    BandedOperator<R> r(a.in_ptr(), a.out_ptr());
    for (std::size_t c = 0; c < a.cols(); ++c)
        for (const auto& [row, v] : a.column(c)) r.add(row, static_cast<int>(c), conj(v));
    return r;
}

template <class R> BandedOperator<R> commutator(const BandedOperator<R>& a, const BandedOperator<R>& b)
{
    require_same(a.in(), a.out(), "commutator");
    require_same(a.in(), b.in(), "commutator");
    require_same(b.in(), b.out(), "commutator");
    if (a.is_diagonal() || b.is_diagonal()) {
        const bool left = a.is_diagonal();
        const auto& d = left ? a : b;
        const auto& x = left ? b : a;
        std::vector<Cplx<R>> dv(d.cols());
        for (std::size_t i = 0; i < d.cols(); ++i)
            if (!d.column(i).empty()) dv[i] = d.column(i).front().second;
        BandedOperator<R> r(a.in_ptr(), a.out_ptr());
        for (std::size_t c = 0; c < x.cols(); ++c)
            for (const auto& [row, v] : x.column(c)) {
                Cplx<R> diff = left ? dv[row] - dv[c] : dv[c] - dv[row];
                r.add(row, static_cast<int>(c), diff * v);
            }
        return r;
    }
    return sub(compose(a, b), compose(b, a));
}

template <class R> BandedOperator<R> interior_restrict(const BandedOperator<R>& a, int guard)
{
    if (guard < 0) throw std::invalid_argument("guard must be non-negative");
    return a.filtered(
        [&](const Index& row, const Index& col) { return a.out().in_interior(row, guard) && a.in().in_interior(col, guard); });
}

template <class R> BandedOperator<R> l_shift_part(const BandedOperator<R>& a, int nu2)
{
    return a.filtered([&](const Index& row, const Index& col) { return row.l2 - col.l2 == nu2; });
}

template <class R> R block_norm(const BandedOperator<R>& a, int l2)
{
    std::vector<int> cols;
    for (std::size_t c = 0; c < a.cols(); ++c)
        if (a.in().at(c).l2 == l2) cols.push_back(static_cast<int>(c));
    if (cols.empty()) throw std::out_of_range("block_norm: level " + std::to_string(l2) + "/2 not in basis");
    std::map<int, int> rows;
    R mx(0);
    bool real = true;
    for (int c : cols)
        for (const auto& [row, v] : a.column(c)) {
            rows.emplace(row, 0);
            R av = abs(v);
            if (av > mx) mx = av;
            if (!v.is_real()) real = false;
        }
    if (mx == 0) return R(0);
    int k = 0;
    for (auto& [row, pos] : rows) pos = k++;
    double sigma = 0;
    if (real) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                                  static_cast<Eigen::Index>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (const auto& [row, v] : a.column(cols[j])) m(rows[row], j) = to_double(R(v.re / mx));
        sigma = m.rows() >= m.cols() ? Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0)
                                     : Eigen::JacobiSVD<Eigen::MatrixXd>(m.transpose()).singularValues()(0);
    } else {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()),
                                                    static_cast<Eigen::Index>(cols.size()));
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (const auto& [row, v] : a.column(cols[j]))
                m(rows[row], j) = {to_double(R(v.re / mx)), to_double(R(v.im / mx))};
        sigma = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
    }
    return mx * R(sigma);
}

template <class R> std::vector<std::pair<int, R>> block_norms(const BandedOperator<R>& a)
{
    std::vector<std::pair<int, R>> out;
    for (int l2 : a.in().levels()) out.emplace_back(l2, block_norm(a, l2));
    return out;
}

template <class R> R relative_residual(const BandedOperator<R>& a, const BandedOperator<R>& b, int guard)
{
    auto ia = interior_restrict(a, guard);
    auto ib = interior_restrict(b, guard);
    R num = sub(ia, ib).max_abs();
    R den = ia.max_abs();
    R db = ib.max_abs();
    if (db > den) den = db;
    if (den == 0) return num;
    return num / den;
}

template <class R> bool equal_exact(const BandedOperator<R>& a, const BandedOperator<R>& b)
{
    if (!a.in().same_as(b.in()) || !a.out().same_as(b.out())) return false;
    for (std::size_t c = 0; c < a.cols(); ++c) {
        const auto& x = a.column(c);
        const auto& y = b.column(c);
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i].first != y[i].first || x[i].second != y[i].second) return false;
    }
    return true;
}

template <class R> bool equal_exact(const BandedOperator<R>& a, const BandedOperator<R>& b, int guard)
{
    return equal_exact(interior_restrict(a, guard), interior_restrict(b, guard));
}

template <class R> void dump(std::ostream& os, const BandedOperator<R>& a)
{
    using Key = std::tuple<int, int, int, int, int, int>;
    std::vector<std::pair<Key, Cplx<R>>> rows;
    rows.reserve(a.nnz());
    for (std::size_t c = 0; c < a.cols(); ++c) {
        const Index& in = a.in().at(c);
        for (const auto& [row, v] : a.column(c)) {
            const Index& out = a.out().at(row);
            rows.push_back({Key{in.l2, in.m2, in.s, out.l2, out.m2, out.s}, v});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    char buf[160];
    for (const auto& [k, v] : rows) {
        auto [l2i, m2i, si, l2o, m2o, so] = k;
        std::snprintf(buf, sizeof buf, "%d %d %+d %d %d %+d %.17g %.17g\n", l2i, m2i, si, l2o, m2o, so,
                      to_double(v.re), to_double(v.im));
        os << buf;
    }
}

template <class R> std::vector<Cplx<R>> AntilinearOperator<R>::apply(const std::vector<Cplx<R>>& v) const
{
    if (v.size() != linear_.in().size()) throw std::invalid_argument("apply: vector size mismatch");
    std::vector<Cplx<R>> out(linear_.out().size());
    for (std::size_t c = 0; c < linear_.cols(); ++c) {
        Cplx<R> x = conj(v[c]);
        if (x.is_zero()) continue;
        for (const auto& [row, w] : linear_.column(c)) out[row] += w * x;
    }
    return out;
}

template <class R> BandedOperator<R> AntilinearOperator<R>::then(const AntilinearOperator& other) const
{
    return compose(linear_, conj(other.linear_));
}

template <class R> AntilinearOperator<R> AntilinearOperator<R>::after(const BandedOperator<R>& x) const
{
    return AntilinearOperator(compose(linear_, conj(x)));
}

template <class R> BandedOperator<R> AntilinearOperator<R>::conjugate(const BandedOperator<R>& x) const
{
    return compose(compose(linear_, conj(x)), adjoint(linear_));
}

#define PODLES_INSTANTIATE(R)                                                                               \
    template class BandedOperator<R>;                                                                       \
    template class AntilinearOperator<R>;                                                                   \
    template BandedOperator<R> compose(const BandedOperator<R>&, const BandedOperator<R>&);                \
    template BandedOperator<R> add(const BandedOperator<R>&, const BandedOperator<R>&);                    \
    template BandedOperator<R> sub(const BandedOperator<R>&, const BandedOperator<R>&);                    \
    template BandedOperator<R> scale(const BandedOperator<R>&, const Cplx<R>&);                            \
    template BandedOperator<R> adjoint(const BandedOperator<R>&);                                          \
    template BandedOperator<R> conj(const BandedOperator<R>&);                                             \
    template BandedOperator<R> commutator(const BandedOperator<R>&, const BandedOperator<R>&);             \
    template BandedOperator<R> interior_restrict(const BandedOperator<R>&, int);                           \
    template BandedOperator<R> l_shift_part(const BandedOperator<R>&, int);                                \
    template R block_norm(const BandedOperator<R>&, int);                                                  \
    template std::vector<std::pair<int, R>> block_norms(const BandedOperator<R>&);                         \
    template R relative_residual(const BandedOperator<R>&, const BandedOperator<R>&, int);                 \
    template bool equal_exact(const BandedOperator<R>&, const BandedOperator<R>&);                         \
    template bool equal_exact(const BandedOperator<R>&, const BandedOperator<R>&, int);                    \
    template void dump(std::ostream&, const BandedOperator<R>&);

PODLES_INSTANTIATE(double)
PODLES_INSTANTIATE(Mp)

#undef PODLES_INSTANTIATE

} // namespace podles
