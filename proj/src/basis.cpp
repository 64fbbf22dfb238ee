#include "podles/basis.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <stdexcept>

namespace podles {

namespace {

std::int64_t pack(const Index& ix)
{
    return (static_cast<std::int64_t>(ix.l2 + (1 << 20)) << 32) |
           (static_cast<std::int64_t>(ix.m2 + (1 << 20)) << 2) | static_cast<std::int64_t>(ix.s + 1);
}

} // namespace

void Basis::index_all()
{
    std::sort(idx_.begin(), idx_.end());
    std::set<int> lv;
    pos_.reserve(idx_.size());
    for (std::size_t i = 0; i < idx_.size(); ++i) {
        pos_.emplace(pack(idx_[i]), static_cast<int>(i));
        lv.insert(idx_[i].l2);
    }
    levels_.assign(lv.begin(), lv.end());
}

BasisPtr Basis::spinor(int lmax2, int N2)
{
    int a = std::abs(N2);
    if (lmax2 < a || (lmax2 - a) % 2 != 0)
        throw std::invalid_argument("lmax2 must be at least |N2| and of the same parity");
    std::shared_ptr<Basis> b(new Basis);
    b->kind_ = BasisKind::Spinor;
    b->lmax2_ = lmax2;
    b->n2_ = N2;
    for (int l2 = a; l2 <= lmax2; l2 += 2)
        for (int m2 = -l2; m2 <= l2; m2 += 2)
            for (int s : {-1, 1}) b->idx_.push_back({l2, m2, s});
    b->index_all();
    return b;
}

BasisPtr Basis::line(int lmax2, int N2)
{
    int a = std::abs(N2);
    if (lmax2 < a || (lmax2 - a) % 2 != 0)
        throw std::invalid_argument("lmax2 must be at least |N2| and of the same parity");
    std::shared_ptr<Basis> b(new Basis);
    b->kind_ = BasisKind::Line;
    b->lmax2_ = lmax2;
    b->n2_ = N2;
    for (int l2 = a; l2 <= lmax2; l2 += 2)
        for (int m2 = -l2; m2 <= l2; m2 += 2) b->idx_.push_back({l2, m2, 1});
    b->index_all();
    return b;
}

BasisPtr Basis::hat(int lmax2, int nmax, int kmax)
{
    if (nmax < 0 || kmax < 0) throw std::invalid_argument("hat cutoffs must be non-negative");
    std::shared_ptr<Basis> b(new Basis);
    b->kind_ = BasisKind::Hat;
    b->lmax2_ = lmax2;
    b->nmax_ = nmax;
    b->kmax_ = kmax;
    for (int n = 0; n <= nmax; ++n)
        for (int k = -kmax; n + k <= lmax2; ++k)
            for (int s : {-1, 1}) b->idx_.push_back({n + k, n - k, s});
    b->index_all();
    return b;
}

int Basis::find(const Index& ix) const
{
    auto it = pos_.find(pack(ix));
    return it == pos_.end() ? -1 : it->second;
}

bool Basis::in_interior(const Index& ix, int guard) const
{
    if (ix.l2 > lmax2_ - 2 * guard) return false;
    if (kind_ != BasisKind::Hat) return true;
    const int n = (ix.l2 + ix.m2) / 2;
    const int k = (ix.l2 - ix.m2) / 2;
    return n <= nmax_ - 2 * guard && k >= -kmax_ + 2 * guard;
}

bool Basis::same_as(const Basis& o) const
{
    return this == &o || (kind_ == o.kind_ && lmax2_ == o.lmax2_ && n2_ == o.n2_ &&
                          nmax_ == o.nmax_ && kmax_ == o.kmax_);
}

std::string Basis::describe() const
{
    switch (kind_) {
    case BasisKind::Spinor:
        return "spinor(lmax2=" + std::to_string(lmax2_) + ", N2=" + std::to_string(n2_) + ")";
    case BasisKind::Line:
        return "line(lmax2=" + std::to_string(lmax2_) + ", N2=" + std::to_string(n2_) + ")";
    case BasisKind::Hat:
        return "hat(lmax2=" + std::to_string(lmax2_) + ", nmax=" + std::to_string(nmax_) +
               ", kmax=" + std::to_string(kmax_) + ")";
    }
    return "?";
}

void require_same(const Basis& a, const Basis& b, const char* what)
{
    if (!a.same_as(b))
        throw std::invalid_argument(std::string(what) + ": basis mismatch between " + a.describe() +
                                    " and " + b.describe());
}

} // namespace podles
