#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace podles {

/// Basis label |l, m, s> with l and m stored as twice-values. On the
/// spinor space s = +1 marks the summand of charge +N and s = -1 the
/// summand of charge -N; single-summand spaces use s = +1 throughout.
struct Index {
    int l2 = 0;
    int m2 = 0;
    int s = 1;

    friend auto operator<=>(const Index&, const Index&) = default;
};

enum class BasisKind { Spinor, Line, Hat };

class Basis;
using BasisPtr = std::shared_ptr<const Basis>;

class Basis {
public:
    /// pi_{-N} (+) pi_{N}: l = |N|, |N|+1, ..., lmax; both signs.
    static BasisPtr spinor(int lmax2, int N2);
    /// pi_N alone.
    static BasisPtr line(int lmax2, int N2);
    /// Auxiliary space of kets |l,m>_{+-} with n = l+m in [0, nmax],
    /// k = l-m >= -kmax and l <= lmax.
    static BasisPtr hat(int lmax2, int nmax, int kmax);

    BasisKind kind() const { return kind_; }
    int lmax2() const { return lmax2_; }
    int N2() const { return n2_; }
    int nmax() const { return nmax_; }
    int kmax() const { return kmax_; }

    std::size_t size() const { return idx_.size(); }
    const Index& at(std::size_t i) const { return idx_[i]; }
    const std::vector<Index>& indices() const { return idx_; }
    /// Position of an index, or -1 when it is outside the truncation.
    int find(const Index& ix) const;
    bool contains(const Index& ix) const { return find(ix) >= 0; }

    /// Distinct l2 values present, ascending.
    const std::vector<int>& levels() const { return levels_; }

    /// True when ix stays clear of every cutoff by a margin of `guard`
    /// generator steps (one step moves l by 1, and l+m, l-m by at most 2).
    bool in_interior(const Index& ix, int guard) const;

    bool same_as(const Basis& o) const;
    std::string describe() const;

private:
    Basis() = default;
    void index_all();

    BasisKind kind_ = BasisKind::Spinor;
    int lmax2_ = 0;
    int n2_ = 0;
    int nmax_ = 0;
    int kmax_ = 0;
    std::vector<Index> idx_;
    std::vector<int> levels_;
    std::unordered_map<std::int64_t, int> pos_;
};

/// Throws std::invalid_argument unless both pointers describe the same space.
void require_same(const Basis& a, const Basis& b, const char* what);

} // namespace podles
