#pragma once

#include <map>
#include <string>

namespace podles {

/// Eigenvalue schedule of the Dirac operator, d_l = c1 l + c2 by default.
struct DiracSchedule {
    enum class Kind { Linear, Custom };

    Kind kind = Kind::Linear;
    double c1 = 1.0;
    double c2 = 0.5;
    /// l2 -> d_l for Kind::Custom.
    std::map<int, double> custom;

    double value(int l2) const;
    /// True when no d_l vanishes on the levels up to lmax2.
    bool invertible(int lmax2, int lmin2) const;
};

/// Deformation parameters, truncation and precision of one model build.
/// q and t are kept as decimal text so each precision tier parses them
/// at its own width.
struct ModelContext {
    std::string q = "0.5";
    std::string t = "0";
    int lmax2 = 21;
    unsigned prec_bits = 53;
    DiracSchedule dirac;

    double q_double() const;
    double t_double() const;

    /// Throws std::invalid_argument (or std::domain_error for q) on any
    /// violated invariant.
    void validate() const;
};

} // namespace podles
