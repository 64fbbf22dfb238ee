#pragma once

#include "podles/algebra.hpp"
#include "podles/embedding.hpp"
#include "podles/geometry.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace podles {

enum class CheckMode { Exact, Residual, DecayFit };

const char* to_string(CheckMode m);

struct CheckSpec {
    std::string id;
    int degree = 0;
    CheckMode mode = CheckMode::Residual;
    std::optional<double> expected_slope;
    double tolerance = 1e-10;
};

/// One decay series: (l2, block norm) for a named component.
struct DecaySeries {
    std::string component;
    std::vector<std::pair<int, double>> norms;
};

struct CheckReport {
    std::string id;
    CheckMode mode = CheckMode::Residual;
    bool pass = false;
    std::optional<double> residual;
    std::optional<double> slope;
    std::optional<double> r2;
    std::optional<double> expected;
    double tol = 0;
    std::optional<double> ms;
    std::string note;
    std::vector<DecaySeries> series;
};

struct SuiteOptions {
    int guard = 2;
    double tol = 1e-10;
    bool timing = false;
    /// Fit window in twice-l; hi2 < 0 means lmax minus the check degree.
    int lo2 = 16;
    int hi2 = -1;
    double min_r2 = 0.98;
};

struct DecayFit {
    double slope = 0;
    double r2 = 0;
    int used = 0;
    int dropped = 0;
    /// Every point in the window sits below the working-precision floor.
    bool vanishes = false;
    bool ok = false;
    std::string note;
};

/// Least-squares fit of log(norm) against l over l2 in [lo2, hi2]. Points
/// at or below `floor` are dropped; fewer than four usable points is an
/// error unless all of them vanished.
template <class R>
DecayFit estimate_decay_slope(const std::vector<std::pair<int, R>>& norms, int lo2, int hi2, const R& floor);

/// Window actually used: [lo2, lmax2 - 2 degree]. When that holds fewer
/// than eight levels the upper half of the available levels is used
/// instead (at least four).
std::pair<int, int> fit_window(int lmin2, int lmax2, int degree, const SuiteOptions& opt);

template <class R> std::vector<CheckReport> run_algebraic_checks(const SpinGeometry<R>& g, const SuiteOptions& opt);
template <class R> std::vector<CheckReport> run_decay_checks(const SpinGeometry<R>& g, const SuiteOptions& opt);

/// Norm series of the individual decay quantities, exposed for tests and
/// for the acceptance runner.
template <class R> std::vector<std::pair<int, R>> appr_norms(const SpinGeometry<R>& g, int i);
template <class R> std::vector<std::pair<int, R>> commutant_norms(const SpinGeometry<R>& g, int i, int j);
template <class R> std::vector<std::pair<int, R>> first_order_norms(const SpinGeometry<R>& g, int i, int j);
template <class R> std::vector<std::pair<int, R>> fredholm_norms(const SpinGeometry<R>& g, int i);
/// Noise floor for block norms of operators of unit size at precision R.
template <class R> R norm_floor();

/// The 2x2 projection over 1/((2-t)(1+q^2)).
template <class R> std::array<std::array<AlgebraElement<R>, 2>, 2> projection_p(const R& q, const R& t);

/// Relative residuals of p^2 - p and p^* - p on the guard interior.
template <class R> std::pair<R, R> projection_residuals(const SpinGeometry<R>& g, int guard);

enum class PairingMethod { Trace, Series };

template <class R> struct PairingResult {
    R value{0};
    R bound{0};
    bool converged = true;
    std::vector<std::pair<int, R>> level_terms;
};

/// (1/2) Tr(gamma F [F, p]) summed over the truncation, or the closed
/// series in q-numbers, with a geometric tail bound.
template <class R> PairingResult<R> chern_pairing(const SpinGeometry<R>& g, PairingMethod method);

/// (1/2) Tr(gamma F [F, a]) per level.
template <class R> std::vector<std::pair<int, R>> chern0_levels(const SpinGeometry<R>& g, const BandedOperator<R>& a);

/// Per-level sums of diagonal entries over the interior l <= lmax - degree.
template <class R>
std::vector<std::pair<int, Cplx<R>>> level_traces(const BandedOperator<R>& a, int degree);

/// Tr(a |D|^{-z}) over the interior; for a scalar multiple of the unit
/// an Euler-Maclaurin tail is added. Needs an invertible |D|.
template <class R>
Cplx<R> zeta_partial(const BandedOperator<R>& a, int degree, const Cplx<R>& z, const SpinGeometry<R>& g,
                     bool identity_tail);
template <class R> Cplx<R> zeta_partial(const AlgebraElement<R>& a, const Cplx<R>& z, const SpinGeometry<R>& g);

template <class R> struct ResidueResult {
    R value{0};
    R error{0};
    bool converged = true;
};

/// Residue of Tr(a |D|^{-z}) at z = 2 or z = 1 for the default schedule,
/// from the large-l behaviour c_l ~ R2 (l + 1/2) + R1 of the level traces.
template <class R>
ResidueResult<R> residue_at(int pole, const BandedOperator<R>& a, int degree, const SpinGeometry<R>& g);
template <class R> ResidueResult<R> residue_at(int pole, const AlgebraElement<R>& a, const SpinGeometry<R>& g);

/// P (beta beta^*)^k Q on the spinor space.
template <class R> BandedOperator<R> beta_monomial(const HatSpace<R>& h, int k);

struct LocalIndexOptions {
    int samples = 20;
    unsigned seed = 12345;
    int max_word = 4;
    double tol = 1e-12;
};

/// Vanishing of the degree-two local component over all generator
/// triples, and agreement of the degree-zero component with ch_0 on
/// random words.
template <class R>
std::vector<CheckReport> check_local_index(const SpinGeometry<R>& g, const HatSpace<R>& h,
                                           const LocalIndexOptions& opt);

/// phi_0(a) by contour quadrature of psi(z)/z around 0.
template <class R> R phi0_contour(const SpinGeometry<R>& g, const BandedOperator<R>& a, int degree);

/// Euler-Maclaurin estimate of sum_{n > L} n^{1-z}.
template <class R> Cplx<R> power_tail(const R& L, const Cplx<R>& z);

} // namespace podles
