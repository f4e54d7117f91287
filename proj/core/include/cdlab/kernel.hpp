#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cdlab/basis.hpp"
#include "cdlab/linalg.hpp"
#include "cdlab/measure.hpp"

namespace cdlab {

/// Christoffel-Darboux kernel B_k(x, y) = sum_i p_i(x) conj(p_i(y)) of an
/// orthonormal basis, with metric-weighted evaluations so that |B_k(x, y)|
/// is the pointwise norm. Holds a reference: the basis must outlive it.
class KernelEvaluator {
public:
  explicit KernelEvaluator(const OrthonormalBasis& basis) : basis_(&basis) {}

  const OrthonormalBasis& basis() const noexcept { return *basis_; }
  std::size_t dimension() const noexcept { return basis_->size(); }

  cplx operator()(cplx x, cplx y) const;
  double diagonal(cplx x) const;

  /// Matrix B(z_a, z_b) over the atoms of mu.
  ComplexMatrix node_kernel(const DiscreteMeasure& mu) const;

private:
  const OrthonormalBasis* basis_;
};

struct KernelValue {
  cplx value;
  double modulus;
};

KernelValue cd_kernel(const KernelEvaluator& ke, cplx x, cplx y);

/// B_k(x, x) >= 0 at each point.
std::vector<double> diagonal(const KernelEvaluator& ke, std::span<const cplx> points);

/// sum_{|z_a - z_b| >= delta} w_a w_b |B_k(z_a, z_b)|^2 (not normalized).
double offdiag_integral(const KernelEvaluator& ke, const DiscreteMeasure& mu, double delta);

/// Mass of (1/n_k)|B_k|^2 mu x mu on {|x - y| >= delta}.
double offdiag_mass(const KernelEvaluator& ke, const DiscreteMeasure& mu, double delta);

/// Total mass of (1/n_k)|B_k|^2 mu x mu; equals 1 for the basis measure.
double total_mass(const KernelEvaluator& ke, const DiscreteMeasure& mu);

/// sum_j w_j B_k(z_j, z_j), equals n_k for the basis measure.
double diagonal_integral(const KernelEvaluator& ke, const DiscreteMeasure& mu);

struct DiagonalMeasure {
  std::vector<cplx> nodes;
  std::vector<double> masses; // w_j B_k(z_j, z_j) / n_k
};

DiagonalMeasure diag_measure(const KernelEvaluator& ke, const DiscreteMeasure& mu);

struct LubinskyResult {
  double lhs; // sum_j w1_j |B_{k,1}(x, z_j) - B_{k,2}(x, z_j)|^2
  double rhs; // B_{k,1}(x, x) - B_{k,2}(x, x)
};

/// Kernel comparison for nodewise-ordered measures mu1 <= mu2. Throws
/// DominationViolated if mu1 is not dominated by mu2.
LubinskyResult lubinsky_check(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                              const MetricWeight& phi, std::size_t k, cplx x);

struct TruncationError {
  double kernel_l2_diff; // integral of |B_{k,i} - B_k|^2 over mu_i x mu_i
  double diag_gap;       // integral of B_{k,i}(x,x) - B_k(x,x) over mu_i
};

TruncationError truncation_error(const DiscreteMeasure& mu, const BumpProfile& bump,
                                 const MetricWeight& phi, std::size_t k);

/// Probe points on `rings` concentric circles of radius radius*r/rings,
/// r = 1..rings, each sampled at `angles` equally spaced angles.
struct ProbeGrid {
  double radius = 0.2;
  std::size_t rings = 8;
  std::size_t angles = 16;

  std::vector<cplx> points(cplx center) const;
};

struct ForbiddenRow {
  std::size_t k;
  std::size_t order;          // ceil(eps k)
  double sup_partial;         // max of B_k^{eps}(x, x) over the probe grid
  double sup_full;            // max of B_k(x, x) over the same grid
  double partial_trace;       // integral of B_k^{eps}(x, x) d mu
  std::optional<double> slope_so_far;
};

struct ForbiddenScan {
  std::vector<ForbiddenRow> rows;
  std::optional<double> slope; // least-squares slope of log sup_partial vs k
};

/// Minimum number of k values before a decay slope is reported.
inline constexpr std::size_t kMinSlopePoints = 4;

ForbiddenScan forbidden_scan(const DiscreteMeasure& mu, const MetricWeight& phi, cplx y0, double eps,
                             std::span<const std::size_t> k_list, const ProbeGrid& grid);

/// Ordinary least-squares slope; nullopt for fewer than two points.
std::optional<double> least_squares_slope(std::span<const double> x, std::span<const double> y);

struct PeakSection {
  std::vector<cplx> coefficients; // in the orthonormal basis
  double peak_value;              // |s_{k,x}(x)| = sqrt(B_k(x, x))
};

/// Unit section maximizing the pointwise value at x. Throws BaseLocus when
/// B_k(x, x) <= 1e-14.
PeakSection peak_section(const KernelEvaluator& ke, cplx x);

/// Weighted value at y of the section sum_i c_i p_i.
cplx section_value(const KernelEvaluator& ke, std::span<const cplx> coefficients, cplx y);

struct NevaiMeasure {
  cplx anchor;
  std::vector<cplx> nodes;
  std::vector<double> masses;

  double total() const;
  /// Mass carried by atoms with |y - anchor| > r.
  double mass_outside(double r) const;
};

struct NevaiResult {
  NevaiMeasure mu_x; // |B_k(x, y)|^2 d mu(y) / B_k(x, x)
  NevaiMeasure nu_x; // (B_k(x, x) / n_k) mu_x
  double vol_nu;
};

NevaiResult nevai_measure(const KernelEvaluator& ke, const DiscreteMeasure& mu, cplx x);

/// Threshold under which a kernel diagonal counts as zero.
inline constexpr double kBaseLocusTolerance = 1e-14;

} // namespace cdlab
