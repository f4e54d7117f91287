#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace cdlab {

using cplx = std::complex<double>;

/// Nodes closer than this are treated as the same atom.
inline constexpr double kNodeMergeTolerance = 1e-12;

/// Finite atomic measure on the complex plane: positive weights at distinct
/// nodes. Construction merges coincident nodes and validates everything, so a
/// DiscreteMeasure is always well formed.
class DiscreteMeasure {
public:
  /// Throws EmptyMeasure, NonpositiveWeight, NonfiniteNode or InvalidArgument
  /// (length mismatch).
  DiscreteMeasure(std::vector<cplx> nodes, std::vector<double> weights);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const cplx> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  const cplx& node(std::size_t j) const { return nodes_[j]; }
  double weight(std::size_t j) const { return weights_[j]; }

  double total_mass() const;
  double diameter() const;

  /// Index of a node within kNodeMergeTolerance of z, or size() when absent.
  std::size_t find(cplx z) const;

  /// Same nodes, weights multiplied by c > 0.
  DiscreteMeasure scaled(double c) const;

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

private:
  std::vector<cplx> nodes_;
  std::vector<double> weights_;
};

/// Log-scale metric weight phi: a section's pointwise norm is |s(z)| e^{-k phi(z)}.
class MetricWeight {
public:
  using Evaluator = std::function<double(cplx)>;

  MetricWeight(Evaluator phi, std::string description);

  /// phi = 0, the flat metric.
  static MetricWeight zero();
  /// phi(z) = c |z|^2.
  static MetricWeight gaussian(double c);
  /// Piecewise-constant weight from samples: phi(z) is the value of the
  /// nearest sample point.
  static MetricWeight samples(std::vector<cplx> points, std::vector<double> values);

  double operator()(cplx z) const { return phi_(z); }
  const std::string& description() const noexcept { return description_; }
  bool is_zero() const noexcept { return is_zero_; }

private:
  Evaluator phi_;
  std::string description_;
  bool is_zero_ = false;
};

/// Radial cut-off: 0 inside r_in, 1 outside r_out, linear in |z - center| between.
class BumpProfile {
public:
  BumpProfile(cplx center, double r_in, double r_out);

  double operator()(cplx z) const;

  cplx center() const noexcept { return center_; }
  double r_in() const noexcept { return r_in_; }
  double r_out() const noexcept { return r_out_; }

private:
  cplx center_;
  double r_in_;
  double r_out_;
};

DiscreteMeasure make_measure(std::vector<cplx> nodes, std::vector<double> weights);

/// m equally spaced points on the circle |z| = radius, weight 1/m each.
DiscreteMeasure gen_circle(std::size_t m, double radius = 1.0);

enum class IntervalRule { chebyshev, uniform };

/// Probability measure on [-1, 1]. Chebyshev: nodes cos((2j+1)pi/2m), a
/// discretization of dx / (pi sqrt(1 - x^2)). Uniform: midpoints of m equal cells.
DiscreteMeasure gen_interval(std::size_t m, IntervalRule rule);

/// Sum of two measures; coincident nodes have their weights added.
DiscreteMeasure add_atoms(const DiscreteMeasure& base, const DiscreteMeasure& atoms);
/// Adding an empty list of atoms returns base unchanged.
DiscreteMeasure add_atoms(const DiscreteMeasure& base, std::span<const cplx> nodes,
                          std::span<const double> weights);

/// Weights multiplied by bump(z_j); atoms whose weight drops below 1e-300 are
/// removed. Throws EmptyMeasure when nothing survives.
DiscreteMeasure truncate(const DiscreteMeasure& mu, const BumpProfile& bump);

/// Nodewise domination: every atom of mu1 is an atom of mu2 carrying at least
/// as much weight (up to 1e-14).
bool is_dominated(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2);

struct MeasureFile {
  DiscreteMeasure measure;
  std::vector<double> phi; // one sample per node of `measure`
  MetricWeight weight() const;
};

/// CSV rows `re,im,weight,phi`; `#` starts a comment. Throws ParseError
/// carrying the 1-based line number, or EmptyMeasure.
MeasureFile parse_measure(const std::string& text);
MeasureFile load_measure(const std::filesystem::path& path);

/// Writes 17 significant digits so that load(save(mu)) reproduces mu exactly.
std::string format_measure(const DiscreteMeasure& mu, std::span<const double> phi = {});
void save_measure(const std::filesystem::path& path, const DiscreteMeasure& mu,
                  std::span<const double> phi = {});

} // namespace cdlab
