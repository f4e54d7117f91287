#include "cdlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "cdlab/errors.hpp"

namespace cdlab {

namespace {

double row_norm_sq(std::span<const cplx> row) {
  double s = 0.0;
  for (const auto& z : row) s += std::norm(z);
  return s;
}

cplx row_dot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

} // namespace

cplx KernelEvaluator::operator()(cplx x, cplx y) const {
  const cplx pts[2] = {x, y};
  const auto v = basis_->evaluate(pts);
  return row_dot(v.row(0), v.row(1));
}

double KernelEvaluator::diagonal(cplx x) const {
  const auto v = basis_->evaluate(std::span<const cplx>(&x, 1));
  return row_norm_sq(v.row(0));
}

ComplexMatrix KernelEvaluator::node_kernel(const DiscreteMeasure& mu) const {
  const ComplexMatrix v = basis_->values_on(mu);
  const std::size_t m = v.rows();
  ComplexMatrix b(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    b(a, a) = row_norm_sq(v.row(a));
    for (std::size_t c = a + 1; c < m; ++c) {
      const cplx z = row_dot(v.row(a), v.row(c));
      b(a, c) = z;
      b(c, a) = std::conj(z);
    }
  }
  return b;
}

KernelValue cd_kernel(const KernelEvaluator& ke, cplx x, cplx y) {
  const cplx v = ke(x, y);
  return {v, std::abs(v)};
}

std::vector<double> diagonal(const KernelEvaluator& ke, std::span<const cplx> points) {
  const auto v = ke.basis().evaluate(points);
  std::vector<double> out(points.size());
  for (std::size_t r = 0; r < points.size(); ++r) out[r] = row_norm_sq(v.row(r));
  return out;
}

double offdiag_integral(const KernelEvaluator& ke, const DiscreteMeasure& mu, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("offdiag: delta must be positive");
  const ComplexMatrix v = ke.basis().values_on(mu);
  double s = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    for (std::size_t c = a + 1; c < mu.size(); ++c) {
      if (std::abs(mu.node(a) - mu.node(c)) < delta) continue;
      s += 2.0 * mu.weight(a) * mu.weight(c) * std::norm(row_dot(v.row(a), v.row(c)));
    }
  }
  return s;
}

double offdiag_mass(const KernelEvaluator& ke, const DiscreteMeasure& mu, double delta) {
  return offdiag_integral(ke, mu, delta) / static_cast<double>(ke.dimension());
}

double total_mass(const KernelEvaluator& ke, const DiscreteMeasure& mu) {
  const ComplexMatrix v = ke.basis().values_on(mu);
  double s = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    const double wa = mu.weight(a);
    s += wa * wa * std::pow(row_norm_sq(v.row(a)), 2);
    for (std::size_t c = a + 1; c < mu.size(); ++c)
      s += 2.0 * wa * mu.weight(c) * std::norm(row_dot(v.row(a), v.row(c)));
  }
  return s / static_cast<double>(ke.dimension());
}

double diagonal_integral(const KernelEvaluator& ke, const DiscreteMeasure& mu) {
  const ComplexMatrix v = ke.basis().values_on(mu);
  double s = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a) s += mu.weight(a) * row_norm_sq(v.row(a));
  return s;
}

DiagonalMeasure diag_measure(const KernelEvaluator& ke, const DiscreteMeasure& mu) {
  const ComplexMatrix v = ke.basis().values_on(mu);
  const double n = static_cast<double>(ke.dimension());
  DiagonalMeasure out{{mu.nodes().begin(), mu.nodes().end()}, std::vector<double>(mu.size())};
  for (std::size_t a = 0; a < mu.size(); ++a) out.masses[a] = mu.weight(a) * row_norm_sq(v.row(a)) / n;
  return out;
}

LubinskyResult lubinsky_check(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                              const MetricWeight& phi, std::size_t k, cplx x) {
  if (!is_dominated(mu1, mu2)) throw DominationViolated("lubinsky_check: mu1 is not dominated by mu2");
  const auto b1 = orthonormal_basis(mu1, phi, k);
  const auto b2 = orthonormal_basis(mu2, phi, k);

  const auto v1 = b1.evaluate(x);
  const auto v2 = b2.evaluate(x);
  const ComplexMatrix n1 = b1.node_values();
  const ComplexMatrix n2 = b2.evaluate(mu1.nodes());

  double lhs = 0.0;
  for (std::size_t j = 0; j < mu1.size(); ++j) {
    const cplx d = row_dot(v1, n1.row(j)) - row_dot(v2, n2.row(j));
    lhs += mu1.weight(j) * std::norm(d);
  }
  return {lhs, row_norm_sq(v1) - row_norm_sq(v2)};
}

TruncationError truncation_error(const DiscreteMeasure& mu, const BumpProfile& bump,
                                 const MetricWeight& phi, std::size_t k) {
  const DiscreteMeasure mu_i = truncate(mu, bump);
  const auto full = orthonormal_basis(mu, phi, k);
  const auto trunc = orthonormal_basis(mu_i, phi, k);

  const ComplexMatrix vi = trunc.node_values();
  const ComplexMatrix vf = full.evaluate(mu_i.nodes());

  TruncationError out{0.0, 0.0};
  for (std::size_t a = 0; a < mu_i.size(); ++a) {
    const double wa = mu_i.weight(a);
    out.diag_gap += wa * (row_norm_sq(vi.row(a)) - row_norm_sq(vf.row(a)));
    out.kernel_l2_diff += wa * wa * std::pow(row_norm_sq(vi.row(a)) - row_norm_sq(vf.row(a)), 2);
    for (std::size_t c = a + 1; c < mu_i.size(); ++c) {
      const cplx d = row_dot(vi.row(a), vi.row(c)) - row_dot(vf.row(a), vf.row(c));
      out.kernel_l2_diff += 2.0 * wa * mu_i.weight(c) * std::norm(d);
    }
  }
  return out;
}

std::vector<cplx> ProbeGrid::points(cplx center) const {
  std::vector<cplx> pts;
  pts.reserve(rings * angles);
  for (std::size_t r = 1; r <= rings; ++r) {
    const double rad = radius * static_cast<double>(r) / static_cast<double>(rings);
    for (std::size_t a = 0; a < angles; ++a) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(angles);
      pts.push_back(center + std::polar(rad, t));
    }
  }
  return pts;
}

std::optional<double> least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

ForbiddenScan forbidden_scan(const DiscreteMeasure& mu, const MetricWeight& phi, cplx y0, double eps,
                             std::span<const std::size_t> k_list, const ProbeGrid& grid) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("forbidden_scan: eps must lie in (0, 1)");
  if (grid.rings == 0 || grid.angles == 0 || !(grid.radius > 0.0)) {
    throw InvalidArgument("forbidden_scan: empty probe grid");
  }
  const auto probes = grid.points(y0);

  ForbiddenScan scan;
  std::vector<double> ks;
  std::vector<double> logs;
  for (const std::size_t k : k_list) {
    const std::size_t order = vanishing_order(eps, k);
    if (order >= k) {
      throw InvalidArgument(fmt::format("forbidden_scan: ceil({} * {}) = {} leaves no sections", eps,
                                        k, order));
    }
    const auto partial = vanishing_basis(mu, phi, k, y0, order);
    const auto full = orthonormal_basis(mu, phi, k);
    const KernelEvaluator kp(partial);
    const KernelEvaluator kf(full);

    const auto dp = diagonal(kp, probes);
    const auto df = diagonal(kf, probes);

    ForbiddenRow row{k, order, *std::max_element(dp.begin(), dp.end()),
                     *std::max_element(df.begin(), df.end()), diagonal_integral(kp, mu), std::nullopt};
    ks.push_back(static_cast<double>(k));
    logs.push_back(std::log(row.sup_partial));
    if (ks.size() >= kMinSlopePoints) row.slope_so_far = least_squares_slope(ks, logs);
    scan.rows.push_back(row);
  }
  if (ks.size() >= kMinSlopePoints) scan.slope = least_squares_slope(ks, logs);
  return scan;
}

PeakSection peak_section(const KernelEvaluator& ke, cplx x) {
  const auto v = ke.basis().evaluate(x);
  const double bxx = row_norm_sq(v);
  if (!(bxx > kBaseLocusTolerance)) {
    throw BaseLocus(fmt::format("B_k(x, x) = {:.3e} at x = ({}, {})", bxx, x.real(), x.imag()));
  }
  const double root = std::sqrt(bxx);
  PeakSection out{std::vector<cplx>(v.size()), root};
  for (std::size_t i = 0; i < v.size(); ++i) out.coefficients[i] = std::conj(v[i]) / root;
  return out;
}

cplx section_value(const KernelEvaluator& ke, std::span<const cplx> coefficients, cplx y) {
  const auto v = ke.basis().evaluate(y);
  if (coefficients.size() != v.size()) throw InvalidArgument("section_value: coefficient count");
  cplx s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += coefficients[i] * v[i];
  return s;
}

double NevaiMeasure::total() const {
  double s = 0.0;
  for (double m : masses) s += m;
  return s;
}

double NevaiMeasure::mass_outside(double r) const {
  double s = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j)
    if (std::abs(nodes[j] - anchor) > r) s += masses[j];
  return s;
}

NevaiResult nevai_measure(const KernelEvaluator& ke, const DiscreteMeasure& mu, cplx x) {
  const auto vx = ke.basis().evaluate(x);
  const double bxx = row_norm_sq(vx);
  if (!(bxx > kBaseLocusTolerance)) {
    throw BaseLocus(fmt::format("B_k(x, x) = {:.3e} at the Nevai anchor", bxx));
  }
  const ComplexMatrix v = ke.basis().values_on(mu);
  const double n = static_cast<double>(ke.dimension());

  NevaiResult out;
  out.mu_x.anchor = out.nu_x.anchor = x;
  out.mu_x.nodes.assign(mu.nodes().begin(), mu.nodes().end());
  out.nu_x.nodes = out.mu_x.nodes;
  out.mu_x.masses.resize(mu.size());
  out.nu_x.masses.resize(mu.size());
  for (std::size_t j = 0; j < mu.size(); ++j) {
    out.mu_x.masses[j] = mu.weight(j) * std::norm(row_dot(vx, v.row(j))) / bxx;
    out.nu_x.masses[j] = out.mu_x.masses[j] * bxx / n;
  }
  out.vol_nu = out.nu_x.total();
  return out;
}

} // namespace cdlab
