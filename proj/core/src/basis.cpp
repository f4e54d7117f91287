#include "cdlab/basis.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "cdlab/errors.hpp"

namespace cdlab {

namespace {

double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

cplx ipow(cplx z, std::size_t e) {
  cplx r = 1.0;
  while (e) {
    if (e & 1u) r *= z;
    z *= z;
    e >>= 1u;
  }
  return r;
}

} // namespace

OrthonormalBasis build_basis(const DiscreteMeasure& mu, const MetricWeight& phi, std::size_t k,
                             std::optional<VanishingOrder> vanishing) {
  const std::size_t m = vanishing ? vanishing->order : 0;
  const cplx y0 = vanishing ? vanishing->center : cplx{};
  const std::size_t n = k - m;
  const std::size_t nodes = mu.size();

  std::size_t usable = nodes;
  if (m > 0) {
    usable = 0;
    for (const auto& z : mu.nodes()) usable += std::abs(z - y0) >= kNodeMergeTolerance;
  }
  if (usable < n) {
    throw RankDeficient(fmt::format("{} usable atoms cannot carry {} orthonormal polynomials",
                                    usable, n));
  }

  OrthonormalBasis b(mu, phi);
  b.degree_ = k;
  b.vanishing_ = vanishing;

  // sqrt of the inner-product weights w_j e^{-2 k phi(z_j)}
  const double kd = static_cast<double>(k);
  std::vector<double> metric(nodes, 1.0);
  std::vector<double> root_w(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    if (!phi.is_zero()) metric[j] = std::exp(-kd * phi(mu.node(j)));
    if (!std::isfinite(metric[j])) {
      throw InvalidArgument(fmt::format("metric weight not finite at node {}", j));
    }
    root_w[j] = std::sqrt(mu.weight(j));
  }

  std::vector<std::vector<cplx>> q(n, std::vector<cplx>(nodes));
  for (std::size_t j = 0; j < nodes; ++j) {
    q[0][j] = root_w[j] * metric[j] * (m ? ipow(mu.node(j) - y0, m) : cplx{1.0});
  }
  const double start_norm = norm2(q[0]);
  if (!(start_norm > 0.0) || !std::isfinite(start_norm)) {
    throw RankDeficient("starting vector vanishes on the support");
  }
  for (auto& z : q[0]) z /= start_norm;
  b.start_scale_ = 1.0 / start_norm;

  b.hessenberg_ = ComplexMatrix(n, n > 0 ? n - 1 : 0);
  for (std::size_t col = 1; col < n; ++col) {
    auto& v = q[col];
    for (std::size_t j = 0; j < nodes; ++j) v[j] = mu.node(j) * q[col - 1][j];
    const double initial = norm2(v);

    // classical Gram-Schmidt, twice
    std::vector<cplx> h(col);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < col; ++i) {
        h[i] = 0.0;
        for (std::size_t j = 0; j < nodes; ++j) h[i] += std::conj(q[i][j]) * v[j];
        b.hessenberg_(i, col - 1) += h[i];
      }
      for (std::size_t i = 0; i < col; ++i)
        for (std::size_t j = 0; j < nodes; ++j) v[j] -= h[i] * q[i][j];
    }

    const double beta = norm2(v);
    if (!(beta > kRankTolerance * initial)) {
      throw RankDeficient(fmt::format(
          "orthogonalization pivot {} collapsed to {:.3e} relative (k = {}, {} atoms)", col,
          initial > 0.0 ? beta / initial : 0.0, k, nodes));
    }
    b.hessenberg_(col, col - 1) = beta;
    for (auto& z : v) z /= beta;
  }

  b.values_ = ComplexMatrix(nodes, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < nodes; ++j) b.values_(j, i) = q[i][j] / root_w[j];
  return b;
}

ComplexMatrix OrthonormalBasis::evaluate(std::span<const cplx> points) const {
  const std::size_t n = size();
  const std::size_t m = vanishing_ ? vanishing_->order : 0;
  const cplx y0 = vanishing_ ? vanishing_->center : cplx{};
  const double kd = static_cast<double>(degree_);

  ComplexMatrix out(points.size(), n);
  for (std::size_t r = 0; r < points.size(); ++r) {
    const cplx x = points[r];
    auto row = out.row(r);
    // atoms take the orthogonalized values; the recurrence loses accuracy off the support
    if (const std::size_t at = measure_.find(x); at < measure_.size()) {
      const auto stored = values_.row(at);
      std::copy(stored.begin(), stored.end(), row.begin());
      continue;
    }
    const double metric = weight_.is_zero() ? 1.0 : std::exp(-kd * weight_(x));
    row[0] = start_scale_ * metric * (m ? ipow(x - y0, m) : cplx{1.0});
    for (std::size_t j = 1; j < n; ++j) {
      cplx acc = x * row[j - 1];
      for (std::size_t i = 0; i < j; ++i) acc -= hessenberg_(i, j - 1) * row[i];
      row[j] = acc / hessenberg_(j, j - 1);
    }
  }
  return out;
}

std::vector<cplx> OrthonormalBasis::evaluate(cplx point) const {
  const auto m = evaluate(std::span<const cplx>(&point, 1));
  return {m.row(0).begin(), m.row(0).end()};
}

ComplexMatrix OrthonormalBasis::values_on(const DiscreteMeasure& mu) const {
  if (mu.size() == measure_.size() &&
      std::equal(mu.nodes().begin(), mu.nodes().end(), measure_.nodes().begin())) {
    return values_;
  }
  return evaluate(mu.nodes());
}

std::vector<std::vector<cplx>> OrthonormalBasis::monomial_coefficients() const {
  const std::size_t n = size();
  const std::size_t m = vanishing_ ? vanishing_->order : 0;
  const cplx y0 = vanishing_ ? vanishing_->center : cplx{};
  const std::size_t len = m + n;

  std::vector<std::vector<cplx>> p(n, std::vector<cplx>(len));
  // (z - y0)^m by repeated multiplication
  std::vector<cplx> base(len);
  base[0] = 1.0;
  for (std::size_t e = 0; e < m; ++e) {
    for (std::size_t a = e + 2; a-- > 0;) {
      const cplx lower = a > 0 ? base[a - 1] : cplx{};
      base[a] = lower - y0 * base[a];
    }
  }
  for (std::size_t a = 0; a < len; ++a) p[0][a] = start_scale_ * base[a];

  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t a = 1; a < len; ++a) p[j][a] = p[j - 1][a - 1];
    for (std::size_t i = 0; i < j; ++i)
      for (std::size_t a = 0; a < len; ++a) p[j][a] -= hessenberg_(i, j - 1) * p[i][a];
    for (auto& c : p[j]) c /= hessenberg_(j, j - 1);
  }
  return p;
}

ComplexMatrix OrthonormalBasis::gram() const {
  ComplexMatrix wv = values_;
  for (std::size_t j = 0; j < wv.rows(); ++j) {
    const double s = std::sqrt(measure_.weight(j));
    for (auto& z : wv.row(j)) z *= s;
  }
  // (W^1/2 V)^* (W^1/2 V) is the conjugate (= transpose) of G
  ComplexMatrix g = adjoint_times(wv, wv);
  ComplexMatrix out(g.rows(), g.cols());
  for (std::size_t a = 0; a < g.rows(); ++a)
    for (std::size_t c = 0; c < g.cols(); ++c) out(a, c) = g(c, a);
  return out;
}

OrthonormalBasis orthonormal_basis(const DiscreteMeasure& mu, const MetricWeight& phi, std::size_t k) {
  if (k == 0) throw InvalidArgument("orthonormal_basis: k must be positive");
  return build_basis(mu, phi, k, std::nullopt);
}

OrthonormalBasis vanishing_basis(const DiscreteMeasure& mu, const MetricWeight& phi, std::size_t k,
                                 cplx y0, std::size_t m) {
  if (m >= k) {
    throw InvalidArgument(fmt::format("vanishing_basis: order {} leaves no sections of degree < {}",
                                      m, k));
  }
  return build_basis(mu, phi, k, VanishingOrder{y0, m});
}

std::size_t vanishing_order(double eps, std::size_t k) {
  const double x = eps * static_cast<double>(k);
  return static_cast<std::size_t>(std::ceil(x - 1e-9 * (1.0 + std::abs(x))));
}

} // namespace cdlab
