#pragma once

// Shared test helpers: seeded generators and brute-force oracles that do not
// go through the Arnoldi/recurrence code paths they are used to check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cdlab/linalg.hpp"
#include "cdlab/measure.hpp"
#include "cdlab/random.hpp"

namespace cdlab::test {

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, CounterRng& rng) {
  ComplexMatrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return a;
}

inline ComplexMatrix random_hermitian(std::size_t n, CounterRng& rng) {
  const ComplexMatrix a = random_matrix(n, n, rng);
  ComplexMatrix h = a + a.adjoint();
  for (std::size_t i = 0; i < n; ++i) h(i, i) = h(i, i).real();
  return h;
}

/// m atoms scattered in the disk |z| < radius with weights in [0.1, 1].
inline DiscreteMeasure random_measure(std::size_t m, CounterRng& rng, double radius = 1.0) {
  std::vector<cplx> nodes;
  std::vector<double> weights;
  for (std::size_t j = 0; j < m; ++j) {
    const double r = radius * std::sqrt(rng.uniform());
    const double t = 2.0 * std::numbers::pi * rng.uniform();
    nodes.push_back(std::polar(r, t));
    weights.push_back(rng.uniform(0.1, 1.0));
  }
  return DiscreteMeasure(std::move(nodes), std::move(weights));
}

/// Measures the acceptance and property suites sweep over.
inline std::vector<DiscreteMeasure> family() {
  std::vector<DiscreteMeasure> out;
  out.push_back(gen_circle(8));
  out.push_back(gen_circle(32));
  out.push_back(gen_circle(256));
  out.push_back(gen_interval(64, IntervalRule::chebyshev));
  out.push_back(gen_interval(256, IntervalRule::chebyshev));
  out.push_back(gen_interval(128, IntervalRule::uniform));
  const cplx atoms[] = {{2.0, 0.0}, {0.0, 1.5}};
  const double w[] = {0.25, 0.1};
  out.push_back(add_atoms(gen_circle(64), atoms, w));
  return out;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

/// Orthonormal family for degree < k obtained from the weighted monomial
/// Gram matrix G_ab = sum_j w_j e^{-2k phi} z_j^a conj(z_j^b) by Cholesky.
/// Returns sqrt(w)-scaled node values (orthonormal columns in C^nodes).
inline ComplexMatrix monomial_cholesky_basis(const DiscreteMeasure& mu, const MetricWeight& phi,
                                             std::size_t k) {
  const std::size_t m = mu.size();
  ComplexMatrix mono(m, k);
  for (std::size_t j = 0; j < m; ++j) {
    const double s = std::sqrt(mu.weight(j)) * std::exp(-static_cast<double>(k) * phi(mu.node(j)));
    cplx p = s;
    for (std::size_t a = 0; a < k; ++a) {
      mono(j, a) = p;
      p *= mu.node(j);
    }
  }
  // G = mono^* mono (column-space Gram), lower Cholesky G = L L^*
  ComplexMatrix g = adjoint_times(mono, mono);
  ComplexMatrix l(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      cplx s = g(i, j);
      for (std::size_t c = 0; c < j; ++c) s -= l(i, c) * std::conj(l(j, c));
      if (i == j) {
        if (!(s.real() > 0.0)) throw std::runtime_error("oracle Gram matrix not positive definite");
        l(i, i) = std::sqrt(s.real());
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  // Q = mono L^{-*}: solve X L^* = mono row by row (L^* upper triangular)
  ComplexMatrix q(m, k);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < k; ++j) {
      cplx s = mono(r, j);
      for (std::size_t c = 0; c < j; ++c) s -= q(r, c) * std::conj(l(j, c));
      q(r, j) = s / l(j, j);
    }
  }
  return q;
}

/// ||B - A A^* B||_F for A with orthonormal columns.
inline double projection_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (b - a * adjoint_times(a, b)).frobenius_norm();
}

/// Roots of det(T - x I) for the k x k tridiagonal matrix with zero diagonal
/// and 1/2 off the diagonal, by bisection of the three-term determinant
/// recurrence on a fine grid of [-1, 1].
inline std::vector<double> tridiagonal_charpoly_roots(std::size_t k) {
  auto det = [k](double x) {
    double d_prev = 1.0;
    double d = -x;
    for (std::size_t i = 1; i < k; ++i) {
      const double next = -x * d - 0.25 * d_prev;
      d_prev = d;
      d = next;
    }
    return d;
  };
  std::vector<double> roots;
  const int grid = 20000;
  for (int i = 0; i < grid; ++i) {
    double lo = -1.0 + 2.0 * i / grid;
    double hi = -1.0 + 2.0 * (i + 1) / grid;
    double flo = det(lo);
    if (flo == 0.0) {
      roots.push_back(lo);
      continue;
    }
    if (flo * det(hi) > 0.0) continue;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (det(mid) * flo > 0.0) {
        lo = mid;
        flo = det(mid);
      } else {
        hi = mid;
      }
    }
    roots.push_back(0.5 * (lo + hi));
  }
  return roots;
}

/// Gram-Schmidt on monomial coefficient vectors against a moment functional
/// <x^a, x^b> = moments[a + b] (real measures). Returns coefficient rows.
inline std::vector<std::vector<double>> moment_gram_schmidt(const std::vector<double>& moments,
                                                            std::size_t k) {
  auto inner = [&](const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a)
      for (std::size_t b = 0; b < q.size(); ++b) s += p[a] * q[b] * moments[a + b];
    return s;
  };
  std::vector<std::vector<double>> basis;
  for (std::size_t d = 0; d < k; ++d) {
    std::vector<double> p(k, 0.0);
    p[d] = 1.0;
    for (const auto& q : basis) {
      const double c = inner(p, q);
      for (std::size_t a = 0; a < k; ++a) p[a] -= c * q[a];
    }
    const double nrm = std::sqrt(inner(p, p));
    for (auto& c : p) c /= nrm;
    basis.push_back(p);
  }
  return basis;
}

} // namespace cdlab::test
