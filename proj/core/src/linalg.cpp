#include "cdlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include <fmt/format.h>

#include "cdlab/errors.hpp"

namespace cdlab {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw InvalidArgument(fmt::format("ComplexMatrix: {} entries for a {}x{} matrix",
                                      data_.size(), rows_, cols_));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidArgument("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

std::vector<cplx> ComplexMatrix::column(std::size_t j) const {
  std::vector<cplx> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::trace_real() const { return trace().real(); }

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw InvalidArgument("shape mismatch in +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw InvalidArgument("shape mismatch in -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw InvalidArgument(fmt::format("matrix product: {}x{} times {}x{}", a.rows(), a.cols(),
                                      b.rows(), b.cols()));
  }
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const cplx ail = a(i, l);
      if (ail == cplx{}) continue;
      auto bl = b.row(l);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += ail * bl[j];
    }
  }
  return c;
}

ComplexMatrix adjoint_times(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw InvalidArgument("adjoint_times: row mismatch");
  ComplexMatrix c(a.cols(), b.cols());
  for (std::size_t l = 0; l < a.rows(); ++l) {
    auto al = a.row(l);
    auto bl = b.row(l);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const cplx ai = std::conj(al[i]);
      auto ci = c.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += ai * bl[j];
    }
  }
  return c;
}

double hermitian_defect(const ComplexMatrix& a) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - std::conj(a(j, i))));
  return d;
}

HermitianOperator::HermitianOperator(const ComplexMatrix& a) : matrix_(a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw InvalidArgument(fmt::format("HermitianOperator: {}x{} is not square", a.rows(), a.cols()));
  }
  if (!a.all_finite()) throw InvalidArgument("HermitianOperator: non-finite entry");
  const double defect = hermitian_defect(a);
  if (defect > 1e-10 * (1.0 + a.max_abs())) {
    throw InvalidArgument(fmt::format("HermitianOperator: Hermitian defect {:.3e}", defect));
  }
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    matrix_(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx s = 0.5 * (a(i, j) + std::conj(a(j, i)));
      matrix_(i, j) = s;
      matrix_(j, i) = std::conj(s);
    }
  }
}

QrResult qr(const ComplexMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n) throw InvalidArgument(fmt::format("qr: needs rows >= cols, got {}x{}", m, n));

  ComplexMatrix work = a;
  std::vector<std::vector<cplx>> reflectors(n);

  for (std::size_t j = 0; j < n; ++j) {
    // fresh column norm every step
    double norm_sq = 0.0;
    for (std::size_t i = j; i < m; ++i) norm_sq += std::norm(work(i, j));
    const double norm = std::sqrt(norm_sq);
    if (norm == 0.0) continue;

    const cplx x0 = work(j, j);
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0};
    const cplx alpha = -phase * norm;

    std::vector<cplx> v(m - j);
    for (std::size_t i = j; i < m; ++i) v[i - j] = work(i, j);
    v[0] -= alpha;
    double vnorm_sq = 0.0;
    for (const auto& z : v) vnorm_sq += std::norm(z);
    if (vnorm_sq == 0.0) continue;
    const double vnorm = std::sqrt(vnorm_sq);
    for (auto& z : v) z /= vnorm;

    // apply (I - 2 v v^*) to the trailing block
    for (std::size_t c = j; c < n; ++c) {
      cplx dot = 0.0;
      for (std::size_t i = j; i < m; ++i) dot += std::conj(v[i - j]) * work(i, c);
      for (std::size_t i = j; i < m; ++i) work(i, c) -= 2.0 * v[i - j] * dot;
    }
    reflectors[j] = std::move(v);
  }

  ComplexMatrix q(m, n);
  for (std::size_t j = 0; j < n; ++j) q(j, j) = 1.0;
  for (std::size_t jj = n; jj-- > 0;) {
    const auto& v = reflectors[jj];
    if (v.empty()) continue;
    for (std::size_t c = 0; c < n; ++c) {
      cplx dot = 0.0;
      for (std::size_t i = jj; i < m; ++i) dot += std::conj(v[i - jj]) * q(i, c);
      for (std::size_t i = jj; i < m; ++i) q(i, c) -= 2.0 * v[i - jj] * dot;
    }
  }

  ComplexMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) r(i, j) = work(i, j);

  // positive real diagonal of R
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag == 0.0) continue;
    const cplx ph = r(i, i) / mag;
    for (std::size_t j = i; j < n; ++j) r(i, j) *= std::conj(ph);
    for (std::size_t row = 0; row < m; ++row) q(row, i) *= ph;
    r(i, i) = mag;
  }
  return {std::move(q), std::move(r)};
}

namespace {

// Rotation J (acting on columns p, q) that annihilates the (p, q) entry of
// the 2x2 Hermitian block [[app, apq], [conj(apq), aqq]]:
//   J = [[c, s], [-s*d, c*d]], d = exp(-i arg apq).
struct Rotation {
  double c;
  double s;
  cplx d;
};

Rotation jacobi_rotation(double app, double aqq, cplx apq) {
  const double mag = std::abs(apq);
  const double zeta = (aqq - app) / (2.0 * mag);
  const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, t * c, std::conj(apq) / mag};
}

double offdiag_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

EigenResult jacobi(const HermitianOperator& op, const JacobiOptions& opts, bool want_vectors) {
  ComplexMatrix a = op.matrix();
  const std::size_t n = a.rows();
  ComplexMatrix v = want_vectors ? ComplexMatrix::identity(n) : ComplexMatrix{};
  const double scale = a.frobenius_norm();

  int sweep = 0;
  while (scale > 0.0 && offdiag_norm(a) > opts.tolerance * scale) {
    if (sweep++ >= opts.max_sweeps) {
      throw NoConvergence(fmt::format("hermitian_eig: no convergence after {} sweeps (dim {})",
                                      opts.max_sweeps, n));
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        if (std::abs(apq) <= std::numeric_limits<double>::min()) continue;
        const auto [c, s, d] = jacobi_rotation(a(p, p).real(), a(q, q).real(), apq);

        for (std::size_t r = 0; r < n; ++r) {
          const cplx arp = a(r, p);
          const cplx arq = a(r, q);
          a(r, p) = c * arp - s * d * arq;
          a(r, q) = s * arp + c * d * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const cplx apr = a(p, r);
          const cplx aqr = a(q, r);
          a(p, r) = c * apr - s * std::conj(d) * aqr;
          a(q, r) = s * apr + c * std::conj(d) * aqr;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        if (want_vectors) {
          for (std::size_t r = 0; r < n; ++r) {
            const cplx vrp = v(r, p);
            const cplx vrq = v(r, q);
            v(r, p) = c * vrp - s * d * vrq;
            v(r, q) = s * vrp + c * d * vrq;
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenResult out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = a(order[i], order[i]).real();
  if (want_vectors) {
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t i = 0; i < n; ++i) out.vectors(r, i) = v(r, order[i]);
  }
  return out;
}

} // namespace

EigenResult hermitian_eig(const HermitianOperator& a, const JacobiOptions& opts) {
  return jacobi(a, opts, true);
}

std::vector<double> hermitian_eigenvalues(const HermitianOperator& a, const JacobiOptions& opts) {
  return jacobi(a, opts, false).values;
}

std::vector<double> singular_values(const ComplexMatrix& input, const JacobiOptions& opts) {
  // One-sided (Hestenes) Jacobi: rotate column pairs until mutually
  // orthogonal; the column norms are then the singular values.
  ComplexMatrix a = input.rows() >= input.cols() ? input : input.adjoint();
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const double ortho_tol = std::sqrt(static_cast<double>(m)) * std::numeric_limits<double>::epsilon();

  std::vector<double> norms_sq(n);
  auto column_norm_sq = [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::norm(a(i, j));
    return s;
  };
  for (std::size_t j = 0; j < n; ++j) norms_sq[j] = column_norm_sq(j);

  bool rotated = true;
  int sweep = 0;
  while (rotated) {
    if (sweep++ >= opts.max_sweeps) {
      throw NoConvergence(fmt::format("singular_values: no convergence after {} sweeps ({}x{})",
                                      opts.max_sweeps, input.rows(), input.cols()));
    }
    rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = norms_sq[p];
        const double beta = norms_sq[q];
        if (alpha == 0.0 || beta == 0.0) continue;
        cplx gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) gamma += std::conj(a(i, p)) * a(i, q);
        if (std::abs(gamma) <= ortho_tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const auto [c, s, d] = jacobi_rotation(alpha, beta, gamma);
        for (std::size_t i = 0; i < m; ++i) {
          const cplx aip = a(i, p);
          const cplx aiq = a(i, q);
          a(i, p) = c * aip - s * d * aiq;
          a(i, q) = s * aip + c * d * aiq;
        }
        norms_sq[p] = column_norm_sq(p);
        norms_sq[q] = column_norm_sq(q);
      }
    }
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(norms_sq[j]);
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

std::size_t numerical_rank(std::span<const double> sigma, double rel, double abs_floor) {
  if (sigma.empty()) return 0;
  const double smax = *std::max_element(sigma.begin(), sigma.end());
  const double cut = std::max(rel * smax, abs_floor);
  return static_cast<std::size_t>(
      std::count_if(sigma.begin(), sigma.end(), [cut](double s) { return s > cut; }));
}

} // namespace cdlab
