#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cdlab {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major storage.
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<cplx> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const cplx> entries() const noexcept { return data_; }

  std::vector<cplx> column(std::size_t j) const;

  ComplexMatrix adjoint() const;
  double frobenius_norm() const;
  double max_abs() const;
  double trace_real() const;
  cplx trace() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx s);

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);

/// A^* B without forming the adjoint.
ComplexMatrix adjoint_times(const ComplexMatrix& a, const ComplexMatrix& b);

/// Square complex matrix that is Hermitian up to rounding. The stored matrix
/// is the symmetrization (A + A^*)/2, so later consumers see an exactly
/// Hermitian array.
class HermitianOperator {
public:
  /// Throws InvalidArgument if the input is not square or its Hermitian defect
  /// exceeds 1e-10 * (1 + max|A|).
  explicit HermitianOperator(const ComplexMatrix& a);

  std::size_t dim() const noexcept { return matrix_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

private:
  ComplexMatrix matrix_;
};

double hermitian_defect(const ComplexMatrix& a);

struct QrResult {
  ComplexMatrix q; // rows x cols, orthonormal columns
  ComplexMatrix r; // cols x cols, upper triangular
};

/// Thin Householder QR. Requires rows >= cols. Rank deficiency shows up as
/// small diagonal entries of R; it is not an error here.
QrResult qr(const ComplexMatrix& a);

struct EigenResult {
  std::vector<double> values;   // ascending
  ComplexMatrix vectors;        // columns are eigenvectors, unitary
};

struct JacobiOptions {
  double tolerance = 1e-13; // off-diagonal Frobenius norm relative to ||A||_F
  int max_sweeps = 60;
};

/// Cyclic complex Jacobi. Throws NoConvergence when the sweep cap is hit.
EigenResult hermitian_eig(const HermitianOperator& a, const JacobiOptions& opts = {});

/// Eigenvalues only; same algorithm.
std::vector<double> hermitian_eigenvalues(const HermitianOperator& a,
                                          const JacobiOptions& opts = {});

/// Singular values in descending order (one-sided Jacobi on the columns).
std::vector<double> singular_values(const ComplexMatrix& a, const JacobiOptions& opts = {});

/// Number of singular values above max(rel * sigma_max, abs_floor).
std::size_t numerical_rank(std::span<const double> sigma, double rel, double abs_floor);

} // namespace cdlab
