#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cdlab/basis.hpp"
#include "cdlab/linalg.hpp"
#include "cdlab/measure.hpp"

namespace cdlab {

/// Symbol f of a Toeplitz operator. Rational symbols s1/s2 also carry the
/// denominator and their section degree k0, which the S_k construction needs.
class SymbolFunction {
public:
  using Evaluator = std::function<cplx(cplx)>;

  SymbolFunction(Evaluator f, bool real, std::string description);

  static SymbolFunction constant(double c);
  /// Re z.
  static SymbolFunction re_z();
  /// f(z) = z, i.e. s1/s2 with s1 = z sigma^2, s2 = sigma^2 and k0 = 1.
  static SymbolFunction z();
  /// Ratio of polynomials; coefficients in increasing degree.
  static SymbolFunction rational(std::vector<cplx> numerator, std::vector<cplx> denominator);

  cplx operator()(cplx z) const { return f_(z); }
  bool is_real() const noexcept { return real_; }
  const std::string& description() const noexcept { return description_; }

  /// Section degree k0 of the numerator/denominator pair, if the symbol is a ratio.
  std::optional<std::size_t> section_degree() const noexcept { return k0_; }
  /// Denominator value, 1 for symbols without one.
  cplx denominator(cplx z) const { return den_ ? den_(z) : cplx{1.0}; }

  /// Pointwise product; real if both factors are.
  friend SymbolFunction operator*(const SymbolFunction& f, const SymbolFunction& g);

private:
  Evaluator f_;
  Evaluator den_;
  bool real_ = false;
  std::string description_;
  std::optional<std::size_t> k0_;
};

/// Toeplitz matrix T_ij = sum_a w_a f(z_a) p_j(z_a) conj(p_i(z_a)) of the
/// compression of multiplication by f, in the orthonormal basis.
ComplexMatrix toeplitz(const OrthonormalBasis& basis, const DiscreteMeasure& mu, const SymbolFunction& f);
/// Same matrix for a real symbol, as a Hermitian operator. Throws
/// InvalidArgument for a complex symbol.
HermitianOperator toeplitz_hermitian(const OrthonormalBasis& basis, const DiscreteMeasure& mu,
                                     const SymbolFunction& f);

/// Normalized Schatten norm ((1/n) sum sigma_i^p)^{1/p}, p >= 1.
double schatten(const ComplexMatrix& a, double p);
double schatten(const HermitianOperator& a, double p);

/// ||T(f) T(g) - T(fg)||_p.
double algebra_defect(const OrthonormalBasis& basis, const DiscreteMeasure& mu, const SymbolFunction& f,
                      const SymbolFunction& g, double p);

struct SpectralMeasure {
  std::vector<double> eigenvalues; // ascending, each of mass 1/n
  double moment(std::size_t m) const;
};

SpectralMeasure spectral_measure(const HermitianOperator& t);

struct SzegoIdentity {
  double trace_avg;       // (1/n) Tr T(f)
  double diag_integral;   // integral of f against the diagonal CD measure
  double spectral_mean;   // first moment of the spectral measure
  double residual() const;
};

SzegoIdentity szego_identity(const OrthonormalBasis& basis, const DiscreteMeasure& mu,
                             const SymbolFunction& f);

/// |(1/n) Tr T(f)^m - integral of f^m against the diagonal CD measure|.
double moment_gap(const OrthonormalBasis& basis, const DiscreteMeasure& mu, const SymbolFunction& f,
                  std::size_t m);

struct SOperator {
  /// S applied to each basis element, in orthonormal node coordinates
  /// (rows sqrt(w_a) (S p_j)(z_a)); shape nodes x n_k.
  ComplexMatrix matrix;
  std::vector<double> singular_values;
  double hs_norm_sq;           // ||S||_HS^2
  std::size_t numerical_rank;
  std::size_t rank_bound;      // n_k - n_{k-k0}; n_k when the symbol has no k0
  double kernel_l2;            // 1/2 sum w_a w_b |B(z_a, z_b)|^2 |f(z_a) - f(z_b)|^2
  double rel_gap() const;
};

/// Relative singular-value cut for numerical_rank.
inline constexpr double kRankCut = 1e-8;

/// Operator with kernel S(x, y) = int B(x, z) (f(x) - f(z)) B(z, y) d mu(z).
/// Throws DenominatorVanishes when the symbol's denominator is below 1e-12
/// on an atom of mu.
SOperator s_operator(const OrthonormalBasis& basis, const DiscreteMeasure& mu, const SymbolFunction& f);

} // namespace cdlab
