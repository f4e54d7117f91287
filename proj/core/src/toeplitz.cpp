#include "cdlab/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "cdlab/errors.hpp"

namespace cdlab {

namespace {

cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * z + *it;
  return s;
}

std::size_t poly_degree(const std::vector<cplx>& c) {
  std::size_t d = c.size();
  while (d > 0 && c[d - 1] == cplx{}) --d;
  return d == 0 ? 0 : d - 1;
}

std::vector<cplx> symbol_values(const SymbolFunction& f, const DiscreteMeasure& mu) {
  std::vector<cplx> v(mu.size());
  for (std::size_t a = 0; a < mu.size(); ++a) {
    v[a] = f(mu.node(a));
    if (!std::isfinite(v[a].real()) || !std::isfinite(v[a].imag())) {
      throw InvalidArgument(fmt::format("symbol {} is not finite at atom {}", f.description(), a));
    }
    if (f.is_real()) v[a] = v[a].real();
  }
  return v;
}

ComplexMatrix toeplitz_from_values(const ComplexMatrix& v, const DiscreteMeasure& mu,
                                   const std::vector<cplx>& fv) {
  ComplexMatrix scaled = v;
  for (std::size_t a = 0; a < v.rows(); ++a) {
    const cplx s = mu.weight(a) * fv[a];
    for (auto& z : scaled.row(a)) z *= s;
  }
  return adjoint_times(v, scaled);
}

} // namespace

SymbolFunction::SymbolFunction(Evaluator f, bool real, std::string description)
    : f_(std::move(f)), real_(real), description_(std::move(description)) {}

SymbolFunction SymbolFunction::constant(double c) {
  SymbolFunction s([c](cplx) { return cplx{c}; }, true, fmt::format("const({})", c));
  s.k0_ = 0;
  return s;
}

SymbolFunction SymbolFunction::re_z() {
  return SymbolFunction([](cplx z) { return cplx{z.real()}; }, true, "re_z");
}

SymbolFunction SymbolFunction::z() {
  SymbolFunction s([](cplx z) { return z; }, false, "z");
  s.k0_ = 1;
  return s;
}

SymbolFunction SymbolFunction::rational(std::vector<cplx> numerator, std::vector<cplx> denominator) {
  if (numerator.empty() || denominator.empty() ||
      std::all_of(denominator.begin(), denominator.end(), [](cplx c) { return c == cplx{}; })) {
    throw InvalidArgument("rational symbol needs a nonzero denominator");
  }
  const std::size_t k0 = std::max(poly_degree(numerator), poly_degree(denominator));
  auto den = [d = denominator](cplx z) { return horner(d, z); };
  SymbolFunction s([n = std::move(numerator), d = std::move(denominator)](cplx z) {
    return horner(n, z) / horner(d, z);
  }, false, "rational");
  s.den_ = std::move(den);
  s.k0_ = k0;
  return s;
}

SymbolFunction operator*(const SymbolFunction& f, const SymbolFunction& g) {
  SymbolFunction s([f, g](cplx z) { return f(z) * g(z); }, f.real_ && g.real_,
                   f.description_ + "*" + g.description_);
  if (f.den_ || g.den_) s.den_ = [f, g](cplx z) { return f.denominator(z) * g.denominator(z); };
  if (f.k0_ && g.k0_) s.k0_ = *f.k0_ + *g.k0_;
  return s;
}

ComplexMatrix toeplitz(const OrthonormalBasis& basis, const DiscreteMeasure& mu, const SymbolFunction& f) {
  return toeplitz_from_values(basis.values_on(mu), mu, symbol_values(f, mu));
}

HermitianOperator toeplitz_hermitian(const OrthonormalBasis& basis, const DiscreteMeasure& mu,
                                     const SymbolFunction& f) {
  if (!f.is_real()) {
    throw InvalidArgument(fmt::format("symbol {} is complex; its Toeplitz matrix is not Hermitian",
                                      f.description()));
  }
  return HermitianOperator(toeplitz(basis, mu, f));
}

double schatten(const ComplexMatrix& a, double p) {
  if (!(p >= 1.0)) throw InvalidArgument(fmt::format("schatten: p = {} < 1", p));
  const auto sigma = singular_values(a);
  // normalize by the largest value before powering to avoid overflow
  const double smax = sigma.empty() ? 0.0 : sigma.front();
  if (smax == 0.0) return 0.0;
  double s = 0.0;
  for (double x : sigma) s += std::pow(x / smax, p);
  return smax * std::pow(s / static_cast<double>(a.rows()), 1.0 / p);
}

double schatten(const HermitianOperator& a, double p) { return schatten(a.matrix(), p); }

double algebra_defect(const OrthonormalBasis& basis, const DiscreteMeasure& mu, const SymbolFunction& f,
                      const SymbolFunction& g, double p) {
  const ComplexMatrix v = basis.values_on(mu);
  const auto fv = symbol_values(f, mu);
  const auto gv = symbol_values(g, mu);
  std::vector<cplx> fg(mu.size());
  for (std::size_t a = 0; a < mu.size(); ++a) fg[a] = fv[a] * gv[a];
  const ComplexMatrix defect =
      toeplitz_from_values(v, mu, fv) * toeplitz_from_values(v, mu, gv) - toeplitz_from_values(v, mu, fg);
  return schatten(defect, p);
}

double SpectralMeasure::moment(std::size_t m) const {
  double s = 0.0;
  for (double x : eigenvalues) s += std::pow(x, static_cast<double>(m));
  return eigenvalues.empty() ? 0.0 : s / static_cast<double>(eigenvalues.size());
}

SpectralMeasure spectral_measure(const HermitianOperator& t) { return {hermitian_eigenvalues(t)}; }

double SzegoIdentity::residual() const {
  const double scale = 1.0 + std::abs(trace_avg);
  return std::max(std::abs(trace_avg - diag_integral), std::abs(trace_avg - spectral_mean)) / scale;
}

SzegoIdentity szego_identity(const OrthonormalBasis& basis, const DiscreteMeasure& mu,
                             const SymbolFunction& f) {
  const HermitianOperator t = toeplitz_hermitian(basis, mu, f);
  const double n = static_cast<double>(basis.size());
  const ComplexMatrix v = basis.values_on(mu);

  double diag = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    double b = 0.0;
    for (const auto& z : v.row(a)) b += std::norm(z);
    diag += mu.weight(a) * f(mu.node(a)).real() * b;
  }
  return {t.matrix().trace_real() / n, diag / n, spectral_measure(t).moment(1)};
}

double moment_gap(const OrthonormalBasis& basis, const DiscreteMeasure& mu, const SymbolFunction& f,
                  std::size_t m) {
  if (m == 0) throw InvalidArgument("moment_gap: m must be positive");
  if (!f.is_real()) throw InvalidArgument("moment_gap: symbol must be real");
  const ComplexMatrix v = basis.values_on(mu);
  const auto fv = symbol_values(f, mu);
  const ComplexMatrix t = toeplitz_from_values(v, mu, fv);
  ComplexMatrix power = t;
  for (std::size_t e = 1; e < m; ++e) power = power * t;
  const double n = static_cast<double>(basis.size());

  double diag = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    double b = 0.0;
    for (const auto& z : v.row(a)) b += std::norm(z);
    diag += mu.weight(a) * std::pow(fv[a].real(), static_cast<double>(m)) * b;
  }
  return std::abs(power.trace_real() / n - diag / n);
}

double SOperator::rel_gap() const { return std::abs(hs_norm_sq - kernel_l2) / (1.0 + kernel_l2); }

SOperator s_operator(const OrthonormalBasis& basis, const DiscreteMeasure& mu, const SymbolFunction& f) {
  for (std::size_t a = 0; a < mu.size(); ++a) {
    if (std::abs(f.denominator(mu.node(a))) < 1e-12) {
      throw DenominatorVanishes(fmt::format("denominator of {} vanishes at atom ({}, {})",
                                            f.description(), mu.node(a).real(), mu.node(a).imag()));
    }
  }
  const ComplexMatrix v = basis.values_on(mu);
  const auto fv = symbol_values(f, mu);
  const ComplexMatrix t = toeplitz_from_values(v, mu, fv);
  const std::size_t n = basis.size();

  // (S p_j)(z) = f(z) p_j(z) - sum_i p_i(z) T_ij, i.e. (I - P) M_f p_j
  ComplexMatrix s = v * t;
  double fmax = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    const double root_w = std::sqrt(mu.weight(a));
    fmax = std::max(fmax, std::abs(fv[a]));
    for (std::size_t j = 0; j < n; ++j) s(a, j) = root_w * (fv[a] * v(a, j) - s(a, j));
  }

  SOperator out;
  out.singular_values = singular_values(s);
  out.hs_norm_sq = 0.0;
  for (double x : out.singular_values) out.hs_norm_sq += x * x;
  out.numerical_rank = numerical_rank(out.singular_values, kRankCut,
                                      1e-12 * (1.0 + fmax) * std::sqrt(static_cast<double>(n)));
  const std::size_t k0 = f.section_degree().value_or(n);
  out.rank_bound = std::min(k0, n);

  double kl2 = 0.0;
  for (std::size_t a = 0; a < mu.size(); ++a) {
    for (std::size_t c = a + 1; c < mu.size(); ++c) {
      cplx b = 0.0;
      for (std::size_t i = 0; i < n; ++i) b += v(a, i) * std::conj(v(c, i));
      kl2 += mu.weight(a) * mu.weight(c) * std::norm(b) * std::norm(fv[a] - fv[c]);
    }
  }
  out.kernel_l2 = kl2;
  out.matrix = std::move(s);
  return out;
}

} // namespace cdlab
