#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cdlab/linalg.hpp"
#include "cdlab/measure.hpp"

namespace cdlab {

/// Sections are restricted to vanish to `order` at `center`.
struct VanishingOrder {
  cplx center;
  std::size_t order;
};

/// Orthonormal polynomials p_0, ..., p_{n-1} for the inner product
///   <p, q> = sum_j w_j e^{-2 k phi(z_j)} p(z_j) conj(q(z_j)).
///
/// The family is produced by an Arnoldi process on node vectors. The
/// Hessenberg coefficients of that process define a recurrence that
/// evaluates the same polynomials anywhere in the plane.
///
/// Every p_i has a positive real leading coefficient. For a full basis
/// deg p_i = i and n = k; for a vanishing basis p_i = (z - y0)^m q_i with
/// deg q_i = i and n = k - m.
class OrthonormalBasis {
public:
  /// Line-bundle power k: weights e^{-k phi}, polynomials of degree < k.
  std::size_t degree() const noexcept { return degree_; }
  /// Number of basis elements n_k (or n_k(eps) for a vanishing basis).
  std::size_t size() const noexcept { return values_.cols(); }

  const DiscreteMeasure& measure() const noexcept { return measure_; }
  const MetricWeight& weight() const noexcept { return weight_; }
  const std::optional<VanishingOrder>& vanishing() const noexcept { return vanishing_; }

  /// (nodes x n) matrix of weighted values p_i(z_j) e^{-k phi(z_j)}.
  const ComplexMatrix& node_values() const noexcept { return values_; }

  /// Upper Hessenberg recurrence: z p_j = sum_{i <= j+1} H(i, j) p_i.
  /// Shape n x (n - 1).
  const ComplexMatrix& recurrence() const noexcept { return hessenberg_; }

  /// Weighted values p_i(x) e^{-k phi(x)}, one row per point. Points on an
  /// atom of the basis measure return the stored node row.
  ComplexMatrix evaluate(std::span<const cplx> points) const;
  std::vector<cplx> evaluate(cplx point) const;

  /// Weighted values on the atoms of mu. Reuses node_values() when mu has the
  /// same atoms as the basis measure.
  ComplexMatrix values_on(const DiscreteMeasure& mu) const;

  /// Unweighted monomial coefficients, entry [i][a] is the coefficient of z^a
  /// in p_i. Intended for small n (coefficients grow geometrically).
  std::vector<std::vector<cplx>> monomial_coefficients() const;

  /// sum_j w_j V_ja conj(V_jb) over the basis measure.
  ComplexMatrix gram() const;

private:
  friend OrthonormalBasis build_basis(const DiscreteMeasure&, const MetricWeight&, std::size_t,
                                      std::optional<VanishingOrder>);

  OrthonormalBasis(DiscreteMeasure mu, MetricWeight phi) : measure_(std::move(mu)), weight_(std::move(phi)) {}

  std::size_t degree_ = 0;
  DiscreteMeasure measure_;
  MetricWeight weight_;
  std::optional<VanishingOrder> vanishing_;
  double start_scale_ = 1.0; // p_0 = start_scale * (z - y0)^m
  ComplexMatrix values_;
  ComplexMatrix hessenberg_;
};

/// Relative pivot norm below which orthogonalization reports RankDeficient.
inline constexpr double kRankTolerance = 1e-12;

/// Orthonormal basis of polynomials of degree < k. Throws RankDeficient when
/// mu has fewer than k atoms or a pivot collapses.
OrthonormalBasis orthonormal_basis(const DiscreteMeasure& mu, const MetricWeight& phi, std::size_t k);

/// Orthonormal basis of {(z - y0)^m q : deg q < k - m}. Throws InvalidArgument
/// unless m < k, RankDeficient as above.
OrthonormalBasis vanishing_basis(const DiscreteMeasure& mu, const MetricWeight& phi, std::size_t k,
                                 cplx y0, std::size_t m);

/// ceil(eps * k), robust to eps * k landing a rounding error above an integer.
std::size_t vanishing_order(double eps, std::size_t k);

} // namespace cdlab
