#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cdlab/errors.hpp"
#include "cdlab/experiments.hpp"
#include "cdlab/kernel.hpp"
#include "support.hpp"

using namespace cdlab;

namespace {

const MetricWeight kFlat = MetricWeight::zero();

// sum_{i<k} x^i conj(y)^i evaluated directly
cplx geometric_kernel(cplx x, cplx y, std::size_t k) {
  cplx s = 0.0;
  cplx t = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    s += t;
    t *= x * std::conj(y);
  }
  return s;
}

} // namespace

TEST_CASE("kernel values on roots of unity") {
  const auto mu = gen_circle(8);
  const auto b = orthonormal_basis(mu, kFlat, 8);
  const KernelEvaluator ke(b);
  for (std::size_t a = 0; a < 8; ++a) {
    for (std::size_t c = 0; c < 8; ++c) {
      const auto kv = cd_kernel(ke, mu.node(a), mu.node(c));
      if (a == c) {
        CHECK(std::abs(kv.value - 8.0) < 1e-12);
      } else {
        CHECK(kv.modulus <= 1e-12);
      }
    }
  }

  const auto b16 = orthonormal_basis(gen_circle(16), kFlat, 4);
  const KernelEvaluator k16(b16);
  const cplx v = k16(1.0, cplx(0, 1));
  CHECK(std::abs(v - geometric_kernel(1.0, cplx(0, 1), 4)) < 1e-13);
  CHECK(std::abs(v) < 1e-13);
  CHECK(std::abs(k16(cplx(0.3, 0.4), cplx(-0.2, 0.7)) - geometric_kernel(cplx(0.3, 0.4), cplx(-0.2, 0.7), 4)) <
        1e-13);
}

TEST_CASE("diagonal") {
  const auto mu = gen_circle(8);
  const auto b = orthonormal_basis(mu, kFlat, 4);
  const KernelEvaluator ke(b);
  const cplx pts[] = {1.0, cplx(0, 1), std::polar(1.0, 0.3)};
  for (double d : diagonal(ke, pts)) CHECK(d == doctest::Approx(4.0));

  const auto vb = vanishing_basis(mu, kFlat, 4, 0.0, 2);
  CHECK(KernelEvaluator(vb).diagonal(0.0) == 0.0);

  const auto dm = diag_measure(ke, mu);
  for (double m : dm.masses) CHECK(m == doctest::Approx(0.125));

  const cplx at[] = {2.0};
  const double w[] = {10.0};
  const auto heavy = add_atoms(mu, at, w);
  const auto bh = orthonormal_basis(heavy, kFlat, 2);
  const auto dh = diag_measure(KernelEvaluator(bh), heavy);
  const auto oracle = test::monomial_cholesky_basis(heavy, kFlat, 2);
  for (std::size_t j = 0; j < heavy.size(); ++j) {
    double d = 0.0;
    for (const auto& z : oracle.row(j)) d += std::norm(z);
    CHECK(std::abs(dh.masses[j] - d / 2.0) < 1e-12);
  }
  // the atom carries the largest share, just under one half (25/51)
  const std::size_t atom = heavy.find(2.0);
  CHECK(dh.masses[atom] == doctest::Approx(25.0 / 51.0).epsilon(1e-12));
  CHECK(*std::max_element(dh.masses.begin(), dh.masses.end()) == dh.masses[atom]);
}

TEST_CASE("off-diagonal and total mass") {
  const auto mu = gen_circle(8);
  const auto b = orthonormal_basis(mu, kFlat, 8);
  const KernelEvaluator ke(b);
  CHECK(offdiag_mass(ke, mu, 0.1) < 1e-24);
  CHECK(std::abs(total_mass(ke, mu) - 1.0) < 1e-12);

  const auto two = make_measure({1.0, -1.0}, {0.5, 0.5});
  const auto b1 = orthonormal_basis(two, kFlat, 1);
  const KernelEvaluator k1(b1);
  CHECK(offdiag_mass(k1, two, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(total_mass(k1, two) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(offdiag_mass(k1, two, 0.0), InvalidArgument);

  const auto cheb = gen_interval(256, IntervalRule::chebyshev);
  double prev = 2.0;
  for (std::size_t k : {8u, 16u, 32u, 64u}) {
    const auto bk = orthonormal_basis(cheb, kFlat, k);
    const KernelEvaluator kk(bk);
    const double m = offdiag_mass(kk, cheb, 0.5);
    CHECK(m < prev);
    CHECK(m >= 0.0);
    prev = m;
  }
}

TEST_CASE("probability, trace and reproducing identities over the test family") {
  CounterRng rng(77);
  for (const auto& mu : test::family()) {
    for (std::size_t k : {4u, 8u, 16u}) {
      if (k > mu.size()) continue;
      for (const auto& phi : {kFlat, MetricWeight::gaussian(0.3)}) {
        const auto b = orthonormal_basis(mu, phi, k);
        const KernelEvaluator ke(b);
        CHECK(std::abs(total_mass(ke, mu) - 1.0) <= 1e-10);
        CHECK(std::abs(diagonal_integral(ke, mu) - static_cast<double>(k)) <= 1e-8);

        const auto dm = diag_measure(ke, mu);
        double s = 0.0;
        for (double m : dm.masses) s += m;
        CHECK(std::abs(s - 1.0) <= 1e-10);

        for (int t = 0; t < 3; ++t) {
          const cplx x(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2));
          const cplx y(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2));
          cplx rep = 0.0;
          for (std::size_t j = 0; j < mu.size(); ++j) rep += mu.weight(j) * ke(x, mu.node(j)) * ke(mu.node(j), y);
          CHECK(std::abs(rep - ke(x, y)) <= 1e-9 * std::sqrt(ke.diagonal(x) * ke.diagonal(y)));
        }
      }
    }
  }
}

TEST_CASE("lubinsky_check") {
  const auto mu = gen_circle(16);
  const auto same = lubinsky_check(mu, mu, kFlat, 6, mu.node(3));
  CHECK(std::abs(same.lhs) < 1e-20);
  CHECK(std::abs(same.rhs) < 1e-12);

  std::vector<double> w(mu.weights().begin(), mu.weights().end());
  for (std::size_t j = 0; j < w.size(); j += 2) w[j] *= 0.5;
  const DiscreteMeasure half({mu.nodes().begin(), mu.nodes().end()}, w);
  for (std::size_t j = 0; j < 16; ++j) {
    const auto r = lubinsky_check(half, mu, kFlat, 6, mu.node(j));
    CHECK(r.lhs <= r.rhs + 1e-9);
    CHECK(r.rhs >= -1e-10);
  }
  CHECK_THROWS_AS(lubinsky_check(mu, half, kFlat, 6, 0.0), DominationViolated);

  CounterRng rng(12);
  for (const auto& nu : test::family()) {
    const std::size_t k = std::min<std::size_t>(8, nu.size());
    for (int t = 0; t < 5; ++t) {
      const auto nu1 = random_dominated(nu, rng);
      CHECK(is_dominated(nu1, nu));
      const cplx x(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
      const auto r = lubinsky_check(nu1, nu, kFlat, k, x);
      CHECK(r.lhs <= r.rhs + 1e-9);
      CHECK(r.rhs >= -1e-10);
      // diagonal monotonicity under domination
      const auto b1 = orthonormal_basis(nu1, kFlat, k);
      const auto b2 = orthonormal_basis(nu, kFlat, k);
      CHECK(KernelEvaluator(b1).diagonal(x) >= KernelEvaluator(b2).diagonal(x) - 1e-10);
    }
  }
}

TEST_CASE("truncation_error") {
  const auto mu = gen_interval(64, IntervalRule::chebyshev);
  const auto id = truncation_error(mu, BumpProfile(50.0, 1.0, 2.0), kFlat, 8);
  CHECK(std::abs(id.kernel_l2_diff) < 1e-20);
  CHECK(std::abs(id.diag_gap) < 1e-10);

  const auto cheb = gen_interval(256, IntervalRule::chebyshev);
  for (std::size_t k : {8u, 16u, 32u}) {
    const auto e = truncation_error(cheb, BumpProfile(0.0, 0.01, 0.05), kFlat, k);
    CHECK(e.kernel_l2_diff >= -1e-9);
    CHECK(e.diag_gap >= -1e-9);
    CHECK(e.kernel_l2_diff <= e.diag_gap + 1e-8 * static_cast<double>(k));
  }
}

TEST_CASE("forbidden_scan") {
  const auto mu = gen_circle(64);
  const std::size_t ks[] = {8, 16, 24, 32};
  const ProbeGrid grid{0.2, 8, 16};
  const auto scan = forbidden_scan(mu, kFlat, 0.0, 0.25, ks, grid);
  REQUIRE(scan.rows.size() == 4);
  REQUIRE(scan.slope.has_value());
  CHECK(*scan.slope < 0.0);
  for (const auto& r : scan.rows) {
    CHECK(r.order == vanishing_order(0.25, r.k));
    CHECK(r.sup_partial <= r.sup_full + 1e-12);
    CHECK(std::abs(r.partial_trace - static_cast<double>(r.k - r.order)) <= 1e-8);
  }
  CHECK_FALSE(scan.rows[2].slope_so_far.has_value());
  CHECK(scan.rows[3].slope_so_far == scan.slope);

  // partial <= full at every probe point, not only at the suprema
  const auto full = orthonormal_basis(mu, kFlat, 16);
  const auto part = vanishing_basis(mu, kFlat, 16, 0.0, 4);
  const auto pts = grid.points(0.0);
  const auto df = diagonal(KernelEvaluator(full), pts);
  const auto dp = diagonal(KernelEvaluator(part), pts);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(dp[i] <= df[i] + 1e-12);

  const std::size_t bad[] = {2};
  CHECK_THROWS_AS(forbidden_scan(mu, kFlat, 0.0, 0.75, bad, grid), InvalidArgument);
  CHECK_THROWS_AS(forbidden_scan(mu, kFlat, 0.0, 1.0, ks, grid), InvalidArgument);
}

TEST_CASE("least squares slope") {
  const double x[] = {1, 2, 3, 4};
  const double y[] = {1, 3, 5, 7};
  CHECK(*least_squares_slope(x, y) == doctest::Approx(2.0));
  CHECK_FALSE(least_squares_slope(std::span(x, 1), std::span(y, 1)).has_value());
}

TEST_CASE("peak sections") {
  const auto mu = gen_circle(8);
  const auto b = orthonormal_basis(mu, kFlat, 4);
  const KernelEvaluator ke(b);
  const auto p = peak_section(ke, 1.0);
  for (const auto& c : p.coefficients) CHECK(std::abs(c - 0.5) < 1e-13);
  CHECK(p.peak_value == doctest::Approx(2.0));

  CounterRng rng(5);
  const auto nu = test::random_measure(40, rng);
  const auto bn = orthonormal_basis(nu, MetricWeight::gaussian(0.2), 9);
  const KernelEvaluator kn(bn);
  const cplx x(0.2, 0.5);
  const auto px = peak_section(kn, x);
  double nrm = 0.0;
  for (const auto& c : px.coefficients) nrm += std::norm(c);
  CHECK(std::abs(nrm - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(section_value(kn, px.coefficients, x)) - px.peak_value) < 1e-12);
  for (int t = 0; t < 100; ++t) {
    std::vector<cplx> c(9);
    double s = 0.0;
    for (auto& z : c) {
      z = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
      s += std::norm(z);
    }
    for (auto& z : c) z /= std::sqrt(s);
    CHECK(std::abs(section_value(kn, c, x)) <= px.peak_value + 1e-10);
  }

  const auto vb = vanishing_basis(mu, kFlat, 4, 0.0, 2);
  CHECK_THROWS_AS(peak_section(KernelEvaluator(vb), 0.0), BaseLocus);
}

TEST_CASE("Nevai measures") {
  const auto mu = gen_circle(8);
  const auto b = orthonormal_basis(mu, kFlat, 8);
  const KernelEvaluator ke(b);
  const auto r = nevai_measure(ke, mu, mu.node(2));
  for (std::size_t j = 0; j < 8; ++j) CHECK(std::abs(r.mu_x.masses[j] - (j == 2 ? 1.0 : 0.0)) < 1e-12);

  for (const auto& nu : test::family()) {
    const std::size_t k = std::min<std::size_t>(12, nu.size());
    const auto bn = orthonormal_basis(nu, kFlat, k);
    const KernelEvaluator kn(bn);
    double avg = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) {
      const auto res = nevai_measure(kn, nu, nu.node(j));
      CHECK(std::abs(res.mu_x.total() - 1.0) <= 1e-10);
      avg += nu.weight(j) * res.vol_nu;
    }
    CHECK(std::abs(avg - 1.0) <= 1e-10);
  }

  const auto cheb = gen_interval(256, IntervalRule::chebyshev);
  const auto bc = orthonormal_basis(cheb, kFlat, 32);
  const auto rc = nevai_measure(KernelEvaluator(bc), cheb, 0.0);
  CHECK(rc.mu_x.mass_outside(0.2) < 0.5);
  CHECK(rc.mu_x.mass_outside(0.2) > 0.0);

  const auto vb = vanishing_basis(mu, kFlat, 4, 0.0, 2);
  CHECK_THROWS_AS(nevai_measure(KernelEvaluator(vb), mu, 0.0), BaseLocus);
}
