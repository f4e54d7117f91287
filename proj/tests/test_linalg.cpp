#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cdlab/errors.hpp"
#include "cdlab/linalg.hpp"
#include "support.hpp"

using namespace cdlab;

TEST_CASE("qr of the identity is trivial") {
  const auto [q, r] = qr(ComplexMatrix::identity(3));
  CHECK(test::max_abs_diff(q, ComplexMatrix::identity(3)) < 1e-15);
  CHECK(test::max_abs_diff(r, ComplexMatrix::identity(3)) < 1e-15);
}

TEST_CASE("qr of a single column gives its norm") {
  const auto [q, r] = qr(ComplexMatrix{{3.0}, {4.0}});
  CHECK(r(0, 0).real() == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(std::abs(r(0, 0).imag()) < 1e-15);
  CHECK(std::abs(q(0, 0) - 0.6) < 1e-15);
  CHECK(std::abs(q(1, 0) - 0.8) < 1e-15);
}

TEST_CASE("qr reconstructs random complex matrices") {
  CounterRng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = test::random_matrix(8, 5, rng);
    const auto [q, r] = qr(a);
    CHECK((a - q * r).frobenius_norm() <= 1e-12 * a.frobenius_norm());
    CHECK((adjoint_times(q, q) - ComplexMatrix::identity(5)).frobenius_norm() <= 1e-12 * 5);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < i; ++j) CHECK(r(i, j) == cplx{});
  }
  CHECK_THROWS_AS(qr(ComplexMatrix(2, 3)), InvalidArgument);
}

TEST_CASE("hermitian_eig on simple matrices") {
  SUBCASE("identity") {
    const auto e = hermitian_eig(HermitianOperator(ComplexMatrix::identity(4)));
    for (double v : e.values) CHECK(v == doctest::Approx(1.0));
  }
  SUBCASE("diag(3, -1) sorts ascending with permuted identity vectors") {
    const auto e = hermitian_eig(HermitianOperator(ComplexMatrix{{3.0, 0.0}, {0.0, -1.0}}));
    CHECK(e.values[0] == doctest::Approx(-1.0));
    CHECK(e.values[1] == doctest::Approx(3.0));
    CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(e.vectors(0, 1)) == doctest::Approx(1.0));
  }
}

TEST_CASE("tridiagonal Toeplitz eigenvalues are cos(j pi / (k+1))") {
  for (std::size_t k : {4u, 10u, 33u}) {
    ComplexMatrix t(k, k);
    for (std::size_t i = 0; i + 1 < k; ++i) t(i, i + 1) = t(i + 1, i) = 0.5;
    const auto ev = hermitian_eigenvalues(HermitianOperator(t));
    std::vector<double> closed;
    for (std::size_t j = 1; j <= k; ++j)
      closed.push_back(std::cos(static_cast<double>(j) * std::numbers::pi / static_cast<double>(k + 1)));
    std::sort(closed.begin(), closed.end());
    for (std::size_t j = 0; j < k; ++j) CHECK(std::abs(ev[j] - closed[j]) < 1e-12);

    if (k == 4) {
      // independent check of the closed form itself
      const auto roots = test::tridiagonal_charpoly_roots(4);
      REQUIRE(roots.size() == 4);
      for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(roots[j] - closed[j]) < 1e-12);
    }
  }
}

TEST_CASE("random Hermitian matrices: trace, residual, unitarity") {
  CounterRng rng(2024);
  for (std::size_t n : {1u, 2u, 5u, 17u, 40u}) {
    const auto a = test::random_hermitian(n, rng);
    const auto e = hermitian_eig(HermitianOperator(a));
    double sum = 0.0;
    for (double v : e.values) sum += v;
    CHECK(std::abs(sum - a.trace_real()) <= 1e-10 * (1.0 + std::abs(a.trace_real())) + 1e-10 * a.frobenius_norm());
    CHECK(std::is_sorted(e.values.begin(), e.values.end()));

    const auto vd = e.vectors * ComplexMatrix::diagonal(e.values);
    const double resid = (a - vd * e.vectors.adjoint()).frobenius_norm();
    CHECK(resid <= 1e-10 * static_cast<double>(n) * a.frobenius_norm());
    CHECK((adjoint_times(e.vectors, e.vectors) - ComplexMatrix::identity(n)).frobenius_norm() <=
          1e-10 * static_cast<double>(n));
  }
}

TEST_CASE("hermitian_eig reports NoConvergence at the sweep cap") {
  CounterRng rng(5);
  const HermitianOperator a(test::random_hermitian(6, rng));
  CHECK_THROWS_AS(hermitian_eig(a, {1e-13, 0}), NoConvergence);
  CHECK_NOTHROW(hermitian_eig(a));
}

TEST_CASE("HermitianOperator rejects non-Hermitian input") {
  CHECK_THROWS_AS(HermitianOperator(ComplexMatrix{{1.0, 2.0}, {0.0, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(HermitianOperator(ComplexMatrix(2, 3)), InvalidArgument);
  const HermitianOperator h(ComplexMatrix{{1.0, cplx(1, 1e-12)}, {cplx(1, -1e-12 + 1e-13), 2.0}});
  CHECK(h.matrix()(0, 1) == std::conj(h.matrix()(1, 0)));
}

TEST_CASE("singular values") {
  SUBCASE("zero matrix") {
    for (double s : singular_values(ComplexMatrix(3, 2))) CHECK(s == 0.0);
  }
  SUBCASE("diag(2, 1)") {
    const auto s = singular_values(ComplexMatrix{{2.0, 0.0}, {0.0, 1.0}});
    CHECK(s[0] == doctest::Approx(2.0));
    CHECK(s[1] == doctest::Approx(1.0));
  }
  SUBCASE("rank one outer product") {
    CounterRng rng(99);
    const auto u = test::random_matrix(7, 1, rng);
    const auto v = test::random_matrix(5, 1, rng);
    const auto a = u * v.adjoint();
    const auto s = singular_values(a);
    const double scale = u.frobenius_norm() * v.frobenius_norm();
    CHECK(s[0] == doctest::Approx(scale).epsilon(1e-12));
    CHECK(std::count_if(s.begin(), s.end(), [&](double x) { return x > 1e-9 * scale; }) == 1);
    CHECK(numerical_rank(s, 1e-8, 0.0) == 1);
  }
  SUBCASE("random matrices: Frobenius identity and squares vs eig(A*A)") {
    CounterRng rng(7);
    for (auto [r, c] : {std::pair{9u, 4u}, std::pair{4u, 9u}, std::pair{12u, 12u}}) {
      const auto a = test::random_matrix(r, c, rng);
      const auto s = singular_values(a);
      CHECK(std::is_sorted(s.begin(), s.end(), std::greater<>()));
      double sq = 0.0;
      for (double x : s) sq += x * x;
      CHECK(std::abs(sq - std::pow(a.frobenius_norm(), 2)) <= 1e-10 * sq);

      const auto small = r >= c ? adjoint_times(a, a) : a * a.adjoint();
      auto ev = hermitian_eigenvalues(HermitianOperator(small));
      std::sort(ev.begin(), ev.end(), std::greater<>());
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s[i] * s[i] - ev[i]) <= 1e-10 * ev[0]);
    }
  }
}
