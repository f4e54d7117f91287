#include <benchmark/benchmark.h>

#include "cdlab/basis.hpp"
#include "cdlab/kernel.hpp"
#include "cdlab/linalg.hpp"
#include "cdlab/random.hpp"
#include "cdlab/toeplitz.hpp"

using namespace cdlab;

static void BM_OrthonormalBasis(benchmark::State& state) {
  const auto mu = gen_interval(512, IntervalRule::chebyshev);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(orthonormal_basis(mu, MetricWeight::zero(), k));
}
BENCHMARK(BM_OrthonormalBasis)->Arg(16)->Arg(32)->Arg(64);

static void BM_HermitianEig(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CounterRng rng(1);
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const cplx z(rng.uniform(-1, 1), i == j ? 0.0 : rng.uniform(-1, 1));
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }
  const HermitianOperator h(a);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigenvalues(h));
}
BENCHMARK(BM_HermitianEig)->Arg(16)->Arg(32)->Arg(64);

static void BM_NodeKernel(benchmark::State& state) {
  const auto mu = gen_circle(static_cast<std::size_t>(state.range(0)));
  const auto b = orthonormal_basis(mu, MetricWeight::zero(), 32);
  const KernelEvaluator ke(b);
  for (auto _ : state) benchmark::DoNotOptimize(ke.node_kernel(mu));
}
BENCHMARK(BM_NodeKernel)->Arg(128)->Arg(512);

static void BM_SOperator(benchmark::State& state) {
  const auto mu = gen_interval(256, IntervalRule::chebyshev);
  const auto b = orthonormal_basis(mu, MetricWeight::zero(), static_cast<std::size_t>(state.range(0)));
  const auto f = SymbolFunction::z();
  for (auto _ : state) benchmark::DoNotOptimize(s_operator(b, mu, f));
}
BENCHMARK(BM_SOperator)->Arg(16)->Arg(48);

BENCHMARK_MAIN();
