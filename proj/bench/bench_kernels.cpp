#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

#include "qinterf/algorithms.hpp"
#include "qinterf/interference.hpp"
#include "qinterf/kernels.hpp"

using namespace qinterf;

namespace {

std::vector<Complex> random_block(std::size_t count) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<Complex> v(count);
  for (auto &z : v)
    z = {g(rng), g(rng)};
  return v;
}

const Complex kGate[4] = {{0.6, 0.0}, {0.8, 0.0}, {0.8, 0.0}, {-0.6, 0.0}};

template <bool Parallel> void BM_Apply1q(benchmark::State &state) {
  const auto n = static_cast<unsigned>(state.range(0));
  const std::size_t dim = std::size_t{1} << n;
  auto x = random_block(dim * dim);
  for (auto _ : state) {
    for (int q = 0; q < static_cast<int>(n); ++q) {
      if constexpr (Parallel)
        kernels::parallel::apply_1q({x, dim, dim}, n, q, kGate);
      else
        kernels::serial::apply_1q({x, dim, dim}, n, q, kGate);
    }
    benchmark::DoNotOptimize(x.data());
  }
}

template <bool Parallel> void BM_Matmul(benchmark::State &state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto a = random_block(dim * dim);
  const auto b = random_block(dim * dim);
  std::vector<Complex> c(dim * dim);
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::parallel::matmul(a, b, c, dim, dim, dim);
    else
      kernels::serial::matmul(a, b, c, dim, dim, dim);
    benchmark::DoNotOptimize(c.data());
  }
}

template <bool Parallel> void BM_KrausGram(benchmark::State &state) {
  const std::size_t dim = static_cast<std::size_t>(state.range(0));
  const std::size_t count = 16;
  std::vector<std::vector<Complex>> ops(count, random_block(dim * dim));
  std::vector<const Complex *> ptrs;
  for (const auto &o : ops)
    ptrs.push_back(o.data());
  for (auto _ : state) {
    double v;
    if constexpr (Parallel)
      v = kernels::parallel::kraus_first_term_gram(ptrs, dim);
    else
      v = kernels::serial::kraus_first_term_gram(ptrs, dim);
    benchmark::DoNotOptimize(v);
  }
}

// Whole-pipeline timing: Shor L = 3 decoherence over an 11-point p grid.
void BM_ShorDecoherenceGrid(benchmark::State &state) {
  const ShorSpec spec = ShorSpec::make(7, 3);
  const AlgorithmUnitaries alg = algorithm_unitaries(
      build_shor(spec, ShorAngles::exact(spec)), {0, 1, 2, 3, 4, 5});
  const auto nf = static_cast<int>(state.range(0));
  std::vector<int> affected;
  for (int q = 0; q < nf; ++q)
    affected.push_back(q);
  const AlgorithmChannels ch =
      decoherence_channels(alg, {ErrorKind::PhaseFlip, 0.5, affected});
  std::vector<double> ps(11);
  for (std::size_t i = 0; i < ps.size(); ++i)
    ps[i] = 0.1 * static_cast<double>(i);
  for (auto _ : state)
    benchmark::DoNotOptimize(interference_kraus_over_p(ch.potentially_available, ps));
}

} // namespace

BENCHMARK(BM_Apply1q<false>)->Arg(6)->Arg(8)->Arg(9);
BENCHMARK(BM_Apply1q<true>)->Arg(6)->Arg(8)->Arg(9);
BENCHMARK(BM_Matmul<false>)->Arg(64)->Arg(256);
BENCHMARK(BM_Matmul<true>)->Arg(64)->Arg(256);
BENCHMARK(BM_KrausGram<false>)->Arg(64)->Arg(256);
BENCHMARK(BM_KrausGram<true>)->Arg(64)->Arg(256);
BENCHMARK(BM_ShorDecoherenceGrid)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
