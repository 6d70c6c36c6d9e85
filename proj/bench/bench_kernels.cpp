// Parallel FFT kernels against the serial direct-summation references.

#include "ntw/gabor.hpp"
#include "ntw/reference.hpp"
#include "ntw/spectral.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

using namespace ntw;

namespace {

struct Setup {
  GaborParams p;
  RealVector g;
  RealVector f;
};

Setup make_setup(int a, int M, int L) {
  Setup s{GaborParams::make(a, M, L), {}, {}};
  s.g = hann_window(M).embed(L);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  s.f.resize(L);
  for (auto& v : s.f) v = normal(rng);
  return s;
}

Setup from_state(const benchmark::State& state) {
  return make_setup(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                    static_cast<int>(state.range(2)));
}

void set_threads(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(3)));
}

void BM_dgt(benchmark::State& state) {
  set_threads(state);
  const Setup s = from_state(state);
  for (auto _ : state) benchmark::DoNotOptimize(dgt(s.f, s.g, s.p));
}

void BM_dgt_reference(benchmark::State& state) {
  const Setup s = from_state(state);
  for (auto _ : state) benchmark::DoNotOptimize(reference::dgt(s.f, s.g, s.p));
}

void BM_idgt(benchmark::State& state) {
  set_threads(state);
  const Setup s = from_state(state);
  const GaborCoefficients c = dgt(s.f, s.g, s.p);
  for (auto _ : state) benchmark::DoNotOptimize(idgt(c, s.g, s.p));
}

void BM_idgt_reference(benchmark::State& state) {
  const Setup s = from_state(state);
  const GaborCoefficients c = dgt(s.f, s.g, s.p);
  for (auto _ : state) benchmark::DoNotOptimize(reference::idgt_complex(c, s.g, s.p));
}

void BM_frame_operator(benchmark::State& state) {
  set_threads(state);
  const Setup s = from_state(state);
  for (auto _ : state) benchmark::DoNotOptimize(frame_operator_matrix(s.g, s.p));
}

void BM_frame_operator_reference(benchmark::State& state) {
  const Setup s = from_state(state);
  for (auto _ : state) benchmark::DoNotOptimize(reference::frame_operator_matrix(s.g, s.p));
}

void lattices(benchmark::internal::Benchmark* b) {
  b->ArgNames({"a", "M", "L", "threads"});
  for (int threads : {1, 2, 4}) {
    b->Args({16, 32, 512, threads});
    b->Args({192, 256, 768, threads});
  }
}

void reference_lattices(benchmark::internal::Benchmark* b) {
  b->ArgNames({"a", "M", "L", "threads"});
  b->Args({16, 32, 512, 1});
  b->Args({192, 256, 768, 1});
}

}  // namespace

BENCHMARK(BM_dgt)->Apply(lattices);
BENCHMARK(BM_dgt_reference)->Apply(reference_lattices);
BENCHMARK(BM_idgt)->Apply(lattices);
BENCHMARK(BM_idgt_reference)->Apply(reference_lattices);
BENCHMARK(BM_frame_operator)->Apply(lattices);
BENCHMARK(BM_frame_operator_reference)->Apply(reference_lattices);

BENCHMARK_MAIN();
