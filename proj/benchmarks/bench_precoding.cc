#include <benchmark/benchmark.h>

#include "glse/baselines.hpp"
#include "glse/experiment.hpp"
#include "glse/glse_amp.hpp"
#include "glse/projection.hpp"
#include "glse/reference_solver.hpp"

namespace {

glse::GlseProblem make_problem(int M, int K, double lambda) {
  glse::GlseProblem p;
  p.H = glse::generate_channel(M, K, 1234);
  p.s = glse::generate_symbols(K, 4321);
  p.rho = 1.0;
  p.lambda = lambda;
  p.p_out = 1.0;
  return p;
}

void BM_AmpPrecode(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const int K = static_cast<int>(state.range(1));
  const glse::GlseProblem p = make_problem(M, K, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glse::amp_precode(p));
  }
}
BENCHMARK(BM_AmpPrecode)->Args({16, 8})->Args({64, 45})->Args({64, 64});

void BM_DirectSolve(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const int K = static_cast<int>(state.range(1));
  const glse::GlseProblem p = make_problem(M, K, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glse::solve_glse_direct(p));
  }
}
BENCHMARK(BM_DirectSolve)->Args({16, 8})->Args({64, 45})->Args({64, 64});

void BM_ProjectSignal(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const glse::RfModel rf(glse::SalehParams{}, 1.0, 0.05);
  glse::ProjectionConfig cfg;
  const glse::GlseProblem p = make_problem(M, M / 2, 0.3);
  const Eigen::VectorXcd w = glse::solve_glse_direct(p).w;
  for (auto _ : state) {
    benchmark::DoNotOptimize(glse::project_signal(w, rf, cfg));
  }
}
BENCHMARK(BM_ProjectSignal)->Arg(64);

void BM_RzfPrecode(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const int K = static_cast<int>(state.range(1));
  const Eigen::MatrixXcd H = glse::generate_channel(M, K, 77);
  const Eigen::VectorXcd s = glse::generate_symbols(K, 78);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glse::rzf_precode(H, s, 1.0, 0.5));
  }
}
BENCHMARK(BM_RzfPrecode)->Args({64, 64});

}  // namespace

BENCHMARK_MAIN();
