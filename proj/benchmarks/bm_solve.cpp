#include <benchmark/benchmark.h>

#include "qcqp/qcqp.hpp"

namespace {

using qcqp::GenSpec;
using qcqp::ProblemKind;

void solve_kind(benchmark::State& state, ProblemKind kind) {
  const qcqp::QcqpInstance inst = qcqp::instances::gen(GenSpec{kind, state.range(0), 1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcqp::solver::solve(inst));
  }
  state.SetComplexityN(state.range(0));
}

void BM_Standard(benchmark::State& s) { solve_kind(s, ProblemKind::Standard); }
void BM_RankDeficient(benchmark::State& s) { solve_kind(s, ProblemKind::RankDeficient); }
void BM_Indefinite(benchmark::State& s) { solve_kind(s, ProblemKind::Indefinite); }
void BM_Augmented(benchmark::State& s) { solve_kind(s, ProblemKind::Augmented); }
void BM_Matrix(benchmark::State& s) { solve_kind(s, ProblemKind::MatrixComplex); }

BENCHMARK(BM_Standard)->RangeMultiplier(2)->Range(16, 1024)->Complexity(benchmark::oNCubed)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankDeficient)->RangeMultiplier(4)->Range(16, 256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Indefinite)->RangeMultiplier(4)->Range(16, 256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Augmented)->RangeMultiplier(4)->Range(16, 256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Matrix)->RangeMultiplier(4)->Range(16, 256)->Unit(benchmark::kMillisecond);

void BM_SecularBisection(benchmark::State& state) {
  qcqp::Rng rng(3);
  const qcqp::Index n = state.range(0);
  qcqp::Vector a(n);
  for (qcqp::Index i = 0; i < n; ++i) a(i) = rng.uniform(-5.0, 5.0);
  const qcqp::SecularSpec spec = qcqp::SecularSpec::standard(a, rng.normal_vector(n), 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcqp::secular::solve(spec));
  }
}
BENCHMARK(BM_SecularBisection)->RangeMultiplier(8)->Range(8, 4096);

void BM_Frobenius(benchmark::State& state) {
  qcqp::Rng rng(5);
  const qcqp::Index n = state.range(0);
  const qcqp::CMatrix g = rng.complex_normal_matrix(n + 4, n);
  const qcqp::CMatrix f = rng.complex_normal_matrix(n + 4, n / 2 + 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcqp::solver::solve_frobenius_special(f, g, 1.5));
  }
}
BENCHMARK(BM_Frobenius)->RangeMultiplier(4)->Range(16, 256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
