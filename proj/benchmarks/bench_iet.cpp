#include <benchmark/benchmark.h>

#include <random>

#include "iet/cocycle.hpp"
#include "iet/rauzy.hpp"
#include "iet/simplex.hpp"
#include "iet/weak_stable.hpp"

using namespace iet;

namespace {

void BM_InductionStepRational(benchmark::State& state) {
  const auto p = Permutation::reversal(static_cast<int>(state.range(0)));
  std::vector<Rational> lambda;
  for (int i = 0; i < p.size(); ++i) lambda.push_back(Rational(i + 2, 3 * i + 7));
  for (auto _ : state) {
    auto r = induction_step(lambda, p);
    benchmark::DoNotOptimize(r.lambda);
  }
}
BENCHMARK(BM_InductionStepRational)->DenseRange(2, 6);

template <class S>
void first_return(benchmark::State& state, int d) {
  PrecisionScope scope(256);
  auto sys = make_default_simplex_system(Permutation::reversal(d));
  auto rng = rng_stream(1, 0);
  auto lambda = sample_simplex<S>(sys, rng);
  long moves = 0;
  for (auto _ : state) {
    auto fr = simplex_first_return(sys, lambda, kDefaultEscapeCap, false);
    moves += fr.moves;
    lambda = std::move(fr.lambda);
  }
  state.counters["moves/return"] = benchmark::Counter(static_cast<double>(moves), benchmark::Counter::kAvgIterations);
}

void BM_FirstReturnReal(benchmark::State& state) { first_return<Real>(state, static_cast<int>(state.range(0))); }
BENCHMARK(BM_FirstReturnReal)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_CocycleStep(benchmark::State& state) {
  PrecisionScope scope(256);
  auto sys = make_default_simplex_system(Permutation::reversal(static_cast<int>(state.range(0))));
  auto rng = rng_stream(1, 1);
  auto st = initial_state(sys, sample_simplex<Real>(sys, rng));
  for (auto _ : state) benchmark::DoNotOptimize(cocycle_step(sys, st));
}
BENCHMARK(BM_CocycleStep)->Arg(3)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_Children(benchmark::State& state) {
  const int len = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  std::string word;
  for (int i = 0; i < len; ++i) word += (rng() & 1) ? 't' : 'b';
  const IntMatrix a = RauzyPath::from_word(Permutation::reversal(4), word).matrix();
  Eigen::VectorXd pt(4), dir(4);
  pt << 0.01, -0.01, 0.005, 0.0;
  dir << 1, 1, 1, 1;
  auto j = LineSegment::through(pt, dir);
  for (auto _ : state) benchmark::DoNotOptimize(children(j, a, 0.05));
}
BENCHMARK(BM_Children)->Arg(8)->Arg(16)->Arg(32);

void BM_RauzyClass(benchmark::State& state) {
  const auto p = Permutation::reversal(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rauzy_class(p).size());
}
BENCHMARK(BM_RauzyClass)->DenseRange(4, 8, 2)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
