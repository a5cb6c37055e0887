#include <benchmark/benchmark.h>

#include <vector>

#include "locrank/locrank.hpp"

using namespace locrank;

namespace {

struct Sample {
  std::vector<double> scores;
  std::vector<int> labels;
};

Sample make_sample(std::size_t n) {
  auto rng = child_stream(SeedSpec{1234}, n);
  Sample s;
  s.scores.resize(n);
  s.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.scores[i] = rng.uniform01();
    s.labels[i] = rng.bernoulli(s.scores[i]) ? 1 : -1;
  }
  return s;
}

void bm_full_report(benchmark::State& state) {
  const auto s = make_sample(static_cast<std::size_t>(state.range(0)));
  const Rate u0(0.2);
  for (auto _ : state)
    benchmark::DoNotOptimize(full_report(s.scores, s.labels, u0));
  state.SetComplexityN(state.range(0));
}

void bm_hat_auc(benchmark::State& state) {
  const auto s = make_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hat_auc(s.scores, s.labels));
  state.SetComplexityN(state.range(0));
}

void bm_quantile(benchmark::State& state) {
  const auto s = make_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    EmpiricalDistribution dist(s.scores);
    benchmark::DoNotOptimize(dist.quantile(0.8));
  }
}

void bm_true_report(benchmark::State& state) {
  oracle::SyntheticModel model(oracle::Marginal::uniform(0.0, 1.0),
                               oracle::Eta::linear(0.0, 1.0));
  const auto s = ScoringModel::piecewise_linear({0.0, 0.5, 1.0}, {0.0, 0.9, 1.4},
                                                0.5, 2.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle::true_report(model, s, Rate(0.2)));
}

void bm_erm_finite(benchmark::State& state) {
  oracle::SyntheticModel model(oracle::Marginal::uniform(0.0, 1.0),
                               oracle::Eta::linear(0.0, 1.0));
  auto rng = child_stream(SeedSpec{2}, 0);
  const auto data = model.sample(static_cast<std::size_t>(state.range(0)), rng);
  const auto family = experiments::band_swap_family(model, Rate(0.2), 20, 0.005);
  erm::ErmProblem problem;
  problem.family = erm::FiniteFamilySpec{family};
  problem.criterion = erm::Criterion::LHat;
  problem.u0 = Rate(0.2);
  problem.budget = family->size();
  for (auto _ : state) benchmark::DoNotOptimize(erm::erm_finite(problem, data));
}

}  // namespace

BENCHMARK(bm_hat_auc)->Range(1 << 8, 1 << 16)->Complexity(benchmark::oNLogN);
BENCHMARK(bm_full_report)->Range(1 << 8, 1 << 16)->Complexity(benchmark::oNLogN);
BENCHMARK(bm_quantile)->Range(1 << 8, 1 << 16);
BENCHMARK(bm_true_report);
BENCHMARK(bm_erm_finite)->Range(1 << 10, 1 << 13);

BENCHMARK_MAIN();
