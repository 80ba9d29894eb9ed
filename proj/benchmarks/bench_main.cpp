#include <benchmark/benchmark.h>

#include <array>
#include <random>
#include <vector>

#include "gad/normal.hpp"
#include "gad/nullmodel.hpp"
#include "gad/pvalue.hpp"
#include "gad/search.hpp"
#include "gad/synthgen.hpp"

namespace {

void BM_BvnUpper(benchmark::State& state) {
  const double rho = static_cast<double>(state.range(0)) / 100.0;
  double h = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gad::bvn_upper(h, 1.3, rho));
    h = h > 5.0 ? 0.1 : h + 0.37;
  }
}
BENCHMARK(BM_BvnUpper)->Arg(-95)->Arg(-50)->Arg(0)->Arg(50)->Arg(95);

gad::BivariateGMM three_component_pair() {
  gad::BivariateGMM m;
  m.weights = {0.5, 0.3, 0.2};
  m.means = {{0.0, 0.0}, {2.0, -1.0}, {-1.5, 2.5}};
  m.covariances = {{1.0, 0.4, 1.0}, {0.5, -0.2, 2.0}, {1.5, 0.9, 1.0}};
  return m;
}

void BM_PairPValue(benchmark::State& state) {
  const auto m = three_component_pair();
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z(0.0, 2.0);
  std::vector<std::array<double, 2>> points(1024);
  for (auto& p : points) p = {z(rng), z(rng)};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gad::pair_pvalue(m, points[i++ & 1023]));
}
BENCHMARK(BM_PairPValue);

void BM_FitBivariate(benchmark::State& state) {
  const auto m = three_component_pair();
  const auto draws = gad::sample(m, static_cast<std::size_t>(state.range(0)), 7);
  std::vector<double> a, b;
  for (const auto& d : draws) {
    a.push_back(d[0]);
    b.push_back(d[1]);
  }
  gad::EMConfig config;
  config.max_components = 5;
  config.restarts = 2;
  for (auto _ : state) benchmark::DoNotOptimize(gad::fit_bivariate(a, b, config));
}
BENCHMARK(BM_FitBivariate)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

struct SearchFixture {
  gad::NullModel model;
  gad::DataBatch test;

  static SearchFixture make() {
    gad::SyntheticSpec spec;
    spec.batch_size = 500;
    spec.cluster_fraction = 0.05;
    spec.seed = 3;
    const auto data = gad::generate(spec);
    gad::NullModelConfig config;
    config.mi_samples = 10'000;
    config.univariate_em.max_components = 3;
    config.bivariate_em.max_components = 3;
    return {gad::train_null(data.train, config), data.test};
  }
};

void BM_DetectAll(benchmark::State& state) {
  static const SearchFixture fixture = SearchFixture::make();
  gad::SearchConfig config;
  config.k_max = static_cast<std::size_t>(state.range(0));
  config.beam_width = 100;
  for (auto _ : state)
    benchmark::DoNotOptimize(gad::detect_all(fixture.model, fixture.test, config));
}
BENCHMARK(BM_DetectAll)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
