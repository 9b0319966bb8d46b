#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "chronolens/bayes_glm.hpp"
#include "chronolens/eval_stats.hpp"
#include "chronolens/probe.hpp"
#include "chronolens/zero_shot.hpp"

using namespace chronolens;

namespace {

EmbeddingMatrix random_matrix(std::size_t rows, std::size_t dim, std::uint64_t seed,
                              bool year_ids = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> normal;
  std::vector<std::string> ids;
  std::vector<float> data(rows * dim);
  for (auto& v : data) v = normal(rng);
  for (std::size_t i = 0; i < rows; ++i) {
    ids.push_back(year_ids ? std::to_string(1950 + i) : "img_" + std::to_string(i));
  }
  return {std::move(ids), std::move(data), dim};
}

std::vector<int> random_years(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> out(n);
  for (auto& y : out) y = 1950 + static_cast<int>(rng() % 50);
  return out;
}

}  // namespace

static void BM_ZeroShotPredict(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(1));
  const auto images = random_matrix(static_cast<std::size_t>(state.range(0)), dim, 1);
  const YearPromptSet prompts(random_matrix(50, dim, 2, true));
  for (auto _ : state) benchmark::DoNotOptimize(zero_shot_predict(images, prompts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ZeroShotPredict)->Args({1000, 512})->Args({8000, 1024})->Unit(benchmark::kMillisecond);

static void BM_ProbeObjective(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  const auto x = random_matrix(n, dim, 3);
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i % 50;
  const auto params = ProbeParameters::zeros(dim, 50);
  ProbeParameters grad;
  for (auto _ : state) benchmark::DoNotOptimize(probe_objective(params, x, labels, 1e-4, &grad));
}
BENCHMARK(BM_ProbeObjective)->Args({4000, 512})->Args({32000, 1024})->Unit(benchmark::kMillisecond);

static void BM_TrainProbe(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(n, 64, 4);
  const auto years = random_years(n, 5);
  TrainConfig config;
  config.max_iters = 50;
  for (auto _ : state) benchmark::DoNotOptimize(train_probe(x, years, config));
}
BENCHMARK(BM_TrainProbe)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_KsTwoSample(benchmark::State& state) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  std::vector<double> a(static_cast<std::size_t>(state.range(0))), b(a.size());
  for (auto& v : a) v = std::round(10 * normal(rng));
  for (auto& v : b) v = std::round(10 * normal(rng));
  for (auto _ : state) benchmark::DoNotOptimize(ks_two_sample(a, b));
}
BENCHMARK(BM_KsTwoSample)->Arg(200)->Arg(8000);

static void BM_Hdi(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  std::vector<double> s(static_cast<std::size_t>(state.range(0)));
  for (auto& v : s) v = normal(rng);
  for (auto _ : state) benchmark::DoNotOptimize(hdi(s, 0.95));
}
BENCHMARK(BM_Hdi)->Arg(4000)->Arg(100000);

static void BM_NbRegression(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(8);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::uint8_t> x(n);
  std::vector<std::int64_t> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = coin(rng);
    const double mu = std::exp(2.0 - 0.3 * x[i]);
    std::gamma_distribution<double> gamma(5.0, mu / 5.0);
    y[i] = std::poisson_distribution<std::int64_t>(gamma(rng))(rng);
  }
  McmcConfig config;
  config.seed = 9;
  for (auto _ : state) benchmark::DoNotOptimize(fit_nb_regression(x, y, config));
}
BENCHMARK(BM_NbRegression)->Arg(5000)->Arg(40000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
