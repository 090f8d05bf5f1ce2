#include <mpmf/mpmf.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace {

mpmf::BinaryDataset gaussian_data(Eigen::Index n, Eigen::Index dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(n, dim);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = i % 3 == 0 ? 1 : -1;
    labels[static_cast<std::size_t>(i)] = y;
    for (Eigen::Index j = 0; j < dim; ++j) x(i, j) = normal(rng) + (y > 0 ? 1.0 : 0.0);
  }
  return mpmf::BinaryDataset::from_parts(std::move(x), std::move(labels));
}

void BM_EstimateMoments(benchmark::State& state) {
  const auto data = gaussian_data(state.range(0), 20, 1);
  for (auto _ : state) benchmark::DoNotOptimize(mpmf::estimate_moments(data));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateMoments)->Arg(1000)->Arg(10000);

void BM_SolveLinear(benchmark::State& state) {
  const auto data = gaussian_data(2000, state.range(0), 2);
  const auto problem = mpmf::MomentProblem::from_moments(mpmf::estimate_moments(data),
                                                         mpmf::MeasureSpec::fbeta(1.0), 1e-8);
  for (auto _ : state) benchmark::DoNotOptimize(mpmf::solve(problem));
}
BENCHMARK(BM_SolveLinear)->Arg(2)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Gram(benchmark::State& state) {
  const auto data = gaussian_data(state.range(0), 10, 3);
  const auto spec = mpmf::KernelSpec::rbf(0.1);
  const Eigen::MatrixXd pos = data.class_rows(1);
  const Eigen::MatrixXd neg = data.class_rows(-1);
  for (auto _ : state) benchmark::DoNotOptimize(mpmf::gram(spec, pos, neg));
}
BENCHMARK(BM_Gram)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
