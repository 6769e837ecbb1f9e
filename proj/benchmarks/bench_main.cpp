#include <tfcsp/csp.hpp>
#include <tfcsp/iir.hpp>
#include <tfcsp/jad.hpp>
#include <tfcsp/pipeline.hpp>
#include <tfcsp/stft.hpp>
#include <tfcsp/synth.hpp>
#include <tfcsp/tfa.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace tfcsp;

namespace {

Eigen::MatrixXd noise(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

std::vector<SymMatrix> class_covs(int classes, int n) {
  std::vector<SymMatrix> covs;
  for (int c = 0; c < classes; ++c) covs.push_back(trial_covariance(noise(n, 250, 100 + c)));
  return covs;
}

void BM_FilterDesign(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(design_butterworth_bandpass(8, 8.0, 30.0, 250.0));
}
BENCHMARK(BM_FilterDesign);

void BM_ZeroPhaseFilterEpoch(benchmark::State& state) {
  const IirFilter f = design_butterworth_bandpass(8, 8.0, 30.0, 250.0);
  const Eigen::MatrixXd x = noise(static_cast<int>(state.range(0)), 1000, 1);
  for (auto _ : state) benchmark::DoNotOptimize(filter_rows(f, x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ZeroPhaseFilterEpoch)->Arg(8)->Arg(22);

void BM_Stft(benchmark::State& state) {
  const Eigen::MatrixXd x = noise(1, 1000, 2);
  const std::vector<double> row(x.data(), x.data() + x.size());
  for (auto _ : state) benchmark::DoNotOptimize(stft(row, kDefaultStftWindow, kDefaultStftHop, 250.0));
}
BENCHMARK(BM_Stft);

void BM_EpochEnergyMatrix(benchmark::State& state) {
  const Eigen::MatrixXd x = noise(static_cast<int>(state.range(0)), 1000, 3);
  const BandGrid grid;
  for (auto _ : state) benchmark::DoNotOptimize(epoch_energy_matrix(x, 250.0, grid));
}
BENCHMARK(BM_EpochEnergyMatrix)->Arg(8)->Arg(22);

void BM_Jad(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto covs = class_covs(4, n);
  for (auto _ : state) benchmark::DoNotOptimize(jad(covs));
}
BENCHMARK(BM_Jad)->Arg(8)->Arg(22);

void BM_MulticlassCsp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto covs = class_covs(4, n);
  for (auto _ : state) benchmark::DoNotOptimize(multiclass_csp(covs));
}
BENCHMARK(BM_MulticlassCsp)->Arg(8)->Arg(22);

void BM_TrainPipeline(benchmark::State& state) {
  static const TrialSet train = generate_synthetic({.seed = 7, .trials_per_class = 20});
  PipelineConfig cfg;
  cfg.method = static_cast<Method>(state.range(0));
  state.SetLabel(std::string(to_string(cfg.method)));
  for (auto _ : state) benchmark::DoNotOptimize(train_pipeline(train, cfg));
}
BENCHMARK(BM_TrainPipeline)
    ->Arg(static_cast<int>(Method::Tfcsp))
    ->Arg(static_cast<int>(Method::Tdcsp))
    ->Arg(static_cast<int>(Method::Fbcsp))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
