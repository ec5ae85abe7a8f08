#include <benchmark/benchmark.h>

#include <random>

#include "mantrap/calibration.hpp"
#include "mantrap/metrics.hpp"
#include "mantrap/pipeline.hpp"
#include "mantrap/regression.hpp"
#include "mantrap/simulator.hpp"

namespace {

using namespace mantrap;

std::vector<SensorFrame> noisy_frames(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z(500.0, 2.0);
  std::vector<SensorFrame> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    out[t].seq = static_cast<std::int64_t>(t);
    out[t].t0_ms = static_cast<double>(t) * kFrameMs;
    for (const auto& ch : all_channels()) out[t].samples.at_id(ch.id) = z(rng);
  }
  return out;
}

void BM_CalibrationUpdate(benchmark::State& state) {
  const auto frames = noisy_frames(1024);
  CalibrationAccumulator acc;
  std::size_t i = 0;
  for (auto _ : state) {
    acc.update(frames[i++ & 1023]);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CalibrationUpdate);

void BM_StreamingMetricsPush(benchmark::State& state) {
  const auto frames = noisy_frames(1024);
  const CalibrationTable table{ChannelMatrix::filled(500.0), 100};
  const auto mode = state.range(0) ? SumMode::Staggered : SumMode::Literal;
  StreamingMetrics metrics(table, mode);
  std::size_t i = 0;
  for (auto _ : state) {
    metrics.push(frames[i++ & 1023]);
    benchmark::DoNotOptimize(metrics);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StreamingMetricsPush)->Arg(0)->Arg(1);

void BM_DetectorPassage(benchmark::State& state) {
  GenerateOptions opt;
  opt.keep_stream = false;
  const auto g = generate_dataset(20, 20, 3, opt);
  Dataset d;
  d.feature_names = default_decision_features();
  for (const auto& p : g.passages) {
    const double row[] = {p.metrics.v_tx_hat, p.metrics.v_rx_hat};
    d.add(row, p.label);
  }
  const DecisionModel dm{fit_logistic(d), 0.5};
  const auto stream = simulate_passage(sample_scenario(Preset::Pair, 9));
  for (auto _ : state) {
    StreamingDetector det(dm, AnalysisOptions{});
    for (const auto& r : stream.records) benchmark::DoNotOptimize(det.push(r));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(stream.frames));
}
BENCHMARK(BM_DetectorPassage);

void BM_FitLogistic(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset d;
  d.feature_names = {"a", "b"};
  for (int i = 0; i < state.range(0); ++i) {
    const double row[] = {z(rng), z(rng)};
    d.add(row, u(rng) < sigmoid(-0.5 + row[0] - 0.7 * row[1]) ? 1.0 : 0.0);
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_logistic(d));
}
BENCHMARK(BM_FitLogistic)->Arg(63)->Arg(500)->Arg(5000);

}  // namespace

BENCHMARK_MAIN();
