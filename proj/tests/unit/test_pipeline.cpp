#include <gtest/gtest.h>

#include <cmath>

#include "mantrap/error.hpp"
#include "mantrap/io.hpp"
#include "mantrap/pipeline.hpp"
#include "mantrap/simulator.hpp"
#include "support.hpp"

namespace mantrap {
namespace {

DecisionModel trained_model() {
  GenerateOptions opt;
  opt.keep_stream = false;
  const auto g = generate_dataset(40, 40, 314, opt);
  std::vector<MetricRow> rows;
  for (const auto& p : g.passages) rows.push_back(MetricRow{p.metrics, p.label});
  DecisionModel dm;
  dm.model = fit_logistic(to_dataset(rows));
  return dm;
}

const DecisionModel& model() {
  static const DecisionModel dm = trained_model();
  return dm;
}

ScenarioConfig one_person() {
  ScenarioConfig cfg;
  cfg.bodies = {BodyProfile{}};
  return cfg;
}

TEST(StreamingDetector, AgreesWithBatchAnalysis) {
  const auto g = generate_dataset(6, 6, 8);
  const auto batch = analyze_records(g.stream);
  StreamingDetector det(model(), AnalysisOptions{});
  std::vector<PassageDecision> out;
  for (const auto& r : g.stream) {
    if (auto d = det.push(r)) out.push_back(*d);
  }
  det.finish();
  ASSERT_EQ(out.size(), batch.passages.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& a = out[i].metrics;
    const auto& b = batch.passages[i].metrics;
    EXPECT_EQ(out[i].passage, static_cast<std::int64_t>(i));
    EXPECT_EQ(out[i].timeline.t_exit_open, batch.passages[i].timeline.t_exit_open);
    EXPECT_EQ(a.n_f, b.n_f);
    EXPECT_NEAR(a.v_tx_hat, b.v_tx_hat, 1e-9 * b.v_tx_hat);
    EXPECT_NEAR(a.v_rx_hat, b.v_rx_hat, 1e-9 * b.v_rx_hat);
    EXPECT_NEAR(a.var_tx, b.var_tx, 1e-6 * b.var_tx + 1e-9);
    EXPECT_NEAR(a.var_rx, b.var_rx, 1e-6 * b.var_rx + 1e-9);
  }
  EXPECT_EQ(det.diagnostic_count(), 0u);
}

TEST(StreamingDetector, VerdictOnTheExitOpenFrame) {
  const auto g = generate_dataset(3, 3, 12);
  StreamingDetector det(model(), AnalysisOptions{});
  for (const auto& r : g.stream) {
    if (auto d = det.push(r)) {
      ASSERT_TRUE(d->timeline.t_exit_open.has_value());
      EXPECT_EQ(d->emitted_at_seq, *d->timeline.t_exit_open);
      EXPECT_EQ(r.seq, d->emitted_at_seq);
    }
  }
}

TEST(StreamingDetector, StateSizeDoesNotGrow) {
  StreamingDetector det(model(), AnalysisOptions{});
  const auto g = generate_dataset(4, 4, 5);
  const auto frames = assemble_frames(g.stream).frames;
  std::size_t at_start = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    (void)det.push_frame(frames[i]);
    if (i == 0) at_start = det.state_size();
  }
  EXPECT_EQ(det.state_size(), at_start);
}

TEST(StreamingDetector, TruncatedStreamDecidesCompletedPassagesOnly) {
  const auto g = generate_dataset(3, 2, 19);
  const auto last = g.passages.back().timeline;
  // Cut inside the last dwell, mid-sweep.
  std::vector<Record> cut;
  for (const auto& r : g.stream) {
    if (r.seq == *last.t_enter_closed + 5 && r.id >= 10) break;
    cut.push_back(r);
  }
  StreamingDetector det(model(), AnalysisOptions{});
  std::size_t decided = 0;
  for (const auto& r : cut) decided += det.push(r).has_value();
  det.finish();
  EXPECT_EQ(decided, g.passages.size() - 1);
  EXPECT_GE(det.diagnostic_count(), 1u);
}

TEST(StreamingDetector, PassageBeforeCalibrationThrows) {
  auto cfg = one_person();
  cfg.motion.quiet_frames = 20;
  const auto s = simulate_passage(cfg);
  StreamingDetector det(model(), AnalysisOptions{});
  try {
    for (const auto& r : s.records) (void)det.push(r);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingCalibration);
  }
  EXPECT_THROW((void)analyze_records(s.records), Error);

  AnalysisOptions seeded;
  seeded.calibration = finalize_calibration([&] {
    CalibrationAccumulator acc;
    for (int t = 0; t < 100; ++t) acc.update(SensorFrame{t, t * kFrameMs, baseline_matrix(cfg), {}});
    return acc;
  }());
  StreamingDetector ok(model(), seeded);
  std::size_t decided = 0;
  for (const auto& r : s.records) decided += ok.push(r).has_value();
  EXPECT_EQ(decided, 1u);
  EXPECT_EQ(analyze_records(s.records, seeded).passages.size(), 1u);
}

TEST(StreamingDetector, RejectsUnfittedModel) {
  try {
    StreamingDetector det(DecisionModel{}, AnalysisOptions{});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnfittedModel);
  }
}

TEST(StreamingDetector, BadRecordsAreSkipped) {
  const auto g = generate_dataset(1, 1, 3);
  StreamingDetector det(model(), AnalysisOptions{});
  std::size_t decided = 0;
  for (std::size_t i = 0; i < g.stream.size(); ++i) {
    if (i == 50) {
      Record bad = g.stream[i];
      bad.id = 7;  // diagonal (2,2)
      (void)det.push(bad);
    }
    decided += det.push(g.stream[i]).has_value();
  }
  EXPECT_EQ(decided, 2u);
  EXPECT_GE(det.diagnostic_count(), 1u);
}

TEST(StreamingDetector, TwoPersonPassagesAreFlagged) {
  const auto& dm = model();
  int flagged = 0;
  const int n = 60;
  for (int k = 0; k < n; ++k) {
    const auto preset = k % 2 ? Preset::Pair : (k % 4 ? Preset::TwoEmbraced : Preset::TwoThinClose);
    const auto s = simulate_passage(sample_scenario(preset, 90000 + k));
    StreamingDetector det(dm, AnalysisOptions{});
    for (const auto& r : s.records) {
      if (auto d = det.push(r)) flagged += d->verdict == Verdict::MultiplePersons;
    }
  }
  EXPECT_GE(flagged, static_cast<int>(std::ceil(0.9 * n)));
}

TEST(AnalyzeFrames, MalformedCycleIsReportedAndSkipped) {
  using testing::constant_frame;
  std::vector<SensorFrame> frames;
  std::int64_t seq = 0;
  for (int i = 0; i < 100; ++i) frames.push_back(constant_frame(seq++, 500.0));
  // Exit opens while the entrance is still open.
  frames.push_back(constant_frame(seq++, 480.0, testing::entrance()));
  frames.push_back(constant_frame(seq++, 480.0, StatusFlags{true, true, true}));
  for (int i = 0; i < 100; ++i) frames.push_back(constant_frame(seq++, 500.0));
  frames.push_back(constant_frame(seq++, 480.0, testing::entrance()));
  for (int i = 0; i < 5; ++i) frames.push_back(constant_frame(seq++, 470.0 + i, testing::sealed()));
  frames.push_back(constant_frame(seq++, 480.0, testing::exit_door()));
  frames.push_back(constant_frame(seq++, 500.0));
  const auto a = analyze_frames(frames);
  ASSERT_EQ(a.passages.size(), 1u);
  EXPECT_EQ(a.passages[0].metrics.n_f, 5);
  ASSERT_FALSE(a.diagnostics.empty());
  EXPECT_EQ(a.diagnostics[0].code, ErrorCode::MalformedCycle);
}

TEST(CalibrationTracker, ShortWindowsAreIgnored) {
  using testing::constant_frame;
  CalibrationTracker tracker(10);
  for (int i = 0; i < 9; ++i) (void)tracker.feed(constant_frame(i, 300.0));
  (void)tracker.feed(constant_frame(9, 300.0, testing::entrance()));
  EXPECT_FALSE(tracker.table().has_value());
  for (int i = 10; i < 20; ++i) (void)tracker.feed(constant_frame(i, 400.0));
  (void)tracker.feed(constant_frame(20, 300.0, testing::entrance()));
  ASSERT_TRUE(tracker.table().has_value());
  EXPECT_EQ(tracker.table()->factor(1, 2), 400.0);
  for (int i = 21; i < 40; ++i) (void)tracker.feed(constant_frame(i, 450.0));
  (void)tracker.feed(constant_frame(40, 300.0, testing::entrance()));
  EXPECT_EQ(tracker.table()->factor(1, 2), 450.0);
  EXPECT_EQ(tracker.table()->n_frames, 19);
}

}  // namespace
}  // namespace mantrap
