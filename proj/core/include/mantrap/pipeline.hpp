// ============================================================================
// pipeline.hpp -- calibration, extraction, metrics and decisions over a stream
//
// Two drivers share the same calibration and door-event logic:
//   analyze_frames      batch: buffers each passage segment and runs
//                       extract -> normalize -> compute_metrics
//   StreamingDetector   real time: constant-size state per passage, verdict
//                       emitted on the exit-open frame itself
// Calibration runs whenever the cabin is empty and closed; a quiet window of
// at least the minimum length is finalized when it ends and replaces the
// previous table.
// ============================================================================
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mantrap/acquisition.hpp"
#include "mantrap/calibration.hpp"
#include "mantrap/decision.hpp"
#include "mantrap/metrics.hpp"

namespace mantrap {

class CalibrationTracker {
 public:
  explicit CalibrationTracker(std::int64_t min_frames = kDefaultMinCalibrationFrames,
                              std::optional<CalibrationTable> initial = std::nullopt)
      : min_frames_(min_frames), table_(std::move(initial)) {}

  /// Returns the diagnostic code when a finished window could not be used.
  std::optional<ErrorCode> feed(const SensorFrame& frame);

  [[nodiscard]] const std::optional<CalibrationTable>& table() const noexcept { return table_; }
  [[nodiscard]] std::size_t state_size() const noexcept;

 private:
  std::int64_t min_frames_;
  CalibrationAccumulator acc_;
  std::optional<CalibrationTable> table_;
};

struct PassageResult {
  EventTimeline timeline;
  MetricVector metrics;
};

struct StreamAnalysis {
  std::vector<PassageResult> passages;
  std::vector<Diagnostic> diagnostics;
};

struct AnalysisOptions {
  SumMode mode = SumMode::Staggered;
  std::int64_t min_calibration_frames = kDefaultMinCalibrationFrames;
  std::optional<CalibrationTable> calibration;  // used until the stream provides its own
};

/// Throws MissingCalibration when a passage starts before any table exists.
[[nodiscard]] StreamAnalysis analyze_frames(std::span<const SensorFrame> frames, const AnalysisOptions& options = {});
[[nodiscard]] StreamAnalysis analyze_records(std::span<const Record> records, const AnalysisOptions& options = {});

struct PassageDecision {
  std::int64_t passage = 0;  // 0-based count of decisions emitted so far
  EventTimeline timeline;    // t_start, t_enter_closed, t_exit_open
  MetricVector metrics;
  double probability = 0.0;
  Verdict verdict = Verdict::SinglePerson;
  std::int64_t emitted_at_seq = 0;
};

class StreamingDetector {
 public:
  StreamingDetector(DecisionModel model, AnalysisOptions options);

  /// Feeds one bus record. Throws MissingCalibration when a passage begins
  /// with no calibration table; every other stream defect is a diagnostic.
  std::optional<PassageDecision> push(const Record& record);
  std::optional<PassageDecision> push_frame(const SensorFrame& frame);
  /// Flushes a trailing partial sweep.
  void finish();

  [[nodiscard]] std::size_t diagnostic_count() const noexcept {
    return assembler_.diagnostic_count() + stream_diagnostics_;
  }
  [[nodiscard]] const FrameAssembler& assembler() const noexcept { return assembler_; }
  [[nodiscard]] const std::optional<CalibrationTable>& calibration() const noexcept { return calibration_.table(); }

  /// Bytes of per-stream mutable state (structural; excludes the model).
  [[nodiscard]] std::size_t state_size() const noexcept;

 private:
  DecisionModel model_;
  AnalysisOptions options_;
  FrameAssembler assembler_;
  EventTracker tracker_;
  CalibrationTracker calibration_;
  std::optional<StreamingMetrics> metrics_;
  std::int64_t decisions_ = 0;
  std::size_t stream_diagnostics_ = 0;
};

}  // namespace mantrap
