#include "mantrap/pipeline.hpp"

#include "mantrap/preprocess.hpp"

namespace mantrap {

std::optional<ErrorCode> CalibrationTracker::feed(const SensorFrame& frame) {
  if (calibration_window_ok(frame)) {
    acc_.update(frame);
    return std::nullopt;
  }
  std::optional<ErrorCode> problem;
  if (acc_.count() >= min_frames_) {
    try {
      table_ = finalize_calibration(acc_, min_frames_);
    } catch (const Error& e) {
      problem = e.code();
    }
  }
  acc_.reset();
  return problem;
}

std::size_t CalibrationTracker::state_size() const noexcept {
  return sizeof(min_frames_) + sizeof(acc_) + sizeof(table_);
}

StreamAnalysis analyze_frames(std::span<const SensorFrame> frames, const AnalysisOptions& options) {
  StreamAnalysis out;
  CalibrationTracker calibration(options.min_calibration_frames, options.calibration);
  EventTracker tracker;
  std::vector<SensorFrame> segment;
  std::optional<CalibrationTable> segment_table;

  for (const auto& frame : frames) {
    if (auto problem = calibration.feed(frame)) out.diagnostics.push_back(Diagnostic{*problem, frame.seq, 0});

    std::optional<DoorEvent> event;
    try {
      event = tracker.feed(frame.seq, frame.status);
    } catch (const Error& e) {
      out.diagnostics.push_back(Diagnostic{e.code(), frame.seq, 0});
      segment.clear();
      continue;
    }

    if (event == DoorEvent::EntranceClosed) {
      if (!calibration.table()) {
        throw Error(ErrorCode::MissingCalibration,
                    "passage at frame " + std::to_string(frame.seq) + " starts before any calibration");
      }
      segment_table = calibration.table();
      segment.clear();
    }
    if (tracker.phase() == EventTracker::Phase::Sealed) segment.push_back(frame);
    if (event == DoorEvent::ExitOpened) {
      const auto& timeline = tracker.timeline();
      try {
        const auto seg = extract_segment(segment, timeline);
        const auto normalized = normalize_segment(seg, *segment_table);
        out.passages.push_back(PassageResult{timeline, compute_metrics(normalized, options.mode)});
      } catch (const Error& e) {
        if (e.code() == ErrorCode::MissingCalibration) throw;
        out.diagnostics.push_back(Diagnostic{e.code(), frame.seq, 0});
      }
      segment.clear();
    }
  }
  return out;
}

StreamAnalysis analyze_records(std::span<const Record> records, const AnalysisOptions& options) {
  auto assembled = assemble_frames(records);
  auto out = analyze_frames(assembled.frames, options);
  out.diagnostics.insert(out.diagnostics.begin(), assembled.diagnostics.begin(), assembled.diagnostics.end());
  return out;
}

// ---------------------------------------------------------------------------
// StreamingDetector
// ---------------------------------------------------------------------------

StreamingDetector::StreamingDetector(DecisionModel model, AnalysisOptions options)
    : model_(std::move(model)),
      options_(std::move(options)),
      calibration_(options_.min_calibration_frames, options_.calibration) {
  if (!model_.model.converged || model_.model.beta.empty()) {
    throw Error(ErrorCode::UnfittedModel, "decision model is not fitted");
  }
  assembler_.set_diagnostic_limit(64);
}

std::optional<PassageDecision> StreamingDetector::push(const Record& record) {
  std::optional<SensorFrame> frame;
  try {
    frame = assembler_.push(record);
  } catch (const Error&) {
    ++stream_diagnostics_;  // bad id or status byte: skip the record
    return std::nullopt;
  }
  if (!frame) return std::nullopt;
  return push_frame(*frame);
}

std::optional<PassageDecision> StreamingDetector::push_frame(const SensorFrame& frame) {
  if (calibration_.feed(frame)) ++stream_diagnostics_;

  std::optional<DoorEvent> event;
  try {
    event = tracker_.feed(frame.seq, frame.status);
  } catch (const Error&) {
    ++stream_diagnostics_;
    metrics_.reset();
    return std::nullopt;
  }

  if (event == DoorEvent::EntranceClosed) {
    if (!calibration_.table()) {
      throw Error(ErrorCode::MissingCalibration,
                  "passage at frame " + std::to_string(frame.seq) + " starts before any calibration");
    }
    metrics_.emplace(*calibration_.table(), options_.mode);
  }
  if (tracker_.phase() == EventTracker::Phase::Sealed && metrics_) metrics_->push(frame);

  if (event == DoorEvent::ExitOpened && metrics_) {
    PassageDecision d;
    try {
      d.metrics = metrics_->finish();
    } catch (const Error&) {
      ++stream_diagnostics_;
      metrics_.reset();
      return std::nullopt;
    }
    metrics_.reset();
    d.passage = decisions_++;
    d.timeline = tracker_.timeline();
    d.probability = model_.probability(d.metrics);
    d.verdict = decide(d.probability, model_.threshold);
    d.emitted_at_seq = frame.seq;
    return d;
  }
  return std::nullopt;
}

void StreamingDetector::finish() { assembler_.finish(); }

std::size_t StreamingDetector::state_size() const noexcept {
  // std::optional stores the accumulator inline, active or not.
  return assembler_.state_size() + sizeof(tracker_) + calibration_.state_size() + sizeof(metrics_) +
         sizeof(decisions_) + sizeof(stream_diagnostics_) + assembler_.diagnostics().capacity() * sizeof(Diagnostic);
}

}  // namespace mantrap
