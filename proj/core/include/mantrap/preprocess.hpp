#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mantrap/acquisition.hpp"
#include "mantrap/calibration.hpp"

namespace mantrap {

/// Frames between entrance-door closure and exit-door opening of one transit.
struct PassageSegment {
  std::vector<SensorFrame> frames;
  EventTimeline timeline;
  std::optional<int> label;  // ground-truth person count, when known

  [[nodiscard]] std::size_t size() const noexcept { return frames.size(); }
};

/// Per-channel normalized and reversed samples:
///   xN(t) = 1 - (xF(t) - min_t xF) / c
/// The minimum is taken per channel over the segment. Values below 0 are kept.
struct NormalizedSegment {
  std::vector<ChannelMatrix> values;  // diagonal entries are 0
  std::vector<double> t0_ms;          // frame start times; row i sampled at t0 + 5(i-1)

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] double sample_time(std::size_t t, int tx) const noexcept {
    return t0_ms[t] + kRowStaggerMs * (tx - 1);
  }
};

/// Frames with t_enter_closed <= seq < t_exit_open. Throws EmptySegment.
[[nodiscard]] PassageSegment extract_segment(std::span<const SensorFrame> frames, const EventTimeline& timeline);

/// Throws MissingCalibration for an unfinalized or invalid table and
/// EmptySegment for a segment without frames.
[[nodiscard]] NormalizedSegment normalize_segment(const PassageSegment& segment, const CalibrationTable& calibration);

}  // namespace mantrap
