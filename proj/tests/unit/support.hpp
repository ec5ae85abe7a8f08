// Builders shared by the unit tests.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mantrap/acquisition.hpp"
#include "mantrap/calibration.hpp"
#include "mantrap/preprocess.hpp"

namespace mantrap::testing {

inline SensorFrame frame_with(std::int64_t seq, const std::function<double(int, int)>& value, StatusFlags status = {}) {
  SensorFrame f;
  f.seq = seq;
  f.t0_ms = static_cast<double>(seq) * kFrameMs;
  f.status = status;
  for (const auto& ch : all_channels()) f.samples(ch.tx, ch.rx) = value(ch.tx, ch.rx);
  return f;
}

inline SensorFrame constant_frame(std::int64_t seq, double v, StatusFlags status = {}) {
  return frame_with(seq, [v](int, int) { return v; }, status);
}

inline CalibrationTable constant_table(double v, std::int64_t n = 100) {
  return CalibrationTable{ChannelMatrix::filled(v), n};
}

inline StatusFlags entrance() { return StatusFlags{true, false, true}; }
inline StatusFlags sealed() { return StatusFlags{false, false, true}; }
inline StatusFlags exit_door() { return StatusFlags{false, true, true}; }

/// A segment from explicit frames; the timeline brackets them.
inline PassageSegment segment_of(std::vector<SensorFrame> frames) {
  PassageSegment s;
  s.timeline.t_enter_closed = frames.empty() ? 0 : frames.front().seq;
  s.timeline.t_exit_open = frames.empty() ? 0 : frames.back().seq + 1;
  s.frames = std::move(frames);
  return s;
}

}  // namespace mantrap::testing
