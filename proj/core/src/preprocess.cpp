#include "mantrap/preprocess.hpp"

#include <algorithm>
#include <string>

namespace mantrap {

PassageSegment extract_segment(std::span<const SensorFrame> frames, const EventTimeline& timeline) {
  if (!timeline.t_enter_closed || !timeline.t_exit_open) {
    throw Error(ErrorCode::EmptySegment, "timeline lacks entrance-close or exit-open");
  }
  const auto begin = *timeline.t_enter_closed;
  const auto end = *timeline.t_exit_open;
  if (end < begin) throw Error(ErrorCode::MalformedCycle, "exit opens before entrance closes");

  PassageSegment segment;
  segment.timeline = timeline;
  for (const auto& f : frames) {
    if (f.seq >= begin && f.seq < end) segment.frames.push_back(f);
  }
  if (segment.frames.empty()) {
    throw Error(ErrorCode::EmptySegment,
                "no frames in [" + std::to_string(begin) + ", " + std::to_string(end) + ")");
  }
  return segment;
}

NormalizedSegment normalize_segment(const PassageSegment& segment, const CalibrationTable& calibration) {
  if (!calibration.valid()) throw Error(ErrorCode::MissingCalibration, "no valid calibration table");
  if (segment.frames.empty()) throw Error(ErrorCode::EmptySegment, "segment has no frames");

  ChannelMatrix minima = segment.frames.front().samples;
  for (const auto& f : segment.frames) {
    for (const auto& ch : all_channels()) {
      minima.at_id(ch.id) = std::min(minima.at_id(ch.id), f.samples.at_id(ch.id));
    }
  }

  NormalizedSegment out;
  out.values.reserve(segment.frames.size());
  out.t0_ms.reserve(segment.frames.size());
  for (const auto& f : segment.frames) {
    ChannelMatrix n = ChannelMatrix::filled(0.0);
    for (int d = 1; d <= kDevices; ++d) n(d, d) = 0.0;
    for (const auto& ch : all_channels()) {
      n.at_id(ch.id) = 1.0 - (f.samples.at_id(ch.id) - minima.at_id(ch.id)) / calibration.factors.at_id(ch.id);
    }
    out.values.push_back(n);
    out.t0_ms.push_back(f.t0_ms);
  }
  return out;
}

}  // namespace mantrap
