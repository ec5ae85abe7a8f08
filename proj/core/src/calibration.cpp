#include "mantrap/calibration.hpp"

#include <cmath>
#include <string>

namespace mantrap {

bool calibration_window_ok(const SensorFrame& frame) noexcept {
  return !frame.status.entrance_open && !frame.status.exit_open && !frame.status.presence;
}

void CalibrationAccumulator::update(const SensorFrame& frame) {
  if (!calibration_window_ok(frame)) {
    throw Error(ErrorCode::WindowViolation,
                "frame " + std::to_string(frame.seq) + " is not an empty-cabin frame");
  }
  ++count_;
  const double t = static_cast<double>(count_);
  for (const auto& ch : all_channels()) {
    const double x = frame.samples.at_id(ch.id);
    double& c = mean_.at_id(ch.id);
    // ((t-1)/t) c + x/t, rearranged so a constant input stays exactly constant.
    c = count_ == 1 ? x : c + (x - c) / t;
  }
}

CalibrationAccumulator update_calibration(CalibrationAccumulator acc, const SensorFrame& frame) {
  acc.update(frame);
  return acc;
}

bool CalibrationTable::valid() const noexcept {
  if (n_frames <= 0) return false;
  for (const auto& ch : all_channels()) {
    const double c = factors.at_id(ch.id);
    if (!(c > 0.0) || !std::isfinite(c)) return false;
  }
  return true;
}

CalibrationTable finalize_calibration(const CalibrationAccumulator& acc, std::int64_t min_frames) {
  if (acc.count() < min_frames || acc.count() == 0) {
    throw Error(ErrorCode::InsufficientData, std::to_string(acc.count()) + " empty-cabin frames, need " +
                                                 std::to_string(min_frames));
  }
  CalibrationTable table;
  table.n_frames = acc.count();
  for (const auto& ch : all_channels()) {
    const double c = acc.running_mean().at_id(ch.id);
    if (!(c > 0.0)) {
      throw Error(ErrorCode::NonPositiveFactor,
                  "channel (" + std::to_string(ch.tx) + "," + std::to_string(ch.rx) + ") averages to " +
                      std::to_string(c));
    }
    table.factors.at_id(ch.id) = c;
  }
  return table;
}

}  // namespace mantrap
