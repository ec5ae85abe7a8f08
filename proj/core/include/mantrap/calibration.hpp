#pragma once

#include <cstdint>

#include "mantrap/acquisition.hpp"

namespace mantrap {

inline constexpr std::int64_t kDefaultMinCalibrationFrames = 100;

/// True when both doors are closed and nobody is inside.
[[nodiscard]] bool calibration_window_ok(const SensorFrame& frame) noexcept;

/// Fixed-memory running mean of the empty-cabin signal, one per channel.
///   c(t) = ((t-1)/t) c(t-1) + x(t)/t,  c(1) = x(1)
class CalibrationAccumulator {
 public:
  /// Throws WindowViolation when the frame is not an empty-cabin frame.
  void update(const SensorFrame& frame);

  [[nodiscard]] const ChannelMatrix& running_mean() const noexcept { return mean_; }
  [[nodiscard]] std::int64_t count() const noexcept { return count_; }
  void reset() noexcept { *this = CalibrationAccumulator{}; }

 private:
  ChannelMatrix mean_ = ChannelMatrix::filled(0.0);
  std::int64_t count_ = 0;
};

[[nodiscard]] CalibrationAccumulator update_calibration(CalibrationAccumulator acc, const SensorFrame& frame);

struct CalibrationTable {
  ChannelMatrix factors;
  std::int64_t n_frames = 0;

  [[nodiscard]] double factor(int tx, int rx) const { return factors(tx, rx); }
  /// A table is usable when it was finalized from data and every factor is positive.
  [[nodiscard]] bool valid() const noexcept;
};

/// Throws InsufficientData below `min_frames` and NonPositiveFactor when any
/// channel averages to a value <= 0.
[[nodiscard]] CalibrationTable finalize_calibration(const CalibrationAccumulator& acc,
                                                    std::int64_t min_frames = kDefaultMinCalibrationFrames);

}  // namespace mantrap
