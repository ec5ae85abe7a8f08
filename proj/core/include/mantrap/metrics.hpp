// ============================================================================
// metrics.hpp -- pseudo-volume metrics of a passage
//
// For every frame t the normalized matrix is summed per transmitter (rows)
// and per receiver (columns):
//   V_TX(t) = sum_i sum_{j!=i} xN(i,j,t)      V_RX(t) = sum_j sum_{i!=j} xN(i,j,t)
// A passage is summarised by the profile areas and the variances of the
// profiles over the segment:
//   M1 = sum_t V_TX(t)   M2 = var_t V_TX(t)   M3 = sum_t V_RX(t)   M4 = var_t V_RX(t)
//
// In Literal mode both sums are taken inside one frame, so M1 == M3 and
// M2 == M4. Staggered mode keeps each sample on its own 5 ms row instant and
// evaluates receiver j at its own transmit slot: transmitters i < j have
// already been sampled in the current frame, i > j contribute the sample from
// the previous frame. The first frame of a segment has no predecessor and
// uses its own samples.
// ============================================================================
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mantrap/acquisition.hpp"
#include "mantrap/calibration.hpp"
#include "mantrap/preprocess.hpp"

namespace mantrap {

enum class SumMode { Literal, Staggered };

std::string_view to_string(SumMode mode) noexcept;
/// Throws InvalidConfig for anything but "literal" / "staggered".
SumMode parse_sum_mode(std::string_view text);

using DeviceSums = std::array<double, kDevices>;

/// S_TX(i) = sum over receivers j != i. Diagonal entries are ignored.
[[nodiscard]] DeviceSums row_sums(const ChannelMatrix& values) noexcept;
/// S_RX(j) = sum over transmitters i != j.
[[nodiscard]] DeviceSums col_sums(const ChannelMatrix& values) noexcept;

struct VolumeProfiles {
  std::vector<double> v_tx;
  std::vector<double> v_rx;
  SumMode mode = SumMode::Staggered;
};

[[nodiscard]] VolumeProfiles volume_profiles(const NormalizedSegment& segment, SumMode mode);

/// Fixed-size running mean and population variance:
///   mu(t)  = ((t-1)/t) mu(t-1) + V(t)/t
///   var(t) = ((t-1)/t) var(t-1) + (V(t) - mu(t))^2 / (t-1),   var(1) = 0
class StreamingMoments {
 public:
  void push(double value) noexcept;

  [[nodiscard]] double mean() const noexcept { return mean_; }
  [[nodiscard]] double variance() const noexcept { return var_; }
  [[nodiscard]] std::int64_t count() const noexcept { return count_; }

 private:
  double mean_ = 0.0;
  double var_ = 0.0;
  std::int64_t count_ = 0;
};

[[nodiscard]] StreamingMoments accumulate_moments(StreamingMoments m, double value) noexcept;

struct MetricVector {
  double v_tx_hat = 0.0;  // M1
  double v_rx_hat = 0.0;  // M3
  double var_tx = 0.0;    // M2
  double var_rx = 0.0;    // M4
  std::int64_t n_f = 0;
};

/// Single pass over a normalized segment. Throws EmptySegment.
[[nodiscard]] MetricVector compute_metrics(const NormalizedSegment& segment, SumMode mode);

/// Computes the same MetricVector directly from raw segment frames with O(1)
/// state, without buffering the segment. The per-channel minimum is only known
/// at the end, but it enters every normalized sample of a channel as the same
/// additive constant min/c, so
///   V(t) = 30 + K - sum_ij x(i,j,t)/c(i,j),   K = sum_ij min(i,j)/c(i,j)
/// and the profile variance does not depend on K at all.
class StreamingMetrics {
 public:
  StreamingMetrics(const CalibrationTable& calibration, SumMode mode);

  void push(const SensorFrame& frame);
  /// Throws EmptySegment when no frame was pushed.
  [[nodiscard]] MetricVector finish() const;

  [[nodiscard]] std::int64_t count() const noexcept { return tx_.count(); }
  /// Bytes of mutable state; constant in the number of frames pushed.
  [[nodiscard]] std::size_t state_size() const noexcept;

 private:
  ChannelMatrix inverse_factor_;
  SumMode mode_;
  ChannelMatrix minima_;
  ChannelMatrix previous_;  // x/c of the previous frame (staggered mode)
  std::array<double, kDevices> previous_time_{};
  StreamingMoments tx_;
  StreamingMoments rx_;
  double sum_tx_ = 0.0;
  double sum_rx_ = 0.0;
};

}  // namespace mantrap
