#include "mantrap/metrics.hpp"

#include <algorithm>
#include <string>

namespace mantrap {

std::string_view to_string(SumMode mode) noexcept {
  return mode == SumMode::Literal ? "literal" : "staggered";
}

SumMode parse_sum_mode(std::string_view text) {
  if (text == "literal") return SumMode::Literal;
  if (text == "staggered") return SumMode::Staggered;
  throw Error(ErrorCode::InvalidConfig, "unknown metrics mode '" + std::string(text) + "'");
}

DeviceSums row_sums(const ChannelMatrix& values) noexcept {
  DeviceSums s{};
  for (int i = 1; i <= kDevices; ++i) {
    for (int j = 1; j <= kDevices; ++j) {
      if (i != j) s[static_cast<std::size_t>(i - 1)] += values(i, j);
    }
  }
  return s;
}

DeviceSums col_sums(const ChannelMatrix& values) noexcept {
  DeviceSums s{};
  for (int j = 1; j <= kDevices; ++j) {
    for (int i = 1; i <= kDevices; ++i) {
      if (i != j) s[static_cast<std::size_t>(j - 1)] += values(i, j);
    }
  }
  return s;
}

namespace {

using RowTimes = std::array<double, kDevices>;

double total(const DeviceSums& s) noexcept {
  double v = 0.0;
  for (double x : s) v += x;
  return v;
}

RowTimes row_times(double t0_ms) noexcept {
  RowTimes times{};
  for (int i = 1; i <= kDevices; ++i) times[static_cast<std::size_t>(i - 1)] = t0_ms + kRowStaggerMs * (i - 1);
  return times;
}

// Receiver sum with every receiver evaluated at its own row instant, picking
// for each transmitter the latest sample taken at or before that instant.
double staggered_rx(const ChannelMatrix& current, const RowTimes& current_times, const ChannelMatrix* previous,
                    const RowTimes& previous_times) noexcept {
  double v = 0.0;
  for (int j = 1; j <= kDevices; ++j) {
    const double instant = current_times[static_cast<std::size_t>(j - 1)];
    double s = 0.0;
    for (int i = 1; i <= kDevices; ++i) {
      if (i == j) continue;
      const auto row = static_cast<std::size_t>(i - 1);
      const bool use_previous = previous != nullptr && current_times[row] > instant && previous_times[row] <= instant;
      s += use_previous ? (*previous)(i, j) : current(i, j);
    }
    v += s;
  }
  return v;
}

}  // namespace

VolumeProfiles volume_profiles(const NormalizedSegment& segment, SumMode mode) {
  VolumeProfiles p;
  p.mode = mode;
  p.v_tx.reserve(segment.size());
  p.v_rx.reserve(segment.size());
  for (std::size_t t = 0; t < segment.size(); ++t) {
    const auto& cur = segment.values[t];
    p.v_tx.push_back(total(row_sums(cur)));
    if (mode == SumMode::Literal) {
      p.v_rx.push_back(total(col_sums(cur)));
    } else {
      const ChannelMatrix* prev = t > 0 ? &segment.values[t - 1] : nullptr;
      const RowTimes prev_times = t > 0 ? row_times(segment.t0_ms[t - 1]) : RowTimes{};
      p.v_rx.push_back(staggered_rx(cur, row_times(segment.t0_ms[t]), prev, prev_times));
    }
  }
  return p;
}

void StreamingMoments::push(double value) noexcept {
  ++count_;
  if (count_ == 1) {
    mean_ = value;
    var_ = 0.0;
    return;
  }
  const double t = static_cast<double>(count_);
  mean_ += (value - mean_) / t;
  const double d = value - mean_;
  var_ = ((t - 1.0) / t) * var_ + (1.0 / (t - 1.0)) * d * d;
}

StreamingMoments accumulate_moments(StreamingMoments m, double value) noexcept {
  m.push(value);
  return m;
}

MetricVector compute_metrics(const NormalizedSegment& segment, SumMode mode) {
  if (segment.size() == 0) throw Error(ErrorCode::EmptySegment, "cannot compute metrics of an empty segment");

  StreamingMoments tx;
  StreamingMoments rx;
  MetricVector m;
  RowTimes prev_times{};
  for (std::size_t t = 0; t < segment.size(); ++t) {
    const auto& cur = segment.values[t];
    const RowTimes times = row_times(segment.t0_ms[t]);
    const double v_tx = total(row_sums(cur));
    const double v_rx = mode == SumMode::Literal
                            ? total(col_sums(cur))
                            : staggered_rx(cur, times, t > 0 ? &segment.values[t - 1] : nullptr, prev_times);
    m.v_tx_hat += v_tx;
    m.v_rx_hat += v_rx;
    tx.push(v_tx);
    rx.push(v_rx);
    prev_times = times;
  }
  m.var_tx = tx.variance();
  m.var_rx = rx.variance();
  m.n_f = static_cast<std::int64_t>(segment.size());
  return m;
}

// ---------------------------------------------------------------------------
// StreamingMetrics
// ---------------------------------------------------------------------------

StreamingMetrics::StreamingMetrics(const CalibrationTable& calibration, SumMode mode) : mode_(mode) {
  if (!calibration.valid()) throw Error(ErrorCode::MissingCalibration, "no valid calibration table");
  for (const auto& ch : all_channels()) inverse_factor_.at_id(ch.id) = 1.0 / calibration.factors.at_id(ch.id);
}

void StreamingMetrics::push(const SensorFrame& frame) {
  ChannelMatrix scaled = ChannelMatrix::filled(0.0);
  for (const auto& ch : all_channels()) {
    const double x = frame.samples.at_id(ch.id);
    scaled.at_id(ch.id) = x * inverse_factor_.at_id(ch.id);
    minima_.at_id(ch.id) = tx_.count() == 0 ? x : std::min(minima_.at_id(ch.id), x);
  }

  // V(t) - 30 - K
  const double w_tx = -total(row_sums(scaled));
  const RowTimes times = row_times(frame.t0_ms);
  const double w_rx = mode_ == SumMode::Literal
                          ? -total(col_sums(scaled))
                          : -staggered_rx(scaled, times, tx_.count() > 0 ? &previous_ : nullptr, previous_time_);

  tx_.push(w_tx);
  rx_.push(w_rx);
  sum_tx_ += w_tx;
  sum_rx_ += w_rx;
  previous_ = scaled;
  previous_time_ = times;
}

MetricVector StreamingMetrics::finish() const {
  if (tx_.count() == 0) throw Error(ErrorCode::EmptySegment, "no frames between the door events");
  double k = 0.0;
  for (const auto& ch : all_channels()) k += minima_.at_id(ch.id) * inverse_factor_.at_id(ch.id);

  const double n = static_cast<double>(tx_.count());
  MetricVector m;
  m.v_tx_hat = n * (kChannels + k) + sum_tx_;
  m.v_rx_hat = n * (kChannels + k) + sum_rx_;
  m.var_tx = tx_.variance();
  m.var_rx = rx_.variance();
  m.n_f = tx_.count();
  return m;
}

std::size_t StreamingMetrics::state_size() const noexcept {
  return sizeof(inverse_factor_) + sizeof(mode_) + sizeof(minima_) + sizeof(previous_) + sizeof(previous_time_) +
         sizeof(tx_) + sizeof(rx_) + sizeof(sum_tx_) + sizeof(sum_rx_);
}

}  // namespace mantrap
