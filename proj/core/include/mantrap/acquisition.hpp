// ============================================================================
// acquisition.hpp -- frame/stream data model for the 6-device transceiver array
//
// Device i transmits while every other device j receives; the sample x(i,j)
// is carried on the bus with a numerical channel id 6(i-1)+(j-1). One sweep
// over all six transmitters is a frame: rows are acquired 5 ms apart and a
// full frame takes 30 ms. Diagonal channels (a device receiving its own
// transmission) never occur.
// ============================================================================
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mantrap/error.hpp"

namespace mantrap {

inline constexpr int kDevices = 6;
inline constexpr int kChannels = kDevices * (kDevices - 1);  // 30 off-diagonal
inline constexpr double kRowStaggerMs = 5.0;
inline constexpr double kFrameMs = 30.0;

struct ChannelId {
  int tx = 0;  // 1..6
  int rx = 0;  // 1..6
  int id = 0;  // 0..35, never on the diagonal

  friend bool operator==(const ChannelId&, const ChannelId&) = default;
};

/// Maps a (transmitter, receiver) pair to its bus id. Throws DiagonalChannel
/// for tx == rx and OutOfRange for indices outside 1..6.
ChannelId channel_id(int tx, int rx);

/// Inverse of channel_id over the 30 off-diagonal ids.
ChannelId id_to_channel(int id);

/// All 30 off-diagonal channels in ascending id order.
const std::array<ChannelId, kChannels>& all_channels() noexcept;

/// 6x6 matrix indexed by 1-based (tx, rx). Diagonal cells hold NaN until set.
class ChannelMatrix {
 public:
  ChannelMatrix() { cells_.fill(std::numeric_limits<double>::quiet_NaN()); }

  static ChannelMatrix filled(double off_diagonal);

  [[nodiscard]] double operator()(int tx, int rx) const { return cells_[index(tx, rx)]; }
  double& operator()(int tx, int rx) { return cells_[index(tx, rx)]; }

  [[nodiscard]] double at_id(int id) const { return cells_[static_cast<std::size_t>(id)]; }
  double& at_id(int id) { return cells_[static_cast<std::size_t>(id)]; }

  friend bool operator==(const ChannelMatrix&, const ChannelMatrix&) = default;

 private:
  static std::size_t index(int tx, int rx) {
    return static_cast<std::size_t>(kDevices * (tx - 1) + (rx - 1));
  }
  std::array<double, kDevices * kDevices> cells_;
};

/// Cabin status byte: bit0 entrance open, bit1 exit open, bit2 presence.
struct StatusFlags {
  bool entrance_open = false;
  bool exit_open = false;
  bool presence = false;

  [[nodiscard]] std::uint8_t to_byte() const noexcept;
  /// Throws OutOfRange when any of bits 3..7 is set.
  static StatusFlags from_byte(int byte);

  friend bool operator==(const StatusFlags&, const StatusFlags&) = default;
};

/// One sample as it arrives on the bus.
struct Record {
  std::int64_t seq = 0;   // acquisition sweep counter
  std::uint8_t status = 0;
  int id = 0;
  double value = 0.0;
  std::optional<double> time_ms;  // explicit sample time, when the source provides one

  friend bool operator==(const Record&, const Record&) = default;
};

struct SensorFrame {
  std::int64_t seq = 0;
  double t0_ms = 0.0;
  ChannelMatrix samples;
  StatusFlags status;

  /// Implicit timestamp of row `tx`: t0 + 5 (tx - 1) ms.
  [[nodiscard]] double sample_time(int tx) const noexcept {
    return t0_ms + kRowStaggerMs * (tx - 1);
  }
};

/// Re-serialises a frame into its 30 records (ascending id, no explicit time).
std::vector<Record> to_records(const SensorFrame& frame);

struct Diagnostic {
  ErrorCode code;
  std::int64_t seq;
  int count;  // samples held by the sweep when it was dropped
};

/// Streaming single-consumer frame builder. A sweep is identified by its seq;
/// a frame is emitted as soon as its 30th distinct channel arrives.
class FrameAssembler {
 public:
  /// Returns the completed frame, if this record completed one.
  std::optional<SensorFrame> push(const Record& record);

  /// Flushes the pending sweep at end of stream (partial sweeps are dropped).
  void finish();

  [[nodiscard]] const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

  /// Caps the number of retained diagnostics; older ones are counted but discarded.
  void set_diagnostic_limit(std::size_t limit) noexcept { diagnostic_limit_ = limit; }
  [[nodiscard]] std::size_t diagnostic_count() const noexcept { return diagnostic_count_; }

  /// Bytes of mutable state, excluding retained diagnostics.
  [[nodiscard]] std::size_t state_size() const noexcept;

 private:
  void report(ErrorCode code, std::int64_t seq, int count);
  void start_sweep(const Record& record);

  bool active_ = false;
  bool poisoned_ = false;
  bool emitted_ = false;
  std::int64_t seq_ = 0;
  int count_ = 0;
  std::array<bool, kDevices * kDevices> seen_{};
  SensorFrame pending_;
  std::vector<Diagnostic> diagnostics_;
  std::size_t diagnostic_limit_ = std::numeric_limits<std::size_t>::max();
  std::size_t diagnostic_count_ = 0;
};

struct AssemblyResult {
  std::vector<SensorFrame> frames;
  std::vector<Diagnostic> diagnostics;
};

AssemblyResult assemble_frames(std::span<const Record> records);

/// Frame seq numbers of the four door transitions of one passage cycle.
struct EventTimeline {
  std::optional<std::int64_t> t_start;
  std::optional<std::int64_t> t_enter_closed;
  std::optional<std::int64_t> t_exit_open;
  std::optional<std::int64_t> t_exit_closed;

  [[nodiscard]] bool complete() const noexcept {
    return t_start && t_enter_closed && t_exit_open && t_exit_closed;
  }
  friend bool operator==(const EventTimeline&, const EventTimeline&) = default;
};

enum class DoorEvent { EntranceOpened, EntranceClosed, ExitOpened, ExitClosed };

/// Door-transition state machine shared by the batch scan and the streaming
/// detector. Throws MalformedCycle on out-of-order transitions and resets.
class EventTracker {
 public:
  enum class Phase { Idle, EntranceOpen, Sealed, ExitOpen };

  /// Feeds one frame's status; returns the transition it completes, if any.
  std::optional<DoorEvent> feed(std::int64_t seq, StatusFlags status);

  [[nodiscard]] Phase phase() const noexcept { return phase_; }
  [[nodiscard]] const EventTimeline& timeline() const noexcept { return timeline_; }
  void reset() noexcept;

 private:
  Phase phase_ = Phase::Idle;
  StatusFlags last_;
  EventTimeline timeline_;
};

/// Timeline of the first passage cycle in the frames, or nullopt when the
/// doors never move. An unfinished cycle returns the transitions seen so far.
std::optional<EventTimeline> detect_events(std::span<const SensorFrame> frames);

/// Every complete cycle in the frames, in order.
std::vector<EventTimeline> detect_all_events(std::span<const SensorFrame> frames);

}  // namespace mantrap
