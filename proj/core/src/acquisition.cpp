#include "mantrap/acquisition.hpp"

#include <string>

namespace mantrap {

ChannelId channel_id(int tx, int rx) {
  if (tx < 1 || tx > kDevices || rx < 1 || rx > kDevices) {
    throw Error(ErrorCode::OutOfRange,
                "device indices (" + std::to_string(tx) + "," + std::to_string(rx) + ") outside 1..6");
  }
  if (tx == rx) {
    throw Error(ErrorCode::DiagonalChannel, "device " + std::to_string(tx) + " cannot receive itself");
  }
  return ChannelId{tx, rx, kDevices * (tx - 1) + (rx - 1)};
}

ChannelId id_to_channel(int id) {
  if (id < 0 || id >= kDevices * kDevices) {
    throw Error(ErrorCode::OutOfRange, "channel id " + std::to_string(id) + " outside 0..35");
  }
  const int tx = id / kDevices + 1;
  const int rx = id % kDevices + 1;
  if (tx == rx) {
    throw Error(ErrorCode::DiagonalChannel, "channel id " + std::to_string(id) + " is on the diagonal");
  }
  return ChannelId{tx, rx, id};
}

const std::array<ChannelId, kChannels>& all_channels() noexcept {
  static const std::array<ChannelId, kChannels> channels = [] {
    std::array<ChannelId, kChannels> out{};
    std::size_t k = 0;
    for (int tx = 1; tx <= kDevices; ++tx) {
      for (int rx = 1; rx <= kDevices; ++rx) {
        if (tx != rx) out[k++] = ChannelId{tx, rx, kDevices * (tx - 1) + (rx - 1)};
      }
    }
    return out;
  }();
  return channels;
}

ChannelMatrix ChannelMatrix::filled(double off_diagonal) {
  ChannelMatrix m;
  for (const auto& ch : all_channels()) m.at_id(ch.id) = off_diagonal;
  return m;
}

std::uint8_t StatusFlags::to_byte() const noexcept {
  return static_cast<std::uint8_t>((entrance_open ? 1 : 0) | (exit_open ? 2 : 0) | (presence ? 4 : 0));
}

StatusFlags StatusFlags::from_byte(int byte) {
  if (byte < 0 || byte > 7) {
    throw Error(ErrorCode::OutOfRange, "status byte " + std::to_string(byte) + " has reserved bits set");
  }
  return StatusFlags{(byte & 1) != 0, (byte & 2) != 0, (byte & 4) != 0};
}

std::vector<Record> to_records(const SensorFrame& frame) {
  std::vector<Record> out;
  out.reserve(kChannels);
  const auto status = frame.status.to_byte();
  for (const auto& ch : all_channels()) {
    out.push_back(Record{frame.seq, status, ch.id, frame.samples.at_id(ch.id), std::nullopt});
  }
  return out;
}

// ---------------------------------------------------------------------------
// FrameAssembler
// ---------------------------------------------------------------------------

void FrameAssembler::report(ErrorCode code, std::int64_t seq, int count) {
  ++diagnostic_count_;
  if (diagnostics_.size() < diagnostic_limit_) diagnostics_.push_back(Diagnostic{code, seq, count});
}

void FrameAssembler::start_sweep(const Record& record) {
  active_ = true;
  poisoned_ = false;
  emitted_ = false;
  seq_ = record.seq;
  count_ = 0;
  seen_.fill(false);
  pending_ = SensorFrame{};
  pending_.seq = record.seq;
  pending_.status = StatusFlags::from_byte(record.status);
  const int row = record.id / kDevices + 1;
  pending_.t0_ms = record.time_ms ? *record.time_ms - kRowStaggerMs * (row - 1)
                                  : static_cast<double>(record.seq) * kFrameMs;
}

std::optional<SensorFrame> FrameAssembler::push(const Record& record) {
  const ChannelId ch = id_to_channel(record.id);

  if (!active_ || record.seq != seq_) {
    finish();
    start_sweep(record);
  }
  if (poisoned_) return std::nullopt;

  auto& seen = seen_[static_cast<std::size_t>(ch.id)];
  if (seen) {
    report(ErrorCode::DuplicateChannel, seq_, count_);
    poisoned_ = true;
    return std::nullopt;
  }
  seen = true;
  pending_.samples.at_id(ch.id) = record.value;
  ++count_;

  if (count_ == kChannels) {
    emitted_ = true;
    return pending_;
  }
  return std::nullopt;
}

void FrameAssembler::finish() {
  if (active_ && !poisoned_ && !emitted_) report(ErrorCode::IncompleteFrame, seq_, count_);
  active_ = false;
}

std::size_t FrameAssembler::state_size() const noexcept {
  return sizeof(active_) + sizeof(poisoned_) + sizeof(emitted_) + sizeof(seq_) + sizeof(count_) +
         sizeof(seen_) + sizeof(pending_);
}

AssemblyResult assemble_frames(std::span<const Record> records) {
  FrameAssembler assembler;
  AssemblyResult result;
  for (const auto& r : records) {
    if (auto frame = assembler.push(r)) result.frames.push_back(std::move(*frame));
  }
  assembler.finish();
  result.diagnostics = assembler.diagnostics();
  return result;
}

// ---------------------------------------------------------------------------
// Door events
// ---------------------------------------------------------------------------

void EventTracker::reset() noexcept {
  phase_ = Phase::Idle;
  last_ = StatusFlags{};
  timeline_ = EventTimeline{};
}

std::optional<DoorEvent> EventTracker::feed(std::int64_t seq, StatusFlags status) {
  const bool entrance_rose = status.entrance_open && !last_.entrance_open;
  const bool entrance_fell = !status.entrance_open && last_.entrance_open;
  const bool exit_rose = status.exit_open && !last_.exit_open;
  const bool exit_fell = !status.exit_open && last_.exit_open;
  last_ = status;

  auto malformed = [&](const char* what) {
    const auto at = std::to_string(seq);
    reset();
    last_ = status;
    throw Error(ErrorCode::MalformedCycle, std::string(what) + " at frame " + at);
  };

  if (status.entrance_open && status.exit_open) malformed("both doors open");

  std::optional<DoorEvent> event;
  switch (phase_) {
    case Phase::Idle:
      if (exit_rose) malformed("exit opened without an entrance cycle");
      if (entrance_rose) {
        timeline_ = EventTimeline{};
        timeline_.t_start = seq;
        phase_ = Phase::EntranceOpen;
        event = DoorEvent::EntranceOpened;
      }
      break;
    case Phase::EntranceOpen:
      if (entrance_fell) {
        timeline_.t_enter_closed = seq;
        phase_ = Phase::Sealed;
        event = DoorEvent::EntranceClosed;
      }
      break;
    case Phase::Sealed:
      if (entrance_rose) malformed("entrance reopened before exit");
      if (exit_rose) {
        timeline_.t_exit_open = seq;
        phase_ = Phase::ExitOpen;
        event = DoorEvent::ExitOpened;
      }
      break;
    case Phase::ExitOpen:
      if (entrance_rose) malformed("entrance opened while exit open");
      if (exit_fell) {
        timeline_.t_exit_closed = seq;
        phase_ = Phase::Idle;
        event = DoorEvent::ExitClosed;
      }
      break;
  }
  return event;
}

std::optional<EventTimeline> detect_events(std::span<const SensorFrame> frames) {
  EventTracker tracker;
  bool started = false;
  for (const auto& f : frames) {
    const auto event = tracker.feed(f.seq, f.status);
    if (event == DoorEvent::EntranceOpened) started = true;
    if (event == DoorEvent::ExitClosed) return tracker.timeline();
  }
  if (!started) return std::nullopt;
  return tracker.timeline();
}

std::vector<EventTimeline> detect_all_events(std::span<const SensorFrame> frames) {
  EventTracker tracker;
  std::vector<EventTimeline> out;
  for (const auto& f : frames) {
    if (tracker.feed(f.seq, f.status) == DoorEvent::ExitClosed) out.push_back(tracker.timeline());
  }
  return out;
}

}  // namespace mantrap
