#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "mantrap/acquisition.hpp"
#include "mantrap/error.hpp"
#include "mantrap/simulator.hpp"
#include "support.hpp"

namespace mantrap {
namespace {

using testing::constant_frame;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::Io;
}

TEST(ChannelMap, TableExamples) {
  EXPECT_EQ(channel_id(1, 2).id, 1);
  EXPECT_EQ(channel_id(2, 3).id, 8);
  EXPECT_EQ(channel_id(6, 5).id, 34);
  EXPECT_EQ(id_to_channel(1), (ChannelId{1, 2, 1}));
  EXPECT_EQ(id_to_channel(34), (ChannelId{6, 5, 34}));
}

TEST(ChannelMap, RoundTripsEveryOffDiagonalPair) {
  std::set<int> ids;
  for (int tx = 1; tx <= kDevices; ++tx) {
    for (int rx = 1; rx <= kDevices; ++rx) {
      if (tx == rx) continue;
      const auto ch = channel_id(tx, rx);
      EXPECT_EQ(id_to_channel(ch.id), ch);
      ids.insert(ch.id);
    }
  }
  EXPECT_EQ(ids.size(), static_cast<std::size_t>(kChannels));
  EXPECT_EQ(all_channels().size(), static_cast<std::size_t>(kChannels));
}

TEST(ChannelMap, RejectsDiagonalAndOutOfRange) {
  for (int d = 1; d <= kDevices; ++d) {
    EXPECT_EQ(code_of([&] { (void)channel_id(d, d); }), ErrorCode::DiagonalChannel);
    EXPECT_EQ(code_of([&] { (void)id_to_channel(7 * (d - 1)); }), ErrorCode::DiagonalChannel);
  }
  EXPECT_EQ(code_of([] { (void)channel_id(0, 2); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([] { (void)channel_id(2, 7); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([] { (void)id_to_channel(-1); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([] { (void)id_to_channel(36); }), ErrorCode::OutOfRange);
}

TEST(StatusFlags, ByteRoundTrip) {
  for (int b = 0; b < 8; ++b) EXPECT_EQ(StatusFlags::from_byte(b).to_byte(), b);
  EXPECT_EQ((StatusFlags{true, false, false}.to_byte()), 1);
  EXPECT_EQ((StatusFlags{false, true, false}.to_byte()), 2);
  EXPECT_EQ((StatusFlags{false, false, true}.to_byte()), 4);
  EXPECT_EQ(code_of([] { (void)StatusFlags::from_byte(8); }), ErrorCode::OutOfRange);
}

TEST(FrameAssembler, EmitsOnThirtiethDistinctChannel) {
  FrameAssembler a;
  const auto records = to_records(constant_frame(3, 1.5, StatusFlags{false, false, true}));
  for (std::size_t i = 0; i + 1 < records.size(); ++i) EXPECT_FALSE(a.push(records[i]));
  const auto frame = a.push(records.back());
  ASSERT_TRUE(frame);
  EXPECT_EQ(frame->seq, 3);
  EXPECT_DOUBLE_EQ(frame->t0_ms, 90.0);
  EXPECT_TRUE(frame->status.presence);
  for (const auto& ch : all_channels()) EXPECT_EQ(frame->samples.at_id(ch.id), 1.5);
}

TEST(FrameAssembler, ArrivalOrderDoesNotMatter) {
  std::mt19937 rng(4);
  auto records = to_records(testing::frame_with(0, [](int tx, int rx) { return tx * 10.0 + rx; }));
  std::shuffle(records.begin(), records.end(), rng);
  const auto result = assemble_frames(records);
  ASSERT_EQ(result.frames.size(), 1u);
  EXPECT_EQ(result.frames[0].samples(4, 2), 42.0);
  EXPECT_TRUE(result.diagnostics.empty());
}

TEST(FrameAssembler, IncompleteSweepIsDiagnosedAndSkipped) {
  auto first = to_records(constant_frame(0, 1.0));
  first.pop_back();
  const auto second = to_records(constant_frame(1, 2.0));
  std::vector<Record> all(first);
  all.insert(all.end(), second.begin(), second.end());
  const auto result = assemble_frames(all);
  ASSERT_EQ(result.frames.size(), 1u);
  EXPECT_EQ(result.frames[0].seq, 1);
  ASSERT_EQ(result.diagnostics.size(), 1u);
  EXPECT_EQ(result.diagnostics[0].code, ErrorCode::IncompleteFrame);
  EXPECT_EQ(result.diagnostics[0].seq, 0);
  EXPECT_EQ(result.diagnostics[0].count, kChannels - 1);
}

TEST(FrameAssembler, TruncatedTailIsDiagnosed) {
  auto records = to_records(constant_frame(0, 1.0));
  const auto tail = to_records(constant_frame(1, 1.0));
  records.insert(records.end(), tail.begin(), tail.begin() + 5);
  const auto result = assemble_frames(records);
  EXPECT_EQ(result.frames.size(), 1u);
  ASSERT_EQ(result.diagnostics.size(), 1u);
  EXPECT_EQ(result.diagnostics[0].code, ErrorCode::IncompleteFrame);
}

TEST(FrameAssembler, DuplicateChannelPoisonsSweep) {
  auto records = to_records(constant_frame(0, 1.0));
  records.insert(records.begin() + 3, records[2]);
  const auto result = assemble_frames(records);
  EXPECT_TRUE(result.frames.empty());
  ASSERT_EQ(result.diagnostics.size(), 1u);
  EXPECT_EQ(result.diagnostics[0].code, ErrorCode::DuplicateChannel);
}

TEST(FrameAssembler, DiagonalIdThrows) {
  FrameAssembler a;
  EXPECT_EQ(code_of([&] { (void)a.push(Record{0, 0, 7, 1.0, std::nullopt}); }), ErrorCode::DiagonalChannel);
}

TEST(FrameAssembler, ExplicitTimesGiveFrameStart) {
  auto records = to_records(constant_frame(2, 1.0));
  for (auto& r : records) r.time_ms = 1000.0 + kRowStaggerMs * (id_to_channel(r.id).tx - 1);
  const auto result = assemble_frames(records);
  ASSERT_EQ(result.frames.size(), 1u);
  EXPECT_DOUBLE_EQ(result.frames[0].t0_ms, 1000.0);
  EXPECT_DOUBLE_EQ(result.frames[0].sample_time(6), 1025.0);
}

TEST(FrameAssembler, StateDoesNotGrowWithStream) {
  FrameAssembler a;
  const auto before = a.state_size();
  for (int s = 0; s < 500; ++s) {
    for (const auto& r : to_records(constant_frame(s, 1.0))) (void)a.push(r);
  }
  EXPECT_EQ(a.state_size(), before);
}

std::vector<SensorFrame> frames_with_status(const std::vector<StatusFlags>& statuses) {
  std::vector<SensorFrame> out;
  for (std::size_t i = 0; i < statuses.size(); ++i) out.push_back(constant_frame(static_cast<std::int64_t>(i), 1.0, statuses[i]));
  return out;
}

TEST(EventTracker, FullCycle) {
  const StatusFlags q{};
  const auto frames = frames_with_status({q, q, testing::entrance(), testing::entrance(), testing::sealed(),
                                          testing::sealed(), testing::sealed(), testing::exit_door(), q, q});
  const auto t = detect_events(frames);
  ASSERT_TRUE(t);
  EXPECT_EQ(t->t_start, 2);
  EXPECT_EQ(t->t_enter_closed, 4);
  EXPECT_EQ(t->t_exit_open, 7);
  EXPECT_EQ(t->t_exit_closed, 8);
  EXPECT_TRUE(t->complete());
}

TEST(EventTracker, NoDoorMovementGivesNothing) {
  const auto frames = frames_with_status({StatusFlags{}, StatusFlags{}, testing::sealed()});
  EXPECT_FALSE(detect_events(frames));
}

TEST(EventTracker, UnfinishedCycleIsPartial) {
  const auto frames = frames_with_status({StatusFlags{}, testing::entrance(), testing::sealed(), testing::sealed()});
  const auto t = detect_events(frames);
  ASSERT_TRUE(t);
  EXPECT_EQ(t->t_enter_closed, 2);
  EXPECT_FALSE(t->t_exit_open);
  EXPECT_FALSE(t->complete());
}

TEST(EventTracker, MalformedSequencesThrow) {
  EXPECT_EQ(code_of([] { (void)detect_events(frames_with_status({StatusFlags{}, StatusFlags{true, true, true}})); }),
            ErrorCode::MalformedCycle);
  EXPECT_EQ(code_of([] { (void)detect_events(frames_with_status({StatusFlags{}, testing::exit_door()})); }),
            ErrorCode::MalformedCycle);
  EXPECT_EQ(code_of([] {
              (void)detect_events(
                  frames_with_status({StatusFlags{}, testing::entrance(), testing::sealed(), testing::entrance()}));
            }),
            ErrorCode::MalformedCycle);
}

TEST(EventTracker, RecoversAfterMalformedCycle) {
  EventTracker t;
  EXPECT_THROW((void)t.feed(0, StatusFlags{true, true, true}), Error);
  EXPECT_EQ(t.phase(), EventTracker::Phase::Idle);
  EXPECT_FALSE(t.feed(1, StatusFlags{}));
  EXPECT_EQ(t.feed(2, testing::entrance()), DoorEvent::EntranceOpened);
}

TEST(EventTracker, AllCyclesInOrder) {
  const StatusFlags q{};
  const auto frames = frames_with_status({q, testing::entrance(), testing::sealed(), testing::exit_door(), q,
                                          testing::entrance(), testing::sealed(), testing::exit_door(), q});
  const auto all = detect_all_events(frames);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].t_start, 1);
  EXPECT_EQ(all[1].t_start, 5);
  EXPECT_EQ(all[1].t_exit_closed, 8);
}

TEST(EventTracker, SimulatedTimelinesRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto cfg = sample_scenario(seed % 2 ? Preset::Single : Preset::Pair, seed);
    cfg.first_seq = static_cast<std::int64_t>(seed) * 1000;
    const auto stream = simulate_passage(cfg);
    const auto frames = assemble_frames(stream.records).frames;
    const auto t = detect_events(frames);
    ASSERT_TRUE(t);
    EXPECT_EQ(*t, stream.timeline) << "seed " << seed;
  }
}

}  // namespace
}  // namespace mantrap
