// ============================================================================
// simulator.hpp -- labeled synthetic streams for the six-device array
//
// The cabin is 1.0 m wide (x) and 1.5 m deep (y); the entrance is at y = 0
// and the exit at y = 1.5. Six devices sit on the roof in a 2 x 3 grid.
// Channel (tx, rx) senses a band around the segment joining the two devices;
// a body of footprint radius r at distance d from that segment occupies
//   (r^2 / s^2) exp(-d^2 / 2 s^2),   s^2 = w^2 + r^2,  w = 0.3 m
// of it, scaled by reflectivity and height. A sample is
//   baseline(tx,rx) (1 - coupling * occupancy) + N(0, noise_sigma^2)
// evaluated at the row instant t0 + 5(tx-1) ms.
//
// Bodies sway around their standing position with band-limited noise. A
// person sharing the cabin has less room to move, so every body's sway is
// scaled by `crowding` when more than one person is inside.
// ============================================================================
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mantrap/acquisition.hpp"
#include "mantrap/metrics.hpp"

namespace mantrap {

struct BodyProfile {
  double footprint_radius_m = 0.25;
  double reflectivity = 1.0;
  double height_factor = 1.0;
  double agility = 1.0;  // multiplier on the sway amplitude
};

/// Frame counts of each phase of one passage and the sway model.
struct MotionScript {
  int quiet_frames = 120;  // empty cabin before the entrance opens
  int entry_frames = 30;   // entrance door open
  int dwell_frames = 100;  // both doors closed
  int exit_frames = 30;    // exit door open
  int tail_frames = 10;    // empty cabin after the exit closes
  double sway_m = 0.08;           // standard deviation of the position sway
  double bandwidth_hz = 3.0;      // sway correlation bandwidth
  double crowding = 0.29;         // sway factor when the cabin is shared
  double agility_spread = 0.15;   // log-normal spread of per-person agility in sampled scenarios
  double drift_m_per_s = 0.0;     // steady drift along y while the doors are closed
};

struct ScenarioConfig {
  int n_people = 1;  // 0 (empty cabin, no door cycle), 1 or 2
  std::vector<BodyProfile> bodies;       // one per person
  std::optional<BodyProfile> baggage;    // carried by the first person, does not sway
  std::vector<double> home_x;            // standing position per person; empty = centred
  std::vector<double> home_y;
  MotionScript motion;
  double baseline = 500.0;        // steady-state raw value of the shortest channel
  double baseline_spread = 0.15;  // relative drop of the longest channel
  double coupling = 0.35;
  double noise_sigma = 1.5;
  std::uint64_t seed = 1;
  std::int64_t first_seq = 0;

  /// Throws InvalidConfig.
  void validate() const;
};

struct LabeledStream {
  std::vector<Record> records;
  int truth = 0;  // person count
  EventTimeline timeline;
  std::int64_t frames = 0;
};

/// Steady-state raw value of every channel for a config.
[[nodiscard]] ChannelMatrix baseline_matrix(const ScenarioConfig& cfg);

[[nodiscard]] LabeledStream simulate_passage(const ScenarioConfig& cfg);

enum class Preset { Single, SingleHeavy, SingleBaggage, Pair, TwoEmbraced, TwoThinClose };

std::string_view to_string(Preset p) noexcept;
Preset parse_preset(std::string_view text);
[[nodiscard]] int person_count(Preset p) noexcept;

/// Draws a randomized scenario of the given preset. The passage seed fixes
/// every random choice.
[[nodiscard]] ScenarioConfig sample_scenario(Preset preset, std::uint64_t seed, const ScenarioConfig& base = {});

/// Relative weights of the presets used for each class.
struct PresetMix {
  std::vector<std::pair<Preset, double>> single{
      {Preset::Single, 0.67}, {Preset::SingleHeavy, 0.08}, {Preset::SingleBaggage, 0.25}};
  std::vector<std::pair<Preset, double>> multiple{
      {Preset::Pair, 0.5}, {Preset::TwoEmbraced, 0.25}, {Preset::TwoThinClose, 0.25}};
};

struct GeneratedPassage {
  Preset preset = Preset::Single;
  int label = 0;  // 0 = one person, 1 = more than one
  EventTimeline timeline;
  MetricVector metrics;
};

struct GeneratedData {
  std::vector<GeneratedPassage> passages;
  std::vector<Record> stream;  // all passages back to back, seq continuous
};

struct GenerateOptions {
  SumMode mode = SumMode::Staggered;
  PresetMix mix;
  ScenarioConfig base;  // non-random parts of every scenario
  bool keep_stream = true;
};

/// Simulates n_single + n_double passages in seeded random order and runs
/// each through calibration, extraction, normalization and metrics.
[[nodiscard]] GeneratedData generate_dataset(int n_single, int n_double, std::uint64_t seed,
                                             const GenerateOptions& options = {});

/// Device position on the roof, metres.
struct Point {
  double x = 0.0;
  double y = 0.0;
};
[[nodiscard]] Point device_position(int device) noexcept;

}  // namespace mantrap
