#include "mantrap/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "mantrap/error.hpp"
#include "mantrap/pipeline.hpp"

namespace mantrap {

namespace {

constexpr double kCabinWidth = 1.0;
constexpr double kCabinDepth = 1.5;
constexpr double kZoneWidth = 0.3;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double distance_to_segment(Point p, Point a, Point b) noexcept {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double qx = a.x + t * dx - p.x;
  const double qy = a.y + t * dy - p.y;
  return std::sqrt(qx * qx + qy * qy);
}

double channel_length(int tx, int rx) noexcept {
  const Point a = device_position(tx);
  const Point b = device_position(rx);
  return std::hypot(a.x - b.x, a.y - b.y);
}

double overlap(const BodyProfile& body, Point at, int tx, int rx) noexcept {
  const double r2 = body.footprint_radius_m * body.footprint_radius_m;
  const double s2 = kZoneWidth * kZoneWidth + r2;
  const double d = distance_to_segment(at, device_position(tx), device_position(rx));
  return body.reflectivity * body.height_factor * (r2 / s2) * std::exp(-d * d / (2.0 * s2));
}

// Unit-variance AR(1) process sampled on the 5 ms row grid.
class Sway {
 public:
  Sway(double bandwidth_hz, std::mt19937_64& rng) : rng_(rng) {
    phi_ = std::exp(-2.0 * std::numbers::pi * bandwidth_hz * kRowStaggerMs / 1000.0);
    innovation_ = std::sqrt(1.0 - phi_ * phi_);
    x_ = normal_(rng_);
    y_ = normal_(rng_);
  }
  void step() {
    x_ = phi_ * x_ + innovation_ * normal_(rng_);
    y_ = phi_ * y_ + innovation_ * normal_(rng_);
  }
  [[nodiscard]] double x() const noexcept { return x_; }
  [[nodiscard]] double y() const noexcept { return y_; }

 private:
  std::mt19937_64& rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  double phi_ = 0.0;
  double innovation_ = 0.0;
  double x_ = 0.0;
  double y_ = 0.0;
};

}  // namespace

Point device_position(int device) noexcept {
  const int col = (device - 1) % 2;
  const int row = (device - 1) / 2;
  return Point{0.25 + 0.5 * col, 0.25 + 0.5 * row};
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (n_people < 0 || n_people > 2) fail("n_people must be 0, 1 or 2");
  if (static_cast<int>(bodies.size()) != n_people) fail("one body profile per person required");
  if (!home_x.empty() && static_cast<int>(home_x.size()) != n_people) fail("home_x must list one value per person");
  if (home_x.size() != home_y.size()) fail("home_x and home_y differ in length");
  for (const auto& b : bodies) {
    if (!(b.footprint_radius_m > 0.0) || !(b.reflectivity >= 0.0) || !(b.height_factor >= 0.0) || !(b.agility >= 0.0)) {
      fail("body profiles need a positive radius and non-negative factors");
    }
  }
  if (baggage && !(baggage->footprint_radius_m > 0.0)) fail("baggage needs a positive radius");
  if (motion.quiet_frames < 0 || motion.tail_frames < 0) fail("frame counts must be non-negative");
  if (n_people > 0 && (motion.entry_frames <= 0 || motion.dwell_frames <= 0 || motion.exit_frames <= 0)) {
    fail("entry, dwell and exit durations must be positive");
  }
  if (!(motion.sway_m >= 0.0) || !(motion.bandwidth_hz > 0.0) || !(motion.crowding >= 0.0) ||
      !(motion.agility_spread >= 0.0)) {
    fail("bad sway model");
  }
  if (!(baseline > 0.0)) fail("baseline must be positive");
  if (!(baseline_spread >= 0.0 && baseline_spread < 1.0)) fail("baseline_spread must lie in [0, 1)");
  if (!(noise_sigma >= 0.0) || !(coupling >= 0.0)) fail("noise and coupling must be non-negative");
}

ChannelMatrix baseline_matrix(const ScenarioConfig& cfg) {
  double shortest = 1e9;
  double longest = 0.0;
  for (const auto& ch : all_channels()) {
    shortest = std::min(shortest, channel_length(ch.tx, ch.rx));
    longest = std::max(longest, channel_length(ch.tx, ch.rx));
  }
  ChannelMatrix m;
  for (const auto& ch : all_channels()) {
    const double rel = (channel_length(ch.tx, ch.rx) - shortest) / (longest - shortest);
    m.at_id(ch.id) = cfg.baseline * (1.0 - cfg.baseline_spread * rel);
  }
  return m;
}

LabeledStream simulate_passage(const ScenarioConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  const auto& mo = cfg.motion;
  const bool cycle = cfg.n_people > 0;
  const std::int64_t frames = cycle ? std::int64_t{mo.quiet_frames} + mo.entry_frames + mo.dwell_frames +
                                          mo.exit_frames + mo.tail_frames
                                    : std::int64_t{mo.quiet_frames} + mo.tail_frames;

  LabeledStream out;
  out.truth = cfg.n_people;
  out.frames = frames;
  const std::int64_t start = cfg.first_seq + mo.quiet_frames;
  if (cycle) {
    out.timeline.t_start = start;
    out.timeline.t_enter_closed = start + mo.entry_frames;
    out.timeline.t_exit_open = *out.timeline.t_enter_closed + mo.dwell_frames;
    out.timeline.t_exit_closed = *out.timeline.t_exit_open + mo.exit_frames;
  }

  const ChannelMatrix base = baseline_matrix(cfg);
  std::vector<Point> home;
  for (int p = 0; p < cfg.n_people; ++p) {
    if (cfg.home_x.empty()) {
      home.push_back(Point{0.5 * kCabinWidth, 0.5 * kCabinDepth});
    } else {
      home.push_back(Point{cfg.home_x[static_cast<std::size_t>(p)], cfg.home_y[static_cast<std::size_t>(p)]});
    }
  }
  std::vector<Sway> sway;
  for (int p = 0; p < cfg.n_people; ++p) sway.emplace_back(mo.bandwidth_hz, rng);
  const double shared = cfg.n_people > 1 ? mo.crowding : 1.0;

  const double ms_per_frame = kFrameMs;
  const double t_enter_open = static_cast<double>(mo.quiet_frames) * ms_per_frame;
  const double t_enter_closed = t_enter_open + mo.entry_frames * ms_per_frame;
  const double t_exit_open = t_enter_closed + mo.dwell_frames * ms_per_frame;
  const double t_exit_closed = t_exit_open + mo.exit_frames * ms_per_frame;

  // Position of person p at time `ms` after the first frame, or nullopt when outside.
  auto position = [&](int p, double ms) -> std::optional<Point> {
    if (!cycle || ms < t_enter_open || ms >= t_exit_closed) return std::nullopt;
    const Point h = home[static_cast<std::size_t>(p)];
    const Point outside_in{h.x, -0.4};
    const Point outside_out{h.x, kCabinDepth + 0.4};
    Point at = h;
    if (ms < t_enter_closed) {
      const double f = (ms - t_enter_open) / (t_enter_closed - t_enter_open);
      at = Point{outside_in.x + f * (h.x - outside_in.x), outside_in.y + f * (h.y - outside_in.y)};
    } else if (ms >= t_exit_open) {
      const double f = (ms - t_exit_open) / (t_exit_closed - t_exit_open);
      at = Point{h.x + f * (outside_out.x - h.x), h.y + f * (outside_out.y - h.y)};
    } else {
      at.y += mo.drift_m_per_s * (ms - t_enter_closed) / 1000.0;
    }
    const double amp = mo.sway_m * shared * cfg.bodies[static_cast<std::size_t>(p)].agility;
    at.x += amp * sway[static_cast<std::size_t>(p)].x();
    at.y += amp * sway[static_cast<std::size_t>(p)].y();
    return at;
  };

  out.records.reserve(static_cast<std::size_t>(frames) * kChannels);
  for (std::int64_t f = 0; f < frames; ++f) {
    const double t0 = static_cast<double>(f) * ms_per_frame;
    StatusFlags status;
    if (cycle) {
      status.entrance_open = t0 >= t_enter_open && t0 < t_enter_closed;
      status.exit_open = t0 >= t_exit_open && t0 < t_exit_closed;
      status.presence = t0 >= t_enter_open && t0 < t_exit_closed;
    }
    const auto byte = status.to_byte();
    for (int tx = 1; tx <= kDevices; ++tx) {
      const double ms = t0 + kRowStaggerMs * (tx - 1);
      std::vector<std::optional<Point>> at;
      for (int p = 0; p < cfg.n_people; ++p) at.push_back(position(p, ms));
      for (int rx = 1; rx <= kDevices; ++rx) {
        if (rx == tx) continue;
        double occupancy = 0.0;
        for (int p = 0; p < cfg.n_people; ++p) {
          if (at[static_cast<std::size_t>(p)]) {
            occupancy += overlap(cfg.bodies[static_cast<std::size_t>(p)], *at[static_cast<std::size_t>(p)], tx, rx);
          }
        }
        if (cfg.baggage && at.front()) {
          // Carried beside the first person, without sway of its own.
          const Point h = *at.front();
          occupancy += overlap(*cfg.baggage, Point{h.x + 0.25, h.y}, tx, rx);
        }
        const int id = kDevices * (tx - 1) + (rx - 1);
        const double value = base.at_id(id) * (1.0 - cfg.coupling * occupancy) + cfg.noise_sigma * noise(rng);
        out.records.push_back(Record{cfg.first_seq + f, byte, id, value, std::nullopt});
      }
      for (auto& s : sway) s.step();
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

std::string_view to_string(Preset p) noexcept {
  switch (p) {
    case Preset::Single: return "single";
    case Preset::SingleHeavy: return "single-heavy";
    case Preset::SingleBaggage: return "single-with-baggage";
    case Preset::Pair: return "pair";
    case Preset::TwoEmbraced: return "two-embraced";
    case Preset::TwoThinClose: return "two-thin-close";
  }
  return "unknown";
}

Preset parse_preset(std::string_view text) {
  for (auto p : {Preset::Single, Preset::SingleHeavy, Preset::SingleBaggage, Preset::Pair, Preset::TwoEmbraced,
                 Preset::TwoThinClose}) {
    if (to_string(p) == text) return p;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown preset '" + std::string(text) + "'");
}

int person_count(Preset p) noexcept {
  switch (p) {
    case Preset::Single:
    case Preset::SingleHeavy:
    case Preset::SingleBaggage:
      return 1;
    default:
      return 2;
  }
}

ScenarioConfig sample_scenario(Preset preset, std::uint64_t seed, const ScenarioConfig& base) {
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  // Per-person restlessness varies a lot between people.
  auto agility = [&] { return std::exp(base.motion.agility_spread * normal(rng)); };

  ScenarioConfig cfg = base;
  cfg.seed = splitmix64(seed ^ 0x5eedULL);
  cfg.n_people = person_count(preset);
  cfg.bodies.clear();
  cfg.baggage.reset();
  cfg.home_x.clear();
  cfg.home_y.clear();

  const double cx = 0.5 + uniform(-0.08, 0.08);
  const double cy = 0.75 + uniform(-0.12, 0.12);

  auto person = [&](double radius, double height) {
    return BodyProfile{radius * uniform(0.92, 1.08), uniform(0.9, 1.1), height * uniform(0.95, 1.05), agility()};
  };

  switch (preset) {
    case Preset::Single:
      cfg.bodies.push_back(person(0.25, 1.0));
      break;
    case Preset::SingleHeavy: {
      auto b = person(0.34, 1.05);
      b.agility *= 0.35;  // heavy and calm: sways like someone sharing the cabin
      cfg.bodies.push_back(b);
      break;
    }
    case Preset::SingleBaggage:
      cfg.bodies.push_back(person(0.25, 1.0));
      cfg.baggage = BodyProfile{0.15 * uniform(0.9, 1.2), uniform(0.6, 1.0), 0.5, 0.0};
      break;
    case Preset::Pair:
    case Preset::TwoEmbraced:
    case Preset::TwoThinClose: {
      const double radius = preset == Preset::TwoThinClose ? 0.19 : 0.25;
      const double sep = preset == Preset::Pair ? uniform(0.40, 0.55)
                                                : (preset == Preset::TwoEmbraced ? uniform(0.22, 0.30)
                                                                                  : uniform(0.28, 0.36));
      const double angle = uniform(0.0, std::numbers::pi);
      const double height = preset == Preset::TwoThinClose ? 1.08 : 1.0;
      for (int s : {-1, 1}) {
        cfg.bodies.push_back(person(radius, height));
        cfg.home_x.push_back(std::clamp(cx + s * 0.5 * sep * std::cos(angle), 0.15, 0.85));
        cfg.home_y.push_back(std::clamp(cy + s * 0.5 * sep * std::sin(angle), 0.2, 1.3));
      }
      break;
    }
  }
  if (cfg.home_x.empty()) {
    cfg.home_x.push_back(cx);
    cfg.home_y.push_back(cy);
  }
  return cfg;
}

namespace {

Preset draw_preset(const std::vector<std::pair<Preset, double>>& weights, std::mt19937_64& rng) {
  std::vector<double> w;
  for (const auto& [p, weight] : weights) w.push_back(weight);
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  return weights[pick(rng)].first;
}

}  // namespace

GeneratedData generate_dataset(int n_single, int n_double, std::uint64_t seed, const GenerateOptions& options) {
  if (n_single < 0 || n_double < 0) throw Error(ErrorCode::InvalidConfig, "passage counts must be non-negative");
  if (options.mix.single.empty() || options.mix.multiple.empty()) {
    throw Error(ErrorCode::InvalidConfig, "preset mix needs at least one preset per class");
  }
  std::mt19937_64 rng(splitmix64(seed));

  std::vector<int> labels(static_cast<std::size_t>(n_single), 0);
  labels.insert(labels.end(), static_cast<std::size_t>(n_double), 1);
  std::shuffle(labels.begin(), labels.end(), rng);

  GeneratedData out;
  std::vector<Preset> presets;
  std::vector<EventTimeline> scripted;
  std::vector<SensorFrame> frames;
  std::int64_t next_seq = options.base.first_seq;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const Preset preset = draw_preset(labels[k] == 0 ? options.mix.single : options.mix.multiple, rng);
    if (person_count(preset) != labels[k] + 1) {
      throw Error(ErrorCode::InvalidConfig, "preset '" + std::string(to_string(preset)) + "' listed under the wrong class");
    }
    ScenarioConfig cfg = sample_scenario(preset, splitmix64(seed + 0x1000 + k), options.base);
    cfg.first_seq = next_seq;
    const auto stream = simulate_passage(cfg);
    next_seq += stream.frames;
    presets.push_back(preset);
    scripted.push_back(stream.timeline);
    auto assembled = assemble_frames(stream.records);
    frames.insert(frames.end(), assembled.frames.begin(), assembled.frames.end());
    if (options.keep_stream) out.stream.insert(out.stream.end(), stream.records.begin(), stream.records.end());
  }

  // One pass over the whole archive, exactly as a consumer of the stream would.
  AnalysisOptions analysis;
  analysis.mode = options.mode;
  const auto result = analyze_frames(frames, analysis);
  if (result.passages.size() != labels.size()) {
    throw Error(ErrorCode::EmptySegment, "simulated " + std::to_string(labels.size()) + " passages but the pipeline found " +
                                             std::to_string(result.passages.size()));
  }
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const auto& p = result.passages[k];
    if (p.timeline.t_exit_open != scripted[k].t_exit_open) {
      throw Error(ErrorCode::MalformedCycle, "passage " + std::to_string(k) + " does not match its scripted timeline");
    }
    out.passages.push_back(GeneratedPassage{presets[k], labels[k], p.timeline, p.metrics});
  }
  return out;
}

}  // namespace mantrap
