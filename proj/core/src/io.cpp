#include "mantrap/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "mantrap/error.hpp"

namespace mantrap {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::Parse, what); }

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    parse_error(std::string(what) + ": " + e.what());
  }
}

template <class T>
T get(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) parse_error(std::string("missing key '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    parse_error(std::string("key '") + key + "' has the wrong type");
  }
}

template <class T>
void maybe(const json& j, const char* key, T& into) {
  if (const auto it = j.find(key); it != j.end() && !it->is_null()) {
    try {
      into = it->get<T>();
    } catch (const json::exception&) {
      parse_error(std::string("key '") + key + "' has the wrong type");
    }
  }
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json timeline_to_json(const EventTimeline& t) {
  auto opt = [](const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); };
  return json{{"t_start", opt(t.t_start)},
              {"t_enter_closed", opt(t.t_enter_closed)},
              {"t_exit_open", opt(t.t_exit_open)},
              {"t_exit_closed", opt(t.t_exit_closed)}};
}

EventTimeline timeline_from_json(const json& j) {
  EventTimeline t;
  auto opt = [&](const char* key, std::optional<std::int64_t>& into) {
    if (const auto it = j.find(key); it != j.end() && !it->is_null()) {
      if (!it->is_number_integer()) parse_error(std::string("timeline key '") + key + "' must be an integer");
      into = it->get<std::int64_t>();
    }
  };
  opt("t_start", t.t_start);
  opt("t_enter_closed", t.t_enter_closed);
  opt("t_exit_open", t.t_exit_open);
  opt("t_exit_closed", t.t_exit_closed);
  return t;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

std::string record_to_json(const Record& r) {
  std::string s = "{\"seq\":" + std::to_string(r.seq) + ",\"status\":" + std::to_string(r.status) +
                  ",\"id\":" + std::to_string(r.id) + ",\"value\":" + format_double(r.value);
  if (r.time_ms) s += ",\"t\":" + format_double(*r.time_ms);
  s += '}';
  return s;
}

Record parse_record(std::string_view line) {
  const json j = parse_json(line, "record");
  if (!j.is_object()) parse_error("record must be a JSON object");
  for (const char* key : {"seq", "status", "id"}) {
    const auto it = j.find(key);
    if (it == j.end()) parse_error(std::string("missing key '") + key + "'");
    if (!it->is_number_integer()) parse_error(std::string("key '") + key + "' must be an integer");
  }
  Record r;
  r.seq = j["seq"].get<std::int64_t>();
  const auto status = j["status"].get<std::int64_t>();
  if (status < 0 || status > 255) throw Error(ErrorCode::OutOfRange, "status byte " + std::to_string(status));
  r.status = static_cast<std::uint8_t>(status);
  r.id = j["id"].get<int>();
  r.value = get<double>(j, "value");
  if (const auto it = j.find("t"); it != j.end() && !it->is_null()) {
    if (!it->is_number()) parse_error("key 't' must be a number");
    r.time_ms = it->get<double>();
  }
  return r;
}

void write_records(std::ostream& out, std::span<const Record> records) {
  for (const auto& r : records) out << record_to_json(r) << '\n';
}

std::optional<Record> RecordReader::next() {
  while (std::getline(in_, buffer_)) {
    ++line_;
    if (buffer_.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      return parse_record(buffer_);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_) + ": " + e.what());
    }
  }
  return std::nullopt;
}

std::vector<Record> read_records(std::istream& in) {
  RecordReader reader(in);
  std::vector<Record> out;
  while (auto r = reader.next()) out.push_back(*r);
  return out;
}

// ---------------------------------------------------------------------------
// Calibration
// ---------------------------------------------------------------------------

std::string calibration_to_json(const CalibrationTable& table) {
  json rows = json::array();
  for (int tx = 1; tx <= kDevices; ++tx) {
    json row = json::array();
    for (int rx = 1; rx <= kDevices; ++rx) row.push_back(tx == rx ? json(nullptr) : finite_or_null(table.factor(tx, rx)));
    rows.push_back(row);
  }
  return json{{"n_frames", table.n_frames}, {"factors", rows}}.dump();
}

CalibrationTable calibration_from_json(std::string_view text) {
  const json j = parse_json(text, "calibration");
  if (!j.is_object()) parse_error("calibration must be a JSON object");
  CalibrationTable table;
  table.n_frames = get<std::int64_t>(j, "n_frames");
  const auto rows = get<json>(j, "factors");
  if (!rows.is_array() || rows.size() != kDevices) parse_error("factors must be a 6x6 array");
  for (int tx = 1; tx <= kDevices; ++tx) {
    const auto& row = rows[static_cast<std::size_t>(tx - 1)];
    if (!row.is_array() || row.size() != kDevices) parse_error("factors must be a 6x6 array");
    for (int rx = 1; rx <= kDevices; ++rx) {
      const auto& cell = row[static_cast<std::size_t>(rx - 1)];
      if (tx == rx) continue;
      if (!cell.is_number()) parse_error("factor (" + std::to_string(tx) + "," + std::to_string(rx) + ") must be a number");
      const double f = cell.get<double>();
      if (!(f > 0.0) || !std::isfinite(f)) {
        throw Error(ErrorCode::NonPositiveFactor,
                    "factor (" + std::to_string(tx) + "," + std::to_string(rx) + ") = " + format_double(f));
      }
      table.factors(tx, rx) = f;
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Segments
// ---------------------------------------------------------------------------

void write_segment(std::ostream& out, const PassageSegment& segment) {
  json header{{"timeline", timeline_to_json(segment.timeline)},
              {"label", segment.label ? json(*segment.label) : json(nullptr)}};
  out << header.dump() << '\n';
  for (const auto& frame : segment.frames) {
    for (auto r : to_records(frame)) {
      r.time_ms = frame.sample_time(id_to_channel(r.id).tx);
      out << record_to_json(r) << '\n';
    }
  }
}

PassageSegment read_segment(std::istream& in) {
  std::string line;
  while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
  }
  if (line.empty()) parse_error("segment file has no header line");
  const json header = parse_json(line, "segment header");
  if (!header.is_object() || !header.contains("timeline")) parse_error("segment header needs a timeline");

  PassageSegment seg;
  seg.timeline = timeline_from_json(header["timeline"]);
  if (const auto it = header.find("label"); it != header.end() && !it->is_null()) {
    if (!it->is_number_integer()) parse_error("segment label must be an integer");
    seg.label = it->get<int>();
  }
  const auto records = read_records(in);
  auto assembled = assemble_frames(records);
  if (!assembled.diagnostics.empty()) {
    const auto& d = assembled.diagnostics.front();
    throw Error(d.code, "segment frame " + std::to_string(d.seq) + " is not a complete sweep");
  }
  seg.frames = std::move(assembled.frames);
  return seg;
}

// ---------------------------------------------------------------------------
// Metrics CSV
// ---------------------------------------------------------------------------

void write_metrics_csv(std::ostream& out, std::span<const MetricRow> rows) {
  out << kMetricsHeader << '\n';
  for (const auto& row : rows) {
    const auto& m = row.metrics;
    out << format_double(m.v_tx_hat) << ',' << format_double(m.v_rx_hat) << ',' << format_double(m.var_tx) << ','
        << format_double(m.var_rx) << ',' << m.n_f << ',';
    if (row.label) out << *row.label;
    out << '\n';
  }
}

namespace {

double parse_number(std::string_view field, std::size_t line) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    parse_error("line " + std::to_string(line) + ": '" + std::string(field) + "' is not a number");
  }
  return v;
}

std::int64_t parse_integer(std::string_view field, std::size_t line) {
  std::int64_t v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    parse_error("line " + std::to_string(line) + ": '" + std::string(field) + "' is not an integer");
  }
  return v;
}

}  // namespace

std::vector<MetricRow> read_metrics_csv(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  if (!std::getline(in, line)) parse_error("metrics CSV is empty");
  ++n;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kMetricsHeader) parse_error("metrics CSV header must be '" + std::string(kMetricsHeader) + "'");

  std::vector<MetricRow> rows;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 6) parse_error("line " + std::to_string(n) + ": expected 6 fields");
    MetricRow row;
    row.metrics.v_tx_hat = parse_number(fields[0], n);
    row.metrics.v_rx_hat = parse_number(fields[1], n);
    row.metrics.var_tx = parse_number(fields[2], n);
    row.metrics.var_rx = parse_number(fields[3], n);
    row.metrics.n_f = parse_integer(fields[4], n);
    if (!fields[5].empty()) {
      const auto label = parse_integer(fields[5], n);
      if (label != 0 && label != 1) parse_error("line " + std::to_string(n) + ": label must be 0 or 1");
      row.label = static_cast<int>(label);
    }
    rows.push_back(row);
  }
  return rows;
}

Dataset to_dataset(std::span<const MetricRow> rows, std::span<const std::string> features) {
  Dataset d;
  d.feature_names.assign(features.begin(), features.end());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].label) parse_error("row " + std::to_string(i + 1) + " has no label");
    d.add(metric_features(rows[i].metrics, features), *rows[i].label);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

std::string model_to_json(const RegressionModel& model, double threshold) {
  json se = json::array();
  for (double s : model.standard_errors) se.push_back(finite_or_null(s));
  return json{{"kind", std::string(to_string(model.kind))},
              {"beta", model.beta},
              {"se", se},
              {"features", model.feature_names},
              {"threshold", threshold}}
      .dump(2);
}

std::string model_to_json(const DecisionModel& dm) { return model_to_json(dm.model, dm.threshold); }

LoadedModel model_from_json(std::string_view text) {
  const json j = parse_json(text, "model");
  if (!j.is_object()) parse_error("model must be a JSON object");
  LoadedModel out;
  try {
    out.model.kind = parse_model_kind(get<std::string>(j, "kind"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    parse_error(e.what());
  }
  out.model.beta = get<std::vector<double>>(j, "beta");
  out.model.feature_names = get<std::vector<std::string>>(j, "features");
  const auto se = get<json>(j, "se");
  if (!se.is_array()) parse_error("key 'se' must be an array");
  for (const auto& s : se) {
    if (s.is_null()) {
      out.model.standard_errors.push_back(std::numeric_limits<double>::infinity());
    } else if (s.is_number()) {
      out.model.standard_errors.push_back(s.get<double>());
    } else {
      parse_error("key 'se' must hold numbers or null");
    }
  }
  out.threshold = get<double>(j, "threshold");
  const auto p = out.model.feature_names.size() + 1;
  if (out.model.beta.size() != p || out.model.standard_errors.size() != p) {
    parse_error("model needs one beta and one se per feature plus the intercept");
  }
  for (const auto& name : out.model.feature_names) (void)metric_feature(MetricVector{}, name);
  if (!(out.threshold > 0.0 && out.threshold < 1.0) && out.model.kind == ModelKind::Logistic) {
    throw Error(ErrorCode::InvalidConfig, "threshold must lie in (0, 1)");
  }
  out.model.converged = true;
  return out;
}

DecisionModel decision_model_from_json(std::string_view text) {
  auto loaded = model_from_json(text);
  if (loaded.model.kind != ModelKind::Logistic) {
    throw Error(ErrorCode::ModelMismatch, "decisions need a logistic model, got " +
                                              std::string(to_string(loaded.model.kind)));
  }
  return DecisionModel{std::move(loaded.model), loaded.threshold};
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

namespace {

json body_to_json(const BodyProfile& b) {
  return json{{"footprint_radius_m", b.footprint_radius_m},
              {"reflectivity", b.reflectivity},
              {"height_factor", b.height_factor},
              {"agility", b.agility}};
}

BodyProfile body_from_json(const json& j) {
  if (!j.is_object()) parse_error("body profile must be an object");
  BodyProfile b;
  maybe(j, "footprint_radius_m", b.footprint_radius_m);
  maybe(j, "reflectivity", b.reflectivity);
  maybe(j, "height_factor", b.height_factor);
  maybe(j, "agility", b.agility);
  return b;
}

}  // namespace

std::string scenario_to_json(const ScenarioConfig& cfg) {
  json bodies = json::array();
  for (const auto& b : cfg.bodies) bodies.push_back(body_to_json(b));
  const auto& m = cfg.motion;
  json motion{{"quiet_frames", m.quiet_frames},     {"entry_frames", m.entry_frames},
              {"dwell_frames", m.dwell_frames},     {"exit_frames", m.exit_frames},
              {"tail_frames", m.tail_frames},       {"sway_m", m.sway_m},
              {"bandwidth_hz", m.bandwidth_hz},     {"crowding", m.crowding},
              {"agility_spread", m.agility_spread}, {"drift_m_per_s", m.drift_m_per_s}};
  return json{{"n_people", cfg.n_people},
              {"bodies", bodies},
              {"baggage", cfg.baggage ? body_to_json(*cfg.baggage) : json(nullptr)},
              {"home_x", cfg.home_x},
              {"home_y", cfg.home_y},
              {"motion", motion},
              {"baseline", cfg.baseline},
              {"baseline_spread", cfg.baseline_spread},
              {"coupling", cfg.coupling},
              {"noise_sigma", cfg.noise_sigma},
              {"seed", cfg.seed},
              {"first_seq", cfg.first_seq}}
      .dump(2);
}

ScenarioConfig scenario_from_json(std::string_view text) {
  const json j = parse_json(text, "scenario");
  if (!j.is_object()) parse_error("scenario must be a JSON object");
  ScenarioConfig cfg;
  maybe(j, "n_people", cfg.n_people);
  if (const auto it = j.find("bodies"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) parse_error("key 'bodies' must be an array");
    for (const auto& b : *it) cfg.bodies.push_back(body_from_json(b));
  } else {
    cfg.bodies.assign(static_cast<std::size_t>(std::max(cfg.n_people, 0)), BodyProfile{});
  }
  if (const auto it = j.find("baggage"); it != j.end() && !it->is_null()) cfg.baggage = body_from_json(*it);
  maybe(j, "home_x", cfg.home_x);
  maybe(j, "home_y", cfg.home_y);
  if (const auto it = j.find("motion"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) parse_error("key 'motion' must be an object");
    auto& m = cfg.motion;
    maybe(*it, "quiet_frames", m.quiet_frames);
    maybe(*it, "entry_frames", m.entry_frames);
    maybe(*it, "dwell_frames", m.dwell_frames);
    maybe(*it, "exit_frames", m.exit_frames);
    maybe(*it, "tail_frames", m.tail_frames);
    maybe(*it, "sway_m", m.sway_m);
    maybe(*it, "bandwidth_hz", m.bandwidth_hz);
    maybe(*it, "crowding", m.crowding);
    maybe(*it, "agility_spread", m.agility_spread);
    maybe(*it, "drift_m_per_s", m.drift_m_per_s);
  }
  maybe(j, "baseline", cfg.baseline);
  maybe(j, "baseline_spread", cfg.baseline_spread);
  maybe(j, "coupling", cfg.coupling);
  maybe(j, "noise_sigma", cfg.noise_sigma);
  maybe(j, "seed", cfg.seed);
  maybe(j, "first_seq", cfg.first_seq);
  cfg.validate();
  return cfg;
}

}  // namespace mantrap
