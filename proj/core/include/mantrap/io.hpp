// ============================================================================
// io.hpp -- on-disk formats
//
//   records       JSON lines {"seq":int,"status":int,"id":int,"value":float}
//                 with an optional "t" (sample time, ms)
//   calibration   {"n_frames":int,"factors":[[...6x6, null on the diagonal]]}
//   segment       one header line {"timeline":{...},"label":int|null} then records
//   metrics       CSV v_tx,v_rx,var_tx,var_rx,n_f,label (label may be empty)
//   model         {"kind","beta","se","features","threshold"}; infinite SE as null
//   scenario      ScenarioConfig fields; anything missing keeps its default
// ============================================================================
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mantrap/acquisition.hpp"
#include "mantrap/calibration.hpp"
#include "mantrap/decision.hpp"
#include "mantrap/metrics.hpp"
#include "mantrap/preprocess.hpp"
#include "mantrap/regression.hpp"
#include "mantrap/simulator.hpp"

namespace mantrap {

// Throw Io.
[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// --- records -----------------------------------------------------------------

[[nodiscard]] std::string record_to_json(const Record& r);
/// Throws Parse for malformed JSON, missing keys or wrong types.
[[nodiscard]] Record parse_record(std::string_view line);

void write_records(std::ostream& out, std::span<const Record> records);
/// Blank lines are skipped. Parse errors carry the 1-based line number.
[[nodiscard]] std::vector<Record> read_records(std::istream& in);

/// Pull-style reader for streaming consumers.
class RecordReader {
 public:
  explicit RecordReader(std::istream& in) : in_(in) {}
  std::optional<Record> next();
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::string buffer_;
  std::size_t line_ = 0;
};

// --- calibration -------------------------------------------------------------

[[nodiscard]] std::string calibration_to_json(const CalibrationTable& table);
/// Throws Parse, or NonPositiveFactor for a factor that is not positive.
[[nodiscard]] CalibrationTable calibration_from_json(std::string_view text);

// --- segments ----------------------------------------------------------------

void write_segment(std::ostream& out, const PassageSegment& segment);
[[nodiscard]] PassageSegment read_segment(std::istream& in);

// --- metrics CSV -------------------------------------------------------------

struct MetricRow {
  MetricVector metrics;
  std::optional<int> label;  // 0 = one person, 1 = more than one
};

inline constexpr std::string_view kMetricsHeader = "v_tx,v_rx,var_tx,var_rx,n_f,label";

void write_metrics_csv(std::ostream& out, std::span<const MetricRow> rows);
[[nodiscard]] std::vector<MetricRow> read_metrics_csv(std::istream& in);

/// Throws Parse when a row has no label.
[[nodiscard]] Dataset to_dataset(std::span<const MetricRow> rows,
                                 std::span<const std::string> features = default_decision_features());

// --- models ------------------------------------------------------------------

[[nodiscard]] std::string model_to_json(const RegressionModel& model, double threshold);
[[nodiscard]] std::string model_to_json(const DecisionModel& dm);

struct LoadedModel {
  RegressionModel model;
  double threshold = 0.5;
};
[[nodiscard]] LoadedModel model_from_json(std::string_view text);
/// Throws ModelMismatch unless the stored model is logistic.
[[nodiscard]] DecisionModel decision_model_from_json(std::string_view text);

// --- scenarios ---------------------------------------------------------------

[[nodiscard]] std::string scenario_to_json(const ScenarioConfig& cfg);
/// Throws Parse or InvalidConfig.
[[nodiscard]] ScenarioConfig scenario_from_json(std::string_view text);

}  // namespace mantrap
