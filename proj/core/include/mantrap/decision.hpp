#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mantrap/metrics.hpp"
#include "mantrap/regression.hpp"

namespace mantrap {

enum class Verdict { SinglePerson, MultiplePersons };

std::string_view to_string(Verdict v) noexcept;

/// Names accepted as model features: v_tx, v_rx, var_tx, var_rx, n_f.
[[nodiscard]] double metric_feature(const MetricVector& m, std::string_view name);
[[nodiscard]] std::vector<double> metric_features(const MetricVector& m, std::span<const std::string> names);

inline const std::vector<std::string>& default_decision_features() {
  static const std::vector<std::string> names{"v_tx", "v_rx"};
  return names;
}

struct DecisionModel {
  RegressionModel model;  // logistic over model.feature_names
  double threshold = 0.5;

  /// Throws UnfittedModel when the model never converged or has no coefficients.
  [[nodiscard]] double probability(const MetricVector& m) const;
};

/// MultiplePersons iff P(Y = 1) > threshold; equality keeps the door opening.
[[nodiscard]] Verdict decide(const DecisionModel& dm, const MetricVector& m);
[[nodiscard]] Verdict decide(double probability, double threshold) noexcept;

/// Threshold maximizing (a + d) / N over the cut points between consecutive
/// distinct predicted probabilities; the midpoint of the winning gap is
/// returned. Ties go to fewer false negatives, then to the cut nearest 0.5.
/// A single distinct probability yields 0.5.
[[nodiscard]] double tune_threshold(std::span<const double> probabilities, std::span<const double> labels);
[[nodiscard]] double tune_threshold(const DecisionModel& dm, const Dataset& data);

/// Confusion counts with Y = 0 (one person) as the positive class:
///   a = one person detected as one,  b = one person detected as several,
///   c = several detected as one,     d = several detected as several.
struct ConfusionReport {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t c = 0;
  std::size_t d = 0;
  std::size_t n = 0;

  [[nodiscard]] std::optional<double> sensibility() const noexcept;             // a / (a + c)
  [[nodiscard]] std::optional<double> correct_classification() const noexcept;  // (a + d) / N
  [[nodiscard]] std::optional<double> correctness() const noexcept;             // d / (b + d)
  [[nodiscard]] std::optional<double> completeness() const noexcept;            // d / (c + d)
  [[nodiscard]] std::optional<double> false_positives() const noexcept;         // b / N
  [[nodiscard]] std::optional<double> false_negatives() const noexcept;         // c / N
};

/// Throws LengthMismatch for unequal inputs.
[[nodiscard]] ConfusionReport classification_report(std::span<const int> labels, std::span<const Verdict> predictions);

/// Percentage with one decimal and a trailing ".0" dropped ("96.8%", "100%"),
/// or "n/a" for an undefined ratio.
[[nodiscard]] std::string format_percent(std::optional<double> ratio);

}  // namespace mantrap
