// Plain-text tables and JSON documents for the fit, validation, comparison
// and detection outputs.
#pragma once

#include <string>

#include "mantrap/decision.hpp"
#include "mantrap/pipeline.hpp"
#include "mantrap/regression.hpp"

namespace mantrap {

/// Logistic: "General Model Goodness of Fit" (Hosmer-Lemeshow) followed by
/// "Single Variables Significance Test" (Wald). Linear: F test then T tests.
[[nodiscard]] std::string significance_table(const SignificanceReport& report);
[[nodiscard]] std::string significance_json(const SignificanceReport& report);

/// The a/b/c/d grid with row and column totals.
[[nodiscard]] std::string confusion_table(const ConfusionReport& report);
/// Counts and the six performance ratios.
[[nodiscard]] std::string performance_table(const ConfusionReport& report);
[[nodiscard]] std::string classification_json(const ConfusionReport& report, double threshold);

/// Cross-correlation grid, then each model's correlation with Y in percent.
[[nodiscard]] std::string comparison_table(const ComparisonReport& report);
[[nodiscard]] std::string comparison_json(const ComparisonReport& report);

/// One detection line; the JSON form carries the full metric vector.
[[nodiscard]] std::string decision_line(const PassageDecision& d);
[[nodiscard]] std::string decision_json(const PassageDecision& d);

}  // namespace mantrap
