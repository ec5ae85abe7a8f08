// ============================================================================
// regression.hpp -- linear, robust and logistic models of the person count
//
// The expected variable is binary: Y = 0 for one person, Y = 1 for more than
// one. Every fit standardizes the features internally (z-score) and reports
// coefficients and standard errors back in original units.
// ============================================================================
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mantrap {

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<double> values;  // row-major, rows() x dims()
  std::vector<double> targets;  // Y; 0 = one person, 1 = more than one for logistic fits

  [[nodiscard]] std::size_t rows() const noexcept { return targets.size(); }
  [[nodiscard]] std::size_t dims() const noexcept { return feature_names.size(); }
  [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
    return std::span<const double>(values).subspan(i * dims(), dims());
  }
  [[nodiscard]] std::vector<double> column(std::size_t k) const;

  /// Throws LengthMismatch when the row width differs from dims().
  void add(std::span<const double> features, double target);
  [[nodiscard]] bool binary() const noexcept;
};

enum class ModelKind { Linear, Robust, Logistic };

std::string_view to_string(ModelKind kind) noexcept;
/// Throws InvalidConfig for unknown names.
ModelKind parse_model_kind(std::string_view text);

struct RegressionModel {
  ModelKind kind = ModelKind::Logistic;
  std::vector<std::string> feature_names;
  std::vector<double> beta;             // beta[0] is the intercept
  std::vector<double> standard_errors;  // +inf for a feature with no variance
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;  // logistic only
  double scale = 0.0;           // residual scale (linear: RMSE, robust: 1.4826 MAD)

  /// beta0 + sum beta_k x_k.
  [[nodiscard]] double linear_predictor(std::span<const double> features) const;
  /// Y-hat for linear/robust models, P(Y = 1 | x) for the logistic model.
  [[nodiscard]] double predict(std::span<const double> features) const;
  [[nodiscard]] std::vector<double> predict(const Dataset& data) const;
};

/// ln(p / (1 - p)); throws DomainError outside (0, 1).
[[nodiscard]] double logit(double p);
[[nodiscard]] double sigmoid(double z) noexcept;

/// Ordinary least squares. Throws RankDeficient for a singular design or
/// InsufficientData with fewer than dims() + 2 rows.
[[nodiscard]] RegressionModel fit_linear(const Dataset& data);

struct RobustOptions {
  double huber_k = 1.345;
  int max_iterations = 50;
  double tolerance = 1e-8;
};

/// Huber M-estimate by iteratively reweighted least squares, starting from
/// OLS. Non-convergence returns the last iterate with converged = false.
[[nodiscard]] RegressionModel fit_robust(const Dataset& data, const RobustOptions& options = {});

struct LogisticOptions {
  int max_iterations = 100;
  double tolerance = 1e-8;          // log-likelihood change
  double separation_norm = 1e3;     // standardized coefficient norm
};

/// Maximum likelihood by Newton's method with step halving. Throws
/// SingleClass, RankDeficient or Separation. Features without variance are
/// left out of the fit and reported with beta = 0 and an infinite SE.
[[nodiscard]] RegressionModel fit_logistic(const Dataset& data, const LogisticOptions& options = {});

[[nodiscard]] RegressionModel fit(const Dataset& data, ModelKind kind);

struct CoefficientTest {
  std::string name;
  double beta = 0.0;
  double standard_error = 0.0;
  double statistic = 0.0;  // Wald W for logistic, T for linear
  double p_value = 1.0;
};

/// W = (beta / SE)^2 against chi-square(1), one entry per coefficient
/// including the intercept. Throws ModelMismatch for non-logistic models.
[[nodiscard]] std::vector<CoefficientTest> wald_test(const RegressionModel& model);

struct HosmerLemeshowGroup {
  std::size_t size = 0;
  double observed = 0.0;  // count of Y = 1
  double expected = 0.0;  // sum of predicted probabilities
};

struct HosmerLemeshowResult {
  double chi2 = 0.0;
  double p_value = 1.0;
  int df = 0;
  int merges = 0;  // adjacent groups merged because a cell expected count was zero
  std::vector<HosmerLemeshowGroup> groups;
};

/// Deciles-of-risk goodness of fit: rows sorted by probability (stable), split
/// into `groups` equal-count groups, chi-square with groups - 2 df.
[[nodiscard]] HosmerLemeshowResult hosmer_lemeshow(std::span<const double> probabilities, std::span<const double> labels,
                                                   int groups = 10);
[[nodiscard]] HosmerLemeshowResult hosmer_lemeshow(const RegressionModel& model, const Dataset& data, int groups = 10);

struct SignificanceReport {
  ModelKind kind = ModelKind::Linear;
  std::vector<CoefficientTest> coefficients;
  std::string model_test;  // "F" or "Hosmer-Lemeshow"
  double model_statistic = 0.0;
  double model_df1 = 0.0;
  double model_df2 = 0.0;  // unused for Hosmer-Lemeshow
  double model_p_value = 1.0;
  bool degenerate = false;  // exact fit: zero residual variance
};

/// T tests with n - N - 1 df per coefficient and the overall F test.
[[nodiscard]] SignificanceReport linear_significance(const RegressionModel& model, const Dataset& data);
/// Wald tests per coefficient and the Hosmer-Lemeshow test for the model.
[[nodiscard]] SignificanceReport logistic_significance(const RegressionModel& model, const Dataset& data,
                                                       int groups = 10);

/// Pearson correlation. Throws LengthMismatch or ZeroVariance.
[[nodiscard]] double correlation(std::span<const double> a, std::span<const double> b);

struct ComparisonReport {
  double linear = 0.0;  // corr(Y-hat, Y)
  double robust = 0.0;
  double logistic = 0.0;
  std::vector<std::string> labels;         // features, logistic output, expected values
  std::vector<std::vector<double>> matrix;  // lower-triangular correlation table
};

[[nodiscard]] ComparisonReport model_comparison(const Dataset& data);

}  // namespace mantrap
