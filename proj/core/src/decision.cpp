#include "mantrap/decision.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "mantrap/error.hpp"

namespace mantrap {

std::string_view to_string(Verdict v) noexcept {
  return v == Verdict::SinglePerson ? "SinglePerson" : "MultiplePersons";
}

double metric_feature(const MetricVector& m, std::string_view name) {
  if (name == "v_tx") return m.v_tx_hat;
  if (name == "v_rx") return m.v_rx_hat;
  if (name == "var_tx") return m.var_tx;
  if (name == "var_rx") return m.var_rx;
  if (name == "n_f") return static_cast<double>(m.n_f);
  throw Error(ErrorCode::InvalidConfig, "unknown metric feature '" + std::string(name) + "'");
}

std::vector<double> metric_features(const MetricVector& m, std::span<const std::string> names) {
  std::vector<double> out;
  out.reserve(names.size());
  for (const auto& name : names) out.push_back(metric_feature(m, name));
  return out;
}

double DecisionModel::probability(const MetricVector& m) const {
  if (!model.converged || model.beta.empty()) throw Error(ErrorCode::UnfittedModel, "decision model is not fitted");
  if (model.kind != ModelKind::Logistic) throw Error(ErrorCode::ModelMismatch, "decision model must be logistic");
  return model.predict(metric_features(m, model.feature_names));
}

Verdict decide(double probability, double threshold) noexcept {
  return probability > threshold ? Verdict::MultiplePersons : Verdict::SinglePerson;
}

Verdict decide(const DecisionModel& dm, const MetricVector& m) { return decide(dm.probability(m), dm.threshold); }

double tune_threshold(std::span<const double> probabilities, std::span<const double> labels) {
  if (probabilities.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "probabilities vs labels");
  std::vector<double> distinct(probabilities.begin(), probabilities.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() <= 1) return 0.5;

  // Cut k sits between distinct[k-1] and distinct[k]; the outer cuts sit
  // halfway to 0 and 1.
  std::vector<double> cuts;
  cuts.push_back(0.5 * distinct.front());
  for (std::size_t k = 1; k < distinct.size(); ++k) cuts.push_back(0.5 * (distinct[k - 1] + distinct[k]));
  cuts.push_back(0.5 * (distinct.back() + 1.0));

  double best = 0.5;
  std::size_t best_correct = 0;
  std::size_t best_fn = 0;
  bool have = false;
  for (double cut : cuts) {
    std::size_t correct = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
      const bool multiple = probabilities[i] > cut;
      const bool actual = labels[i] > 0.5;
      if (multiple == actual) ++correct;
      if (actual && !multiple) ++fn;
    }
    const bool better = !have || correct > best_correct || (correct == best_correct && fn < best_fn) ||
                        (correct == best_correct && fn == best_fn && std::fabs(cut - 0.5) < std::fabs(best - 0.5));
    if (better) {
      have = true;
      best = cut;
      best_correct = correct;
      best_fn = fn;
    }
  }
  return best;
}

double tune_threshold(const DecisionModel& dm, const Dataset& data) {
  if (!dm.model.converged || dm.model.beta.empty()) throw Error(ErrorCode::UnfittedModel, "decision model is not fitted");
  return tune_threshold(dm.model.predict(data), data.targets);
}

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) noexcept {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::optional<double> ConfusionReport::sensibility() const noexcept { return ratio(a, a + c); }
std::optional<double> ConfusionReport::correct_classification() const noexcept { return ratio(a + d, n); }
std::optional<double> ConfusionReport::correctness() const noexcept { return ratio(d, b + d); }
std::optional<double> ConfusionReport::completeness() const noexcept { return ratio(d, c + d); }
std::optional<double> ConfusionReport::false_positives() const noexcept { return ratio(b, n); }
std::optional<double> ConfusionReport::false_negatives() const noexcept { return ratio(c, n); }

ConfusionReport classification_report(std::span<const int> labels, std::span<const Verdict> predictions) {
  if (labels.size() != predictions.size()) throw Error(ErrorCode::LengthMismatch, "labels vs predictions");
  ConfusionReport r;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool several = labels[i] != 0;
    const bool flagged = predictions[i] == Verdict::MultiplePersons;
    if (!several && !flagged) ++r.a;
    if (!several && flagged) ++r.b;
    if (several && !flagged) ++r.c;
    if (several && flagged) ++r.d;
  }
  r.n = labels.size();
  return r;
}

std::string format_percent(std::optional<double> ratio) {
  if (!ratio) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *ratio * 100.0);
  std::string s(buf);
  if (s.size() > 2 && s.compare(s.size() - 2, 2, ".0") == 0) s.resize(s.size() - 2);
  return s + "%";
}

}  // namespace mantrap
