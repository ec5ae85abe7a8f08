#include <gtest/gtest.h>

#include <random>

#include "mantrap/decision.hpp"
#include "mantrap/error.hpp"

namespace mantrap {
namespace {

ConfusionReport from_counts(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  std::vector<int> labels;
  std::vector<Verdict> verdicts;
  auto push = [&](std::size_t n, int label, Verdict v) {
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(label);
      verdicts.push_back(v);
    }
  };
  push(a, 0, Verdict::SinglePerson);
  push(b, 0, Verdict::MultiplePersons);
  push(c, 1, Verdict::SinglePerson);
  push(d, 1, Verdict::MultiplePersons);
  return classification_report(labels, verdicts);
}

TEST(Classification, ValidationTableCounts) {
  const auto r = from_counts(35, 2, 0, 26);
  EXPECT_EQ(r.n, 63u);
  EXPECT_EQ(format_percent(r.sensibility()), "100%");
  EXPECT_EQ(format_percent(r.correct_classification()), "96.8%");
  EXPECT_EQ(format_percent(r.correctness()), "92.9%");
  EXPECT_EQ(format_percent(r.completeness()), "100%");
  EXPECT_EQ(format_percent(r.false_positives()), "3.2%");
  EXPECT_EQ(format_percent(r.false_negatives()), "0%");
}

TEST(Classification, PerfectPredictions) {
  const auto r = from_counts(10, 0, 0, 7);
  for (auto v : {r.sensibility(), r.correct_classification(), r.correctness(), r.completeness()}) {
    EXPECT_EQ(format_percent(v), "100%");
  }
  EXPECT_EQ(format_percent(r.false_positives()), "0%");
  EXPECT_EQ(format_percent(r.false_negatives()), "0%");
}

TEST(Classification, UndefinedRatios) {
  const auto r = from_counts(0, 0, 0, 4);
  EXPECT_FALSE(r.sensibility());
  EXPECT_EQ(format_percent(r.sensibility()), "n/a");
  const auto singles_only = from_counts(5, 1, 0, 0);
  EXPECT_EQ(format_percent(singles_only.completeness()), "n/a");
  const auto empty = from_counts(0, 0, 0, 0);
  EXPECT_FALSE(empty.correct_classification());
}

TEST(Classification, CountsAlwaysAddUp) {
  std::mt19937 rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<int> labels;
    std::vector<Verdict> verdicts;
    for (int i = 0; i < 40; ++i) {
      labels.push_back(static_cast<int>(rng() % 2));
      verdicts.push_back(rng() % 2 ? Verdict::MultiplePersons : Verdict::SinglePerson);
    }
    const auto r = classification_report(labels, verdicts);
    EXPECT_EQ(r.a + r.b + r.c + r.d, r.n);
    if (r.n) EXPECT_NEAR(*r.correct_classification() + *r.false_positives() + *r.false_negatives(), 1.0, 1e-12);
  }
}

TEST(Classification, LengthMismatch) {
  const std::vector<int> labels{0, 1};
  const std::vector<Verdict> verdicts{Verdict::SinglePerson};
  EXPECT_THROW((void)classification_report(labels, verdicts), Error);
}

TEST(FormatPercent, Rounding) {
  EXPECT_EQ(format_percent(61.0 / 63.0), "96.8%");
  EXPECT_EQ(format_percent(0.5), "50%");
  EXPECT_EQ(format_percent(0.12345), "12.3%");
  EXPECT_EQ(format_percent(0.9996), "100%");
  EXPECT_EQ(format_percent(1.0), "100%");
}

TEST(Decide, StrictThreshold) {
  EXPECT_EQ(decide(0.5, 0.5), Verdict::SinglePerson);
  EXPECT_EQ(decide(0.5000001, 0.5), Verdict::MultiplePersons);
  EXPECT_EQ(decide(0.2, 0.3), Verdict::SinglePerson);
}

DecisionModel toy_model() {
  DecisionModel dm;
  dm.model.kind = ModelKind::Logistic;
  dm.model.feature_names = {"v_tx", "v_rx"};
  dm.model.beta = {-10.0, 0.1, 0.1};
  dm.model.standard_errors = {1.0, 1.0, 1.0};
  dm.model.converged = true;
  return dm;
}

TEST(DecisionModel, ProbabilityFromMetrics) {
  auto dm = toy_model();
  MetricVector m;
  m.v_tx_hat = 50.0;
  m.v_rx_hat = 50.0;
  EXPECT_DOUBLE_EQ(dm.probability(m), 0.5);
  EXPECT_EQ(decide(dm, m), Verdict::SinglePerson);
  m.v_tx_hat = 51.0;
  EXPECT_EQ(decide(dm, m), Verdict::MultiplePersons);
}

TEST(DecisionModel, Guards) {
  auto dm = toy_model();
  dm.model.converged = false;
  try {
    (void)dm.probability(MetricVector{});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnfittedModel);
  }
  dm = toy_model();
  dm.model.kind = ModelKind::Linear;
  try {
    (void)dm.probability(MetricVector{});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ModelMismatch);
  }
}

TEST(DecisionModel, ZeroCoefficientsNeverFlag) {
  auto dm = toy_model();
  dm.model.beta = {0.0, 0.0, 0.0};
  for (double v : {0.0, 10.0, 3000.0}) {
    MetricVector m;
    m.v_tx_hat = v;
    m.v_rx_hat = v;
    EXPECT_EQ(decide(dm, m), Verdict::SinglePerson);
  }
}

TEST(DecisionModel, MonotoneInEachFeature) {
  const auto dm = toy_model();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int rep = 0; rep < 500; ++rep) {
    MetricVector m;
    m.v_tx_hat = u(rng);
    m.v_rx_hat = u(rng);
    if (decide(dm, m) != Verdict::MultiplePersons) continue;
    auto up = m;
    up.v_tx_hat += u(rng);
    EXPECT_EQ(decide(dm, up), Verdict::MultiplePersons);
    up = m;
    up.v_rx_hat += u(rng);
    EXPECT_EQ(decide(dm, up), Verdict::MultiplePersons);
  }
}

TEST(MetricFeature, Names) {
  MetricVector m{1.0, 2.0, 3.0, 4.0, 5};
  EXPECT_EQ(metric_feature(m, "v_tx"), 1.0);
  EXPECT_EQ(metric_feature(m, "v_rx"), 2.0);
  EXPECT_EQ(metric_feature(m, "var_tx"), 3.0);
  EXPECT_EQ(metric_feature(m, "var_rx"), 4.0);
  EXPECT_EQ(metric_feature(m, "n_f"), 5.0);
  EXPECT_THROW((void)metric_feature(m, "m5"), Error);
  EXPECT_EQ(default_decision_features(), (std::vector<std::string>{"v_tx", "v_rx"}));
}

std::size_t correct_at(const std::vector<double>& p, const std::vector<double>& y, double cut) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < p.size(); ++i) ok += (p[i] > cut) == (y[i] > 0.5);
  return ok;
}

TEST(TuneThreshold, MatchesBruteForceScan) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 5 + rng() % 60;
    std::vector<double> p(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = std::round(u(rng) * 40.0) / 40.0;  // plenty of ties
      y[i] = u(rng) < p[i] ? 1.0 : 0.0;
    }
    const double thr = tune_threshold(p, y);
    std::size_t best = 0;
    for (double c = -0.001; c <= 1.001; c += 0.0005) best = std::max(best, correct_at(p, y, c));
    EXPECT_EQ(correct_at(p, y, thr), best) << "rep " << rep;
    EXPECT_GE(thr, 0.0);
    EXPECT_LE(thr, 1.0);
  }
}

TEST(TuneThreshold, PrefersFewerFalseNegatives) {
  // Cuts at 0.35 and 0.65 both misclassify one row; only the lower one has no false negative.
  const std::vector<double> p{0.2, 0.5, 0.8};
  const std::vector<double> y{0.0, 0.0, 1.0};
  const std::vector<double> y2{0.0, 1.0, 0.0};
  EXPECT_DOUBLE_EQ(tune_threshold(p, y), 0.65);
  const double t2 = tune_threshold(p, y2);
  std::size_t fn = 0;
  for (std::size_t i = 0; i < p.size(); ++i) fn += y2[i] > 0.5 && !(p[i] > t2);
  EXPECT_EQ(fn, 0u);
}

TEST(TuneThreshold, Degenerate) {
  const std::vector<double> p{0.3, 0.3};
  const std::vector<double> y{0.0, 1.0};
  EXPECT_EQ(tune_threshold(p, y), 0.5);
  const std::vector<double> shorter{0.0};
  EXPECT_THROW((void)tune_threshold(p, shorter), Error);
}

}  // namespace
}  // namespace mantrap
