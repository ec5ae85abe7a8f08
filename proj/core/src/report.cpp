#include "mantrap/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace mantrap {

using nlohmann::json;

namespace {

std::string fixed(double v, int decimals = 3) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json ratio(std::optional<double> r) { return r ? json(*r) : json(nullptr); }

// Left-aligned columns separated by two spaces.
class Table {
 public:
  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
  [[nodiscard]] std::string str() const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_) {
      if (width.size() < r.size()) width.resize(r.size(), 0);
      for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    }
    std::string out;
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t c = 0; c < r.size(); ++c) {
        line += r[c];
        if (c + 1 < r.size()) line.append(width[c] - r[c].size() + 2, ' ');
      }
      out += line + '\n';
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace

std::string significance_table(const SignificanceReport& report) {
  std::string out;
  if (report.kind == ModelKind::Logistic) {
    out += "General Model Goodness of Fit\n";
    Table model;
    model.row({"Hosmer Lemeshow Test", "Chi-Square value", "p-value"});
    model.row({"df = " + fixed(report.model_df1, 0), fixed(report.model_statistic), fixed(report.model_p_value)});
    out += model.str();
    out += "\nSingle Variables Significance Test\n";
    Table vars;
    vars.row({"Decision Variables", "Wald Test", "p-value"});
    for (const auto& c : report.coefficients) vars.row({c.name, fixed(c.statistic), fixed(c.p_value)});
    out += vars.str();
    return out;
  }
  out += "General Model Significance\n";
  Table model;
  model.row({"F Test", "F value", "df", "p-value"});
  model.row({std::string(to_string(report.kind)), fixed(report.model_statistic),
             fixed(report.model_df1, 0) + ", " + fixed(report.model_df2, 0), fixed(report.model_p_value)});
  out += model.str();
  if (report.degenerate) out += "(exact fit: residual variance is zero)\n";
  out += "\nSingle Variables Significance Test\n";
  Table vars;
  vars.row({"Decision Variables", "Coefficient", "Std. Error", "T Test", "p-value"});
  for (const auto& c : report.coefficients) {
    vars.row({c.name, fixed(c.beta, 6), fixed(c.standard_error, 6), fixed(c.statistic), fixed(c.p_value)});
  }
  out += vars.str();
  return out;
}

std::string significance_json(const SignificanceReport& report) {
  json coeffs = json::array();
  for (const auto& c : report.coefficients) {
    coeffs.push_back(json{{"name", c.name},
                          {"beta", number(c.beta)},
                          {"se", number(c.standard_error)},
                          {"statistic", number(c.statistic)},
                          {"p_value", number(c.p_value)}});
  }
  json model{{"test", report.model_test},
             {"statistic", number(report.model_statistic)},
             {"df1", report.model_df1},
             {"p_value", number(report.model_p_value)}};
  if (report.kind != ModelKind::Logistic) model["df2"] = report.model_df2;
  return json{{"kind", std::string(to_string(report.kind))},
              {"model", model},
              {"coefficients", coeffs},
              {"degenerate", report.degenerate}}
      .dump(2);
}

std::string confusion_table(const ConfusionReport& r) {
  auto cell = [](const char* tag, std::size_t v) { return std::string(tag) + " " + std::to_string(v); };
  Table t;
  t.row({"", "", "System Detection", "", ""});
  t.row({"", "", "Case 1B", "Case 2B", "TOT."});
  t.row({"Actual Status", "Case 1A", cell("(a)", r.a), cell("(b)", r.b), cell("(a + b)", r.a + r.b)});
  t.row({"", "Case 2A", cell("(c)", r.c), cell("(d)", r.d), cell("(c + d)", r.c + r.d)});
  t.row({"", "TOT.", cell("(a + c)", r.a + r.c), cell("(b + d)", r.b + r.d), cell("(N)", r.n)});
  return t.str();
}

std::string performance_table(const ConfusionReport& r) {
  Table t;
  t.row({"", "", "Parameters", "Percentages (%)"});
  t.row({"# One person correctly detected (TP):", std::to_string(r.a), "Sensibility: a/(a + c)",
         format_percent(r.sensibility())});
  t.row({"# Two people correctly detected (TN):", std::to_string(r.d), "Correct Classification: (a + d)/N",
         format_percent(r.correct_classification())});
  t.row({"# Measurements with one person:", std::to_string(r.a + r.b), "Correctness: d/(b + d)",
         format_percent(r.correctness())});
  t.row({"# Measurements with two people:", std::to_string(r.c + r.d), "Completeness: d/(c + d)",
         format_percent(r.completeness())});
  t.row({"# One person mistaken as two people (FP):", std::to_string(r.b), "False Positives: b/N",
         format_percent(r.false_positives())});
  t.row({"# Two people mistaken as one person (FN):", std::to_string(r.c), "False Negatives: c/N",
         format_percent(r.false_negatives())});
  return t.str();
}

std::string classification_json(const ConfusionReport& r, double threshold) {
  return json{{"threshold", threshold},
              {"counts", {{"a", r.a}, {"b", r.b}, {"c", r.c}, {"d", r.d}, {"n", r.n}}},
              {"ratios",
               {{"sensibility", ratio(r.sensibility())},
                {"correct_classification", ratio(r.correct_classification())},
                {"correctness", ratio(r.correctness())},
                {"completeness", ratio(r.completeness())},
                {"false_positives", ratio(r.false_positives())},
                {"false_negatives", ratio(r.false_negatives())}}},
              {"percentages",
               {{"sensibility", format_percent(r.sensibility())},
                {"correct_classification", format_percent(r.correct_classification())},
                {"correctness", format_percent(r.correctness())},
                {"completeness", format_percent(r.completeness())},
                {"false_positives", format_percent(r.false_positives())},
                {"false_negatives", format_percent(r.false_negatives())}}}}
      .dump(2);
}

std::string comparison_table(const ComparisonReport& report) {
  std::string out = "Correlation Among Explicative Variables, Expected Values and Model Output\n";
  Table grid;
  std::vector<std::string> head{"Correlation Values"};
  for (std::size_t k = 0; k + 1 < report.labels.size(); ++k) head.push_back(report.labels[k]);
  grid.row(head);
  for (std::size_t i = 0; i < report.matrix.size(); ++i) {
    std::vector<std::string> row{report.labels[i]};
    for (std::size_t k = 0; k < report.matrix[i].size() && k + 1 < report.labels.size(); ++k) {
      row.push_back(fixed(report.matrix[i][k], 4));
    }
    grid.row(row);
  }
  out += grid.str();
  out += "\nCorrelation With Expected Values (%)\n";
  Table models;
  models.row({"Correlation Values", "Linear Regression", "Robust Regression", "Logistic Regression"});
  models.row({"Expected Values", fixed(100.0 * report.linear, 2) + " %", fixed(100.0 * report.robust, 2) + " %",
              fixed(100.0 * report.logistic, 2) + " %"});
  out += models.str();
  return out;
}

std::string comparison_json(const ComparisonReport& report) {
  json matrix = json::array();
  for (const auto& row : report.matrix) {
    json r = json::array();
    for (double v : row) r.push_back(number(v));
    matrix.push_back(r);
  }
  return json{{"correlation_with_y",
               {{"linear", number(report.linear)},
                {"robust", number(report.robust)},
                {"logistic", number(report.logistic)}}},
              {"labels", report.labels},
              {"matrix", matrix}}
      .dump(2);
}

std::string decision_line(const PassageDecision& d) {
  std::ostringstream out;
  out << "passage " << d.passage << " seq " << d.emitted_at_seq << ' ' << to_string(d.verdict)
      << " p=" << fixed(d.probability, 4) << " v_tx=" << fixed(d.metrics.v_tx_hat, 3)
      << " v_rx=" << fixed(d.metrics.v_rx_hat, 3) << " var_tx=" << fixed(d.metrics.var_tx, 6)
      << " var_rx=" << fixed(d.metrics.var_rx, 6) << " n_f=" << d.metrics.n_f;
  return out.str();
}

std::string decision_json(const PassageDecision& d) {
  auto opt = [](const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); };
  return json{{"passage", d.passage},
              {"emitted_at_seq", d.emitted_at_seq},
              {"verdict", std::string(to_string(d.verdict))},
              {"probability", d.probability},
              {"timeline",
               {{"t_start", opt(d.timeline.t_start)},
                {"t_enter_closed", opt(d.timeline.t_enter_closed)},
                {"t_exit_open", opt(d.timeline.t_exit_open)}}},
              {"metrics",
               {{"v_tx", d.metrics.v_tx_hat},
                {"v_rx", d.metrics.v_rx_hat},
                {"var_tx", d.metrics.var_tx},
                {"var_rx", d.metrics.var_rx},
                {"n_f", d.metrics.n_f}}}}
      .dump();
}

}  // namespace mantrap
