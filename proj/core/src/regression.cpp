#include "mantrap/regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mantrap/distributions.hpp"
#include "mantrap/error.hpp"

namespace mantrap {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<double> Dataset::column(std::size_t k) const {
  std::vector<double> out(rows());
  for (std::size_t i = 0; i < rows(); ++i) out[i] = values[i * dims() + k];
  return out;
}

void Dataset::add(std::span<const double> features, double target) {
  if (features.size() != dims()) throw Error(ErrorCode::LengthMismatch, "row width differs from feature count");
  values.insert(values.end(), features.begin(), features.end());
  targets.push_back(target);
}

bool Dataset::binary() const noexcept {
  return std::all_of(targets.begin(), targets.end(), [](double y) { return y == 0.0 || y == 1.0; });
}

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Linear: return "linear";
    case ModelKind::Robust: return "robust";
    case ModelKind::Logistic: return "logistic";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "linear") return ModelKind::Linear;
  if (text == "robust") return ModelKind::Robust;
  if (text == "logistic") return ModelKind::Logistic;
  throw Error(ErrorCode::InvalidConfig, "unknown model kind '" + std::string(text) + "'");
}

double RegressionModel::linear_predictor(std::span<const double> features) const {
  if (beta.size() != features.size() + 1) throw Error(ErrorCode::LengthMismatch, "feature count differs from model");
  double eta = beta[0];
  for (std::size_t k = 0; k < features.size(); ++k) eta += beta[k + 1] * features[k];
  return eta;
}

double RegressionModel::predict(std::span<const double> features) const {
  const double eta = linear_predictor(features);
  return kind == ModelKind::Logistic ? sigmoid(eta) : eta;
}

std::vector<double> RegressionModel::predict(const Dataset& data) const {
  std::vector<double> out(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) out[i] = predict(data.row(i));
  return out;
}

double logit(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::DomainError, "logit needs 0 < p < 1");
  return std::log(p / (1.0 - p));
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

constexpr double kRankThreshold = 1e-10;

// z-scored design with a leading intercept column. Columns with zero spread
// keep centre 0 / scale 1 and are flagged.
struct Standardized {
  MatrixXd design;
  VectorXd y;
  std::vector<double> centre;
  std::vector<double> scale;
  std::vector<bool> constant;
};

Standardized standardize(const Dataset& data) {
  const auto n = data.rows();
  const auto d = data.dims();
  Standardized s;
  s.design.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d + 1));
  s.y.resize(static_cast<Eigen::Index>(n));
  s.centre.assign(d, 0.0);
  s.scale.assign(d, 1.0);
  s.constant.assign(d, false);
  for (std::size_t k = 0; k < d; ++k) {
    const auto col = data.column(k);
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (sd > 0.0 && sd > 1e-14 * std::fabs(mean)) {
      s.centre[k] = mean;
      s.scale[k] = sd;
    } else {
      s.constant[k] = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    s.design(r, 0) = 1.0;
    const auto row = data.row(i);
    for (std::size_t k = 0; k < d; ++k) {
      s.design(r, static_cast<Eigen::Index>(k + 1)) = (row[k] - s.centre[k]) / s.scale[k];
    }
    s.y(r) = data.targets[i];
  }
  return s;
}

// beta = A gamma maps standardized coefficients back to original units.
MatrixXd back_transform(const Standardized& s) {
  const auto p = static_cast<Eigen::Index>(s.centre.size() + 1);
  MatrixXd a = MatrixXd::Identity(p, p);
  for (std::size_t k = 0; k < s.centre.size(); ++k) {
    const auto c = static_cast<Eigen::Index>(k + 1);
    a(c, c) = 1.0 / s.scale[k];
    a(0, c) = -s.centre[k] / s.scale[k];
  }
  return a;
}

void store(RegressionModel& m, const Standardized& s, const VectorXd& gamma, const MatrixXd& covariance) {
  const MatrixXd a = back_transform(s);
  const VectorXd beta = a * gamma;
  const MatrixXd cov = a * covariance * a.transpose();
  m.beta.assign(beta.data(), beta.data() + beta.size());
  m.standard_errors.resize(m.beta.size());
  for (Eigen::Index k = 0; k < cov.rows(); ++k) m.standard_errors[static_cast<std::size_t>(k)] = std::sqrt(std::max(cov(k, k), 0.0));
}

void require_rows(const Dataset& data) {
  if (data.rows() < data.dims() + 2) {
    throw Error(ErrorCode::InsufficientData,
                std::to_string(data.rows()) + " rows for " + std::to_string(data.dims()) + " features");
  }
}

void require_full_rank(const MatrixXd& design) {
  Eigen::ColPivHouseholderQR<MatrixXd> qr(design);
  qr.setThreshold(kRankThreshold);
  if (qr.rank() < design.cols()) {
    throw Error(ErrorCode::RankDeficient, "design matrix has rank " + std::to_string(qr.rank()) + " < " +
                                              std::to_string(design.cols()));
  }
}

// Weighted least squares in the standardized space; returns gamma and (X'WX)^-1.
std::pair<VectorXd, MatrixXd> weighted_solve(const MatrixXd& x, const VectorXd& y, const VectorXd& w) {
  const VectorXd sw = w.cwiseSqrt();
  const MatrixXd xw = sw.asDiagonal() * x;
  const VectorXd yw = sw.cwiseProduct(y);
  Eigen::ColPivHouseholderQR<MatrixXd> qr(xw);
  qr.setThreshold(kRankThreshold);
  if (qr.rank() < x.cols()) throw Error(ErrorCode::RankDeficient, "weighted design is singular");
  const VectorXd gamma = qr.solve(yw);
  const MatrixXd xtx = xw.transpose() * xw;
  return {gamma, xtx.inverse()};
}

double median(std::vector<double> v) {
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

double robust_scale(const VectorXd& residuals) {
  std::vector<double> r(residuals.data(), residuals.data() + residuals.size());
  const double m = median(r);
  for (double& v : r) v = std::fabs(v - m);
  return 1.4826 * median(r);
}

double log_likelihood(const VectorXd& eta, const VectorXd& y) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double e = eta(i);
    // log(1 + exp(e)) without overflow
    const double softplus = e > 0.0 ? e + std::log1p(std::exp(-e)) : std::log1p(std::exp(e));
    ll += y(i) * e - softplus;
  }
  return ll;
}

}  // namespace

RegressionModel fit_linear(const Dataset& data) {
  require_rows(data);
  const Standardized s = standardize(data);
  for (std::size_t k = 0; k < s.constant.size(); ++k) {
    if (s.constant[k]) throw Error(ErrorCode::RankDeficient, "feature '" + data.feature_names[k] + "' is constant");
  }
  require_full_rank(s.design);

  const auto [gamma, xtx_inv] = weighted_solve(s.design, s.y, VectorXd::Ones(s.y.size()));
  const VectorXd residuals = s.y - s.design * gamma;
  const double dof = static_cast<double>(data.rows() - data.dims() - 1);
  const double sigma2 = residuals.squaredNorm() / dof;

  RegressionModel m;
  m.kind = ModelKind::Linear;
  m.feature_names = data.feature_names;
  m.converged = true;
  m.iterations = 1;
  m.scale = std::sqrt(sigma2);
  store(m, s, gamma, sigma2 * xtx_inv);
  return m;
}

RegressionModel fit_robust(const Dataset& data, const RobustOptions& options) {
  require_rows(data);
  const Standardized s = standardize(data);
  for (std::size_t k = 0; k < s.constant.size(); ++k) {
    if (s.constant[k]) throw Error(ErrorCode::RankDeficient, "feature '" + data.feature_names[k] + "' is constant");
  }
  require_full_rank(s.design);

  const auto n = s.y.size();
  VectorXd weights = VectorXd::Ones(n);
  auto [gamma, xtx_inv] = weighted_solve(s.design, s.y, weights);

  RegressionModel m;
  m.kind = ModelKind::Robust;
  m.feature_names = data.feature_names;

  double sigma = 0.0;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    m.iterations = iter;
    const VectorXd residuals = s.y - s.design * gamma;
    sigma = robust_scale(residuals);
    if (sigma == 0.0) {
      m.converged = true;
      break;
    }
    const double cutoff = options.huber_k * sigma;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = std::fabs(residuals(i));
      weights(i) = r <= cutoff ? 1.0 : cutoff / r;
    }
    auto [next, next_inv] = weighted_solve(s.design, s.y, weights);
    const double change = (next - gamma).cwiseAbs().maxCoeff();
    const double size = 1.0 + gamma.cwiseAbs().maxCoeff();
    gamma = next;
    xtx_inv = next_inv;
    if (change <= options.tolerance * size) {
      m.converged = true;
      break;
    }
  }
  m.scale = sigma;
  store(m, s, gamma, sigma * sigma * xtx_inv);
  return m;
}

RegressionModel fit_logistic(const Dataset& data, const LogisticOptions& options) {
  if (data.rows() == 0) throw Error(ErrorCode::SingleClass, "empty dataset");
  if (!data.binary()) throw Error(ErrorCode::DomainError, "logistic targets must be 0 or 1");
  const auto ones = std::count(data.targets.begin(), data.targets.end(), 1.0);
  if (ones == 0 || static_cast<std::size_t>(ones) == data.rows()) {
    throw Error(ErrorCode::SingleClass, std::string("every row has Y = ") + (ones == 0 ? "0" : "1"));
  }
  const Standardized s = standardize(data);

  // Fit only the intercept and features that vary.
  std::vector<Eigen::Index> active{0};
  for (std::size_t k = 0; k < s.constant.size(); ++k) {
    if (!s.constant[k]) active.push_back(static_cast<Eigen::Index>(k + 1));
  }
  const auto p = static_cast<Eigen::Index>(active.size());
  MatrixXd x(s.design.rows(), p);
  for (Eigen::Index c = 0; c < p; ++c) x.col(c) = s.design.col(active[static_cast<std::size_t>(c)]);
  if (static_cast<std::size_t>(x.rows()) < static_cast<std::size_t>(p)) {
    throw Error(ErrorCode::InsufficientData, "fewer rows than coefficients");
  }
  require_full_rank(x);

  const auto check_separation = [&](const VectorXd& g) {
    if (g.tail(p - 1).norm() > options.separation_norm) {
      throw Error(ErrorCode::Separation, "standardized coefficient norm exceeds " +
                                             std::to_string(options.separation_norm) + "; classes are separable");
    }
  };

  VectorXd gamma = VectorXd::Zero(p);
  const double mean_y = static_cast<double>(ones) / static_cast<double>(data.rows());
  gamma(0) = std::log(mean_y / (1.0 - mean_y));
  VectorXd eta = x * gamma;
  double ll = log_likelihood(eta, s.y);

  RegressionModel m;
  m.kind = ModelKind::Logistic;
  m.feature_names = data.feature_names;

  auto hessian = [&](const VectorXd& e) {
    VectorXd w(e.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const double pi = sigmoid(e(i));
      w(i) = pi * (1.0 - pi);
    }
    return MatrixXd(x.transpose() * w.asDiagonal() * x);
  };
  auto score = [&](const VectorXd& e) {
    VectorXd r(e.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) r(i) = s.y(i) - sigmoid(e(i));
    return VectorXd(x.transpose() * r);
  };

  int polish = 0;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    m.iterations = iter;
    const MatrixXd h = hessian(eta);
    const VectorXd step = h.ldlt().solve(score(eta));

    double t = 1.0;
    VectorXd candidate = gamma + step;
    VectorXd candidate_eta = x * candidate;
    double candidate_ll = log_likelihood(candidate_eta, s.y);
    for (int halving = 0; halving < 40 && !(candidate_ll >= ll - 1e-12 * std::fabs(ll)); ++halving) {
      t *= 0.5;
      candidate = gamma + t * step;
      candidate_eta = x * candidate;
      candidate_ll = log_likelihood(candidate_eta, s.y);
    }
    const double change = std::fabs(candidate_ll - ll);
    gamma = candidate;
    eta = candidate_eta;
    ll = candidate_ll;
    check_separation(gamma);

    // After the likelihood settles, take two more full Newton steps so the
    // score equations hold far below the likelihood tolerance.
    if (change < options.tolerance) {
      if (++polish > 2) {
        m.converged = true;
        break;
      }
    }
  }

  // Complete separation: a linear predictor that orders every Y = 1 row
  // above every Y = 0 row has no finite maximum.
  double max0 = -std::numeric_limits<double>::infinity();
  double min0 = std::numeric_limits<double>::infinity();
  double max1 = -std::numeric_limits<double>::infinity();
  double min1 = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    if (s.y(i) > 0.5) {
      min1 = std::min(min1, eta(i));
      max1 = std::max(max1, eta(i));
    } else {
      min0 = std::min(min0, eta(i));
      max0 = std::max(max0, eta(i));
    }
  }
  if (max0 < min1 || max1 < min0) {
    throw Error(ErrorCode::Separation, "classes are completely separated by the linear predictor");
  }

  const MatrixXd cov_active = hessian(eta).inverse();
  const auto full = static_cast<Eigen::Index>(data.dims() + 1);
  VectorXd gamma_full = VectorXd::Zero(full);
  MatrixXd cov_full = MatrixXd::Zero(full, full);
  for (Eigen::Index a = 0; a < p; ++a) {
    gamma_full(active[static_cast<std::size_t>(a)]) = gamma(a);
    for (Eigen::Index b = 0; b < p; ++b) {
      cov_full(active[static_cast<std::size_t>(a)], active[static_cast<std::size_t>(b)]) = cov_active(a, b);
    }
  }
  m.log_likelihood = ll;
  store(m, s, gamma_full, cov_full);
  for (std::size_t k = 0; k < s.constant.size(); ++k) {
    if (s.constant[k]) m.standard_errors[k + 1] = std::numeric_limits<double>::infinity();
  }
  return m;
}

RegressionModel fit(const Dataset& data, ModelKind kind) {
  switch (kind) {
    case ModelKind::Linear: return fit_linear(data);
    case ModelKind::Robust: return fit_robust(data);
    case ModelKind::Logistic: return fit_logistic(data);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown model kind");
}

// ---------------------------------------------------------------------------
// Significance tests
// ---------------------------------------------------------------------------

namespace {

std::string coefficient_name(const RegressionModel& m, std::size_t k) {
  return k == 0 ? std::string("(intercept)") : m.feature_names.at(k - 1);
}

}  // namespace

std::vector<CoefficientTest> wald_test(const RegressionModel& model) {
  if (model.kind != ModelKind::Logistic) throw Error(ErrorCode::ModelMismatch, "Wald test needs a logistic model");
  std::vector<CoefficientTest> out;
  for (std::size_t k = 0; k < model.beta.size(); ++k) {
    CoefficientTest t;
    t.name = coefficient_name(model, k);
    t.beta = model.beta[k];
    t.standard_error = model.standard_errors.at(k);
    if (t.beta == 0.0 || std::isinf(t.standard_error)) {
      t.statistic = 0.0;
    } else {
      const double z = t.beta / t.standard_error;
      t.statistic = z * z;
    }
    t.p_value = chi_square_sf(t.statistic, 1.0);
    out.push_back(t);
  }
  return out;
}

HosmerLemeshowResult hosmer_lemeshow(std::span<const double> probabilities, std::span<const double> labels, int groups) {
  if (probabilities.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "probabilities vs labels");
  const auto n = probabilities.size();
  if (groups < 3) throw Error(ErrorCode::DomainError, "Hosmer-Lemeshow needs at least 3 groups");
  if (n < static_cast<std::size_t>(groups)) {
    throw Error(ErrorCode::DegenerateGroup, std::to_string(n) + " rows for " + std::to_string(groups) + " groups");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probabilities[a] < probabilities[b]; });

  HosmerLemeshowResult r;
  const auto g = static_cast<std::size_t>(groups);
  for (std::size_t k = 0; k < g; ++k) {
    HosmerLemeshowGroup grp;
    const std::size_t lo = k * n / g;
    const std::size_t hi = (k + 1) * n / g;
    for (std::size_t i = lo; i < hi; ++i) {
      grp.observed += labels[order[i]];
      grp.expected += probabilities[order[i]];
      ++grp.size;
    }
    r.groups.push_back(grp);
  }

  // Merge any group whose expected count of either outcome is zero into its neighbour.
  auto degenerate = [](const HosmerLemeshowGroup& grp) {
    return grp.expected <= 0.0 || static_cast<double>(grp.size) - grp.expected <= 0.0;
  };
  for (std::size_t k = 0; k < r.groups.size() && r.groups.size() > 1;) {
    if (!degenerate(r.groups[k])) {
      ++k;
      continue;
    }
    const std::size_t into = k + 1 < r.groups.size() ? k + 1 : k - 1;
    r.groups[into].size += r.groups[k].size;
    r.groups[into].observed += r.groups[k].observed;
    r.groups[into].expected += r.groups[k].expected;
    r.groups.erase(r.groups.begin() + static_cast<std::ptrdiff_t>(k));
    ++r.merges;
    if (into < k) k = into;
  }
  if (r.groups.size() < 3 || degenerate(r.groups.front())) {
    throw Error(ErrorCode::DegenerateGroup, "fewer than 3 usable risk groups after merging");
  }

  for (const auto& grp : r.groups) {
    const double e1 = grp.expected;
    const double e0 = static_cast<double>(grp.size) - grp.expected;
    const double o1 = grp.observed;
    const double o0 = static_cast<double>(grp.size) - grp.observed;
    r.chi2 += (o1 - e1) * (o1 - e1) / e1 + (o0 - e0) * (o0 - e0) / e0;
  }
  r.df = static_cast<int>(r.groups.size()) - 2;
  r.p_value = chi_square_sf(r.chi2, r.df);
  return r;
}

HosmerLemeshowResult hosmer_lemeshow(const RegressionModel& model, const Dataset& data, int groups) {
  if (model.kind != ModelKind::Logistic) throw Error(ErrorCode::ModelMismatch, "Hosmer-Lemeshow needs a logistic model");
  const auto p = model.predict(data);
  return hosmer_lemeshow(p, data.targets, groups);
}

SignificanceReport linear_significance(const RegressionModel& model, const Dataset& data) {
  if (model.kind == ModelKind::Logistic) throw Error(ErrorCode::ModelMismatch, "T/F tests need a linear model");
  require_rows(data);
  const auto n = static_cast<double>(data.rows());
  const auto predictors = static_cast<double>(data.dims());
  const double dof = n - predictors - 1.0;

  const auto fitted = model.predict(data);
  const double mean_y =
      std::accumulate(data.targets.begin(), data.targets.end(), 0.0) / static_cast<double>(data.rows());
  double ssr = 0.0;
  double sse = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    ssr += (fitted[i] - mean_y) * (fitted[i] - mean_y);
    sse += (data.targets[i] - fitted[i]) * (data.targets[i] - fitted[i]);
  }

  SignificanceReport r;
  r.kind = model.kind;
  r.model_test = "F";
  r.model_df1 = predictors;
  r.model_df2 = dof;
  r.degenerate = sse <= 1e-24 * std::max(1.0, ssr);
  if (r.degenerate) {
    r.model_statistic = std::numeric_limits<double>::infinity();
    r.model_p_value = 0.0;
  } else {
    r.model_statistic = (ssr / predictors) / (sse / dof);
    r.model_p_value = f_sf(r.model_statistic, predictors, dof);
  }

  for (std::size_t k = 0; k < model.beta.size(); ++k) {
    CoefficientTest t;
    t.name = coefficient_name(model, k);
    t.beta = model.beta[k];
    t.standard_error = model.standard_errors.at(k);
    if (r.degenerate || t.standard_error == 0.0) {
      t.statistic = t.beta == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), t.beta);
      t.p_value = t.beta == 0.0 ? 1.0 : 0.0;
    } else {
      t.statistic = t.beta / t.standard_error;
      t.p_value = student_t_two_sided(t.statistic, dof);
    }
    r.coefficients.push_back(t);
  }
  return r;
}

SignificanceReport logistic_significance(const RegressionModel& model, const Dataset& data, int groups) {
  SignificanceReport r;
  r.kind = ModelKind::Logistic;
  r.coefficients = wald_test(model);
  const auto hl = hosmer_lemeshow(model, data, groups);
  r.model_test = "Hosmer-Lemeshow";
  r.model_statistic = hl.chi2;
  r.model_df1 = hl.df;
  r.model_p_value = hl.p_value;
  return r;
}

double correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "correlation of unequal lengths");
  if (a.size() < 2) throw Error(ErrorCode::LengthMismatch, "correlation needs at least two points");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw Error(ErrorCode::ZeroVariance, "correlation with a constant vector");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

ComparisonReport model_comparison(const Dataset& data) {
  const auto linear = fit_linear(data);
  const auto robust = fit_robust(data);
  const auto logistic = fit_logistic(data);

  const std::vector<double>& y = data.targets;
  const auto logistic_out = logistic.predict(data);

  ComparisonReport r;
  r.linear = correlation(linear.predict(data), y);
  r.robust = correlation(robust.predict(data), y);
  r.logistic = correlation(logistic_out, y);

  std::vector<std::vector<double>> series;
  for (std::size_t k = 0; k < data.dims(); ++k) {
    r.labels.push_back(data.feature_names[k]);
    series.push_back(data.column(k));
  }
  r.labels.emplace_back("Log. Reg. Output");
  series.push_back(logistic_out);
  r.labels.emplace_back("Expected Values");
  series.push_back(y);

  for (std::size_t i = 0; i < series.size(); ++i) {
    std::vector<double> row;
    for (std::size_t j = 0; j <= i; ++j) row.push_back(i == j ? 1.0 : correlation(series[i], series[j]));
    r.matrix.push_back(std::move(row));
  }
  return r;
}

}  // namespace mantrap
