#include "cik/filter.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <utility>

namespace cik::filter {

void RegressionData::validate() const {
  const Eigen::Index n = design.rows();
  const Eigen::Index p = design.cols();
  if (n < 2 || p < 1) throw std::invalid_argument("RegressionData: empty design");
  if (response.size() != n) throw std::invalid_argument("RegressionData: response length mismatch");
  if (knockoffs.rows() != n || knockoffs.cols() != p)
    throw std::invalid_argument("RegressionData: knockoff matrix shape mismatch");
  if (!design.allFinite() || !response.allFinite() || !knockoffs.allFinite())
    throw std::invalid_argument("RegressionData: non-finite entries");
}

namespace {

struct Standardized {
  Eigen::MatrixXd X;       // centered, unit population variance columns
  Eigen::VectorXd y;       // centered
  Eigen::VectorXd mu;      // column means
  Eigen::VectorXd scale;   // column sds (1 for constant columns)
  double y_mean = 0.0;
};

Standardized standardize(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (!X.allFinite() || !y.allFinite())
    throw std::invalid_argument("lasso: non-finite entries in the data");
  if (X.rows() != y.size()) throw std::invalid_argument("lasso: row count mismatch");
  if (X.rows() < 2) throw std::invalid_argument("lasso: need at least 2 rows");
  Standardized s;
  const Eigen::Index n = X.rows();
  const Eigen::Index m = X.cols();
  s.mu = X.colwise().mean();
  s.X = X.rowwise() - s.mu.transpose();
  s.scale.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double v = s.X.col(j).squaredNorm() / static_cast<double>(n);
    s.scale[j] = v > 1e-24 ? std::sqrt(v) : 1.0;
    s.X.col(j) /= s.scale[j];
  }
  s.y_mean = y.mean();
  s.y = y.array() - s.y_mean;
  return s;
}

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

// Coordinate descent on an already standardized problem; beta is warm-started
// in place. Returns the final duality gap, or a negative value on sweep
// exhaustion.
struct CdResult {
  double gap = 0.0;
  int sweeps = 0;
  bool converged = false;
};

CdResult coordinate_descent(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double reg,
                            Eigen::VectorXd& beta, int max_sweeps = 20000) {
  const Eigen::Index n = X.rows();
  const Eigen::Index m = X.cols();
  const double dn = static_cast<double>(n);
  Eigen::VectorXd v(m);  // column mean squares (1 up to rounding)
  for (Eigen::Index j = 0; j < m; ++j) v[j] = X.col(j).squaredNorm() / dn;

  Eigen::VectorXd r = y - X * beta;
  const double null_obj = y.squaredNorm() / (2.0 * dn);
  const double tol = 1e-8 * std::max(1.0, null_obj);

  auto sweep = [&](const std::vector<Eigen::Index>& order) {
    double max_delta = 0.0;
    for (Eigen::Index j : order) {
      if (v[j] <= 0.0) continue;
      const double u = X.col(j).dot(r) / dn + v[j] * beta[j];
      const double bj = soft_threshold(u, reg) / v[j];
      const double delta = bj - beta[j];
      if (delta != 0.0) {
        r.noalias() -= X.col(j) * delta;
        beta[j] = bj;
        max_delta = std::max(max_delta, std::fabs(delta));
      }
    }
    return max_delta;
  };

  std::vector<Eigen::Index> all(m);
  for (Eigen::Index j = 0; j < m; ++j) all[j] = j;

  auto duality_gap = [&]() {
    const double rss = r.squaredNorm();
    double dual_inf = 0.0;
    for (Eigen::Index j = 0; j < m; ++j)
      dual_inf = std::max(dual_inf, std::fabs(X.col(j).dot(r)) / dn);
    const double s = (reg > 0.0 && dual_inf > reg) ? reg / dual_inf : 1.0;
    const double primal = rss / (2.0 * dn) + reg * beta.lpNorm<1>();
    const double dual = s * y.dot(r) / dn - s * s * rss / (2.0 * dn);
    return primal - dual;
  };

  CdResult res;
  for (int it = 0; it < max_sweeps; ++it) {
    sweep(all);
    ++res.sweeps;
    // refine on the active set until it settles, then recheck globally
    std::vector<Eigen::Index> active;
    for (Eigen::Index j = 0; j < m; ++j)
      if (beta[j] != 0.0) active.push_back(j);
    while (res.sweeps < max_sweeps && !active.empty()) {
      const double delta = sweep(active);
      ++res.sweeps;
      if (delta < 1e-13) break;
    }
    const double gap = duality_gap();
    if (gap <= tol) {
      res.gap = gap;
      res.converged = true;
      return res;
    }
  }
  res.gap = duality_gap();
  res.converged = false;
  return res;
}

LassoFit finish_fit(const Standardized& s, const Eigen::VectorXd& beta_std, double gap,
                    int sweeps) {
  LassoFit fit;
  fit.beta_std = beta_std;
  fit.beta = beta_std.array() / s.scale.array();
  fit.intercept = s.y_mean - fit.beta.dot(s.mu);
  fit.gap = gap;
  fit.sweeps = sweeps;
  return fit;
}

}  // namespace

LassoFit lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double reg) {
  if (reg < 0.0) throw std::invalid_argument("lasso_fit: reg must be >= 0");
  const Standardized s = standardize(X, y);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
  const CdResult res = coordinate_descent(s.X, s.y, reg, beta);
  LassoFit fit = finish_fit(s, beta, res.gap, res.sweeps);
  if (!res.converged)
    throw LassoConvergenceError("lasso_fit: duality gap tolerance not reached", fit);
  return fit;
}

double lasso_kkt_violation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double reg,
                           const LassoFit& fit) {
  const Standardized s = standardize(X, y);
  const double dn = static_cast<double>(X.rows());
  const Eigen::VectorXd r = s.y - s.X * fit.beta_std;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double g = s.X.col(j).dot(r) / dn;
    if (fit.beta_std[j] > 0.0)
      worst = std::max(worst, std::fabs(g - reg));
    else if (fit.beta_std[j] < 0.0)
      worst = std::max(worst, std::fabs(g + reg));
    else
      worst = std::max(worst, std::max(0.0, std::fabs(g) - reg));
  }
  return worst;
}

double lasso_penalty_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Standardized s = standardize(X, y);
  const double dn = static_cast<double>(X.rows());
  double m = 0.0;
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    m = std::max(m, std::fabs(s.X.col(j).dot(s.y)) / dn);
  return m;
}

std::vector<double> default_reg_grid(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                     int count, double ratio) {
  if (count < 2 || !(ratio > 0.0) || !(ratio < 1.0))
    throw std::invalid_argument("default_reg_grid: bad grid parameters");
  const double lmax = std::max(lasso_penalty_max(X, y), 1e-12);
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double log_max = std::log(lmax);
  const double log_min = std::log(lmax * ratio);
  for (int k = 0; k < count; ++k)
    grid[static_cast<std::size_t>(k)] =
        std::exp(log_max + (log_min - log_max) * k / (count - 1));
  return grid;  // descending
}

namespace {

// Fit the penalty path with warm starts; callback sees each (index, fit).
void fit_path(const Standardized& s, const std::vector<double>& grid,
              const std::function<void(std::size_t, const Eigen::VectorXd&)>& on_fit) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(s.X.cols());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const CdResult res = coordinate_descent(s.X, s.y, grid[k], beta);
    if (!res.converged)
      throw LassoConvergenceError("lasso path: duality gap tolerance not reached",
                                  LassoFit{});
    on_fit(k, beta);
  }
}

}  // namespace

Eigen::VectorXd coef_diff_stats(const RegressionData& data,
                                const std::vector<double>& reg_grid, int folds) {
  data.validate();
  if (folds < 2) throw std::invalid_argument("coef_diff_stats: need at least 2 folds");
  const Eigen::Index n = data.design.rows();
  const Eigen::Index p = data.design.cols();
  if (n <= folds) throw std::invalid_argument("coef_diff_stats: too few rows for the folds");

  Eigen::MatrixXd A(n, 2 * p);
  A.leftCols(p) = data.design;
  A.rightCols(p) = data.knockoffs;

  const std::vector<double> grid =
      reg_grid.empty() ? default_reg_grid(A, data.response) : reg_grid;

  // round-robin fold ids keep the split deterministic
  std::vector<int> fold_of(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) fold_of[static_cast<std::size_t>(i)] = i % folds;

  std::vector<double> cv_mse(grid.size(), 0.0);
  for (int f = 0; f < folds; ++f) {
    std::vector<Eigen::Index> train, valid;
    for (Eigen::Index i = 0; i < n; ++i)
      (fold_of[static_cast<std::size_t>(i)] == f ? valid : train).push_back(i);
    Eigen::MatrixXd At(train.size(), 2 * p);
    Eigen::VectorXd yt(train.size());
    for (std::size_t k = 0; k < train.size(); ++k) {
      At.row(k) = A.row(train[k]);
      yt[k] = data.response[train[k]];
    }
    const Standardized st = standardize(At, yt);
    fit_path(st, grid, [&](std::size_t k, const Eigen::VectorXd& beta_std) {
      // validation error with the fold's own centering and scaling
      double sse = 0.0;
      for (Eigen::Index i : valid) {
        const Eigen::VectorXd row =
            ((A.row(i).transpose() - st.mu).array() / st.scale.array()).matrix();
        const double pred = st.y_mean + row.dot(beta_std);
        const double err = data.response[i] - pred;
        sse += err * err;
      }
      cv_mse[k] += sse / static_cast<double>(valid.size());
    });
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (cv_mse[k] < cv_mse[best]) best = k;  // ties keep the larger penalty

  // final fit on all rows, warm-started down the path to the chosen penalty
  const Standardized s = standardize(A, data.response);
  Eigen::VectorXd chosen = Eigen::VectorXd::Zero(2 * p);
  {
    std::vector<double> head(grid.begin(), grid.begin() + static_cast<long>(best) + 1);
    fit_path(s, head, [&](std::size_t k, const Eigen::VectorXd& beta_std) {
      if (k + 1 == head.size()) chosen = beta_std;
    });
  }

  Eigen::VectorXd w(p);
  for (Eigen::Index i = 0; i < p; ++i)
    w[i] = std::fabs(chosen[i]) - std::fabs(chosen[p + i]);
  return w;
}

double knockoff_threshold(const Eigen::VectorXd& w, double q, bool plus) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("knockoff_threshold: q must be in (0,1)");
  std::set<double> candidates;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w[i] != 0.0) candidates.insert(std::fabs(w[i]));
  for (double t : candidates) {  // ascending: first valid candidate is minimal
    int neg = 0, pos = 0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (w[i] <= -t) ++neg;
      if (w[i] >= t) ++pos;
    }
    const double ratio = ((plus ? 1.0 : 0.0) + neg) / std::max(pos, 1);
    if (ratio <= q) return t;
  }
  return std::numeric_limits<double>::infinity();
}

WStatistics select(const RegressionData& data, double q, bool plus,
                   const std::vector<double>& reg_grid, int folds) {
  WStatistics stats;
  stats.w = coef_diff_stats(data, reg_grid, folds);
  stats.q_target = q;
  stats.plus_variant = plus;
  stats.threshold = knockoff_threshold(stats.w, q, plus);
  for (Eigen::Index i = 0; i < stats.w.size(); ++i)
    if (stats.w[i] >= stats.threshold) stats.selected.push_back(static_cast<int>(i));
  return stats;
}

double fdp(const std::vector<int>& selected, const std::vector<int>& true_support) {
  const std::set<int> truth(true_support.begin(), true_support.end());
  int false_count = 0;
  for (int i : selected)
    if (!truth.count(i)) ++false_count;
  return static_cast<double>(false_count) /
         std::max<double>(static_cast<double>(selected.size()), 1.0);
}

std::pair<double, double> fdr_power(const std::vector<int>& selected,
                                    const std::vector<int>& true_support) {
  if (true_support.empty())
    throw std::domain_error("fdr_power: power undefined for empty true support");
  const std::set<int> truth(true_support.begin(), true_support.end());
  int hits = 0;
  for (int i : selected)
    if (truth.count(i)) ++hits;
  const double power = static_cast<double>(hits) / static_cast<double>(truth.size());
  return {fdp(selected, true_support), power};
}

}  // namespace cik::filter
