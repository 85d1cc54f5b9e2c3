// Knockoff selection machinery: lasso on the augmented design [X, X~] with a
// cross-validated penalty, coefficient-difference statistics, the knockoff /
// knockoff+ threshold, and FDP / power accounting.

#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace cik::filter {

struct RegressionData {
  Eigen::MatrixXd design;     // n x p
  Eigen::VectorXd response;   // n
  Eigen::MatrixXd knockoffs;  // n x p

  void validate() const;
};

struct LassoFit {
  Eigen::VectorXd beta;      // original scale
  Eigen::VectorXd beta_std;  // standardized scale (unit-variance columns)
  double intercept = 0.0;
  double gap = 0.0;  // final duality gap
  int sweeps = 0;
};

class LassoConvergenceError : public std::runtime_error {
 public:
  LassoConvergenceError(std::string what, LassoFit partial)
      : std::runtime_error(std::move(what)), partial_fit(std::move(partial)) {}
  LassoFit partial_fit;
};

// Minimize (1/2n) ||y - X beta||^2 + reg ||beta||_1 by coordinate descent;
// columns are centered and scaled to unit variance internally and the
// coefficients restored to the original scale on output. Converges to
// duality gap 1e-8 (relative to the null objective).
LassoFit lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double reg);

// Max KKT violation of a fit at penalty reg, on the standardized scale.
double lasso_kkt_violation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double reg,
                           const LassoFit& fit);

// Penalty where the lasso path becomes all-zero, on the standardized scale.
double lasso_penalty_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

// Log-spaced grid from lambda_max down to ratio * lambda_max.
std::vector<double> default_reg_grid(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                     int count = 50, double ratio = 1e-3);

// w_i = |beta_i| - |beta_{p+i}| from the lasso on [X, X~] at the penalty
// chosen by k-fold cross-validation over reg_grid (empty grid = default).
// Folds are assigned round-robin by row index, so reruns are deterministic.
Eigen::VectorXd coef_diff_stats(const RegressionData& data,
                                const std::vector<double>& reg_grid = {}, int folds = 5);

// Smallest t among {|w_i| : w_i != 0} with
// ((plus ? 1 : 0) + #{w_i <= -t}) / max(#{w_i >= t}, 1) <= q; +inf if none.
double knockoff_threshold(const Eigen::VectorXd& w, double q, bool plus);

struct WStatistics {
  Eigen::VectorXd w;
  double threshold = 0.0;
  std::vector<int> selected;
  double q_target = 0.0;
  bool plus_variant = true;
};

WStatistics select(const RegressionData& data, double q, bool plus = true,
                   const std::vector<double>& reg_grid = {}, int folds = 5);

// |selected \ true| / max(|selected|, 1); defined for empty truth.
double fdp(const std::vector<int>& selected, const std::vector<int>& true_support);
// (fdp, power); throws std::domain_error when true_support is empty.
std::pair<double, double> fdr_power(const std::vector<int>& selected,
                                    const std::vector<int>& true_support);

}  // namespace cik::filter
