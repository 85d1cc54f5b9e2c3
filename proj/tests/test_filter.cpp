#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"

#include "cik/filter.hpp"
#include "cik/gauss.hpp"
#include "cik/model.hpp"
#include "cik/rng.hpp"
#include "test_support.hpp"

using cik::filter::RegressionData;
using test_support::vec;

namespace {

// Sylvester Hadamard matrix of order 8; columns 1..7 are balanced +-1,
// mutually orthogonal and zero mean, so they are exactly standardized.
Eigen::MatrixXd hadamard_design() {
  Eigen::MatrixXd h1(1, 1);
  h1 << 1.0;
  Eigen::MatrixXd h = h1;
  for (int k = 0; k < 3; ++k) {
    Eigen::MatrixXd next(2 * h.rows(), 2 * h.cols());
    next << h, h, h, -h;
    h = next;
  }
  return h.rightCols(7);  // drop the all-ones column
}

double soft(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

}  // namespace

TEST_CASE("unpenalized lasso on an orthonormal design recovers OLS") {
  const Eigen::MatrixXd X = hadamard_design();
  cik::RandomStream rng(100);
  Eigen::VectorXd y(8);
  for (int i = 0; i < 8; ++i) y[i] = rng.normal();
  const Eigen::VectorXd ols = X.transpose() * (y.array() - y.mean()).matrix() / 8.0;
  const auto fit = cik::filter::lasso_fit(X, y, 0.0);
  CHECK((fit.beta - ols).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("orthonormal design: lasso equals soft-thresholded OLS") {
  const Eigen::MatrixXd X = hadamard_design();
  cik::RandomStream rng(101);
  Eigen::VectorXd y(8);
  for (int i = 0; i < 8; ++i) y[i] = rng.normal() + (i < 4 ? 1.0 : -1.0);
  const Eigen::VectorXd ols = X.transpose() * (y.array() - y.mean()).matrix() / 8.0;
  for (double reg : {0.05, 0.2, 0.6}) {
    const auto fit = cik::filter::lasso_fit(X, y, reg);
    for (int j = 0; j < 7; ++j)
      CHECK(fit.beta[j] == doctest::Approx(soft(ols[j], reg)).epsilon(1e-6));
  }
}

TEST_CASE("penalty at or above lambda_max yields the zero vector") {
  cik::RandomStream rng(102);
  Eigen::MatrixXd X(40, 10);
  Eigen::VectorXd y(40);
  for (int i = 0; i < 40; ++i) {
    y[i] = rng.normal();
    for (int j = 0; j < 10; ++j) X(i, j) = rng.normal();
  }
  const double lmax = cik::filter::lasso_penalty_max(X, y);
  const auto fit = cik::filter::lasso_fit(X, y, lmax * 1.000001);
  CHECK(fit.beta.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("KKT residuals hold at the returned solution") {
  cik::RandomStream rng(103);
  Eigen::MatrixXd X(60, 25);
  Eigen::VectorXd beta_true = Eigen::VectorXd::Zero(25);
  beta_true.head(4) << 1.0, -0.5, 0.8, 0.3;
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 25; ++j) X(i, j) = rng.normal();
  Eigen::VectorXd y = X * beta_true;
  for (int i = 0; i < 60; ++i) y[i] += 0.3 * rng.normal();
  const double reg = 0.1 * cik::filter::lasso_penalty_max(X, y);
  const auto fit = cik::filter::lasso_fit(X, y, reg);
  CHECK(cik::filter::lasso_kkt_violation(X, y, reg, fit) < 1e-6);
}

TEST_CASE("non-finite data is rejected") {
  Eigen::MatrixXd X = Eigen::MatrixXd::Ones(4, 2);
  X(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(cik::filter::lasso_fit(X, Eigen::VectorXd::Ones(4), 0.1),
                  std::invalid_argument);
}

TEST_CASE("knockoff threshold: worked example, empty case, monotonicity") {
  const Eigen::VectorXd w = vec({3.0, 2.0, -1.0, 0.5});
  // candidates ascending 0.5, 1, 2, 3: first with (1 + #neg)/#pos <= 0.5 is 2
  CHECK(cik::filter::knockoff_threshold(w, 0.5, true) == doctest::Approx(2.0));

  const Eigen::VectorXd negative = vec({-0.5, -2.0, -0.1});
  CHECK(std::isinf(cik::filter::knockoff_threshold(negative, 0.3, true)));

  for (double q1 : {0.1, 0.3, 0.5}) {
    for (double q2 : {0.6, 0.8, 0.9}) {
      CHECK(cik::filter::knockoff_threshold(w, q1, true) >=
            cik::filter::knockoff_threshold(w, q2, true));
    }
  }
  CHECK_THROWS_AS(cik::filter::knockoff_threshold(w, 1.5, true), std::invalid_argument);
}

TEST_CASE("fdp and power bookkeeping") {
  CHECK(cik::filter::fdr_power({1, 2, 3}, {1, 2, 3}) ==
        std::pair<double, double>{0.0, 1.0});
  CHECK(cik::filter::fdp({}, {1, 2}) == doctest::Approx(0.0));
  const auto [fdp, power] = cik::filter::fdr_power({1, 2, 3}, {1, 2, 4, 5});
  CHECK(fdp == doctest::Approx(1.0 / 3.0));
  CHECK(power == doctest::Approx(0.5));
  CHECK_THROWS_AS(cik::filter::fdr_power({1}, {}), std::domain_error);
}

TEST_CASE("identical knockoffs: ties favor the original column") {
  cik::RandomStream rng(104);
  const int n = 60, p = 6;
  Eigen::MatrixXd X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = rng.normal();
  Eigen::VectorXd y = 2.0 * X.col(0);
  for (int i = 0; i < n; ++i) y[i] += 0.2 * rng.normal();
  RegressionData data{X, y, X};  // degenerate: knockoffs identical to X
  const Eigen::VectorXd w = cik::filter::coef_diff_stats(data);
  CHECK(w[0] > 0.0);  // the original column received the mass
  // swapping identical columns is a no-op, so w is reproduced bit for bit
  const Eigen::VectorXd w2 = cik::filter::coef_diff_stats(data);
  CHECK((w - w2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("swapping a pair flips the sign of its statistic") {
  const auto spec = cik::ModelSpec::gauss_mix(3.0, 2.0, vec({1.0, 2.0, 3.0, 4.0}));
  cik::RandomStream rng(105);
  const int n = 50, p = 4;
  Eigen::MatrixXd X(n, p), Xk(n, p);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd row = cik::gauss::sample_x(spec, rng);
    X.row(i) = row.transpose();
    Xk.row(i) = cik::gauss::sample_knockoff(spec, row, rng).transpose();
    y[i] = 1.5 * row[1] + rng.normal();
  }
  const Eigen::VectorXd w = cik::filter::coef_diff_stats({X, y, Xk});
  for (int i = 0; i < p; ++i) {
    Eigen::MatrixXd Xs = X, Xks = Xk;
    Xs.col(i).swap(Xks.col(i));
    const Eigen::VectorXd ws = cik::filter::coef_diff_stats({Xs, y, Xks});
    for (int j = 0; j < p; ++j) {
      const double expected = j == i ? -w[j] : w[j];
      CHECK(ws[j] == doctest::Approx(expected).epsilon(1e-6));
    }
  }
}

TEST_CASE("null model: signs of the statistics are fair coin flips") {
  const auto spec = cik::ModelSpec::gauss_mix(3.0, 2.0, vec({0.5, 1.0, 1.5, 2.0, 2.5}));
  cik::RandomStream rng(106);
  int positive = 0, nonzero = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 40, p = 5;
    Eigen::MatrixXd X(n, p), Xk(n, p);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd row = cik::gauss::sample_x(spec, rng);
      X.row(i) = row.transpose();
      Xk.row(i) = cik::gauss::sample_knockoff(spec, row, rng).transpose();
      y[i] = rng.normal();  // no signal at all
    }
    const Eigen::VectorXd w = cik::filter::coef_diff_stats({X, y, Xk});
    for (int j = 0; j < p; ++j) {
      if (w[j] != 0.0) {
        ++nonzero;
        if (w[j] > 0.0) ++positive;
      }
    }
  }
  REQUIRE(nonzero > 30);
  const double freq = static_cast<double>(positive) / nonzero;
  const double se = 0.5 / std::sqrt(static_cast<double>(nonzero));
  CHECK(std::fabs(freq - 0.5) < 4.0 * se);
}

TEST_CASE("a strong signal earns a positive statistic almost always") {
  const auto spec = cik::ModelSpec::gauss_mix(
      6.0, 10.0, vec({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}));
  cik::RandomStream rng(107);
  const int n = 100, p = 10, target = 8;
  int wins = 0;
  const int reps = 40;
  for (int rep = 0; rep < reps; ++rep) {
    Eigen::MatrixXd X(n, p), Xk(n, p);
    Eigen::VectorXd y(n);
    const double amplitude = 3.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd row = cik::gauss::sample_x(spec, rng);
      X.row(i) = row.transpose();
      Xk.row(i) = cik::gauss::sample_knockoff(spec, row, rng).transpose();
      y[i] = amplitude * row[target] + rng.normal();
    }
    const Eigen::VectorXd w = cik::filter::coef_diff_stats({X, y, Xk});
    if (w[target] > 0.0) ++wins;
  }
  CHECK(static_cast<double>(wins) / reps > 0.95);
}

TEST_CASE("select assembles the full statistics object") {
  cik::RandomStream rng(108);
  const int n = 60, p = 8;
  Eigen::MatrixXd X(n, p), Xk(n, p);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      X(i, j) = rng.normal();
      Xk(i, j) = rng.normal();
    }
    y[i] = 3.0 * X(i, 0) + 3.0 * X(i, 1) + rng.normal();
  }
  const auto stats = cik::filter::select({X, y, Xk}, 0.2);
  CHECK(stats.q_target == doctest::Approx(0.2));
  CHECK(stats.plus_variant);
  for (int i : stats.selected) CHECK(stats.w[i] >= stats.threshold);
}
