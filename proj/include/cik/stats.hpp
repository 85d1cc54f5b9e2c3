// Shared sample statistics: moments, Kolmogorov-Smirnov distances, and
// permutation-calibrated energy-distance two-sample tests.

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "cik/rng.hpp"

namespace cik {

double mean(const std::vector<double>& v);
// Unbiased sample variance.
double variance(const std::vector<double>& v);
double covariance(const std::vector<double>& x, const std::vector<double>& y);
double correlation(const std::vector<double>& x, const std::vector<double>& y);

// Sup distance between the two empirical CDFs.
double two_sample_ks(std::vector<double> a, std::vector<double> b);
// Sup distance between the empirical CDF of `a` and a reference CDF.
double one_sample_ks(std::vector<double> a, const std::function<double(double)>& cdf);

struct EnergyTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int permutations = 0;
  bool pass(double alpha) const { return p_value > alpha; }
};

// Two-sample energy test, permutation-calibrated. 1-D version runs in
// O((n+m) log(n+m)) per permutation via sorted prefix sums.
EnergyTestResult energy_test_1d(const std::vector<double>& x, const std::vector<double>& y,
                                int n_perms, RandomStream& rng);

// Multivariate version on a precomputed pooled distance matrix. Groups larger
// than max_per_group are subsampled deterministically (even stride).
EnergyTestResult energy_test(const std::vector<Eigen::VectorXd>& x,
                             const std::vector<Eigen::VectorXd>& y, int n_perms,
                             RandomStream& rng, std::size_t max_per_group = 1500);

}  // namespace cik
