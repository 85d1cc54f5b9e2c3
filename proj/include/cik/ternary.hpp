// Three-valued covariates: given lambda ~ Beta(a, b), each coordinate is 0
// with probability lambda (1 - c_i), 1 with probability lambda c_i and 2 with
// probability 1 - lambda. The beta prior is conjugate to the resulting
// lambda^(p - m2) (1 - lambda)^m2 likelihood, so everything is closed form;
// all gamma ratios stay in log space.

#pragma once

#include <vector>

#include <Eigen/Core>

#include "cik/model.hpp"
#include "cik/rng.hpp"

namespace cik::ternary {

// Index sets and two-counts of a configuration pair.
struct TernaryCounts {
  std::vector<int> s0, s1;  // coordinates of x equal to 0 / 1
  std::vector<int> t0, t1;  // same for x_tilde
  int m2 = 0;               // #{i : x_i = 2}
  int n2 = 0;               // #{i : x_tilde_i = 2}
};

TernaryCounts count_categories(const Eigen::VectorXd& x, const Eigen::VectorXd& x_tilde);

double pmf_x(const ModelSpec& spec, const Eigen::VectorXd& x);
double pmf_joint(const ModelSpec& spec, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& x_tilde);
double log_pmf_x(const ModelSpec& spec, const Eigen::VectorXd& x);
double log_pmf_joint(const ModelSpec& spec, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& x_tilde);

// Conditional table over x_tilde in base-3 code order (coordinate 0 least
// significant). Requires p <= 12.
std::vector<double> conditional_pmf(const ModelSpec& spec, const Eigen::VectorXd& x);

Eigen::VectorXd sample_x(const ModelSpec& spec, RandomStream& rng,
                         LatentTrace* trace = nullptr);
// lambda ~ Beta(a + p - m2, b + m2), then coordinates drawn independently.
Eigen::VectorXd sample_knockoff(const ModelSpec& spec, const Eigen::VectorXd& x,
                                RandomStream& rng, LatentTrace* trace = nullptr);

}  // namespace cik::ternary
