// Two-valued covariates: success probabilities theta_i = lambda * c_i with
// lambda uniform on (0,1). All pmfs reduce to integrals of polynomials in
// lambda over (0,1), so they are evaluated exactly with Gauss-Legendre rules
// of sufficient order; the alternating-series form is kept as a cross-check.

#pragma once

#include <vector>

#include <Eigen/Core>

#include "cik/model.hpp"
#include "cik/rng.hpp"

namespace cik::binary {

// Elementary symmetric polynomials of the c_i outside `excluded`:
// values[j] = sum over j-subsets of the products. values[0] = 1.
std::vector<double> esp(const Eigen::VectorXd& c, const std::vector<int>& excluded);

double pmf_x(const ModelSpec& spec, const Eigen::VectorXd& x);
double pmf_joint(const ModelSpec& spec, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& x_tilde);

// Alternating-series route (products of c over active sets times a signed sum
// of elementary symmetric polynomials); numerically fragile for large p, kept
// as the cross-check the exact quadrature route is tested against.
double pmf_x_series(const ModelSpec& spec, const Eigen::VectorXd& x);
double pmf_joint_series(const ModelSpec& spec, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& x_tilde);

// Full conditional table over x_tilde, indexed by the binary code of x_tilde
// (coordinate 0 is the least significant digit). Requires p <= 20.
std::vector<double> conditional_pmf(const ModelSpec& spec, const Eigen::VectorXd& x);

Eigen::VectorXd sample_x(const ModelSpec& spec, RandomStream& rng,
                         LatentTrace* trace = nullptr);
// Draw lambda from its polynomial posterior by CDF bisection (to 1e-12), then
// x_tilde_i ~ Bernoulli(lambda * c_i).
Eigen::VectorXd sample_knockoff(const ModelSpec& spec, const Eigen::VectorXd& x,
                                RandomStream& rng, LatentTrace* trace = nullptr);

double log_pmf_x(const ModelSpec& spec, const Eigen::VectorXd& x);
double log_pmf_joint(const ModelSpec& spec, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& x_tilde);

}  // namespace cik::binary
