// Scale mixture of centered normals: coordinates are N(0, lambda c_i) given
// lambda ~ InverseGamma(a, b). Marginal, joint and conditional laws are all
// Student-t with diagonal scale, evaluated in log space so large p stays
// stable. The knockoff sampler goes through the lambda augmentation; the
// direct multivariate-t draw from the conditional parameters is kept as a
// second route for cross-checks.

#pragma once

#include <Eigen/Core>

#include "cik/model.hpp"
#include "cik/rng.hpp"

namespace cik::gauss {

struct StudentTParams {
  double dof = 0.0;
  Eigen::VectorXd scales;  // diagonal of the scale matrix
};

double log_density_x(const ModelSpec& spec, const Eigen::VectorXd& x);
double log_density_joint(const ModelSpec& spec, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& x_tilde);

// Parameters of the conditional law of x_tilde given x:
// dof = 2a + p, scales = 2/(2a+p) * (b + sum x_i^2/(2 c_i)) * c.
StudentTParams conditional_params(const ModelSpec& spec, const Eigen::VectorXd& x);

// Generic diagonal-scale Student-t log density (the phi of the closed forms).
double log_student_t_density(const StudentTParams& params, const Eigen::VectorXd& x);

Eigen::VectorXd sample_x(const ModelSpec& spec, RandomStream& rng,
                         LatentTrace* trace = nullptr);
// lambda ~ InverseGamma(a + p/2, b + sum x_i^2/(2 c_i)), then N(0, lambda c_i).
Eigen::VectorXd sample_knockoff(const ModelSpec& spec, const Eigen::VectorXd& x,
                                RandomStream& rng, LatentTrace* trace = nullptr);
// Direct draw from the conditional Student-t; same law as sample_knockoff.
Eigen::VectorXd sample_conditional_direct(const StudentTParams& params, RandomStream& rng);

}  // namespace cik::gauss
