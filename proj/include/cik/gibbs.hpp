// Scale mixture with random per-coordinate scales: c_i i.i.d. uniform on a
// bounded interval and independent of lambda ~ InverseGamma(a, b). The
// knockoff conditional has no closed form, so it is sampled by data
// augmentation: a Gibbs sweep over (x_tilde, lambda, c) with a
// Metropolis-within-Gibbs move for each c_i.

#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

#include "cik/model.hpp"
#include "cik/rng.hpp"

namespace cik::gibbs {

struct GibbsConfig {
  int burn_in = 1000;
  int thin = 10;
  int n_draws = 1;
  double mh_step = 0.5;  // log-scale random-walk step for the c_i moves

  void validate() const;
};

nlohmann::json to_json(const GibbsConfig& config);
GibbsConfig config_from_json(const nlohmann::json& j);

struct GibbsState {
  Eigen::VectorXd x_tilde;
  double lambda = 1.0;
  Eigen::VectorXd c;
  long iteration = 0;
};

// Counts of Metropolis proposals/acceptances for the c moves.
struct GibbsCounters {
  long proposed = 0;
  long accepted = 0;
  double acceptance_rate() const {
    return proposed > 0 ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  }
};

GibbsState init_state(const ModelSpec& spec, const Eigen::VectorXd& x);

// Parameters (shape, scale) of the lambda full conditional
// InverseGamma(a + p, b + sum (x_i^2 + x_tilde_i^2) / (2 c_i)).
std::pair<double, double> lambda_conditional_params(const ModelSpec& spec,
                                                    const Eigen::VectorXd& x,
                                                    const GibbsState& state);

// One full sweep: x_tilde | lambda, c -> lambda | x_tilde, c -> c | rest.
GibbsState gibbs_step(const ModelSpec& spec, const Eigen::VectorXd& x,
                      const GibbsState& state, RandomStream& rng, double mh_step = 0.5,
                      GibbsCounters* counters = nullptr);

Eigen::VectorXd sample_knockoff(const ModelSpec& spec, const Eigen::VectorXd& x,
                                const GibbsConfig& config, RandomStream& rng,
                                GibbsCounters* counters = nullptr);
// n_draws states of x_tilde, spaced `thin` sweeps apart after burn-in.
std::vector<Eigen::VectorXd> sample_knockoff_draws(const ModelSpec& spec,
                                                   const Eigen::VectorXd& x,
                                                   const GibbsConfig& config,
                                                   RandomStream& rng,
                                                   GibbsCounters* counters = nullptr);

Eigen::VectorXd sample_x(const ModelSpec& spec, RandomStream& rng,
                         LatentTrace* trace = nullptr);

// Numeric log densities via nested quadrature over (lambda, c); used by the
// generator-contract checks, not by the sampler.
double log_density_x(const ModelSpec& spec, const Eigen::VectorXd& x);
double log_density_joint(const ModelSpec& spec, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& x_tilde);

}  // namespace cik::gibbs
