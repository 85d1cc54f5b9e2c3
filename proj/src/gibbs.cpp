#include "cik/gibbs.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cik/quadrature.hpp"

namespace cik::gibbs {

namespace {

void check_gibbs(const ModelSpec& spec) {
  if (spec.variant != ModelVariant::GibbsMix)
    throw std::invalid_argument("gibbs: spec is not a gibbs-mix model");
  spec.validate();
}

bool degenerate_prior(const ModelSpec& spec) { return spec.c_lo == spec.c_hi; }

// log of the c_i full conditional up to a constant, inside the prior
// interval: -log c - w / (2 lambda c).
double log_c_conditional(double c, double w, double lambda) {
  return -std::log(c) - w / (2.0 * lambda * c);
}

}  // namespace

void GibbsConfig::validate() const {
  if (burn_in < 0) throw std::invalid_argument("GibbsConfig: burn_in must be >= 0");
  if (thin < 1) throw std::invalid_argument("GibbsConfig: thin must be >= 1");
  if (n_draws < 1) throw std::invalid_argument("GibbsConfig: n_draws must be >= 1");
  if (!(mh_step > 0.0)) throw std::invalid_argument("GibbsConfig: mh_step must be > 0");
}

nlohmann::json to_json(const GibbsConfig& config) {
  config.validate();
  return nlohmann::json{{"burn_in", config.burn_in},
                        {"thin", config.thin},
                        {"n_draws", config.n_draws},
                        {"mh_step", config.mh_step}};
}

GibbsConfig config_from_json(const nlohmann::json& j) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "burn_in" && key != "thin" && key != "n_draws" && key != "mh_step")
      throw std::invalid_argument("GibbsConfig: unknown field '" + key + "'");
  }
  GibbsConfig config;
  config.burn_in = j.at("burn_in").get<int>();
  config.thin = j.at("thin").get<int>();
  config.n_draws = j.at("n_draws").get<int>();
  config.mh_step = j.at("mh_step").get<double>();
  config.validate();
  return config;
}

GibbsState init_state(const ModelSpec& spec, const Eigen::VectorXd& x) {
  check_gibbs(spec);
  if (x.size() != spec.p) throw std::domain_error("gibbs: x has wrong dimension");
  GibbsState state;
  state.c = Eigen::VectorXd::Constant(spec.p, 0.5 * (spec.c_lo + spec.c_hi));
  state.x_tilde = x;
  double s = spec.b;
  for (int i = 0; i < spec.p; ++i) s += x[i] * x[i] / (2.0 * state.c[i]);
  // Posterior-mode-like starting point for lambda; burn-in does the rest.
  state.lambda = s / (spec.a + 0.5 * spec.p + 1.0);
  state.iteration = 0;
  return state;
}

std::pair<double, double> lambda_conditional_params(const ModelSpec& spec,
                                                    const Eigen::VectorXd& x,
                                                    const GibbsState& state) {
  check_gibbs(spec);
  double bstar = spec.b;
  for (int i = 0; i < spec.p; ++i)
    bstar += (x[i] * x[i] + state.x_tilde[i] * state.x_tilde[i]) / (2.0 * state.c[i]);
  return {spec.a + spec.p, bstar};
}

GibbsState gibbs_step(const ModelSpec& spec, const Eigen::VectorXd& x,
                      const GibbsState& state, RandomStream& rng, double mh_step,
                      GibbsCounters* counters) {
  check_gibbs(spec);
  if (x.size() != spec.p) throw std::domain_error("gibbs: x has wrong dimension");
  if (!(mh_step > 0.0)) throw std::invalid_argument("gibbs_step: mh_step must be > 0");
  GibbsState next = state;

  // (1) x_tilde_i ~ N(0, lambda c_i)
  for (int i = 0; i < spec.p; ++i)
    next.x_tilde[i] = rng.normal() * std::sqrt(next.lambda * next.c[i]);

  // (2) lambda ~ InverseGamma(a + p, b*)
  const auto [astar, bstar] = lambda_conditional_params(spec, x, next);
  next.lambda = rng.inverse_gamma(astar, bstar);

  // (3) c_i by random-walk Metropolis on log c. The proposal is symmetric in
  // log space, so the acceptance ratio carries the Jacobian factor cand/cur;
  // candidates outside the prior interval are rejected outright.
  if (!degenerate_prior(spec)) {
    for (int i = 0; i < spec.p; ++i) {
      const double w = x[i] * x[i] + next.x_tilde[i] * next.x_tilde[i];
      const double cur = next.c[i];
      const double cand = cur * std::exp(mh_step * rng.normal());
      if (counters) ++counters->proposed;
      const double u = rng.uniform01();
      if (cand < spec.c_lo || cand > spec.c_hi) continue;
      const double log_alpha = log_c_conditional(cand, w, next.lambda) -
                               log_c_conditional(cur, w, next.lambda) +
                               std::log(cand) - std::log(cur);
      if (std::log(u) < log_alpha) {
        next.c[i] = cand;
        if (counters) ++counters->accepted;
      }
    }
  }

  next.iteration = state.iteration + 1;
  return next;
}

std::vector<Eigen::VectorXd> sample_knockoff_draws(const ModelSpec& spec,
                                                   const Eigen::VectorXd& x,
                                                   const GibbsConfig& config,
                                                   RandomStream& rng,
                                                   GibbsCounters* counters) {
  check_gibbs(spec);
  config.validate();
  GibbsState state = init_state(spec, x);
  for (int sweep = 0; sweep < config.burn_in; ++sweep)
    state = gibbs_step(spec, x, state, rng, config.mh_step, counters);
  std::vector<Eigen::VectorXd> draws;
  draws.reserve(static_cast<std::size_t>(config.n_draws));
  for (int k = 0; k < config.n_draws; ++k) {
    for (int sweep = 0; sweep < config.thin; ++sweep)
      state = gibbs_step(spec, x, state, rng, config.mh_step, counters);
    draws.push_back(state.x_tilde);
  }
  return draws;
}

Eigen::VectorXd sample_knockoff(const ModelSpec& spec, const Eigen::VectorXd& x,
                                const GibbsConfig& config, RandomStream& rng,
                                GibbsCounters* counters) {
  GibbsConfig single = config;
  single.n_draws = 1;
  return sample_knockoff_draws(spec, x, single, rng, counters).front();
}

Eigen::VectorXd sample_x(const ModelSpec& spec, RandomStream& rng, LatentTrace* trace) {
  check_gibbs(spec);
  Eigen::VectorXd c(spec.p);
  for (int i = 0; i < spec.p; ++i)
    c[i] = degenerate_prior(spec) ? spec.c_lo : rng.uniform(spec.c_lo, spec.c_hi);
  const double lambda = rng.inverse_gamma(spec.a, spec.b);
  Eigen::VectorXd x(spec.p);
  for (int i = 0; i < spec.p; ++i) x[i] = rng.normal() * std::sqrt(lambda * c[i]);
  if (trace) {
    trace->lambda = lambda;
    trace->c = c;
  }
  return x;
}

namespace {

// 1/(hi-lo) * int_{lo}^{hi} N(v; 0, lambda c) dc, smooth in c on the interval.
double interval_normal_mixture(double v, double lambda, double lo, double hi) {
  if (lo == hi) {
    const double var = lambda * lo;
    return std::exp(-v * v / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
  }
  const double value = integrate_gl(
      [&](double c) {
        const double var = lambda * c;
        return std::exp(-v * v / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
      },
      lo, hi, 48);
  return value / (hi - lo);
}

// Integrate g(lambda) against the InverseGamma(a, b) prior by substituting
// u = 1/lambda, which turns the prior into Gamma(a, rate b). A fixed
// Gauss-Legendre rule keeps the cost bounded when callers integrate the
// resulting density again.
double inverse_gamma_expectation(const ModelSpec& spec,
                                 const std::function<double(double)>& g) {
  const double a = spec.a, b = spec.b;
  const double u_hi = (a + 12.0 * std::sqrt(a) + 40.0) / b;
  const double log_norm = a * std::log(b) - std::lgamma(a);
  auto integrand = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double log_pdf = log_norm + (a - 1.0) * std::log(u) - b * u;
    return std::exp(log_pdf) * g(1.0 / u);
  };
  return integrate_gl(integrand, 0.0, u_hi, 256);
}

}  // namespace

double log_density_x(const ModelSpec& spec, const Eigen::VectorXd& x) {
  check_gibbs(spec);
  if (x.size() != spec.p) throw std::domain_error("gibbs: x has wrong dimension");
  const double h = inverse_gamma_expectation(spec, [&](double lambda) {
    double prod = 1.0;
    for (int i = 0; i < spec.p; ++i)
      prod *= interval_normal_mixture(x[i], lambda, spec.c_lo, spec.c_hi);
    return prod;
  });
  return std::log(h);
}

double log_density_joint(const ModelSpec& spec, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& x_tilde) {
  check_gibbs(spec);
  if (x.size() != spec.p || x_tilde.size() != spec.p)
    throw std::domain_error("gibbs: point has wrong dimension");
  const double f = inverse_gamma_expectation(spec, [&](double lambda) {
    double prod = 1.0;
    for (int i = 0; i < spec.p; ++i) {
      if (spec.c_lo == spec.c_hi) {
        prod *= interval_normal_mixture(x[i], lambda, spec.c_lo, spec.c_hi) *
                interval_normal_mixture(x_tilde[i], lambda, spec.c_lo, spec.c_hi);
      } else {
        // The pair shares one c_i, so the inner integral couples them.
        const double pair = integrate_gl(
            [&](double c) {
              const double var = lambda * c;
              return std::exp(-(x[i] * x[i] + x_tilde[i] * x_tilde[i]) / (2.0 * var)) /
                     (2.0 * std::numbers::pi * var);
            },
            spec.c_lo, spec.c_hi, 48);
        prod *= pair / (spec.c_hi - spec.c_lo);
      }
    }
    return prod;
  });
  return std::log(f);
}

}  // namespace cik::gibbs
