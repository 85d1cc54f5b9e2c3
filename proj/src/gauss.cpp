#include "cik/gauss.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cik::gauss {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

void check_gauss(const ModelSpec& spec) {
  if (spec.variant != ModelVariant::GaussMix)
    throw std::invalid_argument("gauss: spec is not a gauss-mix model");
  spec.validate();
}

// b + sum_i x_i^2 / (2 c_i)
double shifted_scale(const ModelSpec& spec, const Eigen::VectorXd& x) {
  double s = spec.b;
  for (int i = 0; i < spec.p; ++i) s += x[i] * x[i] / (2.0 * spec.c[i]);
  return s;
}

double log_c_product(const ModelSpec& spec) {
  double s = 0.0;
  for (int i = 0; i < spec.p; ++i) s += std::log(spec.c[i]);
  return s;
}

}  // namespace

double log_density_x(const ModelSpec& spec, const Eigen::VectorXd& x) {
  check_gauss(spec);
  if (x.size() != spec.p) throw std::domain_error("gauss: x has wrong dimension");
  const double p = static_cast<double>(spec.p);
  return spec.a * std::log(spec.b) + std::lgamma(spec.a + 0.5 * p) - std::lgamma(spec.a) -
         0.5 * p * kLog2Pi - 0.5 * log_c_product(spec) -
         (spec.a + 0.5 * p) * std::log(shifted_scale(spec, x));
}

double log_density_joint(const ModelSpec& spec, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& x_tilde) {
  check_gauss(spec);
  if (x.size() != spec.p || x_tilde.size() != spec.p)
    throw std::domain_error("gauss: point has wrong dimension");
  const double p = static_cast<double>(spec.p);
  double s = spec.b;
  for (int i = 0; i < spec.p; ++i)
    s += (x[i] * x[i] + x_tilde[i] * x_tilde[i]) / (2.0 * spec.c[i]);
  return spec.a * std::log(spec.b) + std::lgamma(spec.a + p) - std::lgamma(spec.a) -
         p * kLog2Pi - log_c_product(spec) - (spec.a + p) * std::log(s);
}

StudentTParams conditional_params(const ModelSpec& spec, const Eigen::VectorXd& x) {
  check_gauss(spec);
  if (x.size() != spec.p) throw std::domain_error("gauss: x has wrong dimension");
  StudentTParams params;
  params.dof = 2.0 * spec.a + spec.p;
  params.scales = (2.0 / params.dof) * shifted_scale(spec, x) * spec.c;
  return params;
}

double log_student_t_density(const StudentTParams& params, const Eigen::VectorXd& x) {
  const double k = params.dof;
  const double m = static_cast<double>(x.size());
  if (params.scales.size() != x.size())
    throw std::invalid_argument("log_student_t_density: dimension mismatch");
  double quad = 0.0;
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    quad += x[i] * x[i] / params.scales[i];
    logdet += std::log(params.scales[i]);
  }
  return std::lgamma(0.5 * (m + k)) - std::lgamma(0.5 * k) -
         0.5 * m * std::log(k * std::numbers::pi) - 0.5 * logdet -
         0.5 * (m + k) * std::log1p(quad / k);
}

Eigen::VectorXd sample_x(const ModelSpec& spec, RandomStream& rng, LatentTrace* trace) {
  check_gauss(spec);
  const double lambda = rng.inverse_gamma(spec.a, spec.b);
  Eigen::VectorXd x(spec.p);
  for (int i = 0; i < spec.p; ++i) x[i] = rng.normal() * std::sqrt(lambda * spec.c[i]);
  if (trace) {
    trace->lambda = lambda;
    trace->c = spec.c;
  }
  return x;
}

Eigen::VectorXd sample_knockoff(const ModelSpec& spec, const Eigen::VectorXd& x,
                                RandomStream& rng, LatentTrace* trace) {
  check_gauss(spec);
  if (x.size() != spec.p) throw std::domain_error("gauss: x has wrong dimension");
  const double lambda = rng.inverse_gamma(spec.a + 0.5 * spec.p, shifted_scale(spec, x));
  Eigen::VectorXd xt(spec.p);
  for (int i = 0; i < spec.p; ++i) xt[i] = rng.normal() * std::sqrt(lambda * spec.c[i]);
  if (trace) {
    trace->lambda = lambda;
    trace->c = spec.c;
  }
  return xt;
}

Eigen::VectorXd sample_conditional_direct(const StudentTParams& params, RandomStream& rng) {
  return sample_student_t_vector(params.dof, params.scales, rng);
}

}  // namespace cik::gauss
