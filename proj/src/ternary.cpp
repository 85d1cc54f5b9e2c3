#include "cik/ternary.hpp"

#include <cmath>
#include <stdexcept>

#include "cik/special.hpp"

namespace cik::ternary {

namespace {

void check_ternary(const ModelSpec& spec) {
  if (spec.variant != ModelVariant::Ternary)
    throw std::invalid_argument("ternary: spec is not a ternary model");
  spec.validate();
}

// log prod_{i in ones} c_i + log prod_{i in zeros} (1 - c_i)
double log_category_product(const ModelSpec& spec, const std::vector<int>& zeros,
                            const std::vector<int>& ones) {
  double s = 0.0;
  for (int i : ones) s += std::log(spec.c[i]);
  for (int i : zeros) s += std::log1p(-spec.c[i]);
  return s;
}

}  // namespace

TernaryCounts count_categories(const Eigen::VectorXd& x, const Eigen::VectorXd& x_tilde) {
  TernaryCounts counts;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) counts.s0.push_back(static_cast<int>(i));
    else if (x[i] == 1.0) counts.s1.push_back(static_cast<int>(i));
    else ++counts.m2;
  }
  for (Eigen::Index i = 0; i < x_tilde.size(); ++i) {
    if (x_tilde[i] == 0.0) counts.t0.push_back(static_cast<int>(i));
    else if (x_tilde[i] == 1.0) counts.t1.push_back(static_cast<int>(i));
    else ++counts.n2;
  }
  return counts;
}

double log_pmf_x(const ModelSpec& spec, const Eigen::VectorXd& x) {
  check_ternary(spec);
  require_support(spec, x);
  const TernaryCounts counts = count_categories(x, Eigen::VectorXd(0));
  const double p = static_cast<double>(spec.p);
  const double m2 = static_cast<double>(counts.m2);
  return log_beta(spec.a + p - m2, spec.b + m2) - log_beta(spec.a, spec.b) +
         log_category_product(spec, counts.s0, counts.s1);
}

double log_pmf_joint(const ModelSpec& spec, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& x_tilde) {
  check_ternary(spec);
  require_support(spec, x);
  require_support(spec, x_tilde);
  const TernaryCounts counts = count_categories(x, x_tilde);
  const double p = static_cast<double>(spec.p);
  const double m2 = static_cast<double>(counts.m2);
  const double n2 = static_cast<double>(counts.n2);
  return log_beta(spec.a + 2.0 * p - m2 - n2, spec.b + m2 + n2) - log_beta(spec.a, spec.b) +
         log_category_product(spec, counts.s0, counts.s1) +
         log_category_product(spec, counts.t0, counts.t1);
}

double pmf_x(const ModelSpec& spec, const Eigen::VectorXd& x) {
  return std::exp(log_pmf_x(spec, x));
}

double pmf_joint(const ModelSpec& spec, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& x_tilde) {
  return std::exp(log_pmf_joint(spec, x, x_tilde));
}

std::vector<double> conditional_pmf(const ModelSpec& spec, const Eigen::VectorXd& x) {
  check_ternary(spec);
  require_support(spec, x);
  if (spec.p > 12)
    throw std::length_error("conditional_pmf: 3^p table too large, use sample_knockoff");
  const double log_px = log_pmf_x(spec, x);
  int m = 1;
  for (int i = 0; i < spec.p; ++i) m *= 3;
  std::vector<double> table(static_cast<std::size_t>(m));
  Eigen::VectorXd xt(spec.p);
  for (int code = 0; code < m; ++code) {
    int rem = code;
    for (int i = 0; i < spec.p; ++i) {
      xt[i] = rem % 3;
      rem /= 3;
    }
    table[static_cast<std::size_t>(code)] = std::exp(log_pmf_joint(spec, x, xt) - log_px);
  }
  return table;
}

namespace {

Eigen::VectorXd draw_coordinates(const ModelSpec& spec, double lambda, RandomStream& rng) {
  Eigen::VectorXd x(spec.p);
  for (int i = 0; i < spec.p; ++i) {
    const double u = rng.uniform01();
    if (u < 1.0 - lambda) x[i] = 2.0;
    else if (u < 1.0 - lambda + lambda * spec.c[i]) x[i] = 1.0;
    else x[i] = 0.0;
  }
  return x;
}

}  // namespace

Eigen::VectorXd sample_x(const ModelSpec& spec, RandomStream& rng, LatentTrace* trace) {
  check_ternary(spec);
  const double lambda = rng.beta(spec.a, spec.b);
  if (trace) {
    trace->lambda = lambda;
    trace->c = spec.c;
  }
  return draw_coordinates(spec, lambda, rng);
}

Eigen::VectorXd sample_knockoff(const ModelSpec& spec, const Eigen::VectorXd& x,
                                RandomStream& rng, LatentTrace* trace) {
  check_ternary(spec);
  require_support(spec, x);
  int m2 = 0;
  for (int i = 0; i < spec.p; ++i)
    if (x[i] == 2.0) ++m2;
  const double lambda = rng.beta(spec.a + spec.p - m2, spec.b + m2);
  if (trace) {
    trace->lambda = lambda;
    trace->c = spec.c;
  }
  return draw_coordinates(spec, lambda, rng);
}

}  // namespace cik::ternary
