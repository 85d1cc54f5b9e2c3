#include "cik/binary.hpp"

#include <cmath>
#include <stdexcept>

#include "cik/quadrature.hpp"

namespace cik::binary {

namespace {

void check_binary(const ModelSpec& spec) {
  if (spec.variant != ModelVariant::Binary)
    throw std::invalid_argument("binary: spec is not a binary model");
  spec.validate();
}

// Product of c_i over {i : x_i = 1}.
double active_product(const ModelSpec& spec, const Eigen::VectorXd& x) {
  double prod = 1.0;
  for (int i = 0; i < spec.p; ++i)
    if (x[i] == 1.0) prod *= spec.c[i];
  return prod;
}

int ones_count(const Eigen::VectorXd& x) {
  int s = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += x[i] == 1.0 ? 1 : 0;
  return s;
}

// Integrand lambda^s * prod_{i: x_i = 0} (1 - lambda c_i), optionally doubled
// up with a second configuration (for the joint law). Every factor lies in
// [0, 1], so the evaluation cannot overflow or cancel.
struct LambdaPolynomial {
  int power = 0;
  std::vector<double> off_c;  // c_i of the inactive coordinates

  double operator()(double lambda) const {
    double v = std::pow(lambda, power);
    for (double ci : off_c) v *= 1.0 - lambda * ci;
    return v;
  }
  int degree() const { return power + static_cast<int>(off_c.size()); }
};

LambdaPolynomial marginal_polynomial(const ModelSpec& spec, const Eigen::VectorXd& x) {
  LambdaPolynomial poly;
  poly.power = ones_count(x);
  for (int i = 0; i < spec.p; ++i)
    if (x[i] == 0.0) poly.off_c.push_back(spec.c[i]);
  return poly;
}

LambdaPolynomial joint_polynomial(const ModelSpec& spec, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& x_tilde) {
  LambdaPolynomial poly;
  poly.power = ones_count(x) + ones_count(x_tilde);
  for (int i = 0; i < spec.p; ++i) {
    if (x[i] == 0.0) poly.off_c.push_back(spec.c[i]);
    if (x_tilde[i] == 0.0) poly.off_c.push_back(spec.c[i]);
  }
  return poly;
}

// Exact integral of the polynomial over [0, t]: Gauss-Legendre with enough
// nodes for the degree.
double integrate_poly(const LambdaPolynomial& poly, double t) {
  const int n = poly.degree() / 2 + 1;
  return integrate_gl([&](double l) { return poly(l); }, 0.0, t, n);
}

}  // namespace

std::vector<double> esp(const Eigen::VectorXd& c, const std::vector<int>& excluded) {
  std::vector<bool> skip(static_cast<std::size_t>(c.size()), false);
  for (int idx : excluded) {
    if (idx < 0 || idx >= c.size()) throw std::invalid_argument("esp: excluded index out of range");
    skip[static_cast<std::size_t>(idx)] = true;
  }
  // One-pass recurrence: multiply out prod (1 + c_i z) incrementally.
  std::vector<double> d{1.0};
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (skip[static_cast<std::size_t>(i)]) continue;
    d.push_back(0.0);
    for (std::size_t j = d.size() - 1; j >= 1; --j) d[j] += c[i] * d[j - 1];
  }
  return d;
}

double pmf_x(const ModelSpec& spec, const Eigen::VectorXd& x) {
  check_binary(spec);
  require_support(spec, x);
  return active_product(spec, x) * integrate_poly(marginal_polynomial(spec, x), 1.0);
}

double pmf_joint(const ModelSpec& spec, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& x_tilde) {
  check_binary(spec);
  require_support(spec, x);
  require_support(spec, x_tilde);
  return active_product(spec, x) * active_product(spec, x_tilde) *
         integrate_poly(joint_polynomial(spec, x, x_tilde), 1.0);
}

double pmf_x_series(const ModelSpec& spec, const Eigen::VectorXd& x) {
  check_binary(spec);
  require_support(spec, x);
  const int s = ones_count(x);
  std::vector<int> active;
  for (int i = 0; i < spec.p; ++i)
    if (x[i] == 1.0) active.push_back(i);
  const std::vector<double> d = esp(spec.c, active);
  double sum = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double term = d[j] / static_cast<double>(j + s + 1);
    sum += (j % 2 == 0) ? term : -term;
  }
  return active_product(spec, x) * sum;
}

double pmf_joint_series(const ModelSpec& spec, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& x_tilde) {
  check_binary(spec);
  require_support(spec, x);
  require_support(spec, x_tilde);
  const int s = ones_count(x);
  const int t = ones_count(x_tilde);
  std::vector<int> active_x, active_t;
  for (int i = 0; i < spec.p; ++i) {
    if (x[i] == 1.0) active_x.push_back(i);
    if (x_tilde[i] == 1.0) active_t.push_back(i);
  }
  const std::vector<double> d = esp(spec.c, active_x);
  const std::vector<double> e = esp(spec.c, active_t);
  double sum = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j)
    for (std::size_t k = 0; k < e.size(); ++k) {
      const double term = d[j] * e[k] / static_cast<double>(j + k + s + t + 1);
      sum += ((j + k) % 2 == 0) ? term : -term;
    }
  return active_product(spec, x) * active_product(spec, x_tilde) * sum;
}

std::vector<double> conditional_pmf(const ModelSpec& spec, const Eigen::VectorXd& x) {
  check_binary(spec);
  require_support(spec, x);
  if (spec.p > 20)
    throw std::length_error("conditional_pmf: 2^p table too large, use sample_knockoff");
  const double px = pmf_x(spec, x);
  const int m = 1 << spec.p;
  std::vector<double> table(static_cast<std::size_t>(m));
  Eigen::VectorXd xt(spec.p);
  for (int code = 0; code < m; ++code) {
    for (int i = 0; i < spec.p; ++i) xt[i] = (code >> i) & 1;
    table[static_cast<std::size_t>(code)] = pmf_joint(spec, x, xt) / px;
  }
  return table;
}

Eigen::VectorXd sample_x(const ModelSpec& spec, RandomStream& rng, LatentTrace* trace) {
  check_binary(spec);
  const double lambda = rng.uniform01();
  Eigen::VectorXd x(spec.p);
  for (int i = 0; i < spec.p; ++i) x[i] = rng.uniform01() < lambda * spec.c[i] ? 1.0 : 0.0;
  if (trace) {
    trace->lambda = lambda;
    trace->c = spec.c;
  }
  return x;
}

Eigen::VectorXd sample_knockoff(const ModelSpec& spec, const Eigen::VectorXd& x,
                                RandomStream& rng, LatentTrace* trace) {
  check_binary(spec);
  require_support(spec, x);
  // Posterior of lambda given x is proportional to lambda^s prod (1 - lambda c_i)
  // on (0,1); invert its CDF by bisection. The CDF integrals are exact.
  const LambdaPolynomial posterior = marginal_polynomial(spec, x);
  const double z = integrate_poly(posterior, 1.0);
  const double u = rng.uniform01();
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (integrate_poly(posterior, mid) / z < u)
      lo = mid;
    else
      hi = mid;
  }
  const double lambda = 0.5 * (lo + hi);

  Eigen::VectorXd xt(spec.p);
  for (int i = 0; i < spec.p; ++i) xt[i] = rng.uniform01() < lambda * spec.c[i] ? 1.0 : 0.0;
  if (trace) {
    trace->lambda = lambda;
    trace->c = spec.c;
  }
  return xt;
}

double log_pmf_x(const ModelSpec& spec, const Eigen::VectorXd& x) {
  return std::log(pmf_x(spec, x));
}

double log_pmf_joint(const ModelSpec& spec, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& x_tilde) {
  return std::log(pmf_joint(spec, x, x_tilde));
}

}  // namespace cik::binary
