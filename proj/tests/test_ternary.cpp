#include <cmath>
#include <vector>

#include "doctest.h"

#include "cik/model.hpp"
#include "cik/special.hpp"
#include "cik/ternary.hpp"
#include "test_support.hpp"

using cik::ModelSpec;
using test_support::vec;

namespace {

// Beta-integral quadrature oracle for the marginal pmf.
double pmf_x_oracle(const ModelSpec& spec, const Eigen::VectorXd& x) {
  const double norm = std::exp(-cik::log_beta(spec.a, spec.b));
  return norm * test_support::integrate(
                    [&](double l) {
                      double v = std::pow(l, spec.a - 1.0) * std::pow(1.0 - l, spec.b - 1.0);
                      for (int i = 0; i < spec.p; ++i) {
                        if (x[i] == 0.0) v *= l * (1.0 - spec.c[i]);
                        else if (x[i] == 1.0) v *= l * spec.c[i];
                        else v *= 1.0 - l;
                      }
                      return v;
                    },
                    1e-14, 1.0 - 1e-14, 1e-13);
}

Eigen::VectorXd decode_ternary(int code, int p) {
  Eigen::VectorXd x(p);
  for (int i = 0; i < p; ++i) {
    x[i] = code % 3;
    code /= 3;
  }
  return x;
}

}  // namespace

TEST_CASE("pmf_x: frozen uniform-prior oracle values at p = 1") {
  // a = b = 1 makes lambda uniform: P(x = 2) = E(1 - lambda) = 1/2,
  // P(x = 1) = E(lambda) c = 1/4 at c = 1/2
  const ModelSpec spec = ModelSpec::ternary(1.0, 1.0, vec({0.5}));
  CHECK(pmf_x_oracle(spec, vec({2})) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(cik::ternary::pmf_x(spec, vec({2})) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cik::ternary::pmf_x(spec, vec({1})) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("pmf_x normalizes and matches the quadrature oracle") {
  cik::RandomStream rng(50);
  for (int p : {1, 2, 4}) {
    for (const auto& ab : {std::pair{1.0, 1.0}, std::pair{4.0, 3.0}}) {
      Eigen::VectorXd c(p);
      for (int i = 0; i < p; ++i) c[i] = rng.uniform(0.1, 0.9);
      const ModelSpec spec = ModelSpec::ternary(ab.first, ab.second, c);
      int m = 1;
      for (int i = 0; i < p; ++i) m *= 3;
      double total = 0.0;
      for (int code = 0; code < m; ++code) {
        const Eigen::VectorXd x = decode_ternary(code, p);
        const double value = cik::ternary::pmf_x(spec, x);
        CHECK(value == doctest::Approx(pmf_x_oracle(spec, x)).epsilon(1e-9));
        total += value;
      }
      CHECK(std::fabs(total - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("log-gamma route equals quadrature for p = 6") {
  cik::RandomStream rng(51);
  Eigen::VectorXd c(6);
  for (int i = 0; i < 6; ++i) c[i] = rng.uniform(0.1, 0.9);
  const ModelSpec spec = ModelSpec::ternary(2.5, 1.5, c);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::VectorXd x(6);
    for (int i = 0; i < 6; ++i) x[i] = static_cast<double>(rng.uniform_index(3));
    CHECK(std::fabs(cik::ternary::pmf_x(spec, x) - pmf_x_oracle(spec, x)) < 1e-10);
  }
}

TEST_CASE("joint pmf: swap symmetry and the frozen p = 1 conditional") {
  // E((1-lambda)^2) / E(1-lambda) = (1/3) / (1/2) = 2/3 for uniform lambda
  const ModelSpec spec1 = ModelSpec::ternary(1.0, 1.0, vec({0.5}));
  const auto table1 = cik::ternary::conditional_pmf(spec1, vec({2}));
  CHECK(table1[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  cik::RandomStream rng(52);
  for (int p : {1, 2, 3}) {
    Eigen::VectorXd c(p);
    for (int i = 0; i < p; ++i) c[i] = rng.uniform(0.1, 0.9);
    const ModelSpec spec = ModelSpec::ternary(4.0, 3.0, c);
    int m = 1;
    for (int i = 0; i < p; ++i) m *= 3;
    for (int ix = 0; ix < m; ++ix) {
      const Eigen::VectorXd x = decode_ternary(ix, p);
      double marg = 0.0;
      for (int jx = 0; jx < m; ++jx) {
        const Eigen::VectorXd xt = decode_ternary(jx, p);
        const double joint = cik::ternary::pmf_joint(spec, x, xt);
        CHECK(joint == doctest::Approx(cik::ternary::pmf_joint(spec, xt, x)).epsilon(1e-13));
        marg += joint;
      }
      CHECK(marg == doctest::Approx(cik::ternary::pmf_x(spec, x)).epsilon(1e-11));
    }
  }
}

TEST_CASE("conditional depends on x only through the count of twos") {
  cik::RandomStream rng(53);
  Eigen::VectorXd c(3);
  for (int i = 0; i < 3; ++i) c[i] = rng.uniform(0.1, 0.9);
  const ModelSpec spec = ModelSpec::ternary(2.0, 5.0, c);
  // all these x share m2 = 1
  const std::vector<Eigen::VectorXd> same_m2{vec({2, 0, 1}), vec({0, 2, 1}), vec({1, 1, 2}),
                                             vec({2, 1, 0})};
  const auto reference = cik::ternary::conditional_pmf(spec, same_m2[0]);
  for (const auto& x : same_m2) {
    const auto table = cik::ternary::conditional_pmf(spec, x);
    for (std::size_t k = 0; k < table.size(); ++k)
      CHECK(table[k] == doctest::Approx(reference[k]).epsilon(1e-13));
  }
}

TEST_CASE("knockoff sampler matches the exact conditional (TV and cellwise)") {
  const ModelSpec spec = ModelSpec::ternary(1.0, 1.0, vec({0.5, 0.3}));
  const Eigen::VectorXd x = vec({2, 1});
  const auto table = cik::ternary::conditional_pmf(spec, x);
  cik::RandomStream rng(54);
  const int n = 1000000;
  std::vector<double> counts(9, 0.0);
  for (int k = 0; k < n; ++k) {
    const Eigen::VectorXd xt = cik::ternary::sample_knockoff(spec, x, rng);
    for (int i = 0; i < 2; ++i) CHECK((xt[i] == 0.0 || xt[i] == 1.0 || xt[i] == 2.0));
    counts[static_cast<std::size_t>(xt[0] + 3 * xt[1])] += 1.0;
  }
  double tv = 0.0;
  for (int code = 0; code < 9; ++code) {
    const double expected = table[static_cast<std::size_t>(code)];
    const double freq = counts[static_cast<std::size_t>(code)] / n;
    tv += 0.5 * std::fabs(freq - expected);
    const double se = std::sqrt(expected * (1.0 - expected) / n);
    CHECK(std::fabs(freq - expected) < 4.0 * se);
  }
  CHECK(tv < 0.01);
}

TEST_CASE("p = 1 all-twos: empirical P(xt = 2) near 2/3") {
  const ModelSpec spec = ModelSpec::ternary(1.0, 1.0, vec({0.5}));
  cik::RandomStream rng(55);
  const int n = 200000;
  int twos = 0;
  for (int k = 0; k < n; ++k)
    if (cik::ternary::sample_knockoff(spec, vec({2}), rng)[0] == 2.0) ++twos;
  CHECK(std::fabs(static_cast<double>(twos) / n - 2.0 / 3.0) < 0.004);
}

TEST_CASE("support guards") {
  const ModelSpec spec = ModelSpec::ternary(1.0, 1.0, vec({0.5}));
  CHECK_THROWS_AS(cik::ternary::pmf_x(spec, vec({3})), std::domain_error);
  cik::RandomStream rng(56);
  Eigen::VectorXd big_c = Eigen::VectorXd::Constant(13, 0.5);
  CHECK_THROWS_AS(
      cik::ternary::conditional_pmf(ModelSpec::ternary(1.0, 1.0, big_c),
                                    Eigen::VectorXd::Zero(13)),
      std::length_error);
}
