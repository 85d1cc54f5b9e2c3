#include <cmath>
#include <vector>

#include "doctest.h"

#include "cik/rng.hpp"
#include "cik/stats.hpp"

using cik::RandomStream;
using cik::ScalarLaw;

namespace {

std::vector<double> draw_many(const ScalarLaw& law, int n, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = cik::sample(law, rng);
  return out;
}

// Standard error of the sample variance from the empirical fourth moment.
double variance_se(const std::vector<double>& v) {
  const double m = cik::mean(v);
  double m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = x - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= v.size();
  m4 /= v.size();
  return std::sqrt(std::max(m4 - m2 * m2, 0.0) / v.size());
}

}  // namespace

TEST_CASE("identical keys reproduce the sequence, distinct streams diverge") {
  RandomStream a(42, 7), b(42, 7), c(42, 8);
  bool same = true, differ = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_u64();
    same = same && va == b.next_u64();
    differ = differ || va != c.next_u64();
  }
  CHECK(same);
  CHECK(differ);

  RandomStream d = RandomStream(9, 1).substream(3);
  RandomStream e = RandomStream(9, 1).substream(4);
  CHECK(d.next_u64() != e.next_u64());
}

TEST_CASE("uniform draws stay inside the support") {
  RandomStream rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("inverse gamma mean matches b/(a-1)") {
  const auto draws = draw_many(ScalarLaw::inverse_gamma_law(6.0, 10.0), 1000000, 11);
  CHECK(cik::mean(draws) == doctest::Approx(2.0).epsilon(0.005));  // +- 0.01 absolute
  CHECK(std::fabs(cik::mean(draws) - 2.0) < 0.01);
}

TEST_CASE("student-t sample variance matches scale^2 k/(k-2)") {
  const auto draws = draw_many(ScalarLaw::student_t_law(3.0, 2.0 / 3.0), 1000000, 12);
  CHECK(std::fabs(cik::variance(draws) - 2.0) < 0.05);
}

TEST_CASE("first two moments match analytic values within 4 standard errors") {
  struct Case {
    ScalarLaw law;
    double mean, var;
  };
  const std::vector<Case> cases{
      {ScalarLaw::uniform_law(-1.0, 3.0), 1.0, 16.0 / 12.0},
      {ScalarLaw::normal_law(0.5, 2.25), 0.5, 2.25},
      {ScalarLaw::gamma_law(3.0, 2.0), 1.5, 0.75},
      {ScalarLaw::inverse_gamma_law(6.0, 10.0), 2.0, 1.0},
      {ScalarLaw::beta_law(2.0, 5.0), 2.0 / 7.0, 10.0 / (49.0 * 8.0)},
      {ScalarLaw::student_t_law(5.0, 1.5), 0.0, 1.5 * 5.0 / 3.0},
  };
  const int n = 1000000;
  std::uint64_t seed = 100;
  for (const auto& c : cases) {
    const auto draws = draw_many(c.law, n, seed++);
    const double se_mean = std::sqrt(cik::variance(draws) / n);
    CHECK(std::fabs(cik::mean(draws) - c.mean) < 4.0 * se_mean);
    CHECK(std::fabs(cik::variance(draws) - c.var) < 4.0 * variance_se(draws));
  }
}

TEST_CASE("student-t vector sampler: off-diagonal covariance vanishes") {
  const double a = 6.0, b = 10.0;
  Eigen::VectorXd c(3);
  c << 1.0, 2.0, 3.0;
  const Eigen::VectorXd scales = (b / a) * c;
  RandomStream rng(21);
  const int n = 200000;
  std::vector<std::vector<double>> cols(3, std::vector<double>());
  for (int k = 0; k < n; ++k) {
    const Eigen::VectorXd x = cik::sample_student_t_vector(2.0 * a, scales, rng);
    for (int i = 0; i < 3; ++i) cols[static_cast<std::size_t>(i)].push_back(x[i]);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const auto& xi = cols[static_cast<std::size_t>(i)];
      const auto& xj = cols[static_cast<std::size_t>(j)];
      // SE of the covariance estimate for uncorrelated heavy-tailed pairs
      double s = 0.0;
      const double mi = cik::mean(xi), mj = cik::mean(xj);
      for (int k = 0; k < n; ++k) {
        const double t = (xi[static_cast<std::size_t>(k)] - mi) *
                         (xj[static_cast<std::size_t>(k)] - mj);
        s += t * t;
      }
      const double se = std::sqrt(s / n / n);
      CHECK(std::fabs(cik::covariance(xi, xj)) < 3.0 * se);
    }
}

TEST_CASE("student-t vector sampler: gaussian limit at huge dof") {
  RandomStream rng(22);
  const Eigen::VectorXd scales = Eigen::VectorXd::Ones(1);
  std::vector<double> draws;
  const int n = 1000000;
  draws.reserve(n);
  for (int i = 0; i < n; ++i)
    draws.push_back(cik::sample_student_t_vector(1e6, scales, rng)[0]);
  CHECK(std::fabs(cik::variance(draws) - 1.0) < 0.01);
}

TEST_CASE("student-t vector sampler agrees with the scalar law at p = 1") {
  RandomStream rng_vec(23), rng_scalar(24);
  const Eigen::VectorXd scales = Eigen::VectorXd::Constant(1, 2.0 / 3.0);
  const ScalarLaw law = ScalarLaw::student_t_law(3.0, 2.0 / 3.0);
  std::vector<double> a, b;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    a.push_back(cik::sample_student_t_vector(3.0, scales, rng_vec)[0]);
    b.push_back(cik::sample(law, rng_scalar));
  }
  CHECK(cik::two_sample_ks(a, b) < 0.01);
}

TEST_CASE("invalid parameters are rejected") {
  RandomStream rng(30);
  CHECK_THROWS_AS(rng.gamma(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(rng.uniform(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(cik::sample(ScalarLaw::student_t_law(0.0, 1.0), rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(cik::sample(ScalarLaw::uniform_law(1.0, 1.0), rng), std::invalid_argument);
}
