#include <cmath>
#include <vector>

#include "doctest.h"

#include "cik/rng.hpp"
#include "cik/stats.hpp"

namespace {

// O(n^2) reference for the energy statistic.
double energy_bruteforce(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  double a = 0.0, b = 0.0, c = 0.0;
  for (double xi : x)
    for (double yj : y) a += std::fabs(xi - yj);
  for (double xi : x)
    for (double xj : x) b += std::fabs(xi - xj);
  for (double yi : y)
    for (double yj : y) c += std::fabs(yi - yj);
  return n * m / (n + m) * (2.0 * a / (n * m) - b / (n * n) - c / (m * m));
}

}  // namespace

TEST_CASE("1-d energy statistic equals the brute-force sum") {
  cik::RandomStream rng(5);
  std::vector<double> x, y;
  for (int i = 0; i < 40; ++i) x.push_back(rng.normal());
  for (int i = 0; i < 55; ++i) y.push_back(rng.normal() + 0.3);
  cik::RandomStream perm(6);
  const auto res = cik::energy_test_1d(x, y, 0, perm);
  CHECK(res.statistic == doctest::Approx(energy_bruteforce(x, y)).epsilon(1e-12));
}

TEST_CASE("energy test separates shifted samples and accepts equal ones") {
  cik::RandomStream rng(7);
  std::vector<double> x, y_same, y_shift;
  for (int i = 0; i < 2000; ++i) {
    x.push_back(rng.normal());
    y_same.push_back(rng.normal());
    y_shift.push_back(rng.normal() + 0.5);
  }
  cik::RandomStream perm(8);
  CHECK(cik::energy_test_1d(x, y_same, 199, perm).pass(0.01));
  CHECK_FALSE(cik::energy_test_1d(x, y_shift, 199, perm).pass(0.01));
}

TEST_CASE("multivariate energy test matches the 1-d fast path") {
  cik::RandomStream rng(9);
  std::vector<double> x1, y1;
  std::vector<Eigen::VectorXd> xv, yv;
  for (int i = 0; i < 300; ++i) {
    const double a = rng.normal();
    const double b = rng.normal() * 1.1;
    x1.push_back(a);
    y1.push_back(b);
    xv.push_back(Eigen::VectorXd::Constant(1, a));
    yv.push_back(Eigen::VectorXd::Constant(1, b));
  }
  cik::RandomStream p1(10), p2(10);
  const auto fast = cik::energy_test_1d(x1, y1, 99, p1);
  const auto full = cik::energy_test(xv, yv, 99, p2);
  CHECK(fast.statistic == doctest::Approx(full.statistic).epsilon(1e-5));
  CHECK(fast.p_value == doctest::Approx(full.p_value));
}

TEST_CASE("ks distances") {
  std::vector<double> a{0.1, 0.2, 0.3, 0.4};
  std::vector<double> b{0.1, 0.2, 0.3, 0.4};
  CHECK(cik::two_sample_ks(a, b) == doctest::Approx(0.0));
  std::vector<double> c{1.1, 1.2, 1.3, 1.4};
  CHECK(cik::two_sample_ks(a, c) == doctest::Approx(1.0));
  // uniform sample against its own CDF
  cik::RandomStream rng(11);
  std::vector<double> u;
  for (int i = 0; i < 100000; ++i) u.push_back(rng.uniform01());
  CHECK(cik::one_sample_ks(u, [](double t) { return std::min(std::max(t, 0.0), 1.0); }) <
        0.01);
}

TEST_CASE("moment helpers") {
  std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  CHECK(cik::mean(v) == doctest::Approx(2.5));
  CHECK(cik::variance(v) == doctest::Approx(5.0 / 3.0));
  std::vector<double> w{2.0, 4.0, 6.0, 8.0};
  CHECK(cik::correlation(v, w) == doctest::Approx(1.0));
}
