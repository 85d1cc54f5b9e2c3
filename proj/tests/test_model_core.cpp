#include <cmath>

#include "doctest.h"

#include "cik/model.hpp"
#include "cik/stats.hpp"
#include "test_support.hpp"

using cik::ModelSpec;
using cik::ModelVariant;
using test_support::vec;

namespace {

ModelSpec sample_specs(int which) {
  switch (which) {
    case 0: return ModelSpec::binary(vec({0.4, 0.7}));
    case 1: return ModelSpec::ternary(2.0, 3.0, vec({0.3, 0.6}));
    case 2: return ModelSpec::gauss_mix(2.0, 3.0, vec({0.5, 1.5}));
    default: return ModelSpec::gibbs_mix(3.0, 2.0, 2, 0.5, 2.0);
  }
}

}  // namespace

TEST_CASE("json round-trips for every variant") {
  for (int which = 0; which < 4; ++which) {
    const ModelSpec spec = sample_specs(which);
    const ModelSpec back = cik::model_from_json(cik::to_json(spec));
    CHECK(back.variant == spec.variant);
    CHECK(back.p == spec.p);
    CHECK(back.a == spec.a);
    CHECK(back.b == spec.b);
    if (spec.variant == ModelVariant::GibbsMix) {
      CHECK(back.c_lo == spec.c_lo);
      CHECK(back.c_hi == spec.c_hi);
    } else {
      CHECK((back.c - spec.c).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("json rejects unknown and missing fields") {
  nlohmann::json good = cik::to_json(sample_specs(2));
  nlohmann::json extra = good;
  extra["scale"] = 2.0;
  CHECK_THROWS_WITH_AS(cik::model_from_json(extra) /**/,
                       "ModelSpec: unknown field 'scale'", std::invalid_argument);
  nlohmann::json missing = good;
  missing.erase("c");
  CHECK_THROWS_WITH_AS(cik::model_from_json(missing) /**/,
                       "ModelSpec: missing field 'c'", std::invalid_argument);
  nlohmann::json bad_variant = good;
  bad_variant["variant"] = "spherical";
  CHECK_THROWS_AS(cik::model_from_json(bad_variant), std::invalid_argument);
}

TEST_CASE("spec validation rejects bad parameters") {
  CHECK_THROWS_AS(ModelSpec::binary(vec({0.5, 1.5})), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec::ternary(-1.0, 1.0, vec({0.5})), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec::gauss_mix(1.0, 1.0, vec({-0.5})), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec::gibbs_mix(1.0, 1.0, 2, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec::gibbs_mix(1.0, 1.0, 0, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("discrete conditionals sum to one through the generator contract") {
  for (int which : {0, 1}) {
    const ModelSpec spec = sample_specs(which);
    const int base = spec.support_base();
    int m = 1;
    for (int i = 0; i < spec.p; ++i) m *= base;
    for (int ix = 0; ix < m; ++ix) {
      Eigen::VectorXd x(spec.p);
      int rem = ix;
      for (int i = 0; i < spec.p; ++i) {
        x[i] = rem % base;
        rem /= base;
      }
      const double log_px = cik::log_density_x(spec, x);
      double total = 0.0;
      for (int jx = 0; jx < m; ++jx) {
        Eigen::VectorXd xt(spec.p);
        int r2 = jx;
        for (int i = 0; i < spec.p; ++i) {
          xt[i] = r2 % base;
          r2 /= base;
        }
        total += std::exp(cik::log_density_joint(spec, x, xt) - log_px);
      }
      CHECK(std::fabs(total - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("continuous conditionals integrate to one (p = 1)") {
  const ModelSpec gauss = ModelSpec::gauss_mix(2.0, 3.0, vec({1.2}));
  const Eigen::VectorXd x = vec({0.8});
  const double log_px = cik::log_density_x(gauss, x);
  const double mass = test_support::integrate(
      [&](double t) {
        return std::exp(cik::log_density_joint(gauss, x, vec({t})) - log_px);
      },
      -80.0, 80.0, 1e-10);
  CHECK(std::fabs(mass - 1.0) < 1e-6);

  const ModelSpec gibbs = ModelSpec::gibbs_mix(3.0, 2.0, 1, 0.5, 2.0);
  const double log_px_g = cik::log_density_x(gibbs, x);
  const double mass_g = test_support::integrate(
      [&](double t) {
        return std::exp(cik::log_density_joint(gibbs, x, vec({t})) - log_px_g);
      },
      -25.0, 25.0, 1e-8);
  CHECK(std::fabs(mass_g - 1.0) < 1e-4);
}

TEST_CASE("gauss-mix joint log density is swap invariant at random points") {
  const ModelSpec spec = sample_specs(2);
  cik::RandomStream rng(70);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd x(2), xt(2);
    for (int i = 0; i < 2; ++i) {
      x[i] = rng.normal();
      xt[i] = rng.normal();
    }
    const double reference = cik::log_density_joint(spec, x, xt);
    for (int i = 0; i < 2; ++i) {
      Eigen::VectorXd xs = x, xts = xt;
      std::swap(xs[i], xts[i]);
      CHECK(cik::log_density_joint(spec, xs, xts) ==
            doctest::Approx(reference).epsilon(1e-13));
    }
  }
}

TEST_CASE("binary joint table from enumerate_joint sums to one") {
  for (int p : {1, 2, 3}) {
    Eigen::VectorXd c = Eigen::VectorXd::Constant(p, 0.45);
    const cik::JointLawTable table = cik::enumerate_joint(ModelSpec::binary(c));
    CHECK(std::fabs(table.total() - 1.0) < 1e-10);
  }
}

TEST_CASE("knockoff marginal equals the data marginal") {
  // exact check on tables for the discrete variants
  for (int which : {0, 1}) {
    const ModelSpec spec = sample_specs(which);
    const cik::JointLawTable table = cik::enumerate_joint(spec);
    const auto marg = table.marginal_x();
    const int m = table.states();
    for (int jx = 0; jx < m; ++jx) {
      double col = 0.0;
      for (int ix = 0; ix < m; ++ix) col += table.at(ix, jx);
      CHECK(col == doctest::Approx(marg[static_cast<std::size_t>(jx)]).epsilon(1e-11));
    }
  }
  // two-sample check for gauss-mix through the dispatch layer
  const ModelSpec spec = sample_specs(2);
  cik::RandomStream rng(71);
  std::vector<double> xs, xts;
  for (int k = 0; k < 100000; ++k) {
    const Eigen::VectorXd x = cik::sample_x(spec, rng);
    xs.push_back(x[0]);
    xts.push_back(cik::sample_knockoff(spec, x, rng)[0]);
  }
  CHECK(cik::two_sample_ks(xs, xts) < 0.01);
}

TEST_CASE("support checks go through the dispatcher") {
  const ModelSpec spec = sample_specs(0);
  CHECK(cik::in_support(spec, vec({0, 1})));
  CHECK_FALSE(cik::in_support(spec, vec({0, 2})));
  CHECK_THROWS_AS(cik::log_density_x(spec, vec({0, 2})), std::domain_error);
  cik::RandomStream rng(72);
  CHECK_THROWS_AS(cik::sample_knockoff(spec, vec({2, 0}), rng), std::domain_error);
}

TEST_CASE("latent trace is recorded when requested") {
  cik::RandomStream rng(73);
  for (int which = 0; which < 4; ++which) {
    const ModelSpec spec = sample_specs(which);
    cik::LatentTrace trace;
    const Eigen::VectorXd x = cik::sample_x(spec, rng, &trace);
    CHECK(cik::in_support(spec, x));
    CHECK(trace.lambda > 0.0);
    CHECK(trace.c.size() == spec.p);
  }
}
