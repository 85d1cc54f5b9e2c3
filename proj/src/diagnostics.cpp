#include "cik/diagnostics.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "cik/quadrature.hpp"
#include "cik/stats.hpp"

namespace cik::diag {

SwapTestReport swap_invariance_test(const JointLawTable& table, int i) {
  SwapTestReport report;
  report.coordinate = i;
  report.method = SwapTestMethod::ExactTable;
  report.statistic = table.swap_asymmetry(i);
  report.pass = report.statistic < 1e-10;
  return report;
}

SwapTestReport swap_invariance_test(const ModelSpec& spec, int i, int n_draws,
                                    RandomStream& rng) {
  spec.validate();
  if (i < 0 || i >= spec.p)
    throw std::invalid_argument("swap_invariance_test: coordinate out of range");
  if (spec.discrete() && spec.p <= 3) return swap_invariance_test(enumerate_joint(spec), i);

  // Monte Carlo route: draws of (x, x~) against an independent batch with
  // coordinate i swapped.
  auto draw_pairs = [&](int count) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      const Eigen::VectorXd x = sample_x(spec, rng);
      const Eigen::VectorXd xt = sample_knockoff(spec, x, rng);
      Eigen::VectorXd joint(2 * spec.p);
      joint << x, xt;
      out.push_back(std::move(joint));
    }
    return out;
  };
  const std::vector<Eigen::VectorXd> plain = draw_pairs(n_draws);
  std::vector<Eigen::VectorXd> swapped = draw_pairs(n_draws);
  for (auto& v : swapped) std::swap(v[i], v[spec.p + i]);

  RandomStream perm_rng = rng.substream(0x5157u + static_cast<std::uint64_t>(i));
  const EnergyTestResult res = energy_test(plain, swapped, 199, perm_rng);
  SwapTestReport report;
  report.coordinate = i;
  report.method = SwapTestMethod::TwoSampleMC;
  report.statistic = res.statistic;
  report.p_value = res.p_value;
  report.pass = res.pass(0.01);
  return report;
}

bool cik_membership_test(const JointLawTable& table) {
  for (int i = 0; i < table.p; ++i)
    if (table.pair_covariance(i) < -1e-10) return false;
  return true;
}

Eigen::VectorXd sample_extended(const ModelSpec& spec, int k_blocks, RandomStream& rng) {
  spec.validate();
  if (k_blocks < 1) throw std::invalid_argument("sample_extended: k_blocks must be >= 1");
  Eigen::VectorXd v(k_blocks * spec.p);
  switch (spec.variant) {
    case ModelVariant::Binary: {
      const double lambda = rng.uniform01();
      for (int b = 0; b < k_blocks; ++b)
        for (int i = 0; i < spec.p; ++i)
          v[b * spec.p + i] = rng.uniform01() < lambda * spec.c[i] ? 1.0 : 0.0;
      return v;
    }
    case ModelVariant::Ternary: {
      const double lambda = rng.beta(spec.a, spec.b);
      for (int b = 0; b < k_blocks; ++b)
        for (int i = 0; i < spec.p; ++i) {
          const double u = rng.uniform01();
          if (u < 1.0 - lambda) v[b * spec.p + i] = 2.0;
          else if (u < 1.0 - lambda + lambda * spec.c[i]) v[b * spec.p + i] = 1.0;
          else v[b * spec.p + i] = 0.0;
        }
      return v;
    }
    case ModelVariant::GaussMix: {
      const double lambda = rng.inverse_gamma(spec.a, spec.b);
      for (int b = 0; b < k_blocks; ++b)
        for (int i = 0; i < spec.p; ++i)
          v[b * spec.p + i] = rng.normal() * std::sqrt(lambda * spec.c[i]);
      return v;
    }
    case ModelVariant::GibbsMix: {
      const double lambda = rng.inverse_gamma(spec.a, spec.b);
      Eigen::VectorXd c(spec.p);
      for (int i = 0; i < spec.p; ++i)
        c[i] = spec.c_lo == spec.c_hi ? spec.c_lo : rng.uniform(spec.c_lo, spec.c_hi);
      for (int b = 0; b < k_blocks; ++b)
        for (int i = 0; i < spec.p; ++i)
          v[b * spec.p + i] = rng.normal() * std::sqrt(lambda * c[i]);
      return v;
    }
  }
  throw std::invalid_argument("sample_extended: unknown variant");
}

std::vector<double> extended_pmf(const ModelSpec& spec, int k_blocks) {
  spec.validate();
  if (!spec.discrete())
    throw std::invalid_argument("extended_pmf: only discrete models have a pmf");
  const int len = k_blocks * spec.p;
  const int base = spec.support_base();
  long m = 1;
  for (int i = 0; i < len; ++i) {
    m *= base;
    if (m > (1L << 22)) throw std::length_error("extended_pmf: table too large");
  }
  std::vector<double> pmf(static_cast<std::size_t>(m));
  std::vector<int> digits(static_cast<std::size_t>(len));
  for (long code = 0; code < m; ++code) {
    long rem = code;
    for (int i = 0; i < len; ++i) {
      digits[static_cast<std::size_t>(i)] = static_cast<int>(rem % base);
      rem /= base;
    }
    if (spec.variant == ModelVariant::Binary) {
      // integral over lambda of a polynomial: exact Gauss-Legendre
      int power = 0;
      std::vector<double> off;
      for (int i = 0; i < len; ++i) {
        const int coord = i % spec.p;
        if (digits[static_cast<std::size_t>(i)] == 1) ++power;
        else off.push_back(spec.c[coord]);
      }
      double scale = 1.0;
      for (int i = 0; i < len; ++i)
        if (digits[static_cast<std::size_t>(i)] == 1) scale *= spec.c[i % spec.p];
      const int deg = power + static_cast<int>(off.size());
      pmf[static_cast<std::size_t>(code)] =
          scale * integrate_gl(
                      [&](double l) {
                        double val = std::pow(l, power);
                        for (double ci : off) val *= 1.0 - l * ci;
                        return val;
                      },
                      0.0, 1.0, deg / 2 + 1);
    } else {
      // beta integral in closed form
      int twos = 0;
      double log_scale = 0.0;
      for (int i = 0; i < len; ++i) {
        const int coord = i % spec.p;
        const int d = digits[static_cast<std::size_t>(i)];
        if (d == 2) ++twos;
        else if (d == 1) log_scale += std::log(spec.c[coord]);
        else log_scale += std::log1p(-spec.c[coord]);
      }
      const double nl = static_cast<double>(len);
      const double m2 = static_cast<double>(twos);
      pmf[static_cast<std::size_t>(code)] =
          std::exp(log_scale + std::lgamma(spec.a + nl - m2) + std::lgamma(spec.b + m2) -
                   std::lgamma(spec.a + spec.b + nl) + std::lgamma(spec.a + spec.b) -
                   std::lgamma(spec.a) - std::lgamma(spec.b));
    }
  }
  return pmf;
}

namespace {

double extended_swap_asymmetry(const std::vector<double>& pmf, int base, int len, int pos1,
                               int pos2) {
  long pow1 = 1, pow2 = 1;
  for (int k = 0; k < pos1; ++k) pow1 *= base;
  for (int k = 0; k < pos2; ++k) pow2 *= base;
  double worst = 0.0;
  const long m = static_cast<long>(pmf.size());
  for (long code = 0; code < m; ++code) {
    const int d1 = static_cast<int>((code / pow1) % base);
    const int d2 = static_cast<int>((code / pow2) % base);
    const long swapped = code + (d2 - d1) * pow1 + (d1 - d2) * pow2;
    worst = std::max(worst, std::fabs(pmf[static_cast<std::size_t>(code)] -
                                      pmf[static_cast<std::size_t>(swapped)]));
  }
  (void)len;
  return worst;
}

}  // namespace

ExtendabilityReport extendability_check(const ModelSpec& spec, int k_blocks, int n_draws,
                                        RandomStream& rng) {
  spec.validate();
  if (k_blocks < 3) throw std::invalid_argument("extendability_check: k_blocks must be >= 3");
  ExtendabilityReport report;
  report.k_blocks = k_blocks;

  // Triples (i, j, k): residue i, block pair (j, k), j < k.
  std::vector<std::array<int, 3>> triples;
  for (int i = 0; i < spec.p; ++i)
    for (int j = 0; j < k_blocks; ++j)
      for (int k = j + 1; k < k_blocks; ++k) triples.push_back({i, j, k});

  const bool exact = spec.discrete() && k_blocks * spec.p <= 10;
  report.exact = exact;
  if (exact) {
    const std::vector<double> pmf = extended_pmf(spec, k_blocks);
    for (const auto& [i, j, k] : triples) {
      BlockSwapResult res;
      res.coordinate = i;
      res.block_j = j;
      res.block_k = k;
      res.statistic =
          extended_swap_asymmetry(pmf, spec.support_base(), k_blocks * spec.p,
                                  j * spec.p + i, k * spec.p + i);
      res.pass = res.statistic < 1e-12;
      report.results.push_back(res);
      report.all_pass = report.all_pass && res.pass;
    }
    return report;
  }

  // Monte Carlo: cap the number of tested triples, Bonferroni-correct the level.
  const std::size_t max_triples = 6;
  if (triples.size() > max_triples) {
    std::vector<std::array<int, 3>> chosen;
    for (std::size_t k = 0; k < max_triples; ++k)
      chosen.push_back(triples[k * triples.size() / max_triples]);
    triples = std::move(chosen);
  }
  const double level = 0.01 / static_cast<double>(triples.size());
  const int n_perms = 599;  // p-value resolution 1/600, enough for level 0.01/6

  for (const auto& [i, j, k] : triples) {
    auto draw_batch = [&](bool swap) {
      std::vector<Eigen::VectorXd> out;
      out.reserve(static_cast<std::size_t>(n_draws));
      for (int d = 0; d < n_draws; ++d) {
        Eigen::VectorXd v = sample_extended(spec, k_blocks, rng);
        if (swap) std::swap(v[j * spec.p + i], v[k * spec.p + i]);
        out.push_back(std::move(v));
      }
      return out;
    };
    const std::vector<Eigen::VectorXd> plain = draw_batch(false);
    const std::vector<Eigen::VectorXd> swapped = draw_batch(true);
    RandomStream perm_rng = rng.substream(0xE07Bu + static_cast<std::uint64_t>(i));
    const EnergyTestResult res = energy_test(plain, swapped, n_perms, perm_rng, 500);
    BlockSwapResult out;
    out.coordinate = i;
    out.block_j = j;
    out.block_k = k;
    out.statistic = res.statistic;
    out.p_value = res.p_value;
    out.pass = res.pass(level);
    report.results.push_back(out);
    report.all_pass = report.all_pass && out.pass;
  }
  return report;
}

OptimalityReport optimality_report(const ModelSpec& spec, int n_draws, RandomStream& rng) {
  spec.validate();
  if (spec.discrete())
    throw std::domain_error(
        "optimality_report: model lacks centered conditionals (E(x_i | latent) != 0)");
  if (n_draws < 100) throw std::invalid_argument("optimality_report: too few draws");

  const int p = spec.p;
  std::vector<std::vector<double>> xs(p), xts(p);
  for (int i = 0; i < p; ++i) {
    xs[i].reserve(static_cast<std::size_t>(n_draws));
    xts[i].reserve(static_cast<std::size_t>(n_draws));
  }
  // Regression of x_i on L_i = (other covariates, all knockoffs) needs the
  // full draws; cap the stored count to keep the normal equations cheap.
  const int reg_rows = std::min(n_draws, 100000);
  Eigen::MatrixXd X(reg_rows, p), Xt(reg_rows, p);
  for (int d = 0; d < n_draws; ++d) {
    const Eigen::VectorXd x = sample_x(spec, rng);
    const Eigen::VectorXd xt = sample_knockoff(spec, x, rng);
    for (int i = 0; i < p; ++i) {
      xs[i].push_back(x[i]);
      xts[i].push_back(xt[i]);
    }
    if (d < reg_rows) {
      X.row(d) = x.transpose();
      Xt.row(d) = xt.transpose();
    }
  }

  OptimalityReport report;
  report.abs_corr.resize(p);
  report.r_squared.resize(p);
  for (int i = 0; i < p; ++i) report.abs_corr[i] = std::fabs(correlation(xs[i], xts[i]));
  report.mac = report.abs_corr.sum();

  for (int i = 0; i < p; ++i) {
    // design: all covariates except i, plus every knockoff, plus intercept
    const int cols = 2 * p;  // (p - 1) + p + 1
    Eigen::MatrixXd L(reg_rows, cols);
    int col = 0;
    for (int j = 0; j < p; ++j)
      if (j != i) L.col(col++) = X.col(j);
    for (int j = 0; j < p; ++j) L.col(col++) = Xt.col(j);
    L.col(col) = Eigen::VectorXd::Ones(reg_rows);
    const Eigen::VectorXd target = X.col(i);
    const Eigen::VectorXd coef =
        (L.transpose() * L).ldlt().solve(L.transpose() * target);
    const Eigen::VectorXd resid = target - L * coef;
    const double ss_tot =
        (target.array() - target.mean()).square().sum() / static_cast<double>(reg_rows);
    const double ss_res = resid.squaredNorm() / static_cast<double>(reg_rows);
    const double ex2 = target.squaredNorm() / static_cast<double>(reg_rows);
    report.r_squared[i] = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 0.0;
    report.recon_gap += std::fabs(ex2 - ss_res);
  }
  return report;
}

}  // namespace cik::diag
