// Property verifiers for the knockoff-defining conditions: coordinate swap
// invariance (exact on small discrete tables, energy two-sample otherwise),
// the covariance necessary condition separating conditional-independence
// knockoffs from generic ones, finite extendability of the pair, and the
// zero-correlation / non-reconstructability optimality checks.

#pragma once

#include <vector>

#include <Eigen/Core>

#include "cik/model.hpp"
#include "cik/rng.hpp"

namespace cik::diag {

enum class SwapTestMethod { ExactTable, TwoSampleMC };

struct SwapTestReport {
  int coordinate = 0;
  double statistic = 0.0;  // max table asymmetry, or energy statistic
  double p_value = 1.0;    // 1 for exact-table runs
  bool pass = false;
  SwapTestMethod method = SwapTestMethod::ExactTable;
};

// Exact-table route for discrete models with p <= 3, Monte Carlo energy test
// otherwise (level 0.01).
SwapTestReport swap_invariance_test(const ModelSpec& spec, int i, int n_draws,
                                    RandomStream& rng);
// Exact route on a caller-provided table.
SwapTestReport swap_invariance_test(const JointLawTable& table, int i);

// Necessary condition for the conditional-independence class: every pair
// covariance is nonnegative. Returns false when some cov(x_i, x~_i) is
// negative beyond tolerance (certified non-member); true is inconclusive.
bool cik_membership_test(const JointLawTable& table);

struct BlockSwapResult {
  int coordinate = 0;  // residue i
  int block_j = 0;
  int block_k = 0;
  double statistic = 0.0;
  double p_value = 1.0;
  bool pass = false;
};

struct ExtendabilityReport {
  int k_blocks = 0;
  bool exact = false;  // enumerated pmf (discrete) vs Monte Carlo
  std::vector<BlockSwapResult> results;
  bool all_pass = true;
};

// Build the length k_blocks * p extension (latent drawn once, blocks
// conditionally independent) and test invariance under within-residue
// position swaps. Bonferroni-corrected level 0.01 on the MC route.
ExtendabilityReport extendability_check(const ModelSpec& spec, int k_blocks, int n_draws,
                                        RandomStream& rng);

// One draw of the extended sequence (k_blocks blocks of p coordinates).
Eigen::VectorXd sample_extended(const ModelSpec& spec, int k_blocks, RandomStream& rng);

// Exact pmf of the extended sequence for discrete models, indexed by the
// base-b code of the length k_blocks * p configuration.
std::vector<double> extended_pmf(const ModelSpec& spec, int k_blocks);

struct OptimalityReport {
  double mac = 0.0;        // sum_i |corr(x_i, x~_i)|
  double recon_gap = 0.0;  // sum_i |E(x_i^2) - residual variance of x_i on L_i|
  Eigen::VectorXd abs_corr;
  Eigen::VectorXd r_squared;  // of the regression of x_i on L_i
};

// Requires a model with centered conditionals (gauss-mix, gibbs-mix);
// discrete variants raise std::domain_error.
OptimalityReport optimality_report(const ModelSpec& spec, int n_draws, RandomStream& rng);

}  // namespace cik::diag
