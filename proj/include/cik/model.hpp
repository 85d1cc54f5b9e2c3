// Covariate model specifications and the generator contract shared by the
// four knockoff constructions. Every model follows the same mixture scheme:
// coordinates are conditionally i.i.d.-paired given a latent scalar (plus a
// latent scale vector for the Gibbs variant), which makes the knockoff
// conditional law available in closed or near-closed form.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

#include "cik/rng.hpp"

namespace cik {

enum class ModelVariant { Binary, Ternary, GaussMix, GibbsMix };

std::string variant_name(ModelVariant v);
ModelVariant variant_from_name(const std::string& name);

struct ModelSpec {
  ModelVariant variant = ModelVariant::Binary;
  int p = 0;
  double a = 0.0;       // ternary / gauss-mix / gibbs-mix
  double b = 0.0;       // ternary / gauss-mix / gibbs-mix
  Eigen::VectorXd c;    // binary / ternary / gauss-mix
  double c_lo = 0.0;    // gibbs-mix prior interval
  double c_hi = 0.0;

  static ModelSpec binary(Eigen::VectorXd c);
  static ModelSpec ternary(double a, double b, Eigen::VectorXd c);
  static ModelSpec gauss_mix(double a, double b, Eigen::VectorXd c);
  static ModelSpec gibbs_mix(double a, double b, int p, double c_lo, double c_hi);

  void validate() const;  // throws std::invalid_argument
  bool discrete() const {
    return variant == ModelVariant::Binary || variant == ModelVariant::Ternary;
  }
  // Number of support points per coordinate for discrete variants (2 or 3).
  int support_base() const;
};

nlohmann::json to_json(const ModelSpec& spec);
// Strict: unknown or missing fields are errors naming the field.
ModelSpec model_from_json(const nlohmann::json& j);

// Latent values used while generating a draw; diagnostic only, never part of
// a distributional contract.
struct LatentTrace {
  double lambda = 0.0;
  Eigen::VectorXd c;
};

struct KnockoffDraw {
  Eigen::VectorXd x;
  Eigen::VectorXd x_tilde;
  std::optional<LatentTrace> trace;
};

bool in_support(const ModelSpec& spec, const Eigen::VectorXd& x);
void require_support(const ModelSpec& spec, const Eigen::VectorXd& x);  // throws std::domain_error

// Exact pmf table over (x, x_tilde) for small discrete models; the
// brute-force oracle behind the exact diagnostics.
struct JointLawTable {
  int p = 0;
  int base = 2;
  std::vector<double> prob;  // dense, index = code(x) * states() + code(x_tilde)

  int states() const;
  double& at(int ix, int jx);
  double at(int ix, int jx) const;
  // Decode a state code into coordinate values 0..base-1.
  Eigen::VectorXd decode(int code) const;
  int encode(const Eigen::VectorXd& x) const;

  double total() const;
  std::vector<double> marginal_x() const;
  // max_{x, xt} |P(x, xt) - P(f_i(x, xt))| for the coordinate-i swap.
  double swap_asymmetry(int i) const;
  // cov(x_i, x_tilde_i) under the table.
  double pair_covariance(int i) const;
};

// Enumerate the exact joint law; discrete variants only, guarded by table size.
JointLawTable enumerate_joint(const ModelSpec& spec);

// Generator contract, dispatching on the variant. The Gibbs variant uses its
// default chain configuration here; call the module directly to tune it.
Eigen::VectorXd sample_x(const ModelSpec& spec, RandomStream& rng,
                         LatentTrace* trace = nullptr);
Eigen::VectorXd sample_knockoff(const ModelSpec& spec, const Eigen::VectorXd& x,
                                RandomStream& rng, LatentTrace* trace = nullptr);
double log_density_x(const ModelSpec& spec, const Eigen::VectorXd& x);
double log_density_joint(const ModelSpec& spec, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& x_tilde);

}  // namespace cik
