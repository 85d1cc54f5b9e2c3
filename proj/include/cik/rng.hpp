// Seedable random streams and the scalar samplers used across the toolkit.
//
// Streams are keyed by (seed, stream_id): the same key reproduces the same
// draw sequence on every platform, and distinct stream_ids give independent
// substreams, so replicate runs can be parallelized without coordination.
// All samplers are written on top of the stream's own uniform bits; nothing
// here depends on implementation-defined std::*_distribution behavior.

#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include <Eigen/Core>

namespace cik {

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Derive an independent child stream; deterministic in (this, id).
  RandomStream substream(std::uint64_t id) const;

  std::uint64_t next_u64();
  // Uniform on [0,1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi);
  // Uniform integer on [0, n), n >= 1.
  std::uint64_t uniform_index(std::uint64_t n);

  double normal();  // standard normal, Box-Muller
  double normal(double mean, double variance);
  // Gamma(shape, rate), Marsaglia-Tsang squeeze.
  double gamma(double shape, double rate);
  double beta(double a, double b);
  // InverseGamma(shape a, scale b), sampled as 1 / Gamma(a, rate = b).
  double inverse_gamma(double shape, double scale);
  // Student-t with unit scale, via the gamma scale mixture.
  double student_t(double dof);

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  // mt19937_64 is fully specified by the standard, so sequences are
  // byte-stable across platforms once seeded deterministically.
  std::mt19937_64 engine_;
};

// One of the scalar laws the models need; parameters are validated on use.
struct ScalarLaw {
  enum class Kind { Uniform, Normal, Gamma, InverseGamma, Beta, StudentT };

  Kind kind = Kind::Uniform;
  double p1 = 0.0;  // lo | mean | shape | shape a | a | dof
  double p2 = 1.0;  // hi | variance | rate | scale b | b | scale^2

  static ScalarLaw uniform_law(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
  static ScalarLaw normal_law(double mean, double variance) { return {Kind::Normal, mean, variance}; }
  static ScalarLaw gamma_law(double shape, double rate) { return {Kind::Gamma, shape, rate}; }
  static ScalarLaw inverse_gamma_law(double shape, double scale) { return {Kind::InverseGamma, shape, scale}; }
  static ScalarLaw beta_law(double a, double b) { return {Kind::Beta, a, b}; }
  static ScalarLaw student_t_law(double dof, double scale2) { return {Kind::StudentT, dof, scale2}; }

  void validate() const;  // throws std::invalid_argument
};

double sample(const ScalarLaw& law, RandomStream& rng);

// Draw from the p-variate Student-t with diagonal scale matrix diag(scales):
// g ~ Gamma(dof/2, dof/2), then independent N(0, scales_i / g).
Eigen::VectorXd sample_student_t_vector(double dof, const Eigen::VectorXd& scales,
                                        RandomStream& rng);

}  // namespace cik
