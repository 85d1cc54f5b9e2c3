#include "cik/rng.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace cik {

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  // Expand (seed, stream_id) into seeding material so nearby keys do not
  // share state prefixes.
  std::uint64_t s = seed ^ (0xD1B54A32D192ED03ull * (stream_id + 1));
  std::array<std::uint32_t, 16> words;
  for (std::size_t i = 0; i < words.size(); i += 2) {
    const std::uint64_t w = splitmix64(s);
    words[i] = static_cast<std::uint32_t>(w);
    words[i + 1] = static_cast<std::uint32_t>(w >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

RandomStream RandomStream::substream(std::uint64_t id) const {
  std::uint64_t s = stream_id_ ^ (0x9E3779B97F4A7C15ull * (id + 1));
  return RandomStream(seed_, splitmix64(s));
}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("uniform: requires lo < hi");
  return lo + (hi - lo) * uniform01();
}

std::uint64_t RandomStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be >= 1");
  // Rejection to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % n;
}

double RandomStream::normal() {
  // Box-Muller, cosine branch only: fixed draw count per call.
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RandomStream::normal(double mean, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw std::invalid_argument("normal: variance must be positive and finite");
  return mean + std::sqrt(variance) * normal();
}

double RandomStream::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate))
    throw std::invalid_argument("gamma: shape and rate must be positive and finite");
  if (shape < 1.0) {
    const double u = 1.0 - uniform01();  // (0, 1]
    return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - uniform01();  // (0, 1]
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

double RandomStream::beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("beta: both parameters must be positive");
  const double x = gamma(a, 1.0);
  const double y = gamma(b, 1.0);
  return x / (x + y);
}

double RandomStream::inverse_gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("inverse_gamma: shape and scale must be positive");
  return 1.0 / gamma(shape, scale);
}

double RandomStream::student_t(double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("student_t: dof must be positive");
  const double g = gamma(0.5 * dof, 0.5 * dof);
  return normal() / std::sqrt(g);
}

void ScalarLaw::validate() const {
  const bool finite = std::isfinite(p1) && std::isfinite(p2);
  if (!finite) throw std::invalid_argument("ScalarLaw: parameters must be finite");
  switch (kind) {
    case Kind::Uniform:
      if (!(p1 < p2)) throw std::invalid_argument("ScalarLaw: uniform requires lo < hi");
      return;
    case Kind::Normal:
      if (!(p2 > 0.0)) throw std::invalid_argument("ScalarLaw: normal requires variance > 0");
      return;
    case Kind::Gamma:
    case Kind::InverseGamma:
    case Kind::Beta:
    case Kind::StudentT:
      if (!(p1 > 0.0) || !(p2 > 0.0))
        throw std::invalid_argument("ScalarLaw: parameters must be strictly positive");
      return;
  }
  throw std::invalid_argument("ScalarLaw: unknown kind");
}

double sample(const ScalarLaw& law, RandomStream& rng) {
  law.validate();
  switch (law.kind) {
    case ScalarLaw::Kind::Uniform:
      return rng.uniform(law.p1, law.p2);
    case ScalarLaw::Kind::Normal:
      return rng.normal(law.p1, law.p2);
    case ScalarLaw::Kind::Gamma:
      return rng.gamma(law.p1, law.p2);
    case ScalarLaw::Kind::InverseGamma:
      return rng.inverse_gamma(law.p1, law.p2);
    case ScalarLaw::Kind::Beta:
      return rng.beta(law.p1, law.p2);
    case ScalarLaw::Kind::StudentT:
      return std::sqrt(law.p2) * rng.student_t(law.p1);
  }
  throw std::invalid_argument("ScalarLaw: unknown kind");
}

Eigen::VectorXd sample_student_t_vector(double dof, const Eigen::VectorXd& scales,
                                        RandomStream& rng) {
  if (!(dof > 0.0)) throw std::invalid_argument("sample_student_t_vector: dof must be positive");
  if (scales.size() == 0 || (scales.array() <= 0.0).any())
    throw std::invalid_argument("sample_student_t_vector: scales must be positive");
  const double g = rng.gamma(0.5 * dof, 0.5 * dof);
  Eigen::VectorXd out(scales.size());
  for (Eigen::Index i = 0; i < scales.size(); ++i)
    out[i] = rng.normal() * std::sqrt(scales[i] / g);
  return out;
}

}  // namespace cik
