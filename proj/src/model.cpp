#include "cik/model.hpp"

#include <cmath>
#include <stdexcept>

#include "cik/binary.hpp"
#include "cik/gauss.hpp"
#include "cik/gibbs.hpp"
#include "cik/ternary.hpp"

namespace cik {

std::string variant_name(ModelVariant v) {
  switch (v) {
    case ModelVariant::Binary: return "binary";
    case ModelVariant::Ternary: return "ternary";
    case ModelVariant::GaussMix: return "gauss-mix";
    case ModelVariant::GibbsMix: return "gibbs-mix";
  }
  throw std::invalid_argument("variant_name: unknown variant");
}

ModelVariant variant_from_name(const std::string& name) {
  if (name == "binary") return ModelVariant::Binary;
  if (name == "ternary") return ModelVariant::Ternary;
  if (name == "gauss-mix") return ModelVariant::GaussMix;
  if (name == "gibbs-mix") return ModelVariant::GibbsMix;
  throw std::invalid_argument("unknown model variant '" + name + "'");
}

ModelSpec ModelSpec::binary(Eigen::VectorXd c) {
  ModelSpec spec;
  spec.variant = ModelVariant::Binary;
  spec.p = static_cast<int>(c.size());
  spec.c = std::move(c);
  spec.validate();
  return spec;
}

ModelSpec ModelSpec::ternary(double a, double b, Eigen::VectorXd c) {
  ModelSpec spec;
  spec.variant = ModelVariant::Ternary;
  spec.p = static_cast<int>(c.size());
  spec.a = a;
  spec.b = b;
  spec.c = std::move(c);
  spec.validate();
  return spec;
}

ModelSpec ModelSpec::gauss_mix(double a, double b, Eigen::VectorXd c) {
  ModelSpec spec;
  spec.variant = ModelVariant::GaussMix;
  spec.p = static_cast<int>(c.size());
  spec.a = a;
  spec.b = b;
  spec.c = std::move(c);
  spec.validate();
  return spec;
}

ModelSpec ModelSpec::gibbs_mix(double a, double b, int p, double c_lo, double c_hi) {
  ModelSpec spec;
  spec.variant = ModelVariant::GibbsMix;
  spec.p = p;
  spec.a = a;
  spec.b = b;
  spec.c_lo = c_lo;
  spec.c_hi = c_hi;
  spec.validate();
  return spec;
}

void ModelSpec::validate() const {
  if (p < 1) throw std::invalid_argument("ModelSpec: p must be >= 1");
  const bool needs_ab = variant != ModelVariant::Binary;
  if (needs_ab && (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)))
    throw std::invalid_argument("ModelSpec: a and b must be positive and finite");
  if (variant == ModelVariant::GibbsMix) {
    if (!(c_lo > 0.0) || !(c_hi >= c_lo) || !std::isfinite(c_hi))
      throw std::invalid_argument("ModelSpec: gibbs-mix needs 0 < c_lo <= c_hi");
    return;
  }
  if (c.size() != p) throw std::invalid_argument("ModelSpec: c must have length p");
  for (int i = 0; i < p; ++i) {
    if (!std::isfinite(c[i])) throw std::invalid_argument("ModelSpec: c must be finite");
    if (variant == ModelVariant::GaussMix) {
      if (!(c[i] > 0.0)) throw std::invalid_argument("ModelSpec: gauss-mix needs c_i > 0");
    } else if (!(c[i] > 0.0 && c[i] < 1.0)) {
      throw std::invalid_argument("ModelSpec: discrete models need c_i in (0,1)");
    }
  }
}

int ModelSpec::support_base() const {
  switch (variant) {
    case ModelVariant::Binary: return 2;
    case ModelVariant::Ternary: return 3;
    default: throw std::invalid_argument("support_base: continuous model");
  }
}

nlohmann::json to_json(const ModelSpec& spec) {
  spec.validate();
  nlohmann::json j;
  j["variant"] = variant_name(spec.variant);
  j["p"] = spec.p;
  if (spec.variant != ModelVariant::Binary) {
    j["a"] = spec.a;
    j["b"] = spec.b;
  }
  if (spec.variant == ModelVariant::GibbsMix) {
    j["c_prior"] = {spec.c_lo, spec.c_hi};
  } else {
    j["c"] = std::vector<double>(spec.c.data(), spec.c.data() + spec.c.size());
  }
  return j;
}

ModelSpec model_from_json(const nlohmann::json& j) {
  if (!j.contains("variant")) throw std::invalid_argument("ModelSpec: missing field 'variant'");
  const ModelVariant variant = variant_from_name(j.at("variant").get<std::string>());

  std::vector<std::string> allowed{"variant", "p"};
  if (variant != ModelVariant::Binary) {
    allowed.push_back("a");
    allowed.push_back("b");
  }
  allowed.push_back(variant == ModelVariant::GibbsMix ? "c_prior" : "c");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const auto& name : allowed) ok = ok || key == name;
    if (!ok) throw std::invalid_argument("ModelSpec: unknown field '" + key + "'");
  }
  for (const auto& name : allowed)
    if (!j.contains(name)) throw std::invalid_argument("ModelSpec: missing field '" + name + "'");

  ModelSpec spec;
  spec.variant = variant;
  spec.p = j.at("p").get<int>();
  if (variant != ModelVariant::Binary) {
    spec.a = j.at("a").get<double>();
    spec.b = j.at("b").get<double>();
  }
  if (variant == ModelVariant::GibbsMix) {
    const auto interval = j.at("c_prior").get<std::vector<double>>();
    if (interval.size() != 2)
      throw std::invalid_argument("ModelSpec: 'c_prior' must be [lo, hi]");
    spec.c_lo = interval[0];
    spec.c_hi = interval[1];
  } else {
    const auto cvec = j.at("c").get<std::vector<double>>();
    spec.c = Eigen::Map<const Eigen::VectorXd>(cvec.data(), static_cast<Eigen::Index>(cvec.size()));
  }
  spec.validate();
  return spec;
}

bool in_support(const ModelSpec& spec, const Eigen::VectorXd& x) {
  if (x.size() != spec.p) return false;
  if (!spec.discrete()) return x.allFinite();
  const int base = spec.support_base();
  for (int i = 0; i < spec.p; ++i) {
    bool ok = false;
    for (int v = 0; v < base; ++v) ok = ok || x[i] == static_cast<double>(v);
    if (!ok) return false;
  }
  return true;
}

void require_support(const ModelSpec& spec, const Eigen::VectorXd& x) {
  if (!in_support(spec, x))
    throw std::domain_error("point outside the support of the " +
                            variant_name(spec.variant) + " model");
}

int JointLawTable::states() const {
  int m = 1;
  for (int i = 0; i < p; ++i) m *= base;
  return m;
}

double& JointLawTable::at(int ix, int jx) {
  return prob[static_cast<std::size_t>(ix) * static_cast<std::size_t>(states()) +
              static_cast<std::size_t>(jx)];
}

double JointLawTable::at(int ix, int jx) const {
  return prob[static_cast<std::size_t>(ix) * static_cast<std::size_t>(states()) +
              static_cast<std::size_t>(jx)];
}

Eigen::VectorXd JointLawTable::decode(int code) const {
  Eigen::VectorXd x(p);
  for (int i = 0; i < p; ++i) {
    x[i] = code % base;
    code /= base;
  }
  return x;
}

int JointLawTable::encode(const Eigen::VectorXd& x) const {
  int code = 0;
  for (int i = p - 1; i >= 0; --i) code = code * base + static_cast<int>(x[i]);
  return code;
}

double JointLawTable::total() const {
  double s = 0.0;
  for (double v : prob) s += v;
  return s;
}

std::vector<double> JointLawTable::marginal_x() const {
  const int m = states();
  std::vector<double> marg(static_cast<std::size_t>(m), 0.0);
  for (int ix = 0; ix < m; ++ix)
    for (int jx = 0; jx < m; ++jx) marg[static_cast<std::size_t>(ix)] += at(ix, jx);
  return marg;
}

namespace {

// Swap digit i between the codes of x and x_tilde.
std::pair<int, int> swap_codes(int ix, int jx, int i, int base, int p) {
  int pow = 1;
  for (int k = 0; k < i; ++k) pow *= base;
  const int di = (ix / pow) % base;
  const int dj = (jx / pow) % base;
  return {ix + (dj - di) * pow, jx + (di - dj) * pow};
}

}  // namespace

double JointLawTable::swap_asymmetry(int i) const {
  if (i < 0 || i >= p) throw std::invalid_argument("swap_asymmetry: coordinate out of range");
  const int m = states();
  double worst = 0.0;
  for (int ix = 0; ix < m; ++ix)
    for (int jx = 0; jx < m; ++jx) {
      const auto [si, sj] = swap_codes(ix, jx, i, base, p);
      worst = std::max(worst, std::fabs(at(ix, jx) - at(si, sj)));
    }
  return worst;
}

double JointLawTable::pair_covariance(int i) const {
  if (i < 0 || i >= p) throw std::invalid_argument("pair_covariance: coordinate out of range");
  const int m = states();
  int pow = 1;
  for (int k = 0; k < i; ++k) pow *= base;
  double exy = 0.0, ex = 0.0, ey = 0.0;
  for (int ix = 0; ix < m; ++ix)
    for (int jx = 0; jx < m; ++jx) {
      const double vx = (ix / pow) % base;
      const double vy = (jx / pow) % base;
      const double pr = at(ix, jx);
      exy += vx * vy * pr;
      ex += vx * pr;
      ey += vy * pr;
    }
  return exy - ex * ey;
}

JointLawTable enumerate_joint(const ModelSpec& spec) {
  spec.validate();
  if (!spec.discrete())
    throw std::invalid_argument("enumerate_joint: only discrete models have a pmf table");
  JointLawTable table;
  table.p = spec.p;
  table.base = spec.support_base();
  const long m = static_cast<long>(table.states());
  if (m * m > (1L << 24))
    throw std::length_error("enumerate_joint: table would exceed the size guard");
  table.prob.resize(static_cast<std::size_t>(m * m));
  for (int ix = 0; ix < m; ++ix) {
    const Eigen::VectorXd x = table.decode(ix);
    for (int jx = 0; jx < m; ++jx) {
      const Eigen::VectorXd xt = table.decode(jx);
      table.at(ix, jx) = spec.variant == ModelVariant::Binary
                             ? binary::pmf_joint(spec, x, xt)
                             : ternary::pmf_joint(spec, x, xt);
    }
  }
  return table;
}

Eigen::VectorXd sample_x(const ModelSpec& spec, RandomStream& rng, LatentTrace* trace) {
  switch (spec.variant) {
    case ModelVariant::Binary: return binary::sample_x(spec, rng, trace);
    case ModelVariant::Ternary: return ternary::sample_x(spec, rng, trace);
    case ModelVariant::GaussMix: return gauss::sample_x(spec, rng, trace);
    case ModelVariant::GibbsMix: return gibbs::sample_x(spec, rng, trace);
  }
  throw std::invalid_argument("sample_x: unknown variant");
}

Eigen::VectorXd sample_knockoff(const ModelSpec& spec, const Eigen::VectorXd& x,
                                RandomStream& rng, LatentTrace* trace) {
  switch (spec.variant) {
    case ModelVariant::Binary: return binary::sample_knockoff(spec, x, rng, trace);
    case ModelVariant::Ternary: return ternary::sample_knockoff(spec, x, rng, trace);
    case ModelVariant::GaussMix: return gauss::sample_knockoff(spec, x, rng, trace);
    case ModelVariant::GibbsMix: {
      gibbs::GibbsConfig config;
      return gibbs::sample_knockoff(spec, x, config, rng);
    }
  }
  throw std::invalid_argument("sample_knockoff: unknown variant");
}

double log_density_x(const ModelSpec& spec, const Eigen::VectorXd& x) {
  switch (spec.variant) {
    case ModelVariant::Binary: return binary::log_pmf_x(spec, x);
    case ModelVariant::Ternary: return ternary::log_pmf_x(spec, x);
    case ModelVariant::GaussMix: return gauss::log_density_x(spec, x);
    case ModelVariant::GibbsMix: return gibbs::log_density_x(spec, x);
  }
  throw std::invalid_argument("log_density_x: unknown variant");
}

double log_density_joint(const ModelSpec& spec, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& x_tilde) {
  switch (spec.variant) {
    case ModelVariant::Binary: return binary::log_pmf_joint(spec, x, x_tilde);
    case ModelVariant::Ternary: return ternary::log_pmf_joint(spec, x, x_tilde);
    case ModelVariant::GaussMix: return gauss::log_density_joint(spec, x, x_tilde);
    case ModelVariant::GibbsMix: return gibbs::log_density_joint(spec, x, x_tilde);
  }
  throw std::invalid_argument("log_density_joint: unknown variant");
}

}  // namespace cik
