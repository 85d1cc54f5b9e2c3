#include "cik/approx.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cik::approx {

double smoothing_variance(double epsilon, int p, SmoothingMode mode, double lip_b,
                          double vol_b) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("smoothing_variance: epsilon must be > 0");
  if (p < 1) throw std::invalid_argument("smoothing_variance: p must be >= 1");
  switch (mode) {
    case SmoothingMode::BoundedLipschitz:
      return epsilon * epsilon / (2.0 * p);
    case SmoothingMode::TotalVariation: {
      if (!(lip_b > 0.0) || !(vol_b > 0.0) || !std::isfinite(vol_b))
        throw std::invalid_argument(
            "smoothing_variance: TotalVariation mode needs lip_b > 0 and finite vol_b > 0");
      const double r = epsilon / (lip_b * vol_b);
      return r * r / (4.0 * p);
    }
  }
  throw std::invalid_argument("smoothing_variance: unknown mode");
}

void SmoothedMeasure::validate() const {
  if (atoms.rows() < 1) throw std::invalid_argument("SmoothedMeasure: no atoms");
  if (!(c_smooth > 0.0)) throw std::invalid_argument("SmoothedMeasure: c_smooth must be > 0");
  if (!atoms.allFinite()) throw std::invalid_argument("SmoothedMeasure: atoms must be finite");
}

double SmoothedMeasure::density(const Eigen::VectorXd& x) const {
  validate();
  const int p = dim();
  const double log_norm = -0.5 * p * std::log(2.0 * std::numbers::pi * c_smooth);
  // log-sum-exp over the kernels to stay stable far from the atoms
  double max_log = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd logs(n_atoms());
  for (int j = 0; j < n_atoms(); ++j) {
    const double sq = (x - atoms.row(j).transpose()).squaredNorm();
    logs[j] = log_norm - sq / (2.0 * c_smooth);
    max_log = std::max(max_log, logs[j]);
  }
  if (!std::isfinite(max_log)) return 0.0;
  double sum = 0.0;
  for (int j = 0; j < n_atoms(); ++j) sum += std::exp(logs[j] - max_log);
  return std::exp(max_log) * sum / n_atoms();
}

SmoothedMeasure make_smoothed_measure(Eigen::MatrixXd atoms, double epsilon, int p_override,
                                      SmoothingMode mode, double lip_b, double vol_b) {
  SmoothedMeasure measure;
  measure.atoms = std::move(atoms);
  measure.epsilon = epsilon;
  const int p = p_override > 0 ? p_override : static_cast<int>(measure.atoms.cols());
  measure.c_smooth = smoothing_variance(epsilon, p, mode, lip_b, vol_b);
  measure.validate();
  return measure;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_pair(const SmoothedMeasure& measure,
                                                        RandomStream& rng) {
  measure.validate();
  const int p = measure.dim();
  const int j = static_cast<int>(rng.uniform_index(measure.n_atoms()));
  const Eigen::VectorXd base = measure.atoms.row(j).transpose();
  const double sd = std::sqrt(measure.c_smooth);
  Eigen::VectorXd t(p), tt(p);
  for (int i = 0; i < p; ++i) t[i] = base[i] + sd * rng.normal();
  for (int i = 0; i < p; ++i) tt[i] = base[i] + sd * rng.normal();
  return {t, tt};
}

Eigen::VectorXd posterior_atom_weights(const SmoothedMeasure& measure,
                                       const Eigen::VectorXd& t) {
  measure.validate();
  if (t.size() != measure.dim())
    throw std::invalid_argument("posterior_atom_weights: dimension mismatch");
  const int n = measure.n_atoms();
  Eigen::VectorXd logs(n);
  double max_log = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    logs[j] = -(t - measure.atoms.row(j).transpose()).squaredNorm() / (2.0 * measure.c_smooth);
    max_log = std::max(max_log, logs[j]);
  }
  Eigen::VectorXd w(n);
  if (!std::isfinite(max_log)) {
    w.setZero();
    return w;
  }
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    w[j] = std::exp(logs[j] - max_log);
    sum += w[j];
  }
  return w / sum;
}

Eigen::VectorXd knockoff_given_t(const SmoothedMeasure& measure, const Eigen::VectorXd& t,
                                 RandomStream& rng, bool* fallback) {
  const Eigen::VectorXd w = posterior_atom_weights(measure, t);
  if (fallback) *fallback = false;
  int pick = -1;
  if (w.sum() > 0.0) {
    double u = rng.uniform01();
    for (int j = 0; j < w.size(); ++j) {
      u -= w[j];
      if (u <= 0.0) {
        pick = j;
        break;
      }
    }
    if (pick < 0) pick = static_cast<int>(w.size()) - 1;
  } else {
    // all weights underflowed: deterministic nearest atom
    if (fallback) *fallback = true;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < measure.n_atoms(); ++j) {
      const double d = (t - measure.atoms.row(j).transpose()).squaredNorm();
      if (d < best) {
        best = d;
        pick = j;
      }
    }
  }
  const double sd = std::sqrt(measure.c_smooth);
  Eigen::VectorXd tt = measure.atoms.row(pick).transpose();
  for (int i = 0; i < tt.size(); ++i) tt[i] += sd * rng.normal();
  return tt;
}

int GridSpec::points() const {
  if (!(step > 0.0) || !(hi > lo)) throw std::invalid_argument("GridSpec: bad grid");
  return static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

namespace {

double trapezoid_weight(int k, int n) { return (k == 0 || k == n - 1) ? 0.5 : 1.0; }

}  // namespace

DtvEstimate dtv_estimate(const std::function<double(double)>& f,
                         const std::function<double(double)>& f0, const GridSpec& grid) {
  const int n = grid.points();
  double mass_f = 0.0, mass_f0 = 0.0, half_l1 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = grid.node(k);
    const double w = trapezoid_weight(k, n) * grid.step;
    const double vf = f(x);
    const double vf0 = f0(x);
    mass_f += w * vf;
    mass_f0 += w * vf0;
    half_l1 += w * 0.5 * std::fabs(vf - vf0);
  }
  DtvEstimate est;
  est.value = half_l1;
  est.f_mass_defect = std::fabs(mass_f - 1.0);
  est.f0_mass_defect = std::fabs(mass_f0 - 1.0);
  if (est.f_mass_defect > 1e-3 || est.f0_mass_defect > 1e-3)
    throw std::invalid_argument("dtv_estimate: inputs do not integrate to 1 on the grid");
  return est;
}

DtvEstimate dtv_estimate_2d(const std::function<double(double, double)>& f,
                            const std::function<double(double, double)>& f0,
                            const GridSpec& gx, const GridSpec& gy) {
  const int nx = gx.points();
  const int ny = gy.points();
  double mass_f = 0.0, mass_f0 = 0.0, half_l1 = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = gx.node(i);
    const double wx = trapezoid_weight(i, nx) * gx.step;
    for (int j = 0; j < ny; ++j) {
      const double y = gy.node(j);
      const double w = wx * trapezoid_weight(j, ny) * gy.step;
      const double vf = f(x, y);
      const double vf0 = f0(x, y);
      mass_f += w * vf;
      mass_f0 += w * vf0;
      half_l1 += w * 0.5 * std::fabs(vf - vf0);
    }
  }
  DtvEstimate est;
  est.value = half_l1;
  est.f_mass_defect = std::fabs(mass_f - 1.0);
  est.f0_mass_defect = std::fabs(mass_f0 - 1.0);
  if (est.f_mass_defect > 1e-3 || est.f0_mass_defect > 1e-3)
    throw std::invalid_argument("dtv_estimate_2d: inputs do not integrate to 1 on the grid");
  return est;
}

double dbl_bound_check(const SmoothedMeasure& measure, int n_draws, RandomStream& rng) {
  measure.validate();
  if (n_draws < 10000) throw std::invalid_argument("dbl_bound_check: need n_draws >= 10^4");
  const int p = measure.dim();
  const double sd = std::sqrt(measure.c_smooth);
  double sum = 0.0;
  for (int k = 0; k < n_draws; ++k) {
    double sq = 0.0;
    for (int i = 0; i < p; ++i) {
      const double z = sd * rng.normal();
      sq += z * z;
    }
    sum += std::sqrt(sq);
  }
  return sum / n_draws;
}

}  // namespace cik::approx
