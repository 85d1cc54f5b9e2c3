// Gaussian smoothing of an arbitrary law into a conditionally independent
// one, plus the coupled-pair construction that makes the smoothed law's
// knockoffs samplable: (T, T~) = (L + M, L + N) with L drawn from the base
// measure and M, N independent N(0, c I). Includes the distance verifiers
// used to confirm the approximation budgets numerically.

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cik/rng.hpp"

namespace cik::approx {

enum class SmoothingMode {
  BoundedLipschitz,  // c = epsilon^2 / (2p)
  TotalVariation,    // c = (1/4p) (epsilon / (lip_b * vol_B))^2
};

// The smoothing variance for the requested accuracy. TotalVariation mode
// requires the density's Lipschitz constant and the reference-set volume.
double smoothing_variance(double epsilon, int p, SmoothingMode mode, double lip_b = 0.0,
                          double vol_b = 0.0);

// A base measure given by atoms (rows), smoothed by N(0, c_smooth I).
struct SmoothedMeasure {
  Eigen::MatrixXd atoms;  // n_atoms x p
  double c_smooth = 0.0;
  double epsilon = 0.0;

  int dim() const { return static_cast<int>(atoms.cols()); }
  int n_atoms() const { return static_cast<int>(atoms.rows()); }
  void validate() const;

  // Density of the smoothed measure: atom-average of Gaussian kernels.
  double density(const Eigen::VectorXd& x) const;
};

SmoothedMeasure make_smoothed_measure(Eigen::MatrixXd atoms, double epsilon, int p_override,
                                      SmoothingMode mode, double lip_b = 0.0,
                                      double vol_b = 0.0);

// Draw (t, t_tilde) = (L + M, L + N).
std::pair<Eigen::VectorXd, Eigen::VectorXd> sample_pair(const SmoothedMeasure& measure,
                                                        RandomStream& rng);

// Posterior weights of the atoms given t; normalized via log-sum-exp.
Eigen::VectorXd posterior_atom_weights(const SmoothedMeasure& measure,
                                       const Eigen::VectorXd& t);

// Knockoff of t: draw an atom from its posterior, then add fresh noise.
// If every weight underflows (non-finite input), falls back to the nearest
// atom and sets *fallback.
Eigen::VectorXd knockoff_given_t(const SmoothedMeasure& measure, const Eigen::VectorXd& t,
                                 RandomStream& rng, bool* fallback = nullptr);

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  double step = 1e-3;

  int points() const;
  double node(int k) const { return lo + k * step; }
};

struct DtvEstimate {
  double value = 0.0;        // trapezoidal estimate of (1/2) int |f - f0|
  double f_mass_defect = 0.0;   // |grid integral of f - 1|
  double f0_mass_defect = 0.0;  // |grid integral of f0 - 1|
};

// Total variation distance between two densities on a grid (p = 1). Inputs
// must integrate to 1 on the grid within 1e-3.
DtvEstimate dtv_estimate(const std::function<double(double)>& f,
                         const std::function<double(double)>& f0, const GridSpec& grid);
// p = 2 version on a tensor grid.
DtvEstimate dtv_estimate_2d(const std::function<double(double, double)>& f,
                            const std::function<double(double, double)>& f0,
                            const GridSpec& gx, const GridSpec& gy);

// Monte-Carlo estimate of E||M||, M ~ N(0, c_smooth I_p); this upper-bounds
// the bounded-Lipschitz distance between the base measure and its smoothing
// (to be compared against epsilon / sqrt(2)).
double dbl_bound_check(const SmoothedMeasure& measure, int n_draws, RandomStream& rng);

}  // namespace cik::approx
