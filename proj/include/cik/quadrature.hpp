// 1-D quadrature: Gauss-Legendre rules (exact for polynomials, used by the
// discrete-model integrals) and an adaptive Simpson fallback for smooth
// non-polynomial integrands.

#pragma once

#include <functional>
#include <vector>

namespace cik {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;
};

// n-point rule; results are cached per n. Exact for polynomials of degree
// <= 2n - 1.
const GaussLegendreRule& gauss_legendre(int n);

// Integrate f over [a, b] with the n-point Gauss-Legendre rule.
double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);

// Adaptive Simpson with absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth = 40);

}  // namespace cik
