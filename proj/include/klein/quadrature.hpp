#pragma once

#include <functional>
#include <span>
#include <vector>

namespace klein {

using ScalarFn = std::function<double(double)>;

// Adaptive Simpson on [a, b] with an absolute tolerance. Throws QuadratureError
// when the recursion depth is exhausted without meeting the tolerance.
double adaptive_simpson(const ScalarFn& f, double a, double b, double abs_tol = 1e-12,
                        int max_depth = 60);

// Same, but splits [a, b] at the given interior breakpoints first (kinks of f).
double adaptive_simpson(const ScalarFn& f, double a, double b, std::span<const double> breakpoints,
                        double abs_tol = 1e-12);

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// n-point rule, computed once per n and cached.
const GaussLegendreRule& gauss_legendre(int n);

double gauss_legendre_integrate(const ScalarFn& f, double a, double b, int n = 64);

// Composite Gauss-Legendre: one n-point panel per piece between sorted breakpoints,
// each piece further split into `panels` equal subpanels.
double gauss_legendre_composite(const ScalarFn& f, double a, double b,
                                std::span<const double> breakpoints, int n = 64, int panels = 1);

}  // namespace klein
