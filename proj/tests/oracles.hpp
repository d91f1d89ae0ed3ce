#pragma once

// Independent reference computations for the tests. Nothing here calls into the library,
// so a bug in a library routine cannot cancel against itself.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Composite midpoint rule; no endpoint evaluations, so integrable end singularities are fine
// after a smoothing substitution.
inline double midpoint(const std::function<double(double)>& f, double a, double b, int n = 200000) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += f(a + (k + 0.5) * h);
  return s * h;
}

// Composite Simpson, n even.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int k = 0; k < 200 && hi - lo > 0.0; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Flat-spherical profile on [0, 2b]: cos v, then cos w, then the mirrored cap.
inline double flat_spherical(double w, double b, double v) {
  v = std::abs(v);
  if (v <= w) return std::cos(v);
  if (v <= 2.0 * b - w) return std::cos(w);
  return std::cos(2.0 * b - v);
}

// Conformal type and volume by quadrature, split at the kinks.
inline double flat_spherical_beta(double w, double b) {
  auto inv = [&](double v) { return 1.0 / flat_spherical(w, b, v); };
  return midpoint(inv, 0.0, w) + (2.0 * b - 2.0 * w) / std::cos(w) + midpoint(inv, 2.0 * b - w, 2.0 * b);
}

inline double flat_spherical_volume(double w, double b) {
  auto f = [&](double v) { return flat_spherical(w, b, v); };
  return 2.0 * pi * (simpson(f, 0.0, w) + (2.0 * b - 2.0 * w) * std::cos(w) + simpson(f, 2.0 * b - w, 2.0 * b));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen_); }
  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace oracle
