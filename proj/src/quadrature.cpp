#include "klein/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "klein/error.hpp"

namespace klein {
namespace {

struct SimpsonState {
  const ScalarFn& f;
  int evaluations = 0;
  bool exhausted = false;
};

double simpson_step(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  st.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // Relative floor: below ~1e-15 of the local value the test only sees roundoff.
  if (std::abs(delta) <= 15.0 * std::max(tol, 1e-15 * std::abs(left + right))) {
    return left + right + delta / 15.0;
  }
  if (depth <= 0 || m <= a || b <= m) {
    st.exhausted = true;
    return left + right + delta / 15.0;
  }
  return simpson_step(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const ScalarFn& f, double a, double b, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  SimpsonState st{f};
  // Seed with four panels so a symmetric integrand cannot fool the first estimate.
  double total = 0.0;
  constexpr int kSeedPanels = 4;
  const double h = (b - a) / kSeedPanels;
  for (int k = 0; k < kSeedPanels; ++k) {
    const double lo = a + k * h;
    const double hi = (k + 1 == kSeedPanels) ? b : a + (k + 1) * h;
    const double fa = f(lo);
    const double fb = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += simpson_step(st, lo, hi, fa, fm, fb, whole, abs_tol / kSeedPanels, max_depth);
  }
  if (st.exhausted) {
    throw QuadratureError("adaptive Simpson: recursion depth exhausted on [" + std::to_string(a) +
                          ", " + std::to_string(b) + "]");
  }
  return total;
}

double adaptive_simpson(const ScalarFn& f, double a, double b, std::span<const double> breakpoints,
                        double abs_tol) {
  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  const double piece_tol = abs_tol / static_cast<double>(cuts.size() - 1);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    total += adaptive_simpson(f, cuts[k], cuts[k + 1], piece_tol);
  }
  return total;
}

const GaussLegendreRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guesses.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return cache.emplace(n, std::move(rule)).first->second;
}

double gauss_legendre_integrate(const ScalarFn& f, double a, double b, int n) {
  const auto& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

double gauss_legendre_composite(const ScalarFn& f, double a, double b,
                                std::span<const double> breakpoints, int n, int panels) {
  std::vector<double> cuts{a};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double h = (cuts[k + 1] - cuts[k]) / panels;
    for (int p = 0; p < panels; ++p) {
      total += gauss_legendre_integrate(f, cuts[k] + p * h, cuts[k] + (p + 1) * h, n);
    }
  }
  return total;
}

}  // namespace klein
