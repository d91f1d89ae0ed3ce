#include "klein/solvers.hpp"

#include <cmath>
#include <mutex>
#include <sstream>
#include <string>

#include "klein/error.hpp"
#include "klein/geometry.hpp"

namespace klein {
namespace {

std::string bracket_message(const char* what, double lo, double hi, double flo, double fhi) {
  std::ostringstream os;
  os.precision(17);
  os << what << ": no sign change on [" << lo << ", " << hi << "], f(lo) = " << flo
     << ", f(hi) = " << fhi;
  return os.str();
}

const double kLnTwoPlusSqrt3 = std::log(2.0 + std::sqrt(3.0));

// Strict monotonicity of a map on [lo, hi], checked once per map on a dense grid.
void assert_increasing(const std::function<double(double)>& g, double lo, double hi, const char* name) {
  constexpr int kSamples = 4096;
  double prev = g(lo);
  for (int k = 1; k <= kSamples; ++k) {
    const double x = lo + (hi - lo) * k / kSamples;
    const double y = g(x);
    if (!(y > prev)) {
      std::ostringstream os;
      os.precision(17);
      os << name << " is not strictly increasing near " << x << " (" << prev << " -> " << y << ")";
      throw SolverError(os.str());
    }
    prev = y;
  }
}

}  // namespace

RootResult find_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  RootResult r;
  r.lo = lo;
  r.hi = hi;
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0, 0, lo, hi};
  if (fhi == 0.0) return {hi, 0.0, 0, lo, hi};
  if (!(std::signbit(flo) != std::signbit(fhi)) || !std::isfinite(flo) || !std::isfinite(fhi)) {
    throw SolverError(bracket_message("find_root", lo, hi, flo, fhi));
  }
  double a = lo;
  double b = hi;
  double fa = flo;
  double fb = fhi;
  int it = 0;
  while (b - a > 1e-3 && it < 200) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    ++it;
    if (fm == 0.0) return {m, 0.0, it, lo, hi};
    if (std::signbit(fm) == std::signbit(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  // Secant from the bracket ends; fall back to bisection whenever a step leaves it.
  double x0 = a;
  double f0 = fa;
  double x1 = b;
  double f1 = fb;
  double best = std::abs(fa) < std::abs(fb) ? a : b;
  double fbest = std::abs(fa) < std::abs(fb) ? fa : fb;
  for (; it < 400; ++it) {
    double x = (f1 != f0) ? x1 - f1 * (x1 - x0) / (f1 - f0) : 0.5 * (a + b);
    if (!(x > a && x < b)) x = 0.5 * (a + b);
    const double fx = f(x);
    if (std::abs(fx) < std::abs(fbest)) {
      best = x;
      fbest = fx;
    }
    if (fx == 0.0) break;
    if (std::signbit(fx) == std::signbit(fa)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    const double step = std::abs(x - x1);
    x0 = x1;
    f0 = f1;
    x1 = x;
    f1 = fx;
    // Keep going past tol until the step is at roundoff level, so residuals are minimal.
    if (step <= tol && step <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
    if (b - a <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(a))) break;
  }
  r.root = best;
  r.residual = fbest;
  r.iterations = it;
  return r;
}

RootResult solve_b0_detailed() {
  return find_root([](double x) { return std::tan(x) - 2.0 * x; }, 1.0, 1.5);
}

double solve_b0() {
  static const double b0 = solve_b0_detailed().root;
  return b0;
}

double cap_conformal_type(double b) { return 2.0 * gd_inverse(b); }
double cap_b_from_beta(double beta) { return gd(0.5 * beta); }

double beta_of_omega_thm1(double omega) {
  return 2.0 * gd_inverse(omega) + 2.0 * (std::tan(omega) - 2.0 * omega) / std::cos(omega);
}

double thm1_relation(double omega, double beta) {
  const double c = std::cos(omega);
  return 2.0 * std::sin(omega) - (beta - 2.0 * gd_inverse(omega)) * c * c - 4.0 * omega * c;
}

RootResult omega_from_beta_thm1_detailed(double beta) {
  const double b0 = solve_b0();
  const double threshold = beta_of_omega_thm1(b0);
  if (!(beta >= threshold * (1.0 - 1e-14))) {
    std::ostringstream os;
    os.precision(17);
    os << "omega_from_beta_thm1: beta = " << beta << " is below the flat-spherical threshold "
       << threshold;
    throw RegimeError(os.str());
  }
  static std::once_flag checked;
  std::call_once(checked, [b0] {
    assert_increasing(beta_of_omega_thm1, b0, kAngleCeiling - 1e-6, "beta(omega) for sigma-v");
  });
  if (beta <= threshold) return {b0, thm1_relation(b0, beta), 0, b0, b0};
  return find_root([beta](double w) { return thm1_relation(w, beta); }, b0, kAngleCeiling);
}

double omega_from_beta_thm1(double beta) { return omega_from_beta_thm1_detailed(beta).root; }

double q_of_omega(double omega) {
  const double t = std::tan(omega);
  return t + std::sqrt(t * t - omega * t + omega * omega);
}

double beta_of_omega_thm3(double omega) {
  const double t = std::tan(omega);
  return 2.0 * gd_inverse(omega) +
         2.0 / std::cos(omega) * (t - omega + std::sqrt(t * t - omega * t + omega * omega));
}

double thm3_constraint(double omega, double b) {
  return std::tan(omega) - (b * b - omega * omega) / (2.0 * b - omega);
}

RootResult omega_from_beta_thm3_detailed(double beta) {
  if (!(std::isfinite(beta) && beta > 0.0)) {
    throw DomainError("omega_from_beta_thm3 needs beta > 0, got " + std::to_string(beta));
  }
  static std::once_flag checked;
  std::call_once(checked, [] {
    assert_increasing(beta_of_omega_thm3, 1e-6, kAngleCeiling - 1e-6, "beta(omega) for sigma-v-h");
  });
  // beta(omega) ~ 4 omega near 0, so omega = beta / 8 lies below the root.
  const double lo = std::min(beta / 8.0, 1e-3);
  return find_root([beta](double w) { return beta_of_omega_thm3(w) - beta; }, lo, kAngleCeiling);
}

double omega_from_beta_thm3(double beta) { return omega_from_beta_thm3_detailed(beta).root; }

double b_from_beta_thm2(double beta) {
  const double threshold = 2.0 * kLnTwoPlusSqrt3;
  if (!(beta >= threshold * (1.0 - 1e-14))) {
    std::ostringstream os;
    os.precision(17);
    os << "b_from_beta_thm2: beta = " << beta << " is below the threshold 2 ln(2 + sqrt 3) = "
       << threshold;
    throw RegimeError(os.str());
  }
  return std::max(kPi / 3.0, kPi / 3.0 + (beta - threshold) / 4.0);
}

double mobius_satz2_relation(double omega, double beta) {
  const double c = std::cos(omega);
  return std::sin(omega) - (beta - gd_inverse(omega)) * c * c - 2.0 * omega * c;
}

double omega_from_beta_mobius_satz2(double beta) {
  const double b0 = solve_b0();
  const double threshold = gd_inverse(b0);
  if (!(beta >= threshold * (1.0 - 1e-14))) {
    throw RegimeError("omega_from_beta_mobius_satz2: beta below the flat-spherical threshold");
  }
  if (beta <= threshold) return b0;
  return find_root([beta](double w) { return mobius_satz2_relation(w, beta); }, b0, kAngleCeiling).root;
}

Equation parse_equation(std::string_view name) {
  if (name == "b0") return Equation::B0;
  if (name == "omega-thm1") return Equation::OmegaThm1;
  if (name == "omega-thm3") return Equation::OmegaThm3;
  if (name == "b-thm2") return Equation::BThm2;
  throw DomainError("unknown equation '" + std::string(name) + "'");
}

std::string_view to_string(Equation eq) {
  switch (eq) {
    case Equation::B0: return "b0";
    case Equation::OmegaThm1: return "omega-thm1";
    case Equation::OmegaThm3: return "omega-thm3";
    case Equation::BThm2: return "b-thm2";
  }
  return "unknown";
}

RootResult solve_equation(Equation eq, double beta) {
  switch (eq) {
    case Equation::B0: return solve_b0_detailed();
    case Equation::OmegaThm1: return omega_from_beta_thm1_detailed(beta);
    case Equation::OmegaThm3: return omega_from_beta_thm3_detailed(beta);
    case Equation::BThm2: {
      const double b = b_from_beta_thm2(beta);
      const double residual = 2.0 * kLnTwoPlusSqrt3 + 4.0 * (b - kPi / 3.0) - beta;
      return {b, residual, 0, b, b};
    }
  }
  throw DomainError("unknown equation");
}

}  // namespace klein
