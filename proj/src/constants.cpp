#include "klein/constants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "klein/error.hpp"
#include "klein/geometry.hpp"
#include "klein/solvers.hpp"

namespace klein {
namespace {

double ln_two_plus_sqrt3() { return std::log(2.0 + std::sqrt(3.0)); }

void require_beta(double beta) {
  if (!(std::isfinite(beta) && beta > 0.0)) {
    throw DomainError("conformal type must be positive and finite, got " + std::to_string(beta));
  }
}

}  // namespace

std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::SigmaV: return "sigma-v";
    case Theorem::SigmaNV: return "sigma-n-v";
    case Theorem::SigmaVH: return "sigma-v-h";
    case Theorem::MobiusSatz2: return "mobius-satz2";
    case Theorem::MobiusSatz3: return "mobius-satz3";
  }
  return "unknown";
}

std::string_view to_string(Regime r) {
  return r == Regime::Spherical ? "spherical" : "flat-spherical";
}

Theorem parse_theorem(std::string_view name) {
  for (Theorem t : {Theorem::SigmaV, Theorem::SigmaNV, Theorem::SigmaVH, Theorem::MobiusSatz2,
                    Theorem::MobiusSatz3}) {
    if (name == to_string(t)) return t;
  }
  throw DomainError("unknown theorem '" + std::string(name) +
                    "' (expected sigma-v, sigma-n-v, sigma-v-h, mobius-satz2, mobius-satz3)");
}

Regime parse_regime(std::string_view name) {
  if (name == "spherical") return Regime::Spherical;
  if (name == "flat-spherical") return Regime::FlatSpherical;
  throw DomainError("unknown regime '" + std::string(name) + "'");
}

bool is_mobius(Theorem t) { return t == Theorem::MobiusSatz2 || t == Theorem::MobiusSatz3; }

int length_exponent(Theorem t) { return t == Theorem::SigmaVH ? 3 : 2; }

std::optional<double> threshold(Theorem t) {
  switch (t) {
    case Theorem::SigmaV: return 2.0 * gd_inverse(solve_b0());
    case Theorem::SigmaNV: return 2.0 * ln_two_plus_sqrt3();
    case Theorem::SigmaVH: return std::nullopt;
    case Theorem::MobiusSatz2: return gd_inverse(solve_b0());
    case Theorem::MobiusSatz3: return ln_two_plus_sqrt3();
  }
  return std::nullopt;
}

double arcsin_ratio(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 + 3.0 * x2 * x2 / 40.0;
  }
  return std::asin(x) / x;
}

double sigma_v_spherical_branch(double beta) { return arcsin_ratio(std::tanh(0.5 * beta)); }

double sigma_v_flat_branch(double beta) {
  return 1.0 / (2.0 * std::cos(omega_from_beta_thm1(beta)));
}

double sigma_n_v_flat_branch(double beta) {
  const double L = ln_two_plus_sqrt3();
  return (2.0 / 3.0) * (3.0 * beta + 4.0 * kPi - 6.0 * L) / (4.0 * std::sqrt(3.0) + beta - 2.0 * L);
}

double sigma_n_v_of_b(double b) { return 2.0 * b / (std::sqrt(3.0) + b - kPi / 3.0); }

double sigma_n_v_mprime(double b) { return kPi * (std::sqrt(3.0) + b - kPi / 3.0) / (4.0 * b); }

double sigma_n_v_mprime_printed(double b) {
  return (3.0 * std::sqrt(3.0) * kPi + 3.0 * b * kPi - kPi * kPi) / (12.0 * b);
}

double mobius_satz3_printed(double beta) {
  const double L = ln_two_plus_sqrt3();
  return (2.0 / 3.0) * (3.0 * beta + 2.0 * kPi - 3.0 * L) / (2.0 * std::sqrt(3.0) + kPi * beta - L);
}

ConstantResult c_sigma_v(double beta) {
  require_beta(beta);
  ConstantResult r;
  r.theorem = Theorem::SigmaV;
  r.beta = beta;
  if (beta <= *threshold(Theorem::SigmaV)) {
    r.regime = Regime::Spherical;
    r.x = std::tanh(0.5 * beta);
    r.C = arcsin_ratio(*r.x);
    r.b = cap_b_from_beta(beta);
    r.omega = r.b;
  } else {
    const double w = omega_from_beta_thm1(beta);
    r.regime = Regime::FlatSpherical;
    r.omega = w;
    r.b = std::max(w, std::tan(w) - w);  // guards rounding at the threshold
    r.C = 1.0 / (2.0 * std::cos(w));
  }
  return r;
}

ConstantResult c_sigma_n_v(double beta) {
  require_beta(beta);
  ConstantResult r;
  r.theorem = Theorem::SigmaNV;
  r.beta = beta;
  if (beta <= *threshold(Theorem::SigmaNV)) {
    r.regime = Regime::Spherical;
    r.x = std::tanh(0.5 * beta);
    r.C = arcsin_ratio(*r.x);
    r.b = cap_b_from_beta(beta);
    r.omega = r.b;
  } else {
    r.regime = Regime::FlatSpherical;
    r.omega = kPi / 3.0;
    r.b = b_from_beta_thm2(beta);
    r.C = sigma_n_v_flat_branch(beta);
  }
  return r;
}

double thm3_radicand(double w, double b) {
  return b * b * b * b - 4.0 * b * w + w * w + w * w * w * w - 2.0 * b * b * (w * w - 2.0);
}

double thm3_constant_printed(double w, double b) {
  const double pref = std::sqrt(kPi) / (3.0 * std::sqrt(3.0));
  return pref * std::pow(thm3_radicand(w, b), 0.25) * (2.0 * b - w) /
         ((b - w) * std::sqrt((b - w) * b));
}

double thm3_constant_simplified(double w, double b) {
  const double s = (2.0 * b - w) / (b - w);
  return std::sqrt(kPi) * s * std::sqrt(s) / (3.0 * std::sqrt(3.0) * std::sqrt(std::cos(w) * b));
}

double thm3_constant_of_omega(double omega) {
  return thm3_constant_printed(omega, q_of_omega(omega));
}

double thm3_constant_limit() { return 2.0 * std::sqrt(kPi) / (3.0 * std::sqrt(3.0)); }

ConstantResult c_sigma_v_h(double beta) {
  require_beta(beta);
  ConstantResult r;
  r.theorem = Theorem::SigmaVH;
  r.beta = beta;
  r.regime = Regime::FlatSpherical;
  const double w = omega_from_beta_thm3(beta);
  r.omega = w;
  r.b = q_of_omega(w);
  r.C = thm3_constant_printed(w, *r.b);
  return r;
}

ConstantResult c_mobius_satz2(double beta) {
  require_beta(beta);
  ConstantResult r;
  r.theorem = Theorem::MobiusSatz2;
  r.beta = beta;
  if (beta <= *threshold(Theorem::MobiusSatz2)) {
    r.regime = Regime::Spherical;
    r.x = std::tanh(beta);
    r.C = arcsin_ratio(*r.x);
    r.b = cap_b_from_beta(2.0 * beta);
    r.omega = r.b;
  } else {
    const double w = omega_from_beta_mobius_satz2(beta);
    r.regime = Regime::FlatSpherical;
    r.omega = w;
    r.b = std::max(w, std::tan(w) - w);  // guards rounding at the threshold
    r.C = 1.0 / (2.0 * std::cos(w));
  }
  return r;
}

ConstantResult c_mobius_satz3(double beta) {
  require_beta(beta);
  ConstantResult r;
  r.theorem = Theorem::MobiusSatz3;
  r.beta = beta;
  const double L = ln_two_plus_sqrt3();
  if (beta <= L) {
    r.regime = Regime::Spherical;
    r.x = std::tanh(beta);
    r.C = arcsin_ratio(*r.x);
    r.b = cap_b_from_beta(2.0 * beta);
    r.omega = r.b;
  } else {
    r.regime = Regime::FlatSpherical;
    r.omega = kPi / 3.0;
    r.b = kPi / 3.0 + 0.5 * (beta - L);
    r.C = (2.0 / 3.0) * (3.0 * beta + 2.0 * kPi - 3.0 * L) / (2.0 * std::sqrt(3.0) + beta - L);
  }
  return r;
}

ConstantResult constant_for(Theorem t, double beta) {
  switch (t) {
    case Theorem::SigmaV: return c_sigma_v(beta);
    case Theorem::SigmaNV: return c_sigma_n_v(beta);
    case Theorem::SigmaVH: return c_sigma_v_h(beta);
    case Theorem::MobiusSatz2: return c_mobius_satz2(beta);
    case Theorem::MobiusSatz3: return c_mobius_satz3(beta);
  }
  throw DomainError("unknown theorem");
}

double isosystolic_beta() { return 2.0 * std::log(std::tan(3.0 * kPi / 8.0)); }

}  // namespace klein
