#pragma once

#include <optional>
#include <string_view>

namespace klein {

// The five inequality families:
//   SigmaV       l_sigma l_v         <= C vol        (Klein bottle)
//   SigmaNV      L_sigma l_v         <= C vol        L_sigma = min(l_sigma, l_h)
//   SigmaVH      l_sigma l_v l_h     <= C vol^(3/2)
//   MobiusSatz2  l_sigma l_v         <= C vol        (Mobius band, beta = half-type)
//   MobiusSatz3  sys l_v             <= C vol
enum class Theorem { SigmaV, SigmaNV, SigmaVH, MobiusSatz2, MobiusSatz3 };
enum class Regime { Spherical, FlatSpherical };

std::string_view to_string(Theorem t);
std::string_view to_string(Regime r);
Theorem parse_theorem(std::string_view name);
Regime parse_regime(std::string_view name);

bool is_mobius(Theorem t);
// Number of lengths in the product, so the volume enters as vol^(p/2).
int length_exponent(Theorem t);

struct ConstantResult {
  Theorem theorem = Theorem::SigmaV;
  double beta = 0.0;
  Regime regime = Regime::Spherical;
  double C = 0.0;
  std::optional<double> omega;
  std::optional<double> b;
  std::optional<double> x;  // tanh(beta/2) (Klein) or tanh(beta) (Mobius) in the spherical regime
};

// Regime boundary in beta; none for SigmaVH.
std::optional<double> threshold(Theorem t);

// arcsin(x)/x, with the series near 0.
double arcsin_ratio(double x);

ConstantResult c_sigma_v(double beta);
ConstantResult c_sigma_n_v(double beta);
ConstantResult c_sigma_v_h(double beta);
ConstantResult c_mobius_satz2(double beta);
ConstantResult c_mobius_satz3(double beta);
ConstantResult constant_for(Theorem t, double beta);

// Both branches evaluated at any beta > 0, for continuity checks at the threshold.
double sigma_v_spherical_branch(double beta);
double sigma_v_flat_branch(double beta);
double sigma_n_v_flat_branch(double beta);  // (2/3)(3 beta + 4 pi - 6 L) / (4 sqrt 3 + beta - 2 L)

// Flat-spherical Thm 2 constant written through b: 2b / (sqrt 3 + b - pi/3).
double sigma_n_v_of_b(double b);
// m' for H_b in its two equivalent forms.
double sigma_n_v_mprime(double b);          // pi (sqrt 3 + b - pi/3) / (4b)
double sigma_n_v_mprime_printed(double b);  // (3 sqrt3 pi + 3 b pi - pi^2) / (12 b)

// The literal Mobius Satz 3 formula, including its pi*beta denominator term.
// Kept only so tests can show it breaks continuity.
double mobius_satz3_printed(double beta);

// Thm 3 pieces in terms of (omega, b = q(omega)).
double thm3_radicand(double omega, double b);  // b^4 - 4 b w + w^2 + w^4 - 2 b^2 (w^2 - 2)
double thm3_constant_printed(double omega, double b);
double thm3_constant_simplified(double omega, double b);
double thm3_constant_of_omega(double omega);
// 2 sqrt(pi) / (3 sqrt 3), the omega -> pi/2 limit.
double thm3_constant_limit();

// 2 ln tan(3 pi / 8), the conformal type of the extremal isosystolic Klein metric.
double isosystolic_beta();

}  // namespace klein
