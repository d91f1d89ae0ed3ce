#pragma once

#include <functional>
#include <string_view>

namespace klein {

struct RootResult {
  double root = 0.0;
  double residual = 0.0;  // f(root)
  int iterations = 0;
  double lo = 0.0;        // bracket the search started from
  double hi = 0.0;
};

// Bisection down to a 1e-3 bracket, then bracket-safeguarded secant refinement.
// The sign change is checked before iterating; a missing one throws SolverError
// with the bracket and end values in the message.
RootResult find_root(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-12);

// Largest usable angle below pi/2 for brackets that touch the tan singularity.
inline constexpr double kAngleCeiling = 1.5707963267948966 - 1e-9;

/// b0 in (0, pi/2) with tan b0 = 2 b0.
double solve_b0();
RootResult solve_b0_detailed();

// Conformal type of the sigma-v extremal metric G_b as a function of its band angle,
// with b = tan(omega) - omega. Increasing on [b0, pi/2).
double beta_of_omega_thm1(double omega);
// 2 sin w - (beta - 2 ln tan(pi/4 + w/2)) cos^2 w - 4 w cos w, zero at the solution.
double thm1_relation(double omega, double beta);
RootResult omega_from_beta_thm1_detailed(double beta);
double omega_from_beta_thm1(double beta);

// b = q(omega) = tan w + sqrt(tan^2 w - w tan w + w^2).
double q_of_omega(double omega);
double beta_of_omega_thm3(double omega);
// tan w - (b^2 - w^2) / (2b - w).
double thm3_constraint(double omega, double b);
RootResult omega_from_beta_thm3_detailed(double beta);
double omega_from_beta_thm3(double beta);

// b = pi/3 + (beta - 2 ln(2 + sqrt 3)) / 4.
double b_from_beta_thm2(double beta);

// Mobius half-domain relation sin w = (beta - ln tan(pi/4 + w/2)) cos^2 w + 2 w cos w.
double mobius_satz2_relation(double omega, double beta);
double omega_from_beta_mobius_satz2(double beta);

// Cap metric of half-height 2b: beta = 2 ln tan(pi/4 + b/2), and its inverse.
double cap_conformal_type(double b);
double cap_b_from_beta(double beta);

enum class Equation { B0, OmegaThm1, OmegaThm3, BThm2 };
Equation parse_equation(std::string_view name);
std::string_view to_string(Equation eq);

// Root and residual of the named equation's defining relation.
RootResult solve_equation(Equation eq, double beta);

}  // namespace klein
