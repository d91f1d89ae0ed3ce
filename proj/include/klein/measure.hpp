#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "klein/constants.hpp"
#include "klein/geometry.hpp"
#include "klein/systole.hpp"

namespace klein {

// Density of the great-circle family over the latitude parameter a, 0 <= a < omega:
// h(a) = sin a / (pi cos a) * (cos^2 a - (m'/pi) cos w) / sqrt(cos^2 a - cos^2 w).
double h_density(double a, double omega, double m_prime);

struct FamilyMasses {
  double m1 = 0.0;  // great circles, both caps: 4 sin w - 4 m' w / pi
  double m2 = 0.0;  // verticals: m'
  double m3 = 0.0;  // flat-band horizontals: 2 (b - w) (1 - m' / (pi cos w))
};

FamilyMasses family_masses(double omega, double b, double m_prime);
// m1 by quadrature of the density after the substitution sin a = sin w sin t.
double great_circle_mass_quadrature(double omega, double m_prime);

// The m' values that balance the families on the flat-spherical metric (omega, b).
double m_prime_sigma_v(double omega);                 // pi cos w (horizontals vanish)
double m_prime_sigma_n_v(double b);                   // pi (sqrt 3 + b - pi/3) / (4b)
double m_prime_sigma_v_h(double omega, double b);     // pi sin w / (b + w)
double m_prime_sigma_v_h_alt(double omega, double b); // pi cos w (b - w) / (2b - w)

enum class FamilyKind { GreatCircles, Verticals, Horizontals };
std::string_view to_string(FamilyKind k);
HomotopyClass family_class(FamilyKind k);

/// Measured family of closed curves on a flat-spherical Klein metric (omega, b), V = 2b.
///   GreatCircles: h(|a|) da dtheta over both caps, the upper one centred at v = 2b.
///   Verticals:    (m'/pi) du, curves u = const of length 2V.
///   Horizontals:  (1 - m'/(pi cos w)) da over a in [w, 2b - w], each closed by its
///                 mirror at -a into a loop of length 2 pi cos w.
/// `group` collects families whose curves count towards the same length factor.
struct CurveFamilyMeasure {
  FamilyKind kind = FamilyKind::GreatCircles;
  double omega = 0.0;
  double b = 0.0;
  double m_prime = 0.0;
  int group = 0;

  double mass() const;
  double curve_length() const;
};

using TestFunction = std::function<double(double u, double v)>;

struct NamedTestFunction {
  std::string name;
  TestFunction fn;
};

// 1, cos v, cos^2 v, v^2, exp(-v^2), sin^2 u cos v, and a smooth bump in the flat band.
// All are invariant under sigma and evaluated on the fundamental domain.
std::vector<NamedTestFunction> test_function_suite(const ProfileMetric& m);

// <*mu, phi> = integral over the family of the line integrals of phi.
double pushforward_pair(const CurveFamilyMeasure& mu, const ProfileMetric& m, const TestFunction& phi);
// Integral of phi against the area of m over the fundamental domain.
double volume_pair(const ProfileMetric& m, const TestFunction& phi);

struct CertificateTolerances {
  double push = 1e-3;   // relative to the volume
  double mass = 1e-10;
};

struct VolumeBookkeeping {
  double factor = 1.0;  // multiple of the integrated volume used as the area measure
  double volume = 0.0;
  double eps_push = 0.0;
};

struct GroupSummary {
  double mass = 0.0;
  double length = 0.0;
};

struct BoundCertificate {
  Theorem theorem = Theorem::SigmaV;
  ProfileMetric metric = ProfileMetric::constant(1.0, 1.0);
  std::vector<CurveFamilyMeasure> families;
  std::vector<GroupSummary> groups;
  std::vector<std::pair<std::string, double>> push_residuals;  // per test function, / vol
  std::vector<VolumeBookkeeping> bookkeeping;
  double volume = 0.0;
  double eps_push = 0.0;
  double eps_mass = 0.0;
  double C = 0.0;
  CertificateTolerances tolerances;
  bool valid = false;
  std::string diagnostics;
};

// Checks the maximality criterion for the families on m and derives
// C = vol^(p/2) / (p^p prod m_i), p = number of groups.
BoundCertificate certify(Theorem theorem, const ProfileMetric& m, std::vector<CurveFamilyMeasure> families,
                         const CertificateTolerances& tol = {});

// Families and metric for the flat-spherical regime of the three Klein theorems.
std::vector<CurveFamilyMeasure> extremal_families(Theorem theorem, double omega, double b);
BoundCertificate certify_for_beta(Theorem theorem, double beta, const CertificateTolerances& tol = {});

}  // namespace klein
