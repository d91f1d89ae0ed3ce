#include "klein/extremal.hpp"

#include <cmath>
#include <string>

#include "klein/error.hpp"
#include "klein/solvers.hpp"

namespace klein {

ProfileMetric build_G_prime(double b, Surface surface) {
  if (!(b > 0.0 && b < kHalfPi)) {
    throw DomainError("build_G_prime needs 0 < b < pi/2, got " + std::to_string(b));
  }
  return ProfileMetric::spherical_cap(b, surface);
}

ProfileMetric build_G(double omega, double b, Surface surface) {
  if (!(omega > 0.0 && omega < kHalfPi)) {
    throw DomainError("build_G needs 0 < omega < pi/2, got " + std::to_string(omega));
  }
  if (omega > b) {
    throw DomainError("build_G needs omega <= b, got omega = " + std::to_string(omega) +
                      ", b = " + std::to_string(b));
  }
  return ProfileMetric::flat_spherical(omega, b, surface);
}

ProfileMetric build_H(double b, Surface surface) {
  if (!(b >= kPi / 3.0)) {
    throw DomainError("build_H needs b >= pi/3, got " + std::to_string(b));
  }
  return ProfileMetric::flat_spherical_pi3(b, surface);
}

ProfileMetric build_E(double omega) {
  if (!(omega > 0.0 && omega < kHalfPi)) {
    throw DomainError("build_E needs 0 < omega < pi/2, got " + std::to_string(omega));
  }
  return ProfileMetric::flat_spherical(omega, q_of_omega(omega));
}

Extremal extremal_for_beta(Theorem theorem, double beta) {
  const ConstantResult c = constant_for(theorem, beta);
  const Surface surface = is_mobius(theorem) ? Surface::Mobius : Surface::Klein;
  ExtremalSpec spec{theorem, c.regime, beta, *c.omega, *c.b};
  if (c.regime == Regime::Spherical) {
    return {spec, build_G_prime(spec.b, surface)};
  }
  switch (theorem) {
    case Theorem::SigmaNV:
    case Theorem::MobiusSatz3:
      return {spec, build_H(spec.b, surface)};
    case Theorem::SigmaVH:
      return {spec, build_E(spec.omega)};
    default:
      return {spec, build_G(spec.omega, spec.b, surface)};
  }
}

}  // namespace klein
