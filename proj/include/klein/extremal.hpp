#pragma once

#include "klein/constants.hpp"
#include "klein/geometry.hpp"

namespace klein {

struct ExtremalSpec {
  Theorem theorem = Theorem::SigmaV;
  Regime regime = Regime::Spherical;
  double beta = 0.0;
  double omega = 0.0;
  double b = 0.0;
};

struct Extremal {
  ExtremalSpec spec;
  ProfileMetric metric;
};

// Spherical cap metric, V = 2b, invariant under v -> v + 2b.
ProfileMetric build_G_prime(double b, Surface surface = Surface::Klein);
// Flat-spherical metric with caps of angle omega and half-height 2b.
ProfileMetric build_G(double omega, double b, Surface surface = Surface::Klein);
// omega = pi/3, flat band factor 1/2; needs b >= pi/3.
ProfileMetric build_H(double b, Surface surface = Surface::Klein);
// flat-spherical(omega, q(omega)).
ProfileMetric build_E(double omega);

// Picks the regime, solves for (omega, b) and returns the extremal metric of type beta.
// Mobius theorems return the half-domain profile (|v| <= b) of Mobius half-type beta.
Extremal extremal_for_beta(Theorem theorem, double beta);

}  // namespace klein
