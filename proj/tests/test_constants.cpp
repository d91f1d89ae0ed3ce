#include <cmath>

#include "doctest.h"
#include "klein/constants.hpp"
#include "klein/error.hpp"
#include "klein/extremal.hpp"
#include "klein/solvers.hpp"
#include "klein/systole.hpp"
#include "oracles.hpp"

using namespace klein;

namespace {

const double kL = 2 * std::log(2 + std::sqrt(3.0));

// C from the closed-form lengths and volume of the extremal metric.
double extremal_ratio(Theorem t, double beta) {
  const auto e = extremal_for_beta(t, beta);
  const double ls = *length_closed_form(HomotopyClass::Sigma, e.metric);
  const double lv = *length_closed_form(HomotopyClass::Vertical, e.metric);
  const double lh = *length_closed_form(HomotopyClass::Horizontal, e.metric);
  const double vol = volume(e.metric);
  switch (t) {
    case Theorem::SigmaV: return ls * lv / vol;
    case Theorem::SigmaNV: return std::min(ls, lh) * lv / vol;
    default: return ls * lv * lh / std::pow(vol, 1.5);
  }
}

}  // namespace

TEST_CASE("isosystolic cross-check: C = pi / (2 sqrt 2)") {
  const double beta = 2 * std::log(std::tan(3 * oracle::pi / 8));
  CHECK(isosystolic_beta() == doctest::Approx(beta).epsilon(1e-15));
  const auto r = c_sigma_v(beta);
  CHECK(r.regime == Regime::Spherical);
  CHECK(std::abs(r.C - oracle::pi / (2 * std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("thresholds") {
  CHECK(*threshold(Theorem::SigmaNV) == doctest::Approx(kL).epsilon(1e-15));
  CHECK(*threshold(Theorem::SigmaNV) == doctest::Approx(2.6339157938).epsilon(1e-10));
  const double b0 = oracle::bisect([](double b) { return std::tan(b) - 2 * b; }, 1.0, 1.5);
  CHECK(*threshold(Theorem::SigmaV) == doctest::Approx(2 * std::log(std::tan(oracle::pi / 4 + b0 / 2))).epsilon(1e-13));
  CHECK(*threshold(Theorem::SigmaV) == doctest::Approx(3.1655).epsilon(1e-4));
  CHECK(*threshold(Theorem::MobiusSatz2) == doctest::Approx(*threshold(Theorem::SigmaV) / 2).epsilon(1e-15));
  CHECK(*threshold(Theorem::MobiusSatz3) == doctest::Approx(kL / 2).epsilon(1e-15));
  CHECK_FALSE(threshold(Theorem::SigmaVH).has_value());
}

TEST_CASE("regime formulas agree at the thresholds") {
  const double t1 = *threshold(Theorem::SigmaV);
  CHECK(std::abs(sigma_v_spherical_branch(t1) - sigma_v_flat_branch(t1)) < 1e-9);
  const double target = 2 * oracle::pi / (3 * std::sqrt(3.0));
  const double x = std::tanh(kL / 2);
  CHECK(std::abs(std::asin(x) / x - target) < 1e-12);
  CHECK(std::abs(sigma_n_v_flat_branch(kL) - target) < 1e-12);
  CHECK(std::abs(c_sigma_n_v(kL * (1 - 1e-12)).C - c_sigma_n_v(kL * (1 + 1e-12)).C) < 1e-9);
  // Just left and right of the threshold the dispatcher picks different regimes.
  CHECK(c_sigma_v(t1 * (1 - 1e-9)).regime == Regime::Spherical);
  CHECK(c_sigma_v(t1 * (1 + 1e-9)).regime == Regime::FlatSpherical);
}

TEST_CASE("regime 2 constants against independent evaluations") {
  for (double beta : {3.3, 4.0, 6.0, 10.0}) {
    // sigma-v: 1/(2 cos w), w from an independent bisection of beta(w).
    const double w = oracle::bisect(
        [&](double x) { return oracle::flat_spherical_beta(x, std::tan(x) - x) - beta; }, 1.1655, 1.5707);
    CHECK(c_sigma_v(beta).C == doctest::Approx(1 / (2 * std::cos(w))).epsilon(1e-7));
    // sigma-n-v: 2b/(sqrt 3 + b - pi/3) with b linear in beta.
    const double b = oracle::pi / 3 + (beta - kL) / 4;
    CHECK(c_sigma_n_v(beta).C == doctest::Approx(2 * b / (std::sqrt(3.0) + b - oracle::pi / 3)).epsilon(1e-13));
    CHECK(sigma_n_v_of_b(b) == doctest::Approx(sigma_n_v_flat_branch(beta)).epsilon(1e-13));
  }
}

TEST_CASE("printed and derived forms coincide") {
  oracle::Rng rng(23);
  for (int k = 0; k < 20; ++k) {
    const double b = rng.uniform(oracle::pi / 3, 10.0);
    CHECK(std::abs(sigma_n_v_mprime_printed(b) - sigma_n_v_mprime(b)) < 1e-14);
    CHECK(sigma_n_v_mprime(b) == doctest::Approx(oracle::pi * (std::sqrt(3.0) + b - oracle::pi / 3) / (4 * b)).epsilon(1e-15));
  }
  for (int k = 0; k < 50; ++k) {
    const double w = rng.uniform(1e-3, 1.5);
    const double b = rng.uniform(w, 5.0);
    const double rad = std::pow(2 * b - w, 2) + std::pow(b * b - w * w, 2);
    CHECK(thm3_radicand(w, b) == doctest::Approx(rad).epsilon(1e-12));
    const double bq = q_of_omega(w);
    CHECK(thm3_constant_printed(w, bq) == doctest::Approx(thm3_constant_simplified(w, bq)).epsilon(1e-12));
  }
}

TEST_CASE("constant bounds and monotonicity") {
  double prev_v = 0.0, prev_nv = 0.0;
  const double floor_vh = thm3_constant_limit();
  CHECK(floor_vh == doctest::Approx(2 * std::sqrt(oracle::pi) / (3 * std::sqrt(3.0))).epsilon(1e-15));
  for (int k = 0; k < 500; ++k) {
    const double beta = std::pow(10.0, -2.0 + 5.0 * k / 499.0);
    const double cv = c_sigma_v(beta).C;
    const double cnv = c_sigma_n_v(beta).C;
    CHECK(cv > 1.0);
    CHECK(cnv > 1.0);
    CHECK(cnv < 2.0);
    CHECK(c_sigma_v_h(beta).C > floor_vh);
    if (k > 0) {
      CHECK(cv >= prev_v);
      CHECK(cnv > prev_nv);
    }
    prev_v = cv;
    prev_nv = cnv;
  }
  CHECK(c_sigma_v(beta_of_omega_thm1(kHalfPi - 1e-3)).C > 100.0);
  CHECK(c_sigma_v_h(1e-5).C > 100.0);
  CHECK(c_sigma_n_v(1e6).C > 2.0 - 1e-4);
}

TEST_CASE("Mobius constants equal the Klein constants at twice the type") {
  for (int k = 0; k < 200; ++k) {
    const double beta = 0.02 + 0.05 * k;
    const auto s2 = c_mobius_satz2(beta);
    const auto s3 = c_mobius_satz3(beta);
    CHECK(s2.C == doctest::Approx(c_sigma_v(2 * beta).C).epsilon(1e-11));
    CHECK(s3.C == doctest::Approx(c_sigma_n_v(2 * beta).C).epsilon(1e-11));
    CHECK(s2.regime == c_sigma_v(2 * beta).regime);
  }
  // The formula with the pi*beta term misses the spherical branch at the threshold.
  const double t = *threshold(Theorem::MobiusSatz3);
  CHECK(std::abs(mobius_satz3_printed(t) - c_mobius_satz3(t).C) > 0.1);
}

TEST_CASE("C equals the closed-form ratio of the extremal metric") {
  for (Theorem t : {Theorem::SigmaV, Theorem::SigmaNV, Theorem::SigmaVH}) {
    for (int k = 0; k < 30; ++k) {
      const double beta = std::pow(10.0, -1.0 + 2.0 * k / 29.0);
      CAPTURE(to_string(t));
      CAPTURE(beta);
      CHECK(extremal_ratio(t, beta) == doctest::Approx(constant_for(t, beta).C).epsilon(1e-8));
    }
  }
}

TEST_CASE("names and domain errors") {
  for (Theorem t : {Theorem::SigmaV, Theorem::SigmaNV, Theorem::SigmaVH, Theorem::MobiusSatz2, Theorem::MobiusSatz3}) {
    CHECK(parse_theorem(to_string(t)) == t);
  }
  CHECK(length_exponent(Theorem::SigmaVH) == 3);
  CHECK(length_exponent(Theorem::SigmaNV) == 2);
  CHECK_THROWS_AS(parse_theorem("sigma"), DomainError);
  CHECK_THROWS_AS(c_sigma_v(0.0), DomainError);
  CHECK_THROWS_AS(c_sigma_v_h(-1.0), DomainError);
  const auto r = c_sigma_v(2.0);
  REQUIRE(r.x);
  CHECK(*r.x == doctest::Approx((std::exp(2.0) - 1) / (std::exp(2.0) + 1)));
}
