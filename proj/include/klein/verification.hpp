#pragma once

#include <cstdint>
#include <vector>

#include "klein/constants.hpp"
#include "klein/geometry.hpp"
#include "klein/systole.hpp"

namespace klein {

struct PerturbationSpec {
  std::uint64_t seed = 1;
  double amplitude = 0.5;  // in [0, 1)
  int modes = 8;           // highest frequency per axis
};

// Deck-symmetric trigonometric polynomial on the grid of `base`, scaled so that max |S| = 1:
// even u-frequencies pair with cos(k pi w / beta), odd ones with sin(k pi w / beta).
std::vector<double> random_symmetric_field(const GridMetric& base, std::uint64_t seed, int modes);

// base * (1 + amplitude * S), deterministic per seed.
GridMetric random_conformal_factor(const GridMetric& base, const PerturbationSpec& spec);

// prod l_i / (C vol^(p/2)) with the lengths the theorem multiplies.
double inequality_ratio(Theorem theorem, const SystoleReport& r, double C);
ClassMask classes_for(Theorem theorem);

struct SweepOptions {
  std::uint64_t seed = 1;
  double amplitude = 0.5;   // each sample draws its amplitude uniformly from (0, amplitude]
  int modes = 8;
  int n_u = 128;
  int n_v = 0;              // 0 picks near-square cells, at least 64 rows
  double tol_grid = 0.03;
  double tol_eq = 0.03;
  bool rerun_near_violations = true;  // ratio > 1 triggers a rerun at doubled resolution
  GraphOptions graph{2, 6, false};
};

struct SampleOutcome {
  std::uint64_t seed = 0;
  double amplitude = 0.0;
  double ratio = 0.0;
  bool rerun = false;
};

struct SweepResult {
  Theorem theorem = Theorem::SigmaV;
  double beta = 0.0;
  double C = 0.0;
  int samples = 0;
  int n_u = 0;
  int n_v = 0;
  SweepOptions options;
  double extremal_ratio = 0.0;
  double equality_gap = 0.0;  // |extremal_ratio - 1|
  double worst_ratio = 0.0;
  std::uint64_t worst_seed = 0;
  double mean_ratio = 0.0;
  int violations = 0;         // samples with ratio > 1 + tol_grid
  int reruns = 0;
  bool pass = false;
  std::vector<SampleOutcome> outcomes;
};

// Samples run in parallel; every sample owns its seed, so the result is order independent.
SweepResult run_inequality_sweep(Theorem theorem, double beta, int n_samples, const SweepOptions& opts = {});

struct MonotonicityScan {
  int points = 0;
  int negative = 0;  // forward differences of C(omega) below zero
  int positive = 0;
  double max_difference = 0.0;
};

struct AsymptoticsReport {
  // sigma-v: omega = pi/2 - 1e-3 and the conformal type it belongs to.
  double sigma_v_omega = 0.0;
  double sigma_v_beta = 0.0;
  double sigma_v_C = 0.0;
  // sigma-n-v on a log grid of beta up to 1e6.
  int sigma_n_v_points = 0;
  bool sigma_n_v_increasing = false;
  bool sigma_n_v_below_two = false;
  double sigma_n_v_at_1e6 = 0.0;
  // sigma-v-h near beta = 0.
  double sigma_v_h_beta = 0.0;
  double sigma_v_h_C = 0.0;
  // Sign of dC/domega for the sigma-v-h constant on (0, pi/2), at four grid sizes.
  std::vector<MonotonicityScan> thm3_scans;
  bool thm3_decreasing = false;   // every difference negative on every grid
  bool thm3_sign_stable = false;  // same verdict at every refinement
  double thm3_C_small = 0.0;      // C at omega = 1e-3
  double thm3_C_one = 0.0;        // C at omega = 1
};

AsymptoticsReport probe_asymptotics();

}  // namespace klein
