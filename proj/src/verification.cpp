#include "klein/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include "klein/error.hpp"
#include "klein/extremal.hpp"
#include "klein/parallel.hpp"
#include "klein/solvers.hpp"

namespace klein {
namespace {

// Uniform on [0, 1) from the top 53 bits, identical on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t sample_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 step, so nearby indices give unrelated streams.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::vector<double> random_symmetric_field(const GridMetric& base, std::uint64_t seed, int modes) {
  if (modes < 1) throw DomainError("perturbation needs at least one mode per axis");
  std::mt19937_64 rng(seed);
  const int n_u = base.n_u();
  const int n_v = base.n_v();
  const double beta = base.beta();

  // Column profiles A_m(w), B_m(w) so that S(u, w) = sum_m A_m(w) cos(m u) + B_m(w) sin(m u).
  std::vector<double> A(static_cast<std::size_t>(modes + 1) * n_v, 0.0);
  std::vector<double> B(A.size(), 0.0);
  for (int m = 0; m <= modes; ++m) {
    for (int k = 0; k <= modes; ++k) {
      if (m == 0 && k == 0) continue;
      const bool odd = (m % 2) != 0;
      if (odd && k == 0) continue;
      const double ca = 2.0 * unit(rng) - 1.0;
      const double cb = m == 0 ? 0.0 : 2.0 * unit(rng) - 1.0;
      for (int j = 0; j < n_v; ++j) {
        const double x = k * kPi * base.w_at(j) / beta;
        const double g = odd ? std::sin(x) : std::cos(x);
        A[static_cast<std::size_t>(m) * n_v + j] += ca * g;
        B[static_cast<std::size_t>(m) * n_v + j] += cb * g;
      }
    }
  }
  std::vector<double> S(static_cast<std::size_t>(n_u) * n_v, 0.0);
  for (int i = 0; i < n_u; ++i) {
    const double u = base.u_at(i);
    for (int m = 0; m <= modes; ++m) {
      const double cu = std::cos(m * u);
      const double su = std::sin(m * u);
      for (int j = 0; j < n_v; ++j) {
        S[static_cast<std::size_t>(j) * n_u + i] +=
            A[static_cast<std::size_t>(m) * n_v + j] * cu + B[static_cast<std::size_t>(m) * n_v + j] * su;
      }
    }
  }
  double peak = 0.0;
  for (double s : S) peak = std::max(peak, std::abs(s));
  if (peak > 0.0) {
    for (double& s : S) s /= peak;
  }
  return S;
}

GridMetric random_conformal_factor(const GridMetric& base, const PerturbationSpec& spec) {
  if (!(spec.amplitude >= 0.0 && spec.amplitude < 1.0)) {
    throw DomainError("perturbation amplitude must lie in [0, 1), got " + std::to_string(spec.amplitude));
  }
  std::vector<double> f(base.factors().begin(), base.factors().end());
  if (spec.amplitude > 0.0) {
    const auto S = random_symmetric_field(base, spec.seed, spec.modes);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] *= 1.0 + spec.amplitude * S[k];
  }
  return GridMetric(base.beta(), base.n_u(), base.n_v(), std::move(f));
}

ClassMask classes_for(Theorem theorem) {
  switch (theorem) {
    case Theorem::SigmaV:
    case Theorem::MobiusSatz2: return {true, true, false};
    default: return ClassMask::all();
  }
}

double inequality_ratio(Theorem theorem, const SystoleReport& r, double C) {
  switch (theorem) {
    case Theorem::SigmaV:
    case Theorem::MobiusSatz2: return r.l_sigma * r.l_v / (C * r.volume);
    case Theorem::SigmaNV:
    case Theorem::MobiusSatz3: return r.L_sigma * r.l_v / (C * r.volume);
    case Theorem::SigmaVH: return r.l_sigma * r.l_v * r.l_h / (C * std::pow(r.volume, 1.5));
  }
  throw DomainError("unknown theorem");
}

SweepResult run_inequality_sweep(Theorem theorem, double beta, int n_samples, const SweepOptions& opts) {
  if (is_mobius(theorem)) {
    throw DomainError("inequality sweeps run on Klein-bottle grids; use sigma-v, sigma-n-v or sigma-v-h");
  }
  if (n_samples < 0) throw DomainError("sample count must be non-negative");
  SweepResult res;
  res.theorem = theorem;
  res.beta = beta;
  res.samples = n_samples;
  res.options = opts;

  const Extremal e = extremal_for_beta(theorem, beta);
  res.C = constant_for(theorem, beta).C;
  const double grid_beta = conformal_type_closed_form(e.metric).value_or(beta);
  res.n_u = opts.n_u;
  res.n_v = opts.n_v > 0 ? opts.n_v : std::max(64, square_cell_rows(grid_beta, opts.n_u));
  const ClassMask mask = classes_for(theorem);

  const GridMetric base = to_conformal_grid(e.metric, res.n_u, res.n_v);
  res.extremal_ratio = inequality_ratio(theorem, systole_report(base, mask, opts.graph), res.C);
  res.equality_gap = std::abs(res.extremal_ratio - 1.0);

  std::optional<GridMetric> fine_base;
  if (opts.rerun_near_violations) fine_base = to_conformal_grid(e.metric, 2 * res.n_u, 2 * res.n_v);

  res.outcomes.resize(static_cast<std::size_t>(n_samples));
  parallel_for(res.outcomes.size(), [&](std::size_t s) {
    SampleOutcome& out = res.outcomes[s];
    out.seed = sample_seed(opts.seed, s);
    std::mt19937_64 rng(out.seed);
    out.amplitude = opts.amplitude * (1.0 - unit(rng));  // (0, amplitude]
    const PerturbationSpec spec{rng(), out.amplitude, opts.modes};
    out.ratio = inequality_ratio(theorem, systole_report(random_conformal_factor(base, spec), mask, opts.graph), res.C);
    if (out.ratio > 1.0 && fine_base) {
      out.rerun = true;
      out.ratio = inequality_ratio(
          theorem, systole_report(random_conformal_factor(*fine_base, spec), mask, opts.graph), res.C);
    }
  });

  double sum = 0.0;
  res.worst_ratio = -1.0;
  for (const auto& out : res.outcomes) {
    sum += out.ratio;
    if (out.ratio > res.worst_ratio) {
      res.worst_ratio = out.ratio;
      res.worst_seed = out.seed;
    }
    if (out.ratio > 1.0 + opts.tol_grid) ++res.violations;
    if (out.rerun) ++res.reruns;
  }
  res.mean_ratio = n_samples > 0 ? sum / n_samples : 0.0;
  if (n_samples == 0) res.worst_ratio = 0.0;
  res.pass = res.violations == 0 && res.equality_gap <= opts.tol_eq;
  return res;
}

AsymptoticsReport probe_asymptotics() {
  AsymptoticsReport r;

  r.sigma_v_omega = kHalfPi - 1e-3;
  r.sigma_v_beta = beta_of_omega_thm1(r.sigma_v_omega);
  r.sigma_v_C = c_sigma_v(r.sigma_v_beta).C;

  constexpr int kLogPoints = 401;
  r.sigma_n_v_points = kLogPoints;
  r.sigma_n_v_increasing = true;
  r.sigma_n_v_below_two = true;
  double prev = 0.0;
  for (int k = 0; k < kLogPoints; ++k) {
    const double beta = std::pow(10.0, -2.0 + 8.0 * k / (kLogPoints - 1));
    const double c = c_sigma_n_v(beta).C;
    if (k > 0 && !(c > prev)) r.sigma_n_v_increasing = false;
    if (!(c < 2.0)) r.sigma_n_v_below_two = false;
    prev = c;
  }
  r.sigma_n_v_at_1e6 = c_sigma_n_v(1e6).C;

  r.sigma_v_h_beta = beta_of_omega_thm3(1e-5);
  r.sigma_v_h_C = c_sigma_v_h(r.sigma_v_h_beta).C;

  bool all_negative = true;
  bool all_positive = true;
  for (int points : {64, 128, 256, 512}) {
    MonotonicityScan scan;
    scan.points = points;
    scan.max_difference = -std::numeric_limits<double>::infinity();
    const double lo = 1e-3;
    const double hi = kHalfPi - 1e-3;
    double c_prev = thm3_constant_of_omega(lo);
    for (int k = 1; k < points; ++k) {
      const double c = thm3_constant_of_omega(lo + (hi - lo) * k / (points - 1));
      const double d = c - c_prev;
      if (d < 0.0) ++scan.negative;
      if (d > 0.0) ++scan.positive;
      scan.max_difference = std::max(scan.max_difference, d);
      c_prev = c;
    }
    if (scan.negative != points - 1) all_negative = false;
    if (scan.positive != points - 1) all_positive = false;
    r.thm3_scans.push_back(scan);
  }
  r.thm3_decreasing = all_negative;
  r.thm3_sign_stable = all_negative || all_positive;
  r.thm3_C_small = thm3_constant_of_omega(1e-3);
  r.thm3_C_one = thm3_constant_of_omega(1.0);
  return r;
}

}  // namespace klein
