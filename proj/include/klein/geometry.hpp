#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace klein {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

// Gudermannian pair: gd_inverse(v) = ln tan(pi/4 + v/2) = asinh(tan v).
double gd(double x);
double gd_inverse(double v);

/// Conformal type beta of a metric on the Klein bottle (beta > 0).
class ConformalClass {
 public:
  explicit ConformalClass(double beta);
  double beta() const { return beta_; }

 private:
  double beta_;
};

struct Point {
  double u = 0.0;
  double v = 0.0;
};

/// The strip [-pi/2, pi/2] x [-V, V] with the deck group generated by
/// sigma(u, v) = (u + pi, -v) and t(u, v) = (u, v + 2V).
struct FundamentalDomain {
  static constexpr double u_half_width = kHalfPi;
  double v_half_height = 1.0;

  Point sigma(Point p) const { return {p.u + kPi, -p.v}; }
  Point sigma_inverse(Point p) const { return {p.u - kPi, -p.v}; }
  Point t(Point p) const { return {p.u, p.v + 2.0 * v_half_height}; }
  Point t_inverse(Point p) const { return {p.u, p.v - 2.0 * v_half_height}; }
  Point sigma2(Point p) const { return {p.u + 2.0 * kPi, p.v}; }

  // Representative of p in [-pi/2, pi/2) x [-V, V).
  Point reduce(Point p) const;
};

enum class ProfileKind { SphericalCap, FlatSpherical, FlatSphericalPi3, Constant, Tabulated };

// Klein: the profile is even and 2V-periodic. Mobius: the band |v| <= V with boundary.
enum class Surface { Klein, Mobius };

std::string_view to_string(ProfileKind kind);
std::string_view to_string(Surface surface);

/// Metric f(v)^2 du^2 + dv^2 on the fundamental domain of half-height V.
///
/// Cap kinds are parametrised by (omega, b): f = cos v on |v| <= omega, the flat band
/// f = cos omega up to 2b - omega, and the mirrored cap cos(2b - |v|) up to V = 2b.
/// On the Mobius band the same profile is restricted to |v| <= b, so V = b.
class ProfileMetric {
 public:
  static ProfileMetric spherical_cap(double b, Surface surface = Surface::Klein);
  static ProfileMetric flat_spherical(double omega, double b, Surface surface = Surface::Klein);
  static ProfileMetric flat_spherical_pi3(double b, Surface surface = Surface::Klein);
  static ProfileMetric constant(double c, double half_height);
  // Samples of f at v_k = k V / (n - 1) on [0, V], linearly interpolated, extended evenly.
  static ProfileMetric tabulated(std::vector<double> samples, double half_height);

  double operator()(double v) const;

  ProfileKind kind() const { return kind_; }
  Surface surface() const { return surface_; }
  double half_height() const { return half_height_; }
  double omega() const { return omega_; }
  double b() const { return b_; }
  double c() const { return c_; }
  const std::vector<double>& samples() const { return samples_; }

  // True when f = cos v near v = 0 (and near v = V on the Klein bottle).
  bool has_spherical_caps() const;
  // Kinks of f inside (0, V).
  std::vector<double> breakpoints() const;
  double min_value() const;

  // A(v) = integral of f from 0 to v, extended to all v (odd, quasi-periodic on Klein).
  double area_primitive(double v) const;

 private:
  ProfileMetric() = default;
  double eval_fundamental(double v_abs) const;

  ProfileKind kind_ = ProfileKind::Constant;
  Surface surface_ = Surface::Klein;
  double half_height_ = 1.0;
  double omega_ = 0.0;
  double b_ = 0.0;
  double c_ = 1.0;
  std::vector<double> samples_;
};

/// Conformal factor phi on the nodes of the flat fundamental domain of type beta,
/// u_i = -pi/2 + i pi/n_u, w_j = -beta + 2 j beta/n_v, stored as factors[j * n_u + i].
/// The factor is extended to the plane by the deck maps, so every table is compatible.
class GridMetric {
 public:
  GridMetric(double beta, int n_u, int n_v, std::vector<double> factors);

  // Closed lattice (n_u + 1) x (n_v + 1), row-major by v-row, including the seams
  // u = pi/2 and w = beta. Rejects tables whose seams break deck compatibility.
  static GridMetric from_closed_table(double beta, int n_u, int n_v,
                                      std::span<const double> closed, double rel_tol = 1e-12);

  double beta() const { return beta_; }
  int n_u() const { return n_u_; }
  int n_v() const { return n_v_; }
  double du() const { return kPi / n_u_; }
  double dw() const { return 2.0 * beta_ / n_v_; }
  double u_at(int i) const { return -kHalfPi + i * du(); }
  double w_at(int j) const { return -beta_ + j * dw(); }

  double at(int i, int j) const { return factors_[static_cast<std::size_t>(j) * n_u_ + i]; }
  // Factor at an arbitrary lattice point of the universal cover.
  double lifted(std::int64_t I, std::int64_t J) const;

  std::span<const double> factors() const { return factors_; }
  double min_factor() const;
  GridMetric scaled(double c) const;

 private:
  double beta_;
  int n_u_;
  int n_v_;
  std::vector<double> factors_;
};

double conformal_type_of_profile(const ProfileMetric& m);
std::optional<double> conformal_type_closed_form(const ProfileMetric& m);

double volume(const ProfileMetric& m);
std::optional<double> volume_closed_form(const ProfileMetric& m);
double volume(const GridMetric& m);

// w(v) = integral of dt/f from 0 to v, and its inverse. Closed form where available.
double flat_coordinate(const ProfileMetric& m, double v);
double profile_coordinate(const ProfileMetric& m, double w);

enum class GridSampling { CellAverage, Point };

// Rewrites f^2 du^2 + dv^2 as phi^2 (du^2 + dw^2). With CellAverage each node holds the
// RMS of phi over its dual cell, so the discrete area equals the profile volume.
GridMetric to_conformal_grid(const ProfileMetric& m, int n_u, int n_v,
                             GridSampling sampling = GridSampling::CellAverage);

// Smallest even n_v (>= 8, multiple of 4) giving near-square cells for the given n_u.
int square_cell_rows(double beta, int n_u);

}  // namespace klein
