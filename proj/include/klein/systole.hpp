#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "klein/geometry.hpp"

namespace klein {

// Free homotopy classes realising the systole: the glide reflection sigma,
// the vertical translation t and the horizontal translation sigma^2.
enum class HomotopyClass { Sigma, Vertical, Horizontal };

std::string_view to_string(HomotopyClass c);
HomotopyClass parse_homotopy_class(std::string_view name);  // sigma | v | h
Point deck_image(HomotopyClass c, const FundamentalDomain& d, Point p);

/// Great circle of the unit sphere through (theta - pi/2, 0), (theta, a), (theta + pi/2, 0).
struct GreatCircle {
  double theta = 0.0;
  double a = 0.0;
};

// tan v = tan a cos(u - theta).
double great_circle_latitude(const GreatCircle& c, double u);
double great_circle_slope(const GreatCircle& c, double u);  // dv/du
// Length of the arc over u in [theta - pi/2, theta + pi/2] under cos^2 v du^2 + dv^2 (= pi).
double great_circle_length(const GreatCircle& c);

// Exact class lengths of a profile metric, when known:
// Vertical 2V, Horizontal 2 pi min f, Sigma pi (spherical caps) or pi c (constant).
std::optional<double> length_closed_form(HomotopyClass c, const ProfileMetric& m);

struct GraphOptions {
  int seeds = 4;             // evenly spaced basepoints, besides the best straight loop
  int max_refinements = 8;   // basepoint moves per seed
  bool richardson = true;    // rerun on the half-resolution grid for an error estimate
};

struct GraphLength {
  double length = 0.0;
  double error_estimate = 0.0;  // |L_h - L_2h|, NaN when no half grid exists
  double coarse_length = 0.0;
  std::int64_t base_i = 0;      // lattice basepoint of the best loop
  std::int64_t base_j = 0;
  int searches = 0;             // shortest-path runs performed on the fine grid
};

// Shortest loop in the class on the lattice graph of the grid: 16-neighbour stencil,
// edge weight = bilinear factor at the edge midpoint times the Euclidean edge length,
// factor extended to the plane by the deck maps. For Sigma both one-sided classes
// (sigma and t sigma) are searched, since either can carry the shortest one-sided loop.
// `coarse` replaces the even-node subsample of `m` in the Richardson rerun.
GraphLength length_graph(HomotopyClass c, const GridMetric& m, const GraphOptions& opts = {},
                         const GridMetric* coarse = nullptr);

enum class LengthMethod { ClosedForm, Graph, NotComputed };
std::string_view to_string(LengthMethod m);

struct ClassMask {
  bool sigma = true;
  bool vertical = true;
  bool horizontal = true;
  static ClassMask all() { return {}; }
  static ClassMask only(HomotopyClass c);
  bool has(HomotopyClass c) const;
};

struct SystoleReport {
  double l_sigma = 0.0;  // NaN for classes not computed
  double l_v = 0.0;
  double l_h = 0.0;
  double L_sigma = 0.0;  // min(l_sigma, l_h) over the computed ones
  double volume = 0.0;
  int n_u = 0;           // 0 when no grid was used
  int n_v = 0;
  double error_sigma = 0.0;
  double error_v = 0.0;
  double error_h = 0.0;
  double error_estimate = 0.0;  // max of the per-class estimates
  LengthMethod method_sigma = LengthMethod::NotComputed;
  LengthMethod method_v = LengthMethod::NotComputed;
  LengthMethod method_h = LengthMethod::NotComputed;

  double length(HomotopyClass c) const;
};

// Closed forms where available, graph search on the conformal grid otherwise.
// force_graph runs the graph engine for every requested class.
SystoleReport systole_report(const ProfileMetric& m, int n_u, int n_v, ClassMask mask = {},
                             bool force_graph = false, const GraphOptions& opts = {});
SystoleReport systole_report(const GridMetric& m, ClassMask mask = {}, const GraphOptions& opts = {});

}  // namespace klein
