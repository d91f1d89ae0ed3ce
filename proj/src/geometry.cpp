#include "klein/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "klein/error.hpp"
#include "klein/quadrature.hpp"

namespace klein {
namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Splits x = 2 * half * k + r with r in [-half, half).
std::pair<double, double> wrap_period(double x, double half) {
  const double k = std::floor((x + half) / (2.0 * half));
  return {k, x - 2.0 * half * k};
}

void require_positive_finite(double x, const char* what) {
  if (!(std::isfinite(x) && x > 0.0)) {
    throw InvalidMetric(std::string(what) + " must be positive and finite, got " +
                        std::to_string(x));
  }
}

}  // namespace

double gd(double x) { return std::atan(std::sinh(x)); }
double gd_inverse(double v) { return std::asinh(std::tan(v)); }

ConformalClass::ConformalClass(double beta) : beta_(beta) {
  if (!(std::isfinite(beta) && beta > 0.0)) {
    throw DomainError("conformal type must be positive, got " + std::to_string(beta));
  }
}

Point FundamentalDomain::reduce(Point p) const {
  const double k = std::floor((p.u + kHalfPi) / kPi);
  p.u -= k * kPi;
  if (std::fmod(std::abs(k), 2.0) == 1.0) p.v = -p.v;
  p.v = wrap_period(p.v, v_half_height).second;
  return p;
}

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::SphericalCap: return "spherical-cap";
    case ProfileKind::FlatSpherical: return "flat-spherical";
    case ProfileKind::FlatSphericalPi3: return "flat-spherical-pi3";
    case ProfileKind::Constant: return "constant";
    case ProfileKind::Tabulated: return "tabulated";
  }
  return "unknown";
}

std::string_view to_string(Surface surface) {
  return surface == Surface::Klein ? "klein" : "mobius";
}

// ---------------------------------------------------------------------------
// ProfileMetric

ProfileMetric ProfileMetric::spherical_cap(double b, Surface surface) {
  if (!(b > 0.0 && b < kHalfPi)) {
    throw InvalidMetric("spherical cap needs 0 < b < pi/2, got b = " + std::to_string(b));
  }
  ProfileMetric m;
  m.kind_ = ProfileKind::SphericalCap;
  m.surface_ = surface;
  m.omega_ = b;
  m.b_ = b;
  m.half_height_ = surface == Surface::Klein ? 2.0 * b : b;
  return m;
}

ProfileMetric ProfileMetric::flat_spherical(double omega, double b, Surface surface) {
  if (!(omega > 0.0 && omega < kHalfPi)) {
    throw InvalidMetric("flat-spherical metric needs 0 < omega < pi/2, got omega = " +
                        std::to_string(omega));
  }
  if (!(omega <= b && std::isfinite(b))) {
    throw InvalidMetric("flat-spherical metric needs omega <= b, got omega = " +
                        std::to_string(omega) + ", b = " + std::to_string(b));
  }
  ProfileMetric m;
  m.kind_ = ProfileKind::FlatSpherical;
  m.surface_ = surface;
  m.omega_ = omega;
  m.b_ = b;
  m.half_height_ = surface == Surface::Klein ? 2.0 * b : b;
  return m;
}

ProfileMetric ProfileMetric::flat_spherical_pi3(double b, Surface surface) {
  if (!(b >= kPi / 3.0)) {
    throw InvalidMetric("flat-spherical-pi3 metric needs b >= pi/3, got b = " + std::to_string(b));
  }
  ProfileMetric m = flat_spherical(kPi / 3.0, b, surface);
  m.kind_ = ProfileKind::FlatSphericalPi3;
  return m;
}

ProfileMetric ProfileMetric::constant(double c, double half_height) {
  require_positive_finite(c, "constant profile value");
  require_positive_finite(half_height, "half-height");
  ProfileMetric m;
  m.kind_ = ProfileKind::Constant;
  m.c_ = c;
  m.half_height_ = half_height;
  return m;
}

ProfileMetric ProfileMetric::tabulated(std::vector<double> samples, double half_height) {
  require_positive_finite(half_height, "half-height");
  if (samples.size() < 2) throw InvalidMetric("tabulated profile needs at least 2 samples");
  for (double s : samples) require_positive_finite(s, "profile sample");
  ProfileMetric m;
  m.kind_ = ProfileKind::Tabulated;
  m.half_height_ = half_height;
  m.samples_ = std::move(samples);
  return m;
}

bool ProfileMetric::has_spherical_caps() const {
  return kind_ == ProfileKind::SphericalCap || kind_ == ProfileKind::FlatSpherical ||
         kind_ == ProfileKind::FlatSphericalPi3;
}

std::vector<double> ProfileMetric::breakpoints() const {
  std::vector<double> out;
  if (has_spherical_caps()) {
    if (omega_ < half_height_) out.push_back(omega_);
    if (surface_ == Surface::Klein && 2.0 * b_ - omega_ > omega_) out.push_back(2.0 * b_ - omega_);
  } else if (kind_ == ProfileKind::Tabulated) {
    const double h = half_height_ / static_cast<double>(samples_.size() - 1);
    for (std::size_t k = 1; k + 1 < samples_.size(); ++k) out.push_back(k * h);
  }
  return out;
}

double ProfileMetric::min_value() const {
  switch (kind_) {
    case ProfileKind::Constant: return c_;
    case ProfileKind::Tabulated: return *std::min_element(samples_.begin(), samples_.end());
    default: return std::cos(omega_);
  }
}

double ProfileMetric::eval_fundamental(double x) const {
  switch (kind_) {
    case ProfileKind::Constant: return c_;
    case ProfileKind::Tabulated: {
      const double h = half_height_ / static_cast<double>(samples_.size() - 1);
      const double s = std::clamp(x / h, 0.0, static_cast<double>(samples_.size() - 1));
      const auto k = std::min(static_cast<std::size_t>(s), samples_.size() - 2);
      const double t = s - static_cast<double>(k);
      return (1.0 - t) * samples_[k] + t * samples_[k + 1];
    }
    default:
      if (x <= omega_) return std::cos(x);
      if (surface_ == Surface::Mobius || x <= 2.0 * b_ - omega_) return std::cos(omega_);
      return std::cos(2.0 * b_ - x);
  }
}

double ProfileMetric::operator()(double v) const {
  if (surface_ == Surface::Mobius) {
    if (std::abs(v) > half_height_ * (1.0 + 1e-12)) {
      throw DomainError("Mobius profile evaluated outside |v| <= V");
    }
    return eval_fundamental(std::min(std::abs(v), half_height_));
  }
  return eval_fundamental(std::abs(wrap_period(v, half_height_).second));
}

double ProfileMetric::area_primitive(double v) const {
  auto fundamental = [this](double x) {
    switch (kind_) {
      case ProfileKind::Constant: return c_ * x;
      case ProfileKind::Tabulated: {
        const double h = half_height_ / static_cast<double>(samples_.size() - 1);
        double acc = 0.0;
        std::size_t k = 0;
        for (; k + 1 < samples_.size() && (k + 1) * h <= x; ++k) {
          acc += 0.5 * h * (samples_[k] + samples_[k + 1]);
        }
        const double rest = x - k * h;
        if (rest > 0.0 && k + 1 < samples_.size()) acc += 0.5 * rest * (samples_[k] + eval_fundamental(x));
        return acc;
      }
      default: {
        const double w = omega_;
        if (x <= w) return std::sin(x);
        if (surface_ == Surface::Mobius || x <= 2.0 * b_ - w) return std::sin(w) + (x - w) * std::cos(w);
        return 2.0 * std::sin(w) + (2.0 * b_ - 2.0 * w) * std::cos(w) - std::sin(2.0 * b_ - x);
      }
    }
  };
  if (surface_ == Surface::Mobius) {
    return std::copysign(fundamental(std::min(std::abs(v), half_height_)), v);
  }
  const auto [k, r] = wrap_period(v, half_height_);
  return 2.0 * k * fundamental(half_height_) + std::copysign(fundamental(std::abs(r)), r);
}

// ---------------------------------------------------------------------------
// GridMetric

GridMetric::GridMetric(double beta, int n_u, int n_v, std::vector<double> factors)
    : beta_(beta), n_u_(n_u), n_v_(n_v), factors_(std::move(factors)) {
  if (!(std::isfinite(beta) && beta > 0.0)) throw InvalidMetric("grid conformal type must be positive");
  if (n_u < 2 || n_v < 2) throw InvalidMetric("grid needs n_u, n_v >= 2");
  if (n_v % 2 != 0) throw InvalidMetric("grid needs an even n_v so that w = 0 is a lattice row");
  if (factors_.size() != static_cast<std::size_t>(n_u) * static_cast<std::size_t>(n_v)) {
    throw InvalidMetric("grid factor table has " + std::to_string(factors_.size()) +
                        " entries, expected n_u * n_v = " + std::to_string(n_u * n_v));
  }
  for (double f : factors_) require_positive_finite(f, "conformal factor");
}

GridMetric GridMetric::from_closed_table(double beta, int n_u, int n_v,
                                         std::span<const double> closed, double rel_tol) {
  const auto width = static_cast<std::size_t>(n_u) + 1;
  if (closed.size() != width * (static_cast<std::size_t>(n_v) + 1)) {
    throw InvalidMetric("closed grid table must have (n_u + 1) * (n_v + 1) entries");
  }
  auto at = [&](int i, int j) { return closed[static_cast<std::size_t>(j) * width + i]; };
  auto close = [rel_tol](double a, double b) {
    return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
  };
  // t: w = -beta and w = beta are the same row.
  for (int i = 0; i <= n_u; ++i) {
    if (!close(at(i, 0), at(i, n_v))) {
      throw InvalidMetric("factor table breaks phi(u, w + 2 beta) = phi(u, w) at column " +
                          std::to_string(i));
    }
  }
  // sigma: (pi/2, w) is the image of (-pi/2, -w).
  for (int j = 0; j <= n_v; ++j) {
    if (!close(at(n_u, j), at(0, n_v - j))) {
      throw InvalidMetric("factor table breaks phi(u + pi, -w) = phi(u, w) at row " +
                          std::to_string(j));
    }
  }
  std::vector<double> open;
  open.reserve(static_cast<std::size_t>(n_u) * n_v);
  for (int j = 0; j < n_v; ++j) {
    for (int i = 0; i < n_u; ++i) open.push_back(at(i, j));
  }
  return GridMetric(beta, n_u, n_v, std::move(open));
}

double GridMetric::lifted(std::int64_t I, std::int64_t J) const {
  const std::int64_t k = floor_div(I, n_u_);
  const std::int64_t i = I - k * n_u_;
  if (k % 2 != 0) J = n_v_ - J;
  const std::int64_t j = J - floor_div(J, n_v_) * n_v_;
  return factors_[static_cast<std::size_t>(j) * n_u_ + static_cast<std::size_t>(i)];
}

double GridMetric::min_factor() const { return *std::min_element(factors_.begin(), factors_.end()); }

GridMetric GridMetric::scaled(double c) const {
  std::vector<double> f(factors_);
  for (double& x : f) x *= c;
  return GridMetric(beta_, n_u_, n_v_, std::move(f));
}

// ---------------------------------------------------------------------------
// Conformal type, volume, coordinates

std::optional<double> conformal_type_closed_form(const ProfileMetric& m) {
  const double half = m.surface() == Surface::Klein ? 2.0 : 1.0;
  switch (m.kind()) {
    case ProfileKind::Constant: return m.half_height() / m.c();
    case ProfileKind::Tabulated: return std::nullopt;
    default: {
      const double w = m.omega();
      return half * gd_inverse(w) + half * (m.b() - w) / std::cos(w);
    }
  }
}

double conformal_type_of_profile(const ProfileMetric& m) {
  const auto cuts = m.breakpoints();
  return adaptive_simpson([&m](double v) { return 1.0 / m(v); }, 0.0, m.half_height(), cuts, 1e-12);
}

std::optional<double> volume_closed_form(const ProfileMetric& m) {
  if (m.kind() == ProfileKind::Tabulated) return std::nullopt;
  return 2.0 * kPi * m.area_primitive(m.half_height());
}

double volume(const ProfileMetric& m) {
  const auto cuts = m.breakpoints();
  return 2.0 * kPi * adaptive_simpson([&m](double v) { return m(v); }, 0.0, m.half_height(), cuts, 1e-12);
}

double volume(const GridMetric& m) {
  double sum = 0.0;
  for (double f : m.factors()) sum += f * f;
  return sum * m.du() * m.dw();
}

namespace {

// Tabulated profiles: exact integral of 1/f over linear segments.
double tabulated_flat_coordinate(const ProfileMetric& m, double x) {
  const auto& s = m.samples();
  const double h = m.half_height() / static_cast<double>(s.size() - 1);
  auto segment = [](double f0, double f1, double len) {
    if (std::abs(f1 - f0) <= 1e-14 * f0) return len / f0;
    return len * std::log(f1 / f0) / (f1 - f0);
  };
  double acc = 0.0;
  std::size_t k = 0;
  for (; k + 1 < s.size() && (k + 1) * h <= x; ++k) acc += segment(s[k], s[k + 1], h);
  const double rest = x - k * h;
  if (rest > 0.0 && k + 1 < s.size()) acc += segment(s[k], m(x), rest);
  return acc;
}

double fundamental_flat_coordinate(const ProfileMetric& m, double x) {
  switch (m.kind()) {
    case ProfileKind::Constant: return x / m.c();
    case ProfileKind::Tabulated: return tabulated_flat_coordinate(m, x);
    default: {
      const double w = m.omega();
      const double b = m.b();
      if (x <= w) return gd_inverse(x);
      if (m.surface() == Surface::Mobius || x <= 2.0 * b - w) return gd_inverse(w) + (x - w) / std::cos(w);
      return 2.0 * gd_inverse(w) + (2.0 * b - 2.0 * w) / std::cos(w) - gd_inverse(2.0 * b - x);
    }
  }
}

double fundamental_profile_coordinate(const ProfileMetric& m, double y, double beta) {
  switch (m.kind()) {
    case ProfileKind::Constant: return y * m.c();
    case ProfileKind::Tabulated: {
      double lo = 0.0;
      double hi = m.half_height();
      for (int it = 0; it < 200 && hi - lo > 1e-15 * m.half_height(); ++it) {
        const double mid = 0.5 * (lo + hi);
        (tabulated_flat_coordinate(m, mid) < y ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    default: {
      const double w = m.omega();
      const double b = m.b();
      const double cap = gd_inverse(w);
      if (y <= cap) return gd(y);
      const double band_end = cap + (2.0 * b - 2.0 * w) / std::cos(w);
      if (m.surface() == Surface::Mobius || y <= band_end) return w + (y - cap) * std::cos(w);
      return 2.0 * b - gd(std::max(0.0, beta - y));
    }
  }
}

}  // namespace

double flat_coordinate(const ProfileMetric& m, double v) {
  const double V = m.half_height();
  if (m.surface() == Surface::Mobius) {
    return std::copysign(fundamental_flat_coordinate(m, std::min(std::abs(v), V)), v);
  }
  const double beta = fundamental_flat_coordinate(m, V);
  const auto [k, r] = wrap_period(v, V);
  return 2.0 * k * beta + std::copysign(fundamental_flat_coordinate(m, std::abs(r)), r);
}

double profile_coordinate(const ProfileMetric& m, double w) {
  const double V = m.half_height();
  const double beta = fundamental_flat_coordinate(m, V);
  if (m.surface() == Surface::Mobius) {
    return std::copysign(fundamental_profile_coordinate(m, std::min(std::abs(w), beta), beta), w);
  }
  const auto [k, r] = wrap_period(w, beta);
  return 2.0 * k * V + std::copysign(fundamental_profile_coordinate(m, std::abs(r), beta), r);
}

GridMetric to_conformal_grid(const ProfileMetric& m, int n_u, int n_v, GridSampling sampling) {
  if (m.surface() != Surface::Klein) {
    throw InvalidMetric("conformal grids model the Klein bottle; Mobius profiles have no grid form");
  }
  if (n_u < 8 || n_v < 8) {
    throw InvalidMetric("conformal grid resolution must be at least 8 x 8, got " +
                        std::to_string(n_u) + " x " + std::to_string(n_v));
  }
  const double beta = fundamental_flat_coordinate(m, m.half_height());
  const double dw = 2.0 * beta / n_v;
  std::vector<double> column(static_cast<std::size_t>(n_v));
  for (int j = 0; j < n_v; ++j) {
    const double w = -beta + j * dw;
    if (sampling == GridSampling::Point) {
      column[j] = m(profile_coordinate(m, w));
    } else {
      // phi^2 dw = f dv, so the cell integral of phi^2 is a difference of A.
      const double lo = profile_coordinate(m, w - 0.5 * dw);
      const double hi = profile_coordinate(m, w + 0.5 * dw);
      column[j] = std::sqrt((m.area_primitive(hi) - m.area_primitive(lo)) / dw);
    }
  }
  std::vector<double> factors(static_cast<std::size_t>(n_u) * n_v);
  for (int j = 0; j < n_v; ++j) {
    std::fill_n(factors.begin() + static_cast<std::ptrdiff_t>(j) * n_u, n_u, column[j]);
  }
  return GridMetric(beta, n_u, n_v, std::move(factors));
}

int square_cell_rows(double beta, int n_u) {
  const double ideal = n_u * 2.0 * beta / kPi;
  int n_v = 4 * static_cast<int>(std::ceil(ideal / 4.0 - 1e-9));
  return std::max(n_v, 8);
}

}  // namespace klein
