#include "klein/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "klein/error.hpp"
#include "klein/extremal.hpp"
#include "klein/parallel.hpp"
#include "klein/quadrature.hpp"

namespace klein {
namespace {

constexpr int kNodes = 64;     // Gauss-Legendre nodes per panel
constexpr int kThetaSteps = 64;  // trapezoid in theta, spectrally accurate for periodic integrands

void require_band(double omega, double b) {
  if (!(omega > 0.0 && omega < kHalfPi && omega <= b)) {
    std::ostringstream os;
    os << "curve families need 0 < omega < pi/2 and omega <= b, got omega = " << omega << ", b = " << b;
    throw DomainError(os.str());
  }
}

// Integrand of the great-circle density in t, where sin a = sin w sin t:
// h(a) da = sin a (cos^2 a - k) / (pi cos^2 a) dt with k = (m'/pi) cos w.
double density_in_t(double t, double omega, double m_prime, double* a_out) {
  const double a = std::asin(std::sin(omega) * std::sin(t));
  const double c2 = std::cos(a) * std::cos(a);
  const double k = m_prime / kPi * std::cos(omega);
  if (a_out != nullptr) *a_out = a;
  return std::sin(a) * (c2 - k) / (kPi * c2);
}

std::vector<double> v_breaks(const ProfileMetric& m) {
  std::vector<double> cuts;
  for (double x : m.breakpoints()) {
    cuts.push_back(x);
    cuts.push_back(-x);
  }
  cuts.push_back(0.0);
  return cuts;
}

double on_domain(const ProfileMetric& m, const TestFunction& phi, double u, double v) {
  const Point p = FundamentalDomain{m.half_height()}.reduce({u, v});
  return phi(p.u, p.v);
}

}  // namespace

double h_density(double a, double omega, double m_prime) {
  if (!(a >= 0.0 && a < omega)) {
    std::ostringstream os;
    os << "h_density needs 0 <= a < omega, got a = " << a << ", omega = " << omega;
    throw DomainError(os.str());
  }
  const double ca = std::cos(a);
  const double cw = std::cos(omega);
  return std::sin(a) / (kPi * ca) * (ca * ca - m_prime / kPi * cw) / std::sqrt(ca * ca - cw * cw);
}

FamilyMasses family_masses(double omega, double b, double m_prime) {
  return {4.0 * std::sin(omega) - 4.0 * m_prime * omega / kPi, m_prime,
          2.0 * (b - omega) * (1.0 - m_prime / (kPi * std::cos(omega)))};
}

double great_circle_mass_quadrature(double omega, double m_prime) {
  const double one_cap_one_sign = gauss_legendre_integrate(
      [&](double t) { return density_in_t(t, omega, m_prime, nullptr); }, 0.0, kHalfPi, kNodes);
  return 4.0 * kPi * one_cap_one_sign;
}

double m_prime_sigma_v(double omega) { return kPi * std::cos(omega); }
double m_prime_sigma_n_v(double b) { return kPi * (std::sqrt(3.0) + b - kPi / 3.0) / (4.0 * b); }
double m_prime_sigma_v_h(double omega, double b) { return kPi * std::sin(omega) / (b + omega); }
double m_prime_sigma_v_h_alt(double omega, double b) {
  return kPi * std::cos(omega) * (b - omega) / (2.0 * b - omega);
}

std::string_view to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::GreatCircles: return "great-circles";
    case FamilyKind::Verticals: return "verticals";
    case FamilyKind::Horizontals: return "horizontals";
  }
  return "unknown";
}

HomotopyClass family_class(FamilyKind k) {
  switch (k) {
    case FamilyKind::GreatCircles: return HomotopyClass::Sigma;
    case FamilyKind::Verticals: return HomotopyClass::Vertical;
    case FamilyKind::Horizontals: return HomotopyClass::Horizontal;
  }
  return HomotopyClass::Sigma;
}

double CurveFamilyMeasure::mass() const {
  const FamilyMasses ms = family_masses(omega, b, m_prime);
  switch (kind) {
    case FamilyKind::GreatCircles: return ms.m1;
    case FamilyKind::Verticals: return ms.m2;
    case FamilyKind::Horizontals: return ms.m3;
  }
  return 0.0;
}

double CurveFamilyMeasure::curve_length() const {
  switch (kind) {
    case FamilyKind::GreatCircles: return kPi;
    case FamilyKind::Verticals: return 4.0 * b;
    case FamilyKind::Horizontals: return 2.0 * kPi * std::cos(omega);
  }
  return 0.0;
}

std::vector<NamedTestFunction> test_function_suite(const ProfileMetric& m) {
  const double w = m.omega();
  const double b = m.b();
  const double half_band = b - w;
  std::vector<NamedTestFunction> suite;
  suite.push_back({"one", [](double, double) { return 1.0; }});
  suite.push_back({"cos v", [](double, double v) { return std::cos(v); }});
  suite.push_back({"cos^2 v", [](double, double v) { return std::cos(v) * std::cos(v); }});
  suite.push_back({"v^2", [](double, double v) { return v * v; }});
  suite.push_back({"exp(-v^2)", [](double, double v) { return std::exp(-v * v); }});
  suite.push_back({"sin^2 u cos v", [](double u, double v) { return std::sin(u) * std::sin(u) * std::cos(v); }});
  suite.push_back({"band bump", [b, half_band](double, double v) {
                     if (!(half_band > 1e-12)) return 0.0;
                     const double s = (std::abs(v) - b) / half_band;
                     if (std::abs(s) >= 1.0) return 0.0;
                     return std::exp(1.0 - 1.0 / (1.0 - s * s));
                   }});
  return suite;
}

double pushforward_pair(const CurveFamilyMeasure& mu, const ProfileMetric& m, const TestFunction& phi) {
  require_band(mu.omega, mu.b);
  const double w = mu.omega;
  const double b = mu.b;
  switch (mu.kind) {
    case FamilyKind::GreatCircles: {
      // a in (0, w) with theta over a full turn covers both signs of a.
      const auto& rule = gauss_legendre(kNodes);
      double total = 0.0;
      for (double centre : {0.0, 2.0 * b}) {
        for (int n = 0; n < kNodes; ++n) {
          const double t = 0.25 * kPi * (rule.nodes[n] + 1.0);
          double a = 0.0;
          const double wt = 0.25 * kPi * rule.weights[n] * density_in_t(t, w, mu.m_prime, &a);
          double ring = 0.0;
          for (int k = 0; k < kThetaSteps; ++k) {
            const GreatCircle c{2.0 * kPi * k / kThetaSteps, a};
            ring += gauss_legendre_integrate(
                [&](double u) {
                  const double v = great_circle_latitude(c, u);
                  const double dv = great_circle_slope(c, u);
                  const double cv = std::cos(v);
                  return on_domain(m, phi, u, centre + v) * std::sqrt(cv * cv + dv * dv);
                },
                c.theta - kHalfPi, c.theta + kHalfPi, kNodes);
          }
          total += wt * ring * (2.0 * kPi / kThetaSteps);
        }
      }
      return total;
    }
    case FamilyKind::Verticals: {
      const double V = m.half_height();
      const auto cuts = v_breaks(m);
      const double inner = gauss_legendre_integrate(
          [&](double u) {
            return gauss_legendre_composite([&](double v) { return on_domain(m, phi, u, v); }, -V, V, cuts, 32, 2);
          },
          -kHalfPi, kHalfPi, kNodes);
      return mu.m_prime / kPi * inner;
    }
    case FamilyKind::Horizontals: {
      if (!(b - w > 0.0)) return 0.0;
      const double density = 1.0 - mu.m_prime / (kPi * std::cos(w));
      const double inner = gauss_legendre_composite(
          [&](double a) {
            return gauss_legendre_integrate(
                [&](double u) { return on_domain(m, phi, u, a) + on_domain(m, phi, u, -a); }, -kHalfPi, kHalfPi,
                kNodes);
          },
          w, 2.0 * b - w, {}, 32, 2);
      return density * std::cos(w) * inner;
    }
  }
  return 0.0;
}

double volume_pair(const ProfileMetric& m, const TestFunction& phi) {
  const double V = m.half_height();
  const auto cuts = v_breaks(m);
  return gauss_legendre_integrate(
      [&](double u) {
        return gauss_legendre_composite([&](double v) { return phi(u, v) * m(v); }, -V, V, cuts, 32, 2);
      },
      -kHalfPi, kHalfPi, kNodes);
}

BoundCertificate certify(Theorem theorem, const ProfileMetric& m, std::vector<CurveFamilyMeasure> families,
                         const CertificateTolerances& tol) {
  if (families.empty()) throw DomainError("certify needs at least one curve family");
  BoundCertificate cert;
  cert.theorem = theorem;
  cert.metric = m;
  cert.families = std::move(families);
  cert.tolerances = tol;
  const auto vol = volume_closed_form(m);
  cert.volume = vol ? *vol : volume(m);
  std::ostringstream diag;

  // Group masses and the shortest closed-form class length within each group.
  std::map<int, GroupSummary> groups;
  bool densities_ok = true;
  for (const auto& f : cert.families) {
    const auto len = length_closed_form(family_class(f.kind), m);
    if (!len) throw DomainError("certify needs closed-form class lengths for the metric");
    auto [it, inserted] = groups.try_emplace(f.group, GroupSummary{0.0, *len});
    it->second.mass += f.mass();
    it->second.length = std::min(it->second.length, *len);
    if (f.m_prime < 0.0 || f.m_prime > kPi * std::cos(f.omega) * (1.0 + 1e-12)) densities_ok = false;
    if (f.mass() < -1e-14) densities_ok = false;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double mass_product = 1.0;
  for (const auto& [id, g] : groups) {
    cert.groups.push_back(g);
    lo = std::min(lo, g.mass * g.length);
    hi = std::max(hi, g.mass * g.length);
    mass_product *= g.mass;
  }
  cert.eps_mass = hi > 0.0 ? (hi - lo) / hi : std::numeric_limits<double>::infinity();
  const int p = static_cast<int>(groups.size());
  if (p != length_exponent(theorem)) {
    diag << "expected " << length_exponent(theorem) << " length groups, got " << p << "; ";
  }
  if (!densities_ok) diag << "negative density (m' outside [0, pi cos w]); ";

  // Pushforward against the area, one test function per task.
  const auto suite = test_function_suite(m);
  std::vector<double> pushed(suite.size());
  std::vector<double> area(suite.size());
  parallel_for(suite.size(), [&](std::size_t k) {
    double s = 0.0;
    for (const auto& f : cert.families) s += pushforward_pair(f, m, suite[k].fn);
    pushed[k] = s;
    area[k] = volume_pair(m, suite[k].fn);
  });

  // The H_b volume has been quoted with two bookkeepings; test both and keep the one that closes.
  std::vector<double> factors{1.0};
  if (theorem == Theorem::SigmaNV) factors.push_back(2.0);
  for (double factor : factors) {
    VolumeBookkeeping bk{factor, factor * cert.volume, 0.0};
    for (std::size_t k = 0; k < suite.size(); ++k) {
      bk.eps_push = std::max(bk.eps_push, std::abs(pushed[k] - factor * area[k]) / bk.volume);
    }
    cert.bookkeeping.push_back(bk);
  }
  const auto chosen = std::min_element(cert.bookkeeping.begin(), cert.bookkeeping.end(),
                                       [](const auto& a, const auto& b) { return a.eps_push < b.eps_push; });
  for (std::size_t k = 0; k < suite.size(); ++k) {
    cert.push_residuals.emplace_back(suite[k].name,
                                     std::abs(pushed[k] - chosen->factor * area[k]) / chosen->volume);
  }
  cert.eps_push = chosen->eps_push;
  cert.C = std::pow(chosen->volume, 0.5 * p) / (std::pow(static_cast<double>(p), p) * mass_product);

  if (!(cert.eps_push < tol.push)) diag << "pushforward residual " << cert.eps_push << " >= " << tol.push << "; ";
  if (!(cert.eps_mass < tol.mass)) diag << "mass-length spread " << cert.eps_mass << " >= " << tol.mass << "; ";
  cert.valid = diag.str().empty();
  cert.diagnostics = cert.valid ? "ok" : diag.str();
  return cert;
}

std::vector<CurveFamilyMeasure> extremal_families(Theorem theorem, double omega, double b) {
  require_band(omega, b);
  using K = FamilyKind;
  switch (theorem) {
    case Theorem::SigmaV: {
      const double mp = m_prime_sigma_v(omega);
      return {{K::GreatCircles, omega, b, mp, 0}, {K::Verticals, omega, b, mp, 1}};
    }
    case Theorem::SigmaNV: {
      const double mp = m_prime_sigma_n_v(b);
      return {{K::GreatCircles, omega, b, mp, 0}, {K::Horizontals, omega, b, mp, 0}, {K::Verticals, omega, b, mp, 1}};
    }
    case Theorem::SigmaVH: {
      const double mp = m_prime_sigma_v_h(omega, b);
      return {{K::GreatCircles, omega, b, mp, 0}, {K::Verticals, omega, b, mp, 1}, {K::Horizontals, omega, b, mp, 2}};
    }
    default:
      throw DomainError("measure certificates cover the Klein theorems sigma-v, sigma-n-v and sigma-v-h");
  }
}

BoundCertificate certify_for_beta(Theorem theorem, double beta, const CertificateTolerances& tol) {
  if (is_mobius(theorem)) {
    throw DomainError("measure certificates cover the Klein theorems sigma-v, sigma-n-v and sigma-v-h");
  }
  const Extremal e = extremal_for_beta(theorem, beta);
  if (e.spec.regime != Regime::FlatSpherical) {
    throw RegimeError("no measure certificate in the spherical regime (beta = " + std::to_string(beta) +
                      " is below the threshold)");
  }
  return certify(theorem, e.metric, extremal_families(theorem, e.spec.omega, e.spec.b), tol);
}

}  // namespace klein
