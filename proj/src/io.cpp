#include "klein/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "klein/error.hpp"

namespace klein {
namespace {

// NaN and infinities have no JSON number form.
Json real(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json optional_real(const std::optional<double>& x) { return x ? real(*x) : Json(nullptr); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidMetric(std::string("metric JSON is missing the field '") + key + "'");
  }
  return j.at(key);
}

Surface surface_of(const Json& j) {
  if (!j.contains("surface")) return Surface::Klein;
  const std::string s = j.at("surface").get<std::string>();
  if (s == "klein") return Surface::Klein;
  if (s == "mobius") return Surface::Mobius;
  throw InvalidMetric("unknown surface '" + s + "'");
}

}  // namespace

double read_real(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw InvalidMetric("not a decimal real: '" + s + "'");
    }
    return x;
  }
  throw InvalidMetric("expected a real number, got " + j.dump());
}

Json to_json(const ProfileMetric& m) {
  Json j{{"type", "profile"}, {"kind", std::string(to_string(m.kind()))}};
  switch (m.kind()) {
    case ProfileKind::SphericalCap:
    case ProfileKind::FlatSphericalPi3:
      j["b"] = m.b();
      j["surface"] = std::string(to_string(m.surface()));
      break;
    case ProfileKind::FlatSpherical:
      j["omega"] = m.omega();
      j["b"] = m.b();
      j["surface"] = std::string(to_string(m.surface()));
      break;
    case ProfileKind::Constant:
      j["c"] = m.c();
      j["half_height"] = m.half_height();
      break;
    case ProfileKind::Tabulated:
      j["samples"] = m.samples();
      j["half_height"] = m.half_height();
      break;
  }
  return j;
}

Json to_json(const GridMetric& m) {
  return Json{{"type", "grid"},
              {"beta", m.beta()},
              {"n_u", m.n_u()},
              {"n_v", m.n_v()},
              {"factors", std::vector<double>(m.factors().begin(), m.factors().end())}};
}

AnyMetric metric_from_json(const Json& j) {
  const std::string type = field(j, "type").get<std::string>();
  if (type == "grid") {
    const auto& raw = field(j, "factors");
    if (!raw.is_array()) throw InvalidMetric("grid 'factors' must be an array");
    std::vector<double> factors;
    factors.reserve(raw.size());
    for (const auto& x : raw) factors.push_back(read_real(x));
    return GridMetric(read_real(field(j, "beta")), field(j, "n_u").get<int>(), field(j, "n_v").get<int>(),
                      std::move(factors));
  }
  if (type != "profile") throw InvalidMetric("unknown metric type '" + type + "'");
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "spherical-cap") return ProfileMetric::spherical_cap(read_real(field(j, "b")), surface_of(j));
  if (kind == "flat-spherical") {
    return ProfileMetric::flat_spherical(read_real(field(j, "omega")), read_real(field(j, "b")), surface_of(j));
  }
  if (kind == "flat-spherical-pi3") return ProfileMetric::flat_spherical_pi3(read_real(field(j, "b")), surface_of(j));
  if (kind == "constant") {
    return ProfileMetric::constant(read_real(field(j, "c")), read_real(field(j, "half_height")));
  }
  if (kind == "tabulated") {
    std::vector<double> samples;
    for (const auto& x : field(j, "samples")) samples.push_back(read_real(x));
    return ProfileMetric::tabulated(std::move(samples), read_real(field(j, "half_height")));
  }
  throw InvalidMetric("unknown profile kind '" + kind + "'");
}

Json to_json(const ExtremalSpec& s) {
  return Json{{"theorem", std::string(to_string(s.theorem))},
              {"regime", std::string(to_string(s.regime))},
              {"beta", s.beta},
              {"omega", s.omega},
              {"b", s.b}};
}

ExtremalSpec extremal_spec_from_json(const Json& j) {
  ExtremalSpec s;
  s.theorem = parse_theorem(j.at("theorem").get<std::string>());
  s.regime = parse_regime(j.at("regime").get<std::string>());
  s.beta = read_real(j.at("beta"));
  s.omega = read_real(j.at("omega"));
  s.b = read_real(j.at("b"));
  return s;
}

Json to_json(const RootResult& r) {
  return Json{{"root", real(r.root)},
              {"residual", real(r.residual)},
              {"iterations", r.iterations},
              {"bracket", {real(r.lo), real(r.hi)}}};
}

Json to_json(const ConstantResult& r) {
  return Json{{"theorem", std::string(to_string(r.theorem))},
              {"beta", real(r.beta)},
              {"regime", std::string(to_string(r.regime))},
              {"C", real(r.C)},
              {"omega", optional_real(r.omega)},
              {"b", optional_real(r.b)},
              {"x", optional_real(r.x)}};
}

Json to_json(const SystoleReport& r) {
  auto cls = [](double value, double error, LengthMethod method) {
    return Json{{"length", real(value)}, {"error_estimate", real(error)}, {"method", std::string(to_string(method))}};
  };
  return Json{{"l_sigma", real(r.l_sigma)},
              {"l_v", real(r.l_v)},
              {"l_h", real(r.l_h)},
              {"L_sigma", real(r.L_sigma)},
              {"volume", real(r.volume)},
              {"grid", {{"n_u", r.n_u}, {"n_v", r.n_v}}},
              {"error_estimate", real(r.error_estimate)},
              {"classes",
               {{"sigma", cls(r.l_sigma, r.error_sigma, r.method_sigma)},
                {"v", cls(r.l_v, r.error_v, r.method_v)},
                {"h", cls(r.l_h, r.error_h, r.method_h)}}}};
}

Json to_json(const CurveFamilyMeasure& f) {
  return Json{{"family", std::string(to_string(f.kind))},
              {"omega", real(f.omega)},
              {"b", real(f.b)},
              {"m_prime", real(f.m_prime)},
              {"group", f.group},
              {"mass", real(f.mass())},
              {"curve_length", real(f.curve_length())}};
}

Json to_json(const BoundCertificate& c) {
  Json families = Json::array();
  for (const auto& f : c.families) families.push_back(to_json(f));
  Json groups = Json::array();
  for (const auto& g : c.groups) groups.push_back({{"mass", real(g.mass)}, {"length", real(g.length)}});
  Json residuals = Json::object();
  for (const auto& [name, r] : c.push_residuals) residuals[name] = real(r);
  Json books = Json::array();
  for (const auto& b : c.bookkeeping) {
    books.push_back({{"factor", real(b.factor)}, {"volume", real(b.volume)}, {"eps_push", real(b.eps_push)}});
  }
  return Json{{"theorem", std::string(to_string(c.theorem))},
              {"metric", to_json(c.metric)},
              {"families", families},
              {"groups", groups},
              {"volume", real(c.volume)},
              {"eps_push", real(c.eps_push)},
              {"eps_mass", real(c.eps_mass)},
              {"push_residuals", residuals},
              {"volume_bookkeeping", books},
              {"C", real(c.C)},
              {"tolerances", {{"push", real(c.tolerances.push)}, {"mass", real(c.tolerances.mass)}}},
              {"valid", c.valid},
              {"diagnostics", c.diagnostics}};
}

Json to_json(const SweepResult& r) {
  Json samples = Json::array();
  for (const auto& o : r.outcomes) {
    samples.push_back({{"seed", o.seed}, {"amplitude", real(o.amplitude)}, {"ratio", real(o.ratio)}, {"rerun", o.rerun}});
  }
  return Json{{"theorem", std::string(to_string(r.theorem))},
              {"beta", real(r.beta)},
              {"C", real(r.C)},
              {"samples", r.samples},
              {"grid", {{"n_u", r.n_u}, {"n_v", r.n_v}}},
              {"seed", r.options.seed},
              {"amplitude", real(r.options.amplitude)},
              {"modes", r.options.modes},
              {"tol_grid", real(r.options.tol_grid)},
              {"tol_eq", real(r.options.tol_eq)},
              {"extremal_ratio", real(r.extremal_ratio)},
              {"equality_gap", real(r.equality_gap)},
              {"worst_ratio", real(r.worst_ratio)},
              {"worst_seed", r.worst_seed},
              {"mean_ratio", real(r.mean_ratio)},
              {"violations", r.violations},
              {"reruns", r.reruns},
              {"pass", r.pass},
              {"outcomes", samples}};
}

Json to_json(const AsymptoticsReport& r) {
  Json scans = Json::array();
  for (const auto& s : r.thm3_scans) {
    scans.push_back({{"points", s.points},
                     {"negative", s.negative},
                     {"positive", s.positive},
                     {"max_difference", real(s.max_difference)}});
  }
  return Json{{"sigma_v", {{"omega", real(r.sigma_v_omega)}, {"beta", real(r.sigma_v_beta)}, {"C", real(r.sigma_v_C)}}},
              {"sigma_n_v",
               {{"points", r.sigma_n_v_points},
                {"increasing", r.sigma_n_v_increasing},
                {"below_two", r.sigma_n_v_below_two},
                {"C_at_1e6", real(r.sigma_n_v_at_1e6)}}},
              {"sigma_v_h", {{"beta", real(r.sigma_v_h_beta)}, {"C", real(r.sigma_v_h_C)}}},
              {"thm3_monotonicity",
               {{"dC_domega_sign", r.thm3_decreasing ? "negative" : (r.thm3_sign_stable ? "positive" : "mixed")},
                {"stable_under_refinement", r.thm3_sign_stable},
                {"C_at_omega_1e-3", real(r.thm3_C_small)},
                {"C_at_omega_1", real(r.thm3_C_one)},
                {"scans", scans}}}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidMetric("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace klein
