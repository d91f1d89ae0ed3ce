#include "klein/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "klein/constants.hpp"
#include "klein/error.hpp"
#include "klein/extremal.hpp"
#include "klein/io.hpp"
#include "klein/measure.hpp"
#include "klein/solvers.hpp"
#include "klein/systole.hpp"
#include "klein/verification.hpp"

#ifndef KLEIN_VERSION
#define KLEIN_VERSION "dev"
#endif

namespace klein {
namespace {

const std::vector<std::string> kTheorems{"sigma-v", "sigma-n-v", "sigma-v-h", "mobius-satz2", "mobius-satz3"};
const std::vector<std::string> kKleinTheorems{"sigma-v", "sigma-n-v", "sigma-v-h"};
const std::vector<std::string> kEquations{"b0", "omega-thm1", "omega-thm3", "b-thm2"};
const std::vector<std::string> kClasses{"sigma", "v", "h", "all"};

struct GridSize {
  int n_u = 0;
  int n_v = 0;  // 0: choose from the conformal type
};

// "N" or "NxM".
GridSize parse_grid(const std::string& text) {
  GridSize g;
  const auto x = text.find('x');
  try {
    std::size_t used = 0;
    g.n_u = std::stoi(text.substr(0, x), &used);
    if (used != (x == std::string::npos ? text.size() : x)) throw std::invalid_argument(text);
    if (x != std::string::npos) {
      const std::string rest = text.substr(x + 1);
      g.n_v = std::stoi(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(text);
    }
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--grid", "expected N or NxM, got '" + text + "'");
  }
  if (g.n_u <= 0 || g.n_v < 0) throw CLI::ValidationError("--grid", "grid sizes must be positive");
  return g;
}

std::string real_text(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

std::string optional_text(const std::optional<double>& x) { return x ? real_text(*x) : "-"; }

struct Context {
  std::vector<std::string> argv;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Json envelope(const std::string& command, Json inputs, Json result) const {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return Json{{"command", command},
                {"argv", argv},
                {"version", KLEIN_VERSION},
                {"inputs", std::move(inputs)},
                {"result", std::move(result)},
                {"wall_time_s", wall}};
  }
};

std::string sidecar_path(const std::string& metric_path) {
  std::filesystem::path p(metric_path);
  p.replace_extension();
  return p.string() + ".extremal.json";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx;
  ctx.argv = args;

  CLI::App app{"Systolic constants and extremal metrics on Klein bottles and Moebius bands", "klein-systolic"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(KLEIN_VERSION));

  std::string theorem = "sigma-v";
  std::string equation;
  std::string cls = "all";
  std::string metric_path;
  std::string out_path;
  std::string sidecar;
  std::string grid_text;
  double beta = 0.0;
  double beta_min = 0.0;
  double beta_max = 0.0;
  int steps = 0;
  bool log_spacing = false;
  bool json = false;
  bool force_graph = false;
  bool no_richardson = false;
  bool asymptotics = false;
  CertificateTolerances tol;
  SweepOptions sweep;
  int samples = 200;

  auto* constants = app.add_subcommand("constants", "Optimal constant C(beta) for a theorem");
  constants->add_option("--theorem", theorem)->required()->check(CLI::IsMember(kTheorems));
  constants->add_option("--beta", beta, "Conformal type")->required();
  constants->add_flag("--json", json);

  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate C(beta) over a range as CSV");
  sweep_cmd->add_option("--theorem", theorem)->required()->check(CLI::IsMember(kTheorems));
  sweep_cmd->add_option("--beta-min", beta_min)->required();
  sweep_cmd->add_option("--beta-max", beta_max)->required();
  sweep_cmd->add_option("--steps", steps, "Number of rows, endpoints included")->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_flag("--log", log_spacing, "Geometric spacing");
  sweep_cmd->add_option("--out", out_path, "CSV file (default: standard output)");

  auto* solve = app.add_subcommand("solve", "Solve one of the transcendental relations");
  solve->add_option("--equation", equation)->required()->check(CLI::IsMember(kEquations));
  solve->add_option("--beta", beta, "Conformal type (ignored for b0)");
  solve->add_flag("--json", json);

  auto* extremal = app.add_subcommand("extremal", "Build the extremal metric for a conformal type");
  extremal->add_option("--theorem", theorem)->required()->check(CLI::IsMember(kTheorems));
  extremal->add_option("--beta", beta)->required();
  extremal->add_option("--out", out_path, "Metric JSON file");
  extremal->add_option("--sidecar", sidecar, "Extremal spec JSON (default: <out>.extremal.json)");
  extremal->add_flag("--json", json);

  auto* systoles = app.add_subcommand("systoles", "Class-wise systoles of a metric, as JSON");
  systoles->add_option("--metric", metric_path)->required()->check(CLI::ExistingFile);
  systoles->add_option("--grid", grid_text, "Conformal grid N or NxM for graph lengths of profiles");
  systoles->add_option("--class", cls)->check(CLI::IsMember(kClasses));
  systoles->add_flag("--graph", force_graph, "Use the graph engine even where a closed form exists");
  systoles->add_flag("--no-richardson", no_richardson, "Skip the half-resolution error estimate");
  systoles->add_flag("--json", json);

  auto* measure = app.add_subcommand("verify-measure", "Certify the extremal bound by curve-family measures");
  measure->add_option("--theorem", theorem)->required()->check(CLI::IsMember(kKleinTheorems));
  measure->add_option("--beta", beta)->required();
  measure->add_option("--tol-push", tol.push);
  measure->add_option("--tol-mass", tol.mass);
  measure->add_flag("--json", json);

  auto* inequality = app.add_subcommand("verify-inequality", "Random perturbations of the extremal metric");
  inequality->add_option("--theorem", theorem)->required()->check(CLI::IsMember(kKleinTheorems));
  inequality->add_option("--beta", beta)->required();
  inequality->add_option("--samples", samples)->check(CLI::NonNegativeNumber);
  inequality->add_option("--seed", sweep.seed);
  inequality->add_option("--grid", grid_text, "Conformal grid N or NxM (default 128)");
  inequality->add_option("--amplitude", sweep.amplitude)->check(CLI::Range(0.0, 0.999));
  inequality->add_option("--modes", sweep.modes)->check(CLI::PositiveNumber);
  inequality->add_option("--tol-grid", sweep.tol_grid);
  inequality->add_option("--tol-eq", sweep.tol_eq);
  inequality->add_flag("--json", json);

  auto* probe = app.add_subcommand("probe", "Limit behaviour of the constants");
  probe->add_flag("--asymptotics", asymptotics)->required();
  probe->add_flag("--json", json);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*constants) {
      const ConstantResult r = constant_for(parse_theorem(theorem), beta);
      if (json) {
        out << ctx.envelope("constants", {{"theorem", theorem}, {"beta", beta}}, to_json(r)).dump(2) << '\n';
      } else {
        out << "theorem  " << theorem << "\nbeta     " << real_text(r.beta) << "\nregime   " << to_string(r.regime)
            << "\nC        " << real_text(r.C) << "\nomega    " << optional_text(r.omega) << "\nb        "
            << optional_text(r.b) << '\n';
        if (r.x) out << "x        " << real_text(*r.x) << '\n';
      }
      return 0;
    }

    if (*sweep_cmd) {
      if (!(beta_min > 0.0) || !(beta_max >= beta_min)) {
        err << "error: need 0 < --beta-min <= --beta-max\n";
        return 2;
      }
      const Theorem t = parse_theorem(theorem);
      std::ofstream file;
      if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw Error("cannot open '" + out_path + "' for writing");
      }
      std::ostream& csv = out_path.empty() ? out : file;
      csv << "# klein-systolic constants sweep v1 theorem=" << theorem << " version=" << KLEIN_VERSION << '\n';
      csv << "beta,regime,C,omega,b\n";
      for (int k = 0; k < steps; ++k) {
        const double s = steps == 1 ? 0.0 : static_cast<double>(k) / (steps - 1);
        const double bk = log_spacing ? beta_min * std::pow(beta_max / beta_min, s) : beta_min + (beta_max - beta_min) * s;
        const ConstantResult r = constant_for(t, bk);
        csv << real_text(r.beta) << ',' << to_string(r.regime) << ',' << real_text(r.C) << ','
            << (r.omega ? real_text(*r.omega) : "") << ',' << (r.b ? real_text(*r.b) : "") << '\n';
      }
      if (!out_path.empty()) {
        file.close();
        if (!file) throw Error("failed writing '" + out_path + "'");
      }
      return 0;
    }

    if (*solve) {
      const Equation eq = parse_equation(equation);
      if (eq != Equation::B0 && solve->count("--beta") == 0) {
        err << "error: --beta is required for " << equation << "\n";
        return 2;
      }
      const RootResult r = solve_equation(eq, beta);
      if (json) {
        Json inputs{{"equation", equation}};
        if (eq != Equation::B0) inputs["beta"] = beta;
        out << ctx.envelope("solve", inputs, to_json(r)).dump(2) << '\n';
      } else {
        out << "equation    " << equation << "\nroot        " << real_text(r.root) << "\nresidual    "
            << real_text(r.residual) << "\niterations  " << r.iterations << "\nbracket     [" << real_text(r.lo)
            << ", " << real_text(r.hi) << "]\n";
      }
      return 0;
    }

    if (*extremal) {
      const Extremal e = extremal_for_beta(parse_theorem(theorem), beta);
      const Json metric = to_json(e.metric);
      const Json spec = to_json(e.spec);
      if (!out_path.empty()) {
        write_json_file(out_path, metric);
        write_json_file(sidecar.empty() ? sidecar_path(out_path) : sidecar, spec);
      } else if (!sidecar.empty()) {
        write_json_file(sidecar, spec);
      }
      if (json) {
        out << ctx.envelope("extremal", {{"theorem", theorem}, {"beta", beta}},
                            {{"metric", metric}, {"spec", spec}, {"volume", volume(e.metric)}})
                   .dump(2)
            << '\n';
      } else {
        out << "theorem  " << theorem << "\nregime   " << to_string(e.spec.regime) << "\nbeta     "
            << real_text(e.spec.beta) << "\nmetric   " << to_string(e.metric.kind()) << "\nomega    "
            << real_text(e.spec.omega) << "\nb        " << real_text(e.spec.b) << "\nvolume   "
            << real_text(volume(e.metric)) << '\n';
      }
      return 0;
    }

    if (*systoles) {
      const AnyMetric metric = metric_from_json(read_json_file(metric_path));
      const ClassMask mask = cls == "all" ? ClassMask::all() : ClassMask::only(parse_homotopy_class(cls));
      GraphOptions gopts;
      gopts.richardson = !no_richardson;
      SystoleReport report;
      Json inputs{{"metric", metric_path}, {"class", cls}, {"graph", force_graph}};
      if (const auto* p = std::get_if<ProfileMetric>(&metric)) {
        GridSize g = grid_text.empty() ? GridSize{256, 0} : parse_grid(grid_text);
        if (g.n_v == 0) {
          const double b = conformal_type_of_profile(*p);
          g.n_v = std::max(64, square_cell_rows(b, g.n_u));
        }
        inputs["grid"] = {{"n_u", g.n_u}, {"n_v", g.n_v}};
        report = systole_report(*p, g.n_u, g.n_v, mask, force_graph, gopts);
      } else {
        report = systole_report(std::get<GridMetric>(metric), mask, gopts);
      }
      out << ctx.envelope("systoles", inputs, to_json(report)).dump(2) << '\n';
      return 0;
    }

    if (*measure) {
      const BoundCertificate c = certify_for_beta(parse_theorem(theorem), beta, tol);
      out << ctx.envelope("verify-measure",
                          {{"theorem", theorem}, {"beta", beta}, {"tol_push", tol.push}, {"tol_mass", tol.mass}},
                          to_json(c))
                 .dump(2)
          << '\n';
      if (!c.valid) err << "certificate rejected: " << c.diagnostics << '\n';
      return c.valid ? 0 : 1;
    }

    if (*inequality) {
      const GridSize g = grid_text.empty() ? GridSize{128, 0} : parse_grid(grid_text);
      sweep.n_u = g.n_u;
      sweep.n_v = g.n_v;
      const SweepResult r = run_inequality_sweep(parse_theorem(theorem), beta, samples, sweep);
      if (json) {
        out << ctx.envelope("verify-inequality",
                            {{"theorem", theorem}, {"beta", beta}, {"samples", samples}, {"seed", sweep.seed}},
                            to_json(r))
                   .dump(2)
            << '\n';
      } else {
        out << "theorem         " << theorem << "\nbeta            " << real_text(r.beta) << "\nC               "
            << real_text(r.C) << "\ngrid            " << r.n_u << "x" << r.n_v << "\nsamples         "
            << r.samples << "\nextremal ratio  " << real_text(r.extremal_ratio) << "\nworst ratio     "
            << real_text(r.worst_ratio) << " (seed " << r.worst_seed << ")\nmean ratio      "
            << real_text(r.mean_ratio) << "\nviolations      " << r.violations << "\nreruns          "
            << r.reruns << "\nresult          " << (r.pass ? "pass" : "FAIL") << '\n';
      }
      return r.pass ? 0 : 1;
    }

    if (*probe) {
      out << ctx.envelope("probe", {{"asymptotics", asymptotics}}, to_json(probe_asymptotics())).dump(2) << '\n';
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace klein
