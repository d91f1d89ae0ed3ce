#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <sstream>

#include "klein/cli.hpp"
#include "klein/constants.hpp"
#include "klein/error.hpp"
#include "klein/extremal.hpp"
#include "klein/geometry.hpp"
#include "klein/io.hpp"
#include "klein/measure.hpp"
#include "klein/solvers.hpp"
#include "klein/systole.hpp"
#include "klein/verification.hpp"

namespace py = pybind11;
using klein::Json;

namespace {

py::object to_py(const Json& j) {
  switch (j.type()) {
    case Json::value_t::null: return py::none();
    case Json::value_t::boolean: return py::bool_(j.get<bool>());
    case Json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case Json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case Json::value_t::number_float: return py::float_(j.get<double>());
    case Json::value_t::string: return py::str(j.get<std::string>());
    case Json::value_t::array: {
      py::list out;
      for (const auto& x : j) out.append(to_py(x));
      return out;
    }
    case Json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_py(v);
      return out;
    }
    default: return py::none();
  }
}

Json from_py(const py::handle& obj) {
  const std::string text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return Json::parse(text);
}

klein::ClassMask mask_of(const std::string& cls) {
  return cls == "all" ? klein::ClassMask::all() : klein::ClassMask::only(klein::parse_homotopy_class(cls));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Optimal systolic constants, extremal metrics and numerical checks on Klein bottles";

  // Translators registered later are tried first, so the base class goes first.
  py::register_exception<klein::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<klein::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<klein::RegimeError>(m, "RegimeError", PyExc_ValueError);
  py::register_exception<klein::InvalidMetric>(m, "InvalidMetric", PyExc_ValueError);

  m.def("gd", &klein::gd);
  m.def("gd_inverse", &klein::gd_inverse);
  m.def("b0", &klein::solve_b0);
  m.def("threshold", [](const std::string& t) { return klein::threshold(klein::parse_theorem(t)); });

  m.def("constant", [](const std::string& t, double beta) {
    return to_py(klein::to_json(klein::constant_for(klein::parse_theorem(t), beta)));
  }, py::arg("theorem"), py::arg("beta"));

  m.def("solve", [](const std::string& eq, double beta) {
    return to_py(klein::to_json(klein::solve_equation(klein::parse_equation(eq), beta)));
  }, py::arg("equation"), py::arg("beta") = 0.0);

  m.def("extremal", [](const std::string& t, double beta) {
    const auto e = klein::extremal_for_beta(klein::parse_theorem(t), beta);
    py::dict out;
    out["spec"] = to_py(klein::to_json(e.spec));
    out["metric"] = to_py(klein::to_json(e.metric));
    out["volume"] = klein::volume(e.metric);
    return out;
  }, py::arg("theorem"), py::arg("beta"));

  m.def("systoles", [](const py::object& metric, int n_u, int n_v, const std::string& cls, bool graph) {
    const auto any = klein::metric_from_json(from_py(metric));
    const auto mask = mask_of(cls);
    klein::SystoleReport r;
    {
      py::gil_scoped_release release;
      if (const auto* p = std::get_if<klein::ProfileMetric>(&any)) {
        if (n_v == 0) n_v = std::max(64, klein::square_cell_rows(klein::conformal_type_of_profile(*p), n_u));
        r = klein::systole_report(*p, n_u, n_v, mask, graph);
      } else {
        r = klein::systole_report(std::get<klein::GridMetric>(any), mask);
      }
    }
    return to_py(klein::to_json(r));
  }, py::arg("metric"), py::arg("n_u") = 256, py::arg("n_v") = 0, py::arg("classes") = "all",
     py::arg("graph") = false);

  m.def("certify", [](const std::string& t, double beta, double tol_push, double tol_mass) {
    klein::BoundCertificate c;
    {
      py::gil_scoped_release release;
      c = klein::certify_for_beta(klein::parse_theorem(t), beta, {tol_push, tol_mass});
    }
    return to_py(klein::to_json(c));
  }, py::arg("theorem"), py::arg("beta"), py::arg("tol_push") = 1e-3, py::arg("tol_mass") = 1e-10);

  m.def("verify_inequality", [](const std::string& t, double beta, int samples, std::uint64_t seed, int n_u,
                                int n_v, double amplitude) {
    klein::SweepOptions opts;
    opts.seed = seed;
    opts.n_u = n_u;
    opts.n_v = n_v;
    opts.amplitude = amplitude;
    klein::SweepResult r;
    {
      py::gil_scoped_release release;
      r = klein::run_inequality_sweep(klein::parse_theorem(t), beta, samples, opts);
    }
    return to_py(klein::to_json(r));
  }, py::arg("theorem"), py::arg("beta"), py::arg("samples") = 20, py::arg("seed") = 1, py::arg("n_u") = 128,
     py::arg("n_v") = 0, py::arg("amplitude") = 0.5);

  m.def("probe_asymptotics", [] { return to_py(klein::to_json(klein::probe_asymptotics())); });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = 0;
    {
      py::gil_scoped_release release;
      code = klein::run_cli(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
