// Thin pybind11 surface: the scenario engine (JSON-text boundary, mirroring the
// CLI) plus direct entry points for the operations a notebook actually pokes at.
// Heavy lifting stays in instanton_core; no numpy dependency.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "instanton/adhm.hpp"
#include "instanton/equivariant.hpp"
#include "instanton/errors.hpp"
#include "instanton/gauge.hpp"
#include "instanton/invariants.hpp"
#include "instanton/scenario.hpp"
#include "instanton/vanishing.hpp"

namespace py = pybind11;
using instanton::io::json;

namespace {

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw instanton::ConfigInvalid(std::string(what) + ": " + e.what());
  }
}

instanton::AdhmData datum_arg(const std::string& text) {
  return instanton::io::adhm_from_json(parse(text, "datum"));
}

instanton::Quaternion quat_arg(const std::vector<double>& x) {
  if (x.size() != 4) throw instanton::DimensionMismatch("point must have 4 components");
  return {x[0], x[1], x[2], x[3]};
}

}  // namespace

PYBIND11_MODULE(_instanton, m) {
  m.doc() = "ADHM instanton workbench (JSON-text boundary; see the instanton package "
            "for the dict-level wrappers)";

  py::register_exception<instanton::Error>(m, "InstantonError");

  m.def("commands", [] { return instanton::scenario_commands(); },
        "registered scenario pipelines");

  m.def(
      "run",
      [](const std::string& command, const std::string& config_text,
         std::optional<uint64_t> seed, std::optional<int64_t> budget,
         std::optional<double> tol) {
        instanton::RunOverrides ov{seed, budget, tol};
        const json config =
            config_text.empty() ? json::object() : parse(config_text, "config");
        const auto outcome = instanton::run_scenario(command, config, ov);
        return py::make_tuple(outcome.exit_code, instanton::io::dump_doc(outcome.document));
      },
      py::arg("command"), py::arg("config") = "", py::arg("seed") = std::nullopt,
      py::arg("budget") = std::nullopt, py::arg("tol") = std::nullopt,
      "execute a scenario; returns (exit_code, result document as JSON text)");

  m.def(
      "plotdata",
      [](const std::string& doc_text) {
        return instanton::emit_plotdata(parse(doc_text, "document"));
      },
      py::arg("document"), "CSV series from a result document");

  m.def(
      "sample_adhm",
      [](int k, uint64_t seed, double spread) {
        instanton::Rng rng(seed);
        return instanton::io::dump_doc(
            instanton::io::to_json(instanton::sample_adhm(k, rng, spread)));
      },
      py::arg("k"), py::arg("seed") = 1, py::arg("spread") = 1.0,
      "seeded random datum satisfying the ADHM condition (JSON text)");

  m.def(
      "moment_residual",
      [](const std::string& datum) { return instanton::moment_map(datum_arg(datum)).norm(); },
      py::arg("datum"));

  m.def(
      "charge",
      [](const std::string& datum, int64_t budget) {
        instanton::R4QuadratureSpec spec{.scheme = instanton::QuadScheme::RadialSpherical,
                                         .scale = 0.0,
                                         .budget = 0};
        if (budget > 0) spec.budget = budget;
        const auto r = instanton::charge(datum_arg(datum), spec);
        return py::make_tuple(r.value, r.error);
      },
      py::arg("datum"), py::arg("budget") = 0, "total second-Chern integral");

  m.def(
      "c2_density",
      [](const std::string& datum, const std::vector<double>& x) {
        return instanton::c2_density(datum_arg(datum), quat_arg(x));
      },
      py::arg("datum"), py::arg("x"));

  m.def(
      "asd_residual",
      [](const std::string& datum, const std::vector<double>& x) {
        return instanton::asd_residual(instanton::curvature(datum_arg(datum), quat_arg(x)));
      },
      py::arg("datum"), py::arg("x"));

  m.def(
      "gauss_link",
      [](const std::string& a, const std::string& b) {
        const auto r = instanton::gauss_link(instanton::io::submanifold_from_json(parse(a, "a")),
                                             instanton::io::submanifold_from_json(parse(b, "b")));
        return py::make_tuple(r.value, r.error, r.nearest_integer);
      },
      py::arg("a"), py::arg("b"), "Gauss linking number (value, error, nearest integer)");

  m.def(
      "euler_class",
      [](int k, int j) {
        const auto e = instanton::euler_class(k, j);
        return py::make_tuple(e.exponent, e.coefficient);
      },
      py::arg("k"), py::arg("j"), "(exponent, coefficient) of the fixed-point Euler class");

  m.def(
      "verify_vanishing",
      [](int k_min, int k_max, int l_max) {
        const auto r = instanton::verify_vanishing(k_min, k_max, l_max);
        return instanton::io::dump_doc(instanton::io::to_json(r));
      },
      py::arg("k_min") = 2, py::arg("k_max") = 5, py::arg("l_max") = 12,
      "exhaustive emptiness scan report (JSON text)");
}
