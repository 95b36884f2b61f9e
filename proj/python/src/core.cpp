#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "newton_critic/report.hpp"

namespace py = pybind11;
using namespace nc;

namespace {

// Results cross the boundary as JSON text; the Python side decodes them.
std::string classify_json(const std::string& text, unsigned order) {
  return to_json(classify(load_germ(text, order))).dump();
}

std::string critical_json(const std::string& text, unsigned order, unsigned max_depth, bool trace) {
  CriticalConfig cfg;
  cfg.order = order;
  cfg.max_depth = max_depth;
  return to_json(compute(load_germ(text, order), cfg), trace).dump();
}

std::string diagram_json(const std::string& text, unsigned order) {
  ExpandedGerm g = load_germ(text, order);
  NewtonDiagram red = reduced_diagram(g.poly);
  ExtRational p = p0(g.poly);
  Json j{{"diagram", to_json(diagram(taylor_support(g.poly), false))},
         {"reduced", to_json(red)},
         {"p0", rational_json(p)},
         {"d_gamma", rational_json(d_gamma(red, p))}};
  return j.dump();
}

std::vector<RegionTree> trees(const std::string& text, unsigned order, bool all_quadrants, std::uint64_t seed) {
  ResolveConfig cfg;
  cfg.order = order;
  cfg.seed = seed;
  PuiseuxPoly P = expand(parse(text), order).poly;
  if (all_quadrants) return resolve_quadrants(P, cfg);
  return {resolve(P, cfg)};
}

std::string resolve_json(const std::string& text, unsigned order, bool all_quadrants, std::uint64_t seed) {
  Json out = Json::array();
  for (const auto& t : trees(text, order, all_quadrants, seed)) out.push_back(to_json(t));
  return out.dump();
}

std::string verify_json(const std::string& text, unsigned order, bool all_quadrants, unsigned samples,
                        std::uint64_t seed) {
  VerifyConfig vc;
  vc.coverage_samples = samples;
  vc.seed = seed;
  Json out = Json::array();
  for (const auto& t : trees(text, order, all_quadrants, seed)) {
    Json v = to_json(verify(t, vc));
    v["quadrant"] = t.quadrant;
    out.push_back(v);
  }
  return out.dump();
}

std::string knapp_json(const std::string& text, double p, unsigned grid_level, unsigned v_samples,
                       unsigned theta_samples, unsigned workers) {
  KnappConfig cfg;
  cfg.grid_level = grid_level;
  cfg.op.v_samples = v_samples;
  cfg.op.theta_samples = theta_samples;
  cfg.op.workers = workers;
  py::gil_scoped_release release;
  return to_json(knapp_probe(Germ::from_expression(text), p, default_knapp_deltas(), cfg)).dump();
}

std::string blowup_json(const std::string& text, const std::string& family, unsigned refinements, unsigned first,
                        double p, unsigned workers) {
  BlowupConfig cfg;
  cfg.first = first;
  cfg.p = p;
  cfg.workers = workers;
  if (family != "auto" && family != "lines" && family != "horizontal")
    fail(ErrorCode::InvalidArgument, "family must be auto, lines or horizontal");
  Germ gamma = Germ::from_expression(text);
  ExpandedGerm g = family == "auto" ? load_germ(text) : ExpandedGerm{};
  py::gil_scoped_release release;
  BlowupReport r = family == "auto"
                       ? degenerate_blowup_probe(g, gamma, refinements, cfg)
                       : blowup_probe(gamma, family == "lines" ? TubeFamily::Lines : TubeFamily::Horizontal,
                                      refinements, cfg);
  return to_json(r).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Critical exponents, degeneracy classification and numerical probes for curve maximal operators";
  m.attr("SCHEMA") = kSchemaVersion;

  static py::exception<Error> error_type(m, "NewtonCriticError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const CriticalError& e) {
      Json partial = Json::array();
      for (const auto& ev : e.partial_trace()) partial.push_back(to_json(ev));
      py::object offset = e.offset() ? py::object(py::int_(*e.offset())) : py::object(py::none());
      PyErr_SetObject(error_type.ptr(),
                      py::make_tuple(error_code_name(e.code()), e.what(), offset, partial.dump()).ptr());
    } catch (const Error& e) {
      py::object offset = e.offset() ? py::object(py::int_(*e.offset())) : py::object(py::none());
      PyErr_SetObject(error_type.ptr(), py::make_tuple(error_code_name(e.code()), e.what(), offset, "[]").ptr());
    }
  });

  m.def("classify", &classify_json, py::arg("expression"), py::arg("order") = kDefaultOrder);
  m.def("critical", &critical_json, py::arg("expression"), py::arg("order") = kDefaultOrder,
        py::arg("max_depth") = 32, py::arg("trace") = false);
  m.def("diagram", &diagram_json, py::arg("expression"), py::arg("order") = kDefaultOrder);
  m.def("resolve", &resolve_json, py::arg("expression"), py::arg("order") = 16, py::arg("all_quadrants") = false,
        py::arg("seed") = 1);
  m.def("verify_resolution", &verify_json, py::arg("expression"), py::arg("order") = 16,
        py::arg("all_quadrants") = false, py::arg("samples") = 10000, py::arg("seed") = 1);
  m.def("knapp_probe", &knapp_json, py::arg("expression"), py::arg("p"), py::arg("grid_level") = 9,
        py::arg("v_samples") = 256, py::arg("theta_samples") = 512, py::arg("workers") = 0);
  m.def("blowup_probe", &blowup_json, py::arg("expression"), py::arg("family") = "auto",
        py::arg("refinements") = 3, py::arg("first") = 3, py::arg("p") = 3.0, py::arg("workers") = 0);
}
