#include "khflow/cli.hpp"
#include "khflow/cobord.hpp"
#include "khflow/complex.hpp"
#include "khflow/flowcat.hpp"
#include "khflow/homology.hpp"
#include "khflow/sinv.hpp"
#include "khflow/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace khflow;

namespace {

py::dict homology_dict(const HomologySummary& h) {
  py::dict out;
  for (const auto& [deg, g] : h.groups) {
    if (!g.rank && g.torsion.empty()) continue;
    std::vector<std::string> tors;
    for (const auto& t : g.torsion) tors.push_back(t.get_str());
    out[py::int_(deg)] = py::make_tuple(g.rank, tors);
  }
  return out;
}

GradedChainComplex complex_for(const LinkDiagram& d, int h, int t) {
  return khovanov_complex(d, frobenius_spec(h, t, Basis::OneX));
}

} // namespace

PYBIND11_MODULE(khflow, m) {
  m.doc() = "Bar-Natan homology, flow categories and the s-invariant";

  static py::exception<Error> khflow_error(m, "KhflowError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      khflow_error(e.what());
    }
  });

  py::class_<LinkDiagram>(m, "Diagram")
      .def(py::init([](const std::string& pd) { return parse_pd(pd); }), py::arg("pd"))
      .def_property_readonly("crossings", &LinkDiagram::n)
      .def_property_readonly("components", &LinkDiagram::num_components)
      .def_readonly("n_plus", &LinkDiagram::n_plus)
      .def_readonly("n_minus", &LinkDiagram::n_minus)
      .def_readonly("signs", &LinkDiagram::signs)
      .def("pd", [](const LinkDiagram& d) { return to_pd_text(d); })
      .def("mirror", [](const LinkDiagram& d) { return mirror(d); })
      .def("__repr__", [](const LinkDiagram& d) { return "Diagram('" + to_pd_text(d) + "')"; });

  m.def("braid_closure", &braid_closure, py::arg("word"), py::arg("strands"));

  m.def(
      "homology",
      [](const LinkDiagram& d, const std::string& coeffs, int h, int t) { return homology_dict(homology(complex_for(d, h, t), parse_coeffs(coeffs))); },
      py::arg("diagram"), py::arg("coeffs") = "Z", py::arg("h") = 1, py::arg("t") = 0,
      "{degree: (rank, torsion)} for the complex of A_{h,t}");

  m.def(
      "s_invariant",
      [](const LinkDiagram& d, const std::string& coeffs) {
        auto s = s_invariant(d, parse_coeffs(coeffs));
        py::dict out;
        out["s"] = s.s;
        out["s_min"] = s.s_min;
        out["s_max"] = s.s_max;
        out["gr_alpha"] = s.gr_alpha;
        out["gr_beta"] = s.gr_beta;
        return out;
      },
      py::arg("diagram"), py::arg("coeffs") = "Q");

  m.def(
      "canonical_classes",
      [](const LinkDiagram& d) {
        py::list out;
        for (const auto& c : canonical_cycles(d)) {
          std::vector<bool> o(c.orientation.begin(), c.orientation.end());
          out.append(py::make_tuple(o, c.gr_h, c.gr_q));
        }
        return out;
      },
      py::arg("diagram"), "[(reversed components, gr_h, gr_q)]");

  m.def(
      "complex_json", [](const LinkDiagram& d, int h, int t) { return complex_to_json(complex_for(d, h, t)); }, py::arg("diagram"), py::arg("h") = 1, py::arg("t") = 0);

  m.def(
      "flowcat_json",
      [](const LinkDiagram& d, const std::string& stage) {
        auto c = xy_flow_category(d);
        if (stage != "xy") c = cubic_handle_slides(c);
        if (stage == "eliminated") c = eliminate_quantum_increasing(c);
        return flowcat_to_json(c);
      },
      py::arg("diagram"), py::arg("stage") = "xy");

  m.def(
      "canonical_degrees",
      [](const LinkDiagram& d, const std::string& script) {
        auto f = cobordism_map(d, parse_cobordism_script(script));
        py::dict out;
        for (char a : {'a', 'b'})
          for (char b : {'a', 'b'}) out[py::str(std::string{a, b})] = canonical_degree(f, a, b);
        return out;
      },
      py::arg("diagram"), py::arg("script"));

  m.def(
      "verify",
      [](const std::string& suite, int max_crossings, int n) {
        VerifyOptions opt;
        opt.max_crossings = max_crossings;
        opt.n = n;
        auto r = run_suite(suite, opt);
        return py::make_tuple(r.pass, r.details);
      },
      py::arg("suite"), py::arg("max_crossings") = 8, py::arg("n") = 0);

  m.def("suites", &suite_names);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream o, e;
        int code = run(args, o, e);
        return py::make_tuple(code, o.str(), e.str());
      },
      py::arg("args"), "(exit code, stdout, stderr)");
}
