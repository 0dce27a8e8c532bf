#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "schottky/io.hpp"

namespace py = pybind11;
using namespace schottky;

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace {

SchottkyGroup group_from_json(const std::string& text) {
  return build_group(parse_group_spec(Json::parse(text)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  py::class_<SchottkyGroup>(m, "SchottkyGroup")
      .def_property_readonly("d", [](const SchottkyGroup& g) { return g.ctx.d(); })
      .def_property_readonly("n", &SchottkyGroup::n)
      .def_readonly("epsilon", &SchottkyGroup::epsilon)
      .def_readonly("radii", &SchottkyGroup::radii)
      .def_property_readonly("strength", &SchottkyGroup::strength)
      .def_property_readonly("separation", [](const SchottkyGroup& g) { return g.frameset.separation; })
      .def("generator", [](const SchottkyGroup& g, int i) { return g.generators.at(i).matrix(); })
      .def("inverse", [](const SchottkyGroup& g, int i) { return g.generators.at(i).inverse(); });

  m.def("demo_group", [](int d, int n, double strength, double epsilon) {
    return build_group(demo_spec(d, n, strength, epsilon));
  }, py::arg("d") = 1, py::arg("n") = 2, py::arg("strength") = 1e-3, py::arg("epsilon") = 0.75);
  m.def("group_from_json", &group_from_json, py::arg("text"));

  m.def("ping_pong", [](const SchottkyGroup& g, int samples, std::uint64_t seed) {
    PingPongReport r = verify_ping_pong_sphere(g, samples, seed);
    return py::dict(py::arg("ok") = r.ok, py::arg("tan4_ok") = r.tan4_ok,
                    py::arg("disjoint_ok") = r.disjoint_ok,
                    py::arg("disjoint_bound") = r.disjoint_bound);
  }, py::arg("group"), py::arg("samples") = 2000, py::arg("seed") = 1);

  m.def("audit_products", [](const SchottkyGroup& g, int max_len) {
    ProductAuditReport r = audit_products(g, max_len);
    return py::dict(py::arg("ok") = r.ok, py::arg("words") = r.words,
                    py::arg("min_separation") = r.min_separation,
                    py::arg("max_strength") = r.max_strength);
  }, py::arg("group"), py::arg("max_len") = 3);

  m.def("word_matrix", [](const SchottkyGroup& g, const std::vector<std::pair<int, int>>& letters) {
    Word w;
    for (auto [i, s] : letters) w.push_back({i, s});
    return word_matrix(g, w);
  });

  m.def("canonical_translations", &canonical_translations);
  m.def("in_T", [](const SchottkyGroup& g, const std::vector<Vec>& t, int samples) {
    InTReport r = in_T(g, t, samples);
    return py::dict(py::arg("in_T") = r.in_T, py::arg("d_min") = r.d_min, py::arg("note") = r.note);
  }, py::arg("group"), py::arg("t"), py::arg("samples") = 600);

  m.def("trace_point", [](const SchottkyGroup& g, const std::vector<Vec>& t, const Vec& x0,
                          int max_steps) {
    AffineDeformation def = build_deformation(g, t);
    TileTrace tr = trace_point(def, x0, max_steps);
    std::vector<std::pair<int, int>> letters;
    for (const Letter& l : tr.letters) letters.emplace_back(l.i, l.sigma);
    std::vector<double> a;
    for (const GapEntry& e : tr.gaps) a.push_back(e.a);
    return py::dict(py::arg("status") = to_string(tr.status), py::arg("letters") = letters,
                    py::arg("landing") = tr.points.back(), py::arg("a") = a);
  }, py::arg("group"), py::arg("t"), py::arg("x0"), py::arg("max_steps") = 60);

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
