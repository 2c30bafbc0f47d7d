#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "relent/experiments.hpp"
#include "relent/functionals.hpp"
#include "relent/harness.hpp"

namespace py = pybind11;
using namespace relent;

namespace {

DiscreteField field_of(const Grid& g, const std::vector<double>& values) {
  if (values.size() != g.cells) throw std::invalid_argument("values must have one entry per cell");
  return DiscreteField(g, 1, values);
}

EntropySpec entropy_of(const std::string& json_text) {
  return entropy_from_json(nlohmann::json::parse(json_text), "entropy");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Relative entropy functionals on cell-averaged fields";

  py::register_exception<Error>(m, "RelentError", PyExc_RuntimeError);

  py::class_<Grid>(m, "Grid")
      .def(py::init(&build_uniform_grid), py::arg("a"), py::arg("b"), py::arg("cells"))
      .def_readonly("a", &Grid::a)
      .def_readonly("b", &Grid::b)
      .def_readonly("cells", &Grid::cells)
      .def_property_readonly("dx", &Grid::dx)
      .def("midpoints", [](const Grid& g) {
        std::vector<double> x(g.cells);
        for (std::size_t i = 0; i < g.cells; ++i) x[i] = g.midpoint(i);
        return x;
      });

  m.def("bregman", [](const std::string& h, double v, double u) { return bregman(entropy_of(h), v, u); },
        py::arg("entropy"), py::arg("v"), py::arg("u"));
  m.def("eval_h", [](const std::string& h, double x) { return eval_h(entropy_of(h), x); });
  m.def("eval_grad", [](const std::string& h, double x) { return eval_grad(entropy_of(h), x); });

  m.def(
      "rel_entropy",
      [](const std::string& h, const Grid& g, const std::vector<double>& v,
         const std::vector<double>& u) {
        return rel_entropy_functional(entropy_of(h), field_of(g, v), field_of(g, u));
      },
      py::arg("entropy"), py::arg("grid"), py::arg("v"), py::arg("u"));
  m.def("kl_divergence", [](const Grid& g, const std::vector<double>& v, const std::vector<double>& u) {
    return kl_divergence(field_of(g, v), field_of(g, u));
  });
  m.def("lp_distance", [](const Grid& g, const std::vector<double>& v,
                          const std::vector<double>& u, double p) {
    return lp_distance(field_of(g, v), field_of(g, u), p);
  });
  m.def("ckp_check", [](const Grid& g, const std::vector<double>& v, const std::vector<double>& u) {
    const auto r = ckp_check(field_of(g, v), field_of(g, u));
    return py::dict(py::arg("lhs") = r.lhs, py::arg("rhs") = r.rhs, py::arg("slack") = r.slack,
                    py::arg("holds") = r.holds);
  });

  m.def(
      "materialize",
      [](const std::string& sequence_json, std::size_t n, const Grid& g) {
        const auto f = sequence_from_json(nlohmann::json::parse(sequence_json), g);
        const auto u = materialize(f, n, g);
        return std::vector<double>(u.values().begin(), u.values().end());
      },
      py::arg("sequence"), py::arg("n"), py::arg("grid"));

  // Returns (verdict JSON text, CSV text).
  m.def(
      "run_experiment",
      [](const std::string& name, const std::string& config_json) {
        const auto cfg = config_from_json(nlohmann::json::parse(config_json), name);
        ExperimentReport r;
        {
          py::gil_scoped_release release;
          r = run_experiment(name, cfg);
        }
        std::ostringstream csv;
        r.table.write(csv);
        return std::make_pair(r.verdict.dump(), csv.str());
      },
      py::arg("name"), py::arg("config"));

  m.def("experiments", [] {
    std::vector<std::string> names;
    for (const auto& e : experiment_catalog()) names.emplace_back(e.name);
    return names;
  });

  m.def("cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
