#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tripletsim/analysis.hpp"
#include "tripletsim/config.hpp"
#include "tripletsim/errors.hpp"
#include "tripletsim/pipeline.hpp"

namespace py = pybind11;
using namespace tripletsim;

namespace {

py::object to_python(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

template <class T>
py::array_t<T> array(const std::vector<T>& v, std::vector<py::ssize_t> shape) {
  py::array_t<T> a(shape);
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

std::vector<double> as_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return {a.data(), a.data() + a.size()};
}

py::dict simulate_py(const std::string& config_json, int threads, bool oracle) {
  SimulationResult r;
  {
    py::gil_scoped_release release;
    r = simulate(parse_config(config_json), threads, oracle);
  }
  const auto& t = r.twf;
  const auto n1 = static_cast<py::ssize_t>(t.s1.k.size());
  const auto n2 = static_cast<py::ssize_t>(t.s2.k.size());
  const auto n3 = static_cast<py::ssize_t>(t.s3.k.size());
  py::dict d;
  d["results"] = to_python(r.results_json());
  d["psi"] = array(r.psi, {n1, n2, n3});
  d["x"] = py::make_tuple(array(t.s1.x, {n1}), array(t.s2.x, {n2}), array(t.s3.x, {n3}));
  d["weights"] = py::make_tuple(array(t.s1.weight, {n1}), array(t.s2.weight, {n2}),
                                array(t.s3.weight, {n3}));
  d["warnings"] = r.warnings;
  return d;
}

py::dict purity_py(py::array_t<cd, py::array::c_style | py::array::forcecast> psi,
                   const py::array_t<double, py::array::c_style | py::array::forcecast>& w1,
                   const py::array_t<double, py::array::c_style | py::array::forcecast>& w2,
                   const py::array_t<double, py::array::c_style | py::array::forcecast>& w3) {
  if (psi.ndim() != 3) throw py::value_error("psi must be three-dimensional");
  const std::vector<double> a = as_vector(w1), b = as_vector(w2), c = as_vector(w3);
  Tensor3View v;
  v.data = std::span<const cd>(psi.data(), static_cast<std::size_t>(psi.size()));
  v.shape = {static_cast<std::size_t>(psi.shape(0)), static_cast<std::size_t>(psi.shape(1)),
             static_cast<std::size_t>(psi.shape(2))};
  v.weight = {std::span<const double>(a), std::span<const double>(b), std::span<const double>(c)};
  const PurityReport r = purity(v);
  py::dict d;
  d["purity"] = r.purity;
  d["purity_trace"] = r.purity_trace;
  d["schmidt"] = r.schmidt;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cascaded four-wave-mixing photon-triplet simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("preset", [](const std::string& id) { return serialize(build_preset(id)); },
        py::arg("id"), "Built-in configuration A, B or C as JSON text.");
  m.def("validate", [](const std::string& config_json) { validate(parse_config(config_json)); },
        py::arg("config_json"));
  m.def("simulate", &simulate_py, py::arg("config_json"), py::arg("threads") = 1,
        py::arg("oracle") = false,
        "Run the pipeline in memory; returns results, the post-selected amplitude and axes.");
  m.def(
      "run",
      [](const std::string& config_json, const std::string& out_dir, int threads) {
        nlohmann::ordered_json manifest;
        {
          py::gil_scoped_release release;
          RunOptions opt;
          opt.out_dir = out_dir;
          opt.threads = threads;
          manifest = run(parse_config(config_json), opt);
        }
        return to_python(manifest);
      },
      py::arg("config_json"), py::arg("out_dir"), py::arg("threads") = 1,
      "Run the pipeline and write a manifest bundle; returns the manifest.");
  m.def("purity", &purity_py, py::arg("psi"), py::arg("w1"), py::arg("w2"), py::arg("w3"));
  m.def(
      "triplet_rate",
      [](double sigma2, std::array<double, 3> efficiency, double repetition_rate,
         std::array<double, 3> loss_db) {
        const RateReport r = triplet_rate(sigma2, efficiency, repetition_rate, loss_db);
        return py::make_tuple(r.rate, r.detected_rate);
      },
      py::arg("sigma2"), py::arg("efficiency"), py::arg("repetition_rate"),
      py::arg("loss_db") = std::array<double, 3>{0.0, 0.0, 0.0},
      "Triplet rate and detected rate in Hz.");
}
