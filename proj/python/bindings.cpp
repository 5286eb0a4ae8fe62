#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "orbitlink/abc_field.hpp"
#include "orbitlink/class_count.hpp"
#include "orbitlink/cohomology_pressure.hpp"
#include "orbitlink/config.hpp"
#include "orbitlink/convergence_study.hpp"
#include "orbitlink/error.hpp"
#include "orbitlink/fixtures.hpp"
#include "orbitlink/lambda_scan.hpp"
#include "orbitlink/lattice_count.hpp"
#include "orbitlink/linking.hpp"
#include "orbitlink/lorenz_template.hpp"
#include "orbitlink/orbits.hpp"
#include "orbitlink/pressure.hpp"
#include "orbitlink/runner.hpp"
#include "orbitlink/system_io.hpp"

namespace py = pybind11;
using namespace orbitlink;

namespace {

EdgeFunction edge_values(const SuspensionSystem& sys, const std::optional<std::vector<double>>& v) {
  return v ? EdgeFunction(*v) : sys.potential();
}

PolylineCurve template_curve(const std::string& word) { return realize_orbit(TemplateSpec{}, word_from_string(word)); }

}  // namespace

PYBIND11_MODULE(_orbitlink, m) {
  m.doc() = "Periodic-orbit counting, linking and helicity experiments";
  m.attr("__version__") = library_version();

  py::register_exception<Error>(m, "OrbitlinkError", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);

  py::class_<SuspensionSystem>(m, "System")
      .def_property_readonly("name", &SuspensionSystem::name)
      .def_property_readonly("edges", [](const SuspensionSystem& s) { return s.shift().edge_count(); })
      .def_property_readonly("vertices", [](const SuspensionSystem& s) { return s.shift().vertex_count(); })
      .def_property_readonly("betti", &SuspensionSystem::betti)
      .def_property_readonly("roof", [](const SuspensionSystem& s) { return s.roof().values(); })
      .def_property_readonly("potential", [](const SuspensionSystem& s) { return s.potential().values(); })
      .def("to_json", &system_to_json)
      .def("__repr__", [](const SuspensionSystem& s) {
        return "<System " + s.name() + ", " + std::to_string(s.shift().edge_count()) + " edges>";
      });

  m.def("fixture", &fixtures::by_name, py::arg("name"));
  m.def("fixtures", &fixtures::names);
  m.def("parse_system", &parse_system, py::arg("json_text"));

  m.def(
      "pressure",
      [](const SuspensionSystem& sys, std::optional<std::vector<double>> potential) {
        return flow_pressure(sys.shift(), sys.roof(), edge_values(sys, potential));
      },
      py::arg("system"), py::arg("potential") = py::none(),
      "Topological pressure of the symbolic potential (default: the system's own).");

  m.def(
      "prime_orbits",
      [](const SuspensionSystem& sys, std::size_t max_word) {
        std::vector<py::tuple> out;
        for (const auto& o : enumerate_by_word_length(sys, max_word))
          out.push_back(py::make_tuple(word_to_string(o.word), o.length, o.weight, o.homology));
        return out;
      },
      py::arg("system"), py::arg("max_word"), "(word, length, weight, homology) for every prime orbit.");
  m.def(
      "moebius_prime_count", [](const SuspensionSystem& sys, std::size_t n) { return moebius_prime_count(sys.shift(), n); },
      py::arg("system"), py::arg("n"));

  m.def(
      "beta",
      [](const SuspensionSystem& sys, std::optional<std::vector<double>> potential) {
        const auto cp = build_cohomology_pressure(sys, edge_values(sys, potential));
        py::dict d;
        d["xi"] = cp.minimizer();
        d["beta"] = cp.minimum();
        d["hessian"] = cp.hessian_at_minimizer();
        return d;
      },
      py::arg("system"), py::arg("potential") = py::none(),
      "Minimizer, minimum and Hessian of the cohomological pressure.");

  m.def(
      "class_count",
      [](const SuspensionSystem& sys, std::vector<std::int64_t> alpha, double T, double lo, double hi) {
        const auto cp = build_cohomology_pressure(sys, sys.potential());
        const auto c = count_in_class(sys, sys.potential(), alpha, {T + lo, T + hi});
        py::dict d;
        d["count"] = c.count;
        d["observed"] = c.pi;
        d["predicted"] = predict_in_class(cp, alpha, {lo, hi}, T);
        return d;
      },
      py::arg("system"), py::arg("alpha"), py::arg("T"), py::arg("lo") = -1.0, py::arg("hi") = 0.0);

  m.def(
      "link_words",
      [](const std::string& a, const std::string& b) {
        const auto r = link(template_curve(a), template_curve(b));
        return py::make_tuple(r.exact, r.numeric, r.min_distance);
      },
      py::arg("a"), py::arg("b"), "(crossing count, Gauss integral, min distance) of two template orbits.");
  m.def(
      "template_linking",
      [](const std::string& a, const std::string& b) { return template_linking(word_from_string(a), word_from_string(b)); },
      py::arg("a"), py::arg("b"));
  m.def(
      "hopf",
      [](std::size_t n) {
        const auto [a, b] = hopf_pair(n);
        const auto r = link(a, b);
        return py::make_tuple(r.exact, r.numeric, orbit_pair_integral(a, b), a.period() * b.period());
      },
      py::arg("samples") = 400, "(crossing, gauss, pair integral, l l') for the Hopf pair.");

  m.def(
      "lambda_scan",
      [](std::size_t pairs, std::uint64_t seed, unsigned threads) {
        LambdaScanOptions o;
        o.pairs = pairs;
        o.seed = seed;
        o.threads = threads;
        const auto r = lambda_bound_scan(TemplateSpec{}, o);
        std::vector<py::tuple> decades;
        for (const auto& d : r.decades) decades.push_back(py::make_tuple(d.r_lo, d.r_hi, d.max_r_lambda, d.samples));
        py::dict out;
        out["K_emp"] = r.K_emp;
        out["bounded"] = r.bounded;
        out["decades"] = decades;
        return out;
      },
      py::arg("pairs") = 100000, py::arg("seed") = 1, py::arg("threads") = 1);

  m.def(
      "helicity_abc",
      [](double A, double B, double C, std::vector<std::size_t> grids) {
        HelicityOptions o;
        o.grids = std::move(grids);
        const auto e = helicity_analytic(AnalyticField::abc(A, B, C), o);
        py::dict d;
        d["value"] = e.value;
        d["error"] = e.error;
        d["grids"] = e.grids;
        d["grid_values"] = e.grid_values;
        return d;
      },
      py::arg("A") = 1.0, py::arg("B") = 1.0, py::arg("C") = 1.0,
      py::arg("grids") = std::vector<std::size_t>{20, 40, 80});

  m.def(
      "study",
      [](std::vector<double> T_grid, double phi, std::size_t lambda_pairs, unsigned threads) {
        StudyOptions o;
        o.lambda_pairs = lambda_pairs;
        o.threads = threads;
        const auto r = convergence_study(fixtures::lorenz_template_system(), EdgeFunction::constant(2, phi), T_grid, o);
        std::vector<py::tuple> rows;
        for (const auto& row : r.rows) rows.push_back(py::make_tuple(row.T, row.average.value, row.gap));
        py::dict d;
        d["rows"] = rows;
        d["reference"] = r.reference.value;
        d["reference_error"] = r.reference.error;
        d["verdict"] = std::string(to_string(r.verdict));
        return d;
      },
      py::arg("T_grid"), py::arg("phi") = 0.0, py::arg("lambda_pairs") = 100000, py::arg("threads") = 1,
      "Average-linking convergence study on the template system.");

  m.def(
      "run",
      [](const std::string& config_json, std::optional<std::string> out_dir, std::optional<unsigned> threads,
         bool verify) {
        RunOptions o;
        o.out_dir = std::move(out_dir);
        o.threads = threads;
        o.verify = verify;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run(parse_config(config_json), o);
        }
        py::dict d;
        d["exit_code"] = r.exit_code;
        d["files"] = r.files;
        d["checksums"] = r.checksums;
        d["manifest"] = r.manifest_path;
        d["error"] = r.error;
        std::vector<py::tuple> checks;
        for (const auto& c : r.checks) checks.push_back(py::make_tuple(c.name, c.passed, c.detail));
        d["checks"] = checks;
        return d;
      },
      py::arg("config"), py::arg("out_dir") = py::none(), py::arg("threads") = py::none(), py::arg("verify") = false,
      "Run an experiment config given as a JSON string.");
}
