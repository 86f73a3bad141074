#include <array>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "boxqp/bench.hpp"
#include "boxqp/conic.hpp"
#include "boxqp/cuts.hpp"
#include "boxqp/driver.hpp"
#include "boxqp/exact.hpp"
#include "boxqp/oracle.hpp"

namespace py = pybind11;
using namespace boxqp;

namespace {

const InteriorPointBackend& backend() {
  static const InteriorPointBackend be(BackendOptions::from_environment());
  return be;
}

std::vector<std::array<double, 10>> rows_of(const std::vector<LinearCut>& cuts) {
  std::vector<std::array<double, 10>> out;
  out.reserve(cuts.size());
  for (const auto& c : cuts) out.push_back(c.coefficients());
  return out;
}

std::map<std::string, int> named_counts(const std::map<CutFamily, int>& counts) {
  std::map<std::string, int> out;
  for (const auto& [f, c] : counts) out[std::string(family_name(f))] = c;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Conic relaxations and cutting planes for box-constrained quadratic programs";

  py::register_exception<NumericalTrouble>(m, "NumericalTrouble", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<BoxQpInstance>(m, "BoxQpInstance")
      .def(py::init<Matrix, Vector, std::string>(), py::arg("Q"), py::arg("q"), py::arg("label") = "")
      .def_property_readonly("n", &BoxQpInstance::n)
      .def_property_readonly("Q", &BoxQpInstance::Q)
      .def_property_readonly("q", &BoxQpInstance::q)
      .def_property_readonly("label", &BoxQpInstance::label)
      .def("__repr__", [](const BoxQpInstance& i) {
        return "<BoxQpInstance " + i.label() + " n=" + std::to_string(i.n()) + ">";
      });

  m.def("builtin_bl", &builtin_bl);
  m.def(
      "generate",
      [](int n, int density, int number, std::uint64_t seed, const std::string& diag) {
        return generate({n, density, number, seed, parse_diag_rule(diag)});
      },
      py::arg("n"), py::arg("density"), py::arg("number"), py::arg("seed") = 0, py::arg("diag") = "same");
  m.def("parse_instance", [](const std::string& text) { return parse_instance(text); });
  m.def("serialize_instance", &serialize_instance);

  py::class_<GlobalSolution>(m, "GlobalSolution")
      .def_readonly("value", &GlobalSolution::value)
      .def_readonly("x", &GlobalSolution::x)
      .def_readonly("candidates", &GlobalSolution::candidates);
  m.def("solve_global", [](const BoxQpInstance& inst) { return solve_global(inst); });
  m.def(
      "solve_exact_qpb3", [](const BoxQpInstance& inst) { return solve_exact_qpb3(inst, backend()); },
      py::call_guard<py::gil_scoped_release>());

  py::class_<DriverConfig>(m, "DriverConfig")
      .def(py::init<>())
      .def_readwrite("max_rounds", &DriverConfig::max_rounds)
      .def_readwrite("cuts_per_round", &DriverConfig::cuts_per_round)
      .def_readwrite("threshold", &DriverConfig::threshold)
      .def_readwrite("absolute_threshold", &DriverConfig::absolute_threshold)
      .def_readwrite("rank_tolerance", &DriverConfig::rank_tolerance)
      .def_readwrite("seed", &DriverConfig::seed);

  py::class_<RoundLog>(m, "RoundLog")
      .def_readonly("round", &RoundLog::round)
      .def_readonly("phase", &RoundLog::phase)
      .def_property_readonly("status", [](const RoundLog& r) { return std::string(status_name(r.status)); })
      .def_readonly("value", &RoundLog::value)
      .def_property_readonly("cuts_added", [](const RoundLog& r) { return named_counts(r.cuts_added); })
      .def_readonly("blocks_added", &RoundLog::blocks_added)
      .def_readonly("caps_added", &RoundLog::caps_added);

  py::class_<SolveReport>(m, "SolveReport")
      .def_property_readonly("ok", &SolveReport::ok)
      .def_property_readonly("status", [](const SolveReport& r) { return std::string(status_name(r.status)); })
      .def_readonly("diagnostics", &SolveReport::diagnostics)
      .def_readonly("rounds", &SolveReport::rounds)
      .def_readonly("value", &SolveReport::value)
      .def_readonly("feasible_value", &SolveReport::feasible_value)
      .def_readonly("rank_ratio", &SolveReport::rank_ratio)
      .def_property_readonly("x", [](const SolveReport& r) { return r.point.x; })
      .def_property_readonly("X", [](const SolveReport& r) { return r.point.X; })
      .def_property_readonly("cut_counts", [](const SolveReport& r) { return named_counts(r.cut_counts); })
      .def_readonly("soc_blocks", &SolveReport::soc_blocks)
      .def_readonly("rank_one_x", &SolveReport::rank_one_x);

  m.def(
      "run",
      [](const BoxQpInstance& inst, const std::string& level, const DriverConfig& config) {
        return run(inst, RelaxationLevel::parse(level), config, backend());
      },
      py::arg("instance"), py::arg("level") = "soc", py::arg("config") = DriverConfig{},
      py::call_guard<py::gil_scoped_release>(),
      "Cutting-plane driver at a relaxation level (psd+diag, psd+rlt, psd+rlt+tri, etri1, etri123, soc).");

  m.def(
      "catalog", [](const std::string& family) { return rows_of(catalog(parse_family(family))); },
      "Reference rows of a cut family; columns x1 x2 x3 X11 X22 X33 X12 X13 X23 b.");
  m.def(
      "generate_family", [](const std::string& family) { return rows_of(generate_family(parse_family(family))); },
      "Rows of a family regenerated from its base inequalities.");

  m.def(
      "violation_table",
      [](int which) {
        std::vector<std::tuple<std::string, std::string, double, bool>> out;
        for (const TableCell& c : violation_table(which, backend())) out.emplace_back(c.row, c.col, c.value, c.ok);
        return out;
      },
      py::arg("which"), py::call_guard<py::gil_scoped_release>(),
      "Cells (row, column, value, ok) of violation grid 1 or 2.");
}
