#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "matchsim/deviation.hpp"
#include "matchsim/matching.hpp"
#include "matchsim/prefgen.hpp"
#include "matchsim/report.hpp"
#include "matchsim/sweep.hpp"

namespace py = pybind11;
using namespace matchsim;

namespace {

std::optional<PlotKey> plot_key(const std::optional<std::string>& name) {
  if (!name) return std::nullopt;
  if (*name == "k") return PlotKey::k;
  if (*name == "rho") return PlotKey::rho;
  throw py::value_error("plot key must be 'k' or 'rho'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Deferred acceptance truncation-manipulation simulator";

  py::class_<Market>(m, "Market")
      .def(py::init<>())
      .def_readwrite("n", &Market::n)
      .def_readwrite("k", &Market::k)
      .def_readwrite("rho", &Market::rho)
      .def_readwrite("proposer_prefs", &Market::proposer_prefs)
      .def_readwrite("recipient_prefs", &Market::recipient_prefs)
      .def("__eq__", [](const Market& a, const Market& b) { return a == b; })
      .def("__str__", &format_market)
      .def("__repr__", [](const Market& market) {
        return "<Market n=" + std::to_string(market.n) + " k=" + std::to_string(market.k) + ">";
      });

  py::class_<Matching>(m, "Matching")
      .def_readonly("proposer_to_recipient", &Matching::proposer_to_recipient)
      .def_readonly("recipient_to_proposer", &Matching::recipient_to_proposer)
      .def("pairs", [](const Matching& matching) {
        std::vector<std::pair<AgentId, AgentId>> out;
        for (AgentId p = 0; p < matching.size(); ++p) {
          if (matching.proposer_to_recipient[p] != kUnmatched) {
            out.emplace_back(p, matching.proposer_to_recipient[p]);
          }
        }
        return out;
      })
      .def("__eq__", [](const Matching& a, const Matching& b) { return a == b; });
  m.attr("UNMATCHED") = kUnmatched;

  py::class_<Deviation>(m, "Deviation")
      .def_readonly("recipient", &Deviation::recipient)
      .def_readonly("report_length", &Deviation::report_length)
      .def_readonly("truthful_rank", &Deviation::truthful_rank)
      .def_readonly("deviated_rank", &Deviation::deviated_rank);

  py::class_<DeviationReport>(m, "DeviationReport")
      .def_readonly("deviator_count", &DeviationReport::deviator_count)
      .def_readonly("deviations", &DeviationReport::deviations);

  py::class_<SweepRow>(m, "SweepRow")
      .def(py::init<>())
      .def_readwrite("n", &SweepRow::n)
      .def_readwrite("k", &SweepRow::k)
      .def_readwrite("rho", &SweepRow::rho)
      .def_readwrite("trial", &SweepRow::trial)
      .def_readwrite("seed", &SweepRow::seed)
      .def_readwrite("deviators", &SweepRow::deviators)
      .def_readwrite("ratio", &SweepRow::ratio)
      .def("__eq__", [](const SweepRow& a, const SweepRow& b) { return a == b; });

  py::class_<AggregateRow>(m, "AggregateRow")
      .def_readonly("n", &AggregateRow::n)
      .def_readonly("k", &AggregateRow::k)
      .def_readonly("rho", &AggregateRow::rho)
      .def_readonly("trials", &AggregateRow::trials)
      .def_readonly("mean_ratio", &AggregateRow::mean_ratio)
      .def_readonly("stderr_ratio", &AggregateRow::stderr_ratio);

  m.def("popularity_weights", &popularity_weights, py::arg("n"), py::arg("rho"));
  m.def("generate_market", &generate_market, py::arg("n"), py::arg("k"), py::arg("rho"),
        py::arg("seed"));
  m.def("parse_market", &parse_market, py::arg("text"));

  m.def("deferred_acceptance", &deferred_acceptance, py::arg("market"));
  m.def("is_stable", &is_stable, py::arg("market"), py::arg("matching"));
  m.def("blocking_pairs", &blocking_pairs, py::arg("market"), py::arg("matching"));

  m.def("count_deviators", &count_deviators, py::arg("market"),
        py::call_guard<py::gil_scoped_release>());
  m.def("brute_force_deviators", &brute_force_deviators, py::arg("market"),
        py::arg("max_n") = kDefaultDeviationOracleBound);

  m.def("default_n_ladder", &default_n_ladder);
  m.def("run_cell", &run_cell, py::arg("n"), py::arg("k"), py::arg("rho"), py::arg("trial"),
        py::arg("master_seed"));
  m.def(
      "run_sweep",
      [](std::vector<std::size_t> n, std::vector<std::size_t> k, std::vector<double> rho,
         std::size_t trials, std::uint64_t seed, std::size_t workers) {
        SweepConfig config{std::move(n), std::move(k), std::move(rho), trials, seed, workers};
        py::gil_scoped_release release;
        return run_sweep(config);
      },
      py::arg("n"), py::arg("k"), py::arg("rho"), py::arg("trials") = 50, py::arg("seed") = 0,
      py::arg("workers") = 1);
  m.def(
      "aggregate", [](const std::vector<SweepRow>& rows) { return aggregate(rows); },
      py::arg("rows"));

  m.def(
      "csv_text",
      [](const std::vector<SweepRow>& rows) {
        std::ostringstream out;
        write_csv(rows, out);
        return out.str();
      },
      py::arg("rows"));
  m.def(
      "write_csv",
      [](const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
        return write_csv(rows, path);
      },
      py::arg("rows"), py::arg("path"));
  m.def(
      "read_csv", [](const std::filesystem::path& path) { return read_csv(path); },
      py::arg("path"));

  m.def(
      "render_plot",
      [](const std::vector<AggregateRow>& rows, const std::string& series,
         std::optional<std::string> panel, std::optional<std::size_t> fix_k,
         std::optional<double> fix_rho, bool log_y) {
        PlotSpec spec;
        spec.series = *plot_key(series);
        spec.panel = plot_key(panel);
        spec.fix_k = fix_k;
        spec.fix_rho = fix_rho;
        spec.log_y = log_y;
        return render_plot(rows, spec);
      },
      py::arg("rows"), py::arg("series") = "k", py::arg("panel") = py::none(),
      py::arg("fix_k") = py::none(), py::arg("fix_rho") = py::none(), py::arg("log_y") = false);

  py::register_exception<CsvError>(m, "CsvError", PyExc_ValueError);
  py::register_exception<PlotError>(m, "PlotError", PyExc_ValueError);
}
