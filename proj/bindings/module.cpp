#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "dsp/dsp2.hpp"
#include "dsp/graph.hpp"
#include "dsp/instances.hpp"
#include "dsp/kdsp.hpp"
#include "dsp/oracle.hpp"

namespace py = pybind11;

PYBIND11_MODULE(dspk, m) {
  m.doc() = "exact solvers for k disjoint shortest paths on unit-length "
            "undirected graphs";

  py::class_<dsp::Instance>(m, "Instance")
      .def_property_readonly("k", [](const dsp::Instance& i) { return i.k; })
      .def_property_readonly(
          "n", [](const dsp::Instance& i) { return i.graph.num_vertices(); })
      .def_property_readonly(
          "m", [](const dsp::Instance& i) { return i.graph.num_edges(); })
      .def_property_readonly(
          "terminals", [](const dsp::Instance& i) { return i.terminals; })
      .def("__repr__", [](const dsp::Instance& i) {
        return "<Instance n=" + std::to_string(i.graph.num_vertices()) +
               " m=" + std::to_string(i.graph.num_edges()) +
               " k=" + std::to_string(i.k) + ">";
      });

  m.def("parse_instance", &dsp::parse_instance_text,
        "parse an instance from its text form", py::arg("text"));
  m.def("format_instance", &dsp::format_instance, py::arg("instance"));
  m.def("fig1", &dsp::builtin_fig1, "the built-in worked two-pair example");
  m.def("gen_random", &dsp::gen_random, py::arg("n"), py::arg("edge_prob"),
        py::arg("k"), py::arg("seed"));
  m.def(
      "positions",
      [](const dsp::Instance& inst) {
        return dsp::compute_positions(inst).pos;
      },
      "per-vertex BFS distance vector from each source", py::arg("instance"));

  m.def(
      "solve_dsp2",
      [](const dsp::Instance& inst) -> std::optional<std::vector<dsp::Path>> {
        auto sol = dsp::solve_dsp2(inst);
        if (!sol) return std::nullopt;
        return sol->paths;
      },
      "exact two-pair solver; returns the paths or None", py::arg("instance"));

  m.def(
      "solve_kdsp",
      [](const dsp::Instance& inst, long long budget, bool require_complete,
         int threads) {
        dsp::KdspConfig cfg;
        cfg.guess_budget = budget;
        cfg.require_complete = require_complete;
        cfg.threads = threads;
        dsp::KdspResult res = dsp::solve_kdsp(inst, cfg);
        py::dict out;
        out["status"] = res.status == dsp::KdspStatus::kYes
                            ? "yes"
                            : (res.status == dsp::KdspStatus::kNo ? "no"
                                                                  : "unknown");
        out["paths"] = res.solution
                           ? py::cast(res.solution->paths)
                           : py::none().cast<py::object>();
        out["guesses"] = res.guesses;
        out["complete"] = res.complete;
        return out;
      },
      "exact solver for any number of pairs", py::arg("instance"),
      py::arg("budget") = 1'000'000, py::arg("require_complete") = false,
      py::arg("threads") = 1);

  m.def(
      "oracle_solve",
      [](const dsp::Instance& inst, int max_paths) {
        dsp::EnumLimits limits;
        limits.max_paths_per_pair = max_paths;
        dsp::OracleResult res = dsp::oracle_solve(inst, limits);
        py::dict out;
        out["status"] = res.status == dsp::OracleStatus::kYes
                            ? "yes"
                            : (res.status == dsp::OracleStatus::kNo
                                   ? "no"
                                   : "unknown");
        out["paths"] = res.solution
                           ? py::cast(res.solution->paths)
                           : py::none().cast<py::object>();
        return out;
      },
      "exhaustive ground-truth solver for small instances",
      py::arg("instance"), py::arg("max_paths") = 100000);

  m.def(
      "verify",
      [](const dsp::Instance& inst, const std::vector<dsp::Path>& paths) {
        dsp::Solution sol{paths};
        dsp::Verdict v =
            dsp::verify_solution(inst, dsp::compute_positions(inst), sol);
        return std::make_pair(v.ok, v.violation);
      },
      "check a candidate solution; returns (ok, violation)",
      py::arg("instance"), py::arg("paths"));
}
