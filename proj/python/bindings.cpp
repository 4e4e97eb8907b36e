#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "slidingcubes/formats.hpp"
#include "slidingcubes/hardness.hpp"
#include "slidingcubes/oracle.hpp"
#include "slidingcubes/planner.hpp"
#include "slidingcubes/surface.hpp"
#include "slidingcubes/teleport.hpp"

namespace py = pybind11;
using namespace sc;

namespace {

using PyCell = std::tuple<int, int, int>;
using PyCells = std::vector<PyCell>;

Configuration to_config(const PyCells& cells) {
    CellVec v;
    v.reserve(cells.size());
    for (const auto& [x, y, z] : cells) v.push_back({x, y, z});
    return Configuration(std::move(v));
}

PyCells from_config(const Configuration& c) {
    PyCells out;
    out.reserve(c.size());
    for (const auto& cell : c.cells()) out.emplace_back(cell.x, cell.y, cell.z);
    return out;
}

Schedule schedule_from_text(const std::string& text) {
    std::istringstream in(text);
    return read_schedule(in);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "parallel sliding cubes: validation, oracle, planning and instance generation";

    m.def("is_connected",
          [](const PyCells& cells) {
              CellVec v;
              for (const auto& [x, y, z] : cells) v.push_back({x, y, z});
              return is_connected(v);
          },
          py::arg("cells"));

    m.def("is_compact", [](const PyCells& cells) { return is_compact(to_config(cells)); },
          py::arg("cells"));

    m.def("free_modules",
          [](const PyCells& cells) {
              PyCells out;
              for (const auto& c : free_modules(to_config(cells)))
                  out.emplace_back(c.x, c.y, c.z);
              return out;
          },
          py::arg("cells"));

    m.def("validate_schedule",
          [](const PyCells& initial, const std::string& schedule_text, const PyCells& final_cells)
              -> std::optional<std::string> {
              Configuration c1 = to_config(initial);
              Configuration c2 = to_config(final_cells);
              Schedule s = schedule_from_text(schedule_text);
              auto err = validate_schedule(c1, s, c2);
              if (!err) return std::nullopt;
              if (err->violations.empty())
                  return "step " + std::to_string(err->step + 1) + ": " + err->detail;
              return "step " + std::to_string(err->step + 1) + ": " +
                     rule_name(err->violations.front().rule);
          },
          py::arg("initial"), py::arg("schedule"), py::arg("final"));

    m.def("min_makespan",
          [](const PyCells& a, const PyCells& b, size_t max_steps,
             size_t max_parallel) -> std::optional<size_t> {
              OracleOptions opts;
              opts.step_budget = max_steps;
              opts.move_budget_per_step = max_parallel;
              auto res = bfs_min_makespan(to_config(a), to_config(b), opts);
              if (!res.known) return std::nullopt;
              return res.makespan;
          },
          py::arg("a"), py::arg("b"), py::arg("max_steps") = 8, py::arg("max_parallel") = 4);

    m.def("plan",
          [](const PyCells& a, const PyCells& b, size_t fallback_threshold) {
              PlanOptions opts;
              opts.fallback_threshold = fallback_threshold;
              PlanReport rep = plan(to_config(a), to_config(b), opts);
              py::dict d;
              d["schedule"] = write_schedule(rep.schedule);
              d["makespan"] = rep.makespan;
              d["n"] = rep.n;
              d["area"] = rep.area;
              d["height"] = rep.height;
              d["ratio"] = rep.ratio;
              d["fallback"] = rep.used_fallback;
              return d;
          },
          py::arg("a"), py::arg("b"), py::arg("fallback_threshold") = 2625);

    m.def("teleport",
          [](const PyCells& config, const PyCells& surface, const PyCell& module,
             const PyCell& target) {
              CellVec s;
              for (const auto& [x, y, z] : surface) s.push_back({x, y, z});
              TeleportRequest req{
                  to_config(config), std::move(s),
                  {std::get<0>(module), std::get<1>(module), std::get<2>(module)},
                  {std::get<0>(target), std::get<1>(target), std::get<2>(target)}};
              return write_schedule(teleport(req));
          },
          py::arg("config"), py::arg("surface"), py::arg("module"), py::arg("target"));

    m.def("gen_sat_instance",
          [](int num_vars, const std::vector<std::vector<int>>& clauses) {
              MonotoneFormula f;
              f.num_vars = num_vars;
              f.clauses = clauses;
              SatInstance inst = gen_sat_instance(f);
              py::dict d;
              d["initial"] = from_config(inst.c_initial);
              d["final"] = from_config(inst.c_final);
              return d;
          },
          py::arg("num_vars"), py::arg("clauses"));

    m.def("assignment_schedule",
          [](int num_vars, const std::vector<std::vector<int>>& clauses,
             const std::vector<bool>& assignment) {
              MonotoneFormula f;
              f.num_vars = num_vars;
              f.clauses = clauses;
              SatInstance inst = gen_sat_instance(f);
              return write_schedule(assignment_to_schedule(inst, assignment));
          },
          py::arg("num_vars"), py::arg("clauses"), py::arg("assignment"));

    m.def("parse_configuration", [](const std::string& text) {
        std::istringstream in(text);
        return from_config(read_configuration(in));
    });
    m.def("write_configuration",
          [](const PyCells& cells) { return write_configuration(to_config(cells)); });

    m.attr("__version__") = "1.0.0";
}
