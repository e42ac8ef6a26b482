#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gridllm/bench.hpp"
#include "gridllm/classical.hpp"
#include "gridllm/grounded.hpp"
#include "gridllm/scorers.hpp"
#include "gridllm/simulator.hpp"
#include "gridllm/translator.hpp"

namespace py = pybind11;
using namespace gridllm;

// Poses cross the boundary as plain (x, y) tuples.
namespace pybind11::detail {
template <>
struct type_caster<GridPose> {
    PYBIND11_TYPE_CASTER(GridPose, const_name("tuple[int, int]"));

    bool load(handle src, bool) {
        if (!isinstance<sequence>(src)) return false;
        const auto seq = reinterpret_borrow<sequence>(src);
        if (seq.size() != 2) return false;
        value.x = seq[0].cast<int>();
        value.y = seq[1].cast<int>();
        return true;
    }
    static handle cast(const GridPose& p, return_value_policy, handle) {
        return py::make_tuple(p.x, p.y).release();
    }
};
}  // namespace pybind11::detail

namespace {

py::object maybe_path(const std::optional<PlannedPath>& p) {
    if (!p) return py::none();
    return py::cast(p->waypoints);
}

py::dict trial_dict(const TrialResult& r) {
    py::dict d;
    d["planner_id"] = r.planner_id;
    d["scenario_id"] = r.scenario_id;
    d["seed"] = r.seed;
    d["planning_time_ms"] = r.planning_time_ms;
    d["scorer_wall_time_ms"] = r.scorer_wall_time_ms;
    d["correct"] = r.correct;
    d["path_length_m"] = r.path_length_m;
    d["replan_count"] = r.replan_count;
    d["executed"] = r.executed;
    d["detail"] = r.detail;
    return d;
}

std::unique_ptr<TaskScorer> scorer_named(const std::string& name, double tau) {
    if (name == "mock") return std::make_unique<MockScorer>(tau);
    if (name == "oracle") return std::make_unique<OracleScorer>();
    throw InvalidParams("scorer must be 'mock' or 'oracle'");
}

}  // namespace

PYBIND11_MODULE(_gridllm, m) {
    m.doc() = "grid path planning with a language-model style action scorer";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<MalformedReply>(m, "MalformedReply", base.ptr());
    py::register_exception<MapError>(m, "MapError", base.ptr());

    py::enum_<CellState>(m, "CellState")
        .value("Free", CellState::Free)
        .value("Occupied", CellState::Occupied)
        .value("Unknown", CellState::Unknown);

    py::class_<OccupancyGrid>(m, "OccupancyGrid")
        .def(py::init<int, int, double, CellState>(), py::arg("width"), py::arg("height"),
             py::arg("resolution") = 1.0, py::arg("fill") = CellState::Free)
        .def_property_readonly("width", &OccupancyGrid::width)
        .def_property_readonly("height", &OccupancyGrid::height)
        .def_property_readonly("resolution", &OccupancyGrid::resolution)
        .def("at", &OccupancyGrid::at)
        .def("set", &OccupancyGrid::set)
        .def("is_free", &OccupancyGrid::is_free)
        .def("count", &OccupancyGrid::count)
        .def("__eq__", [](const OccupancyGrid& a, const OccupancyGrid& b) { return a == b; })
        .def("__str__", &serialize_map);

    m.def("load_map", [](const std::string& text) { return load_map(text); });
    m.def("load_map_file", &load_map_file);
    m.def("serialize_map", &serialize_map);
    m.def("random_map", &random_map, py::arg("width"), py::arg("height"), py::arg("density"), py::arg("seed"),
          py::arg("resolution") = 1.0);

    m.def(
        "astar",
        [](const OccupancyGrid& g, GridPose s, GridPose t, bool eight) {
            return maybe_path(astar(g, s, t, eight ? Connectivity::Eight : Connectivity::Four));
        },
        py::arg("grid"), py::arg("start"), py::arg("goal"), py::arg("eight_connected") = false);
    m.def(
        "dijkstra_oracle",
        [](const OccupancyGrid& g, GridPose s, GridPose t, bool eight) {
            return dijkstra_oracle(g, s, t, eight ? Connectivity::Eight : Connectivity::Four);
        },
        py::arg("grid"), py::arg("start"), py::arg("goal"), py::arg("eight_connected") = false);
    m.def(
        "rrt",
        [](const OccupancyGrid& g, GridPose s, GridPose t, std::uint64_t seed, double step_size, double goal_bias,
           int max_iterations, double goal_tolerance) {
            RrtParams p;
            p.seed = seed;
            p.step_size = step_size;
            p.goal_bias = goal_bias;
            p.max_iterations = max_iterations;
            p.goal_tolerance = goal_tolerance;
            return maybe_path(rrt(g, s, t, p));
        },
        py::arg("grid"), py::arg("start"), py::arg("goal"), py::arg("seed") = 0, py::arg("step_size") = 3.0,
        py::arg("goal_bias") = 0.05, py::arg("max_iterations") = 5000, py::arg("goal_tolerance") = 1.0);
    m.def(
        "path_length",
        [](const std::vector<GridPose>& wp, double resolution) { return path_length({wp, resolution}); },
        py::arg("waypoints"), py::arg("resolution") = 1.0);

    m.def(
        "plan",
        [](const OccupancyGrid& g, GridPose start, GridPose goal, const std::string& instruction,
           const std::string& scorer, double tau, double revisit_penalty, std::optional<int> max_steps) {
            PlannerConfig cfg;
            cfg.revisit_penalty = revisit_penalty;
            cfg.max_steps = max_steps;
            auto backend = scorer_named(scorer, tau);
            const auto result = plan(*backend, g, start, Instruction{instruction, goal}, cfg);
            std::ostringstream trace;
            write_trace(trace, result.trace);
            py::dict d;
            d["path"] = result.path.waypoints;
            d["failure"] = result.failure ? py::cast(std::string(failure_name(result.failure->kind))) : py::none();
            d["scorer_calls"] = result.scorer_calls;
            d["trace"] = trace.str();
            return d;
        },
        py::arg("grid"), py::arg("start"), py::arg("goal"), py::arg("instruction") = "navigate to the goal",
        py::arg("scorer") = "mock", py::arg("tau") = 0.5, py::arg("revisit_penalty") = 0.5,
        py::arg("max_steps") = py::none());

    m.def("parse_action_scores", [](const std::string& s) { return parse_action_scores(s); });
    m.def("parse_coordinate_list", [](const std::string& s) { return parse_coordinate_list(s).waypoints; });
    m.def("format_scores", &format_scores);
    m.def("format_path", &format_path);
    m.def(
        "step_prompt",
        [](const OccupancyGrid& g, GridPose state, GridPose goal, const std::string& instruction) {
            std::array<GridPose, 4> cands{};
            for (std::size_t k = 0; k < 4; ++k) cands[k] = apply(state, default_actions()[k]);
            const auto p = serialize_step_prompt(g, state, Instruction{instruction, goal}, cands);
            return py::make_tuple(p.system_text, p.user_text);
        },
        py::arg("grid"), py::arg("state"), py::arg("goal"), py::arg("instruction"));

    m.def(
        "run_trial",
        [](const std::string& scenario_path, const std::string& planner_id, std::uint64_t seed) {
            return trial_dict(run_trial(load_scenario(scenario_path), planner_id, seed));
        },
        py::arg("scenario_path"), py::arg("planner_id"), py::arg("seed") = 0);
    m.def(
        "run_suite",
        [](const std::string& suite_path) {
            const auto cfg = load_suite(suite_path);
            SuiteResult res;
            {
                py::gil_scoped_release release;
                res = run_suite(cfg);
            }
            py::list rows;
            for (const auto& r : res.rows) rows.append(trial_dict(r));
            std::ostringstream csv;
            write_csv(csv, res.rows);
            py::dict d;
            d["rows"] = rows;
            d["csv"] = csv.str();
            d["report"] = format_report(res.report, res.rows);
            return d;
        },
        py::arg("suite_path"));
}
