#pragma once

// Benchmark harness: planner registry, trials, suites, aggregate report and SVG plots.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gridllm/classical.hpp"
#include "gridllm/grounded.hpp"
#include "gridllm/scorers.hpp"
#include "gridllm/simulator.hpp"

namespace gridllm {

class UnknownPlanner : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

struct PlannerOptions {
    Connectivity connectivity = Connectivity::Four;  // astar only
    RrtParams rrt;
    double tau = 0.5;
    PlannerConfig grounded;
    ChatEndpointConfig endpoint;
    /// Remote backends stay disabled unless this is set or a cassette is given.
    bool allow_network = false;
    std::string cassette;
};

/// Builds a planner by id: astar, rrt, grounded:{mock,oracle,remote}, fullpath:{mock,oracle,remote}.
/// `seed` overrides the RRT seed.
std::unique_ptr<Planner> make_planner(const std::string& planner_id, const PlannerOptions& options,
                                      std::uint64_t seed);

bool is_known_planner(const std::string& planner_id);

/// Chat client for the remote backends. Throws ConfigError unless a cassette is configured or
/// network access was explicitly allowed.
ChatClient make_chat_client(const PlannerOptions& options);

struct TrialResult {
    std::string planner_id;
    std::string scenario_id;
    std::uint64_t seed = 0;
    double planning_time_ms = 0.0;
    double scorer_wall_time_ms = 0.0;
    bool correct = false;
    double path_length_m = 0.0;
    int replan_count = 0;

    // Not part of the CSV row.
    std::vector<GridPose> executed;
    std::string detail;
};

TrialResult run_trial(const Scenario& scenario, const std::string& planner_id, std::uint64_t seed,
                      const PlannerOptions& options = {});

/// FNV-1a over "scenario_id|planner_id|trial_index".
std::uint64_t trial_seed(const std::string& scenario_id, const std::string& planner_id, int trial_index);

struct PlannerAggregate {
    std::string planner_id;
    int trials = 0;
    double mean_time_ms = 0.0;
    double median_time_ms = 0.0;
    double mean_scorer_time_ms = 0.0;
    double correctness_rate = 0.0;
    /// Over correct trials only; nullopt when none were correct.
    std::optional<double> mean_path_length_m;
    double mean_replans = 0.0;

    friend bool operator==(const PlannerAggregate&, const PlannerAggregate&) = default;
};

struct AggregateReport {
    std::vector<PlannerAggregate> planners;
};

/// Pure function of the rows; planners appear in first-seen order.
AggregateReport aggregate(const std::vector<TrialResult>& rows);

struct SuiteConfig {
    std::vector<Scenario> scenarios;
    std::vector<std::string> planners;
    int trials_per_pair = 1;
    int parallelism = 1;
    PlannerOptions options;

    void validate() const;
};

/// JSON suite file: {"version": "suite_v1", "scenarios": [paths...], "planners": [...],
/// "trials_per_pair": n, "parallelism": n, "options": {...}}. Paths are relative to the file.
SuiteConfig load_suite(const std::string& path);

struct SuiteResult {
    std::vector<TrialResult> rows;  // scenario-major, then planner, then trial index
    AggregateReport report;
};

/// `on_row` is invoked under a single lock as each trial finishes.
SuiteResult run_suite(const SuiteConfig& config, const std::function<void(const TrialResult&)>& on_row = {});

inline constexpr std::string_view kCsvHeader =
    "planner_id,scenario_id,seed,planning_time_ms,scorer_wall_time_ms,correct,path_length_m,replan_count";

std::string csv_row(const TrialResult& row);
void write_csv(std::ostream& out, const std::vector<TrialResult>& rows);

/// Plain-text report: header notes, the per-planner table, per-scenario path lengths.
std::string format_report(const AggregateReport& report, const std::vector<TrialResult>& rows);

struct LabeledPath {
    std::string label;
    std::vector<GridPose> waypoints;
};

class EmptyPathList : public Error {
public:
    EmptyPathList() : Error("no paths to plot") {}
};

/// Map cells, start/goal markers and one labelled polyline per path.
std::string plot_trajectories(const Scenario& scenario, const std::vector<LabeledPath>& paths);

/// Three bar panels: mean planning time, correctness rate, mean path length.
std::string plot_metrics(const AggregateReport& report);

}  // namespace gridllm
