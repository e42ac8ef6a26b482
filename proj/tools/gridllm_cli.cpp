// gridllm command-line tool: plan, bench, gen-maps, plot.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 no path / planning failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gridllm/bench.hpp"
#include "gridllm/classical.hpp"
#include "gridllm/gridmap.hpp"
#include "gridllm/grounded.hpp"
#include "gridllm/scorers.hpp"
#include "gridllm/simulator.hpp"

namespace fs = std::filesystem;
using namespace gridllm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoPath = 2;

GridPose parse_pose(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("coordinate", "expected x,y but got '" + text + "'");
    try {
        std::size_t used_x = 0;
        std::size_t used_y = 0;
        const int x = std::stoi(text.substr(0, comma), &used_x);
        const int y = std::stoi(text.substr(comma + 1), &used_y);
        if (used_x != comma || used_y != text.size() - comma - 1) throw std::invalid_argument(text);
        return {x, y};
    } catch (const std::logic_error&) {
        throw CLI::ValidationError("coordinate", "expected x,y but got '" + text + "'");
    }
}

const CLI::Validator kPoseValidator(
    [](std::string& s) {
        try {
            parse_pose(s);
        } catch (const CLI::ValidationError& e) {
            return std::string(e.what());
        }
        return std::string();
    },
    "X,Y");

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    out << content;
}

struct EndpointFlags {
    std::string base_url;
    std::string model;
    std::string api_key_env;
    std::string cassette;
    bool allow_network = false;

    void add(CLI::App* app) {
        app->add_option("--base-url", base_url, "chat-completions base URL");
        app->add_option("--model", model, "chat model name");
        app->add_option("--api-key-env", api_key_env, "environment variable holding the API key");
        app->add_option("--cassette", cassette, "replay remote calls from a cassette file")->check(CLI::ExistingFile);
        app->add_flag("--allow-network", allow_network, "permit the remote scorer to reach the network");
    }

    void apply(PlannerOptions& o) const {
        if (!base_url.empty()) o.endpoint.base_url = base_url;
        if (!model.empty()) o.endpoint.model_name = model;
        if (!api_key_env.empty()) o.endpoint.api_key_env = api_key_env;
        if (!cassette.empty()) o.cassette = cassette;
        o.allow_network = allow_network;
    }
};

// ---------------------------------------------------------------------------------------------

struct PlanCmd {
    std::string map_file;
    std::string start;
    std::string goal;
    std::string planner = "astar";
    std::string scorer = "mock";
    std::string instruction = "navigate to the goal";
    double tau = 0.5;
    std::uint64_t seed = 0;
    int connectivity = 4;
    int max_steps = 0;
    double revisit_penalty = 0.5;
    std::string out_dir;
    EndpointFlags endpoint;

    int run() const {
        const OccupancyGrid grid = load_map_file(map_file);
        const GridPose s = parse_pose(start);
        const GridPose g = parse_pose(goal);

        PlannerOptions opts;
        opts.connectivity = connectivity == 8 ? Connectivity::Eight : Connectivity::Four;
        opts.tau = tau;
        opts.rrt.seed = seed;
        opts.grounded.revisit_penalty = revisit_penalty;
        if (max_steps > 0) opts.grounded.max_steps = max_steps;
        endpoint.apply(opts);

        const auto t0 = std::chrono::steady_clock::now();
        std::optional<std::vector<GridPose>> waypoints;
        std::string failure;
        std::vector<StepRecord> trace;

        if (planner == "grounded") {
            std::unique_ptr<TaskScorer> backend;
            if (scorer == "mock") {
                backend = std::make_unique<MockScorer>(tau);
            } else if (scorer == "oracle") {
                backend = std::make_unique<OracleScorer>();
            } else {
                backend = std::make_unique<RemoteScorer>(make_chat_client(opts));
            }
            auto result = gridllm::plan(*backend, grid, s, Instruction{instruction, g}, opts.grounded);
            trace = std::move(result.trace);
            if (result.ok()) {
                waypoints = std::move(result.path.waypoints);
            } else {
                failure = fmt::format("{}: {}", failure_name(result.failure->kind), result.failure->detail);
            }
        } else {
            const std::string id = planner == "fullpath" ? "fullpath:" + scorer : planner;
            auto p = make_planner(id, opts, seed);
            auto attempt = p->plan(grid, s, g, instruction);
            waypoints = std::move(attempt.waypoints);
            failure = attempt.failure;
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

        if (!out_dir.empty() && !trace.empty()) {
            std::ostringstream ss;
            write_trace(ss, trace);
            write_file(fs::path(out_dir) / "trace.jsonl", ss.str());
        }
        if (!waypoints) {
            std::cerr << "no path: " << (failure.empty() ? "goal unreachable" : failure) << '\n';
            return kExitNoPath;
        }
        for (const auto& p : *waypoints) std::cout << '(' << p.x << ',' << p.y << ")\n";

        Scenario sc{"cli", grid, s, g, instruction, {}, 1, seed};
        const double length = path_length(PlannedPath{*waypoints, grid.resolution()});
        std::cerr << fmt::format("length {:.3f} m, steps {}, time {:.3f} ms\n", length, waypoints->size() - 1, ms);
        if (!out_dir.empty()) {
            write_file(fs::path(out_dir) / "path.svg", plot_trajectories(sc, {{planner, *waypoints}}));
        }
        // Only one-shot proposals can be structurally invalid; the other planners are valid by construction.
        const auto violation = validate_external_path(sc, *waypoints);
        if (planner == "fullpath" && violation) {
            std::cerr << fmt::format("no path: proposed path violates rule '{}' at waypoint {}\n",
                                     rule_name(violation->rule), violation->index);
            return kExitNoPath;
        }
        return kExitOk;
    }
};

struct BenchCmd {
    std::string suite;
    std::string out_dir;
    int parallelism = 0;
    EndpointFlags endpoint;

    int run() const {
        SuiteConfig cfg = load_suite(suite);
        if (parallelism > 0) cfg.parallelism = parallelism;
        endpoint.apply(cfg.options);

        const SuiteResult result = run_suite(cfg);
        const fs::path dir(out_dir);
        std::ostringstream csv;
        write_csv(csv, result.rows);
        write_file(dir / "trials.csv", csv.str());
        write_file(dir / "report.txt", format_report(result.report, result.rows));
        write_file(dir / "metrics.svg", plot_metrics(result.report));

        for (const auto& sc : cfg.scenarios) {
            std::vector<LabeledPath> paths;
            for (const auto& id : cfg.planners) {
                const auto it = std::find_if(result.rows.begin(), result.rows.end(), [&](const TrialResult& r) {
                    return r.scenario_id == sc.id && r.planner_id == id;
                });
                if (it != result.rows.end()) paths.push_back({id, it->executed});
            }
            write_file(dir / fmt::format("trajectories_{}.svg", sc.id), plot_trajectories(sc, paths));
        }
        std::cout << format_report(result.report, result.rows);
        return kExitOk;
    }
};

struct GenMapsCmd {
    int count = 1;
    int width = 20;
    int height = 20;
    double density = 0.25;
    std::uint64_t seed = 0;
    double resolution = 1.0;
    std::string out_dir;

    int run() const {
        if (count < 1) throw InvalidParams("count must be >= 1");
        for (int i = 0; i < count; ++i) {
            const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
            const OccupancyGrid grid = random_map(width, height, density, s, resolution);
            const auto name = fmt::format("map_{}x{}_d{:.3f}_s{}.map", width, height, density, s);
            write_file(fs::path(out_dir) / name, serialize_map(grid));
            std::cout << (fs::path(out_dir) / name).string() << '\n';
        }
        return kExitOk;
    }
};

struct PlotCmd {
    std::string scenario;
    std::vector<std::string> planners{"astar", "rrt", "grounded:mock"};
    std::uint64_t seed = 0;
    std::string out_dir;
    EndpointFlags endpoint;

    int run() const {
        const Scenario sc = load_scenario(scenario);
        PlannerOptions opts;
        endpoint.apply(opts);
        std::vector<LabeledPath> paths;
        for (const auto& id : planners) {
            auto p = make_planner(id, opts, seed);
            const ExecutionRecord rec = execute(sc, *p);
            paths.push_back({id, rec.visited});
        }
        const auto file = fs::path(out_dir) / fmt::format("trajectories_{}.svg", sc.id);
        write_file(file, plot_trajectories(sc, paths));
        std::cout << file.string() << '\n';
        return kExitOk;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gridllm: grounded grid path planning and benchmark harness"};
    app.set_config("--config", "", "read options from a TOML/INI file (flags > env > file > defaults)");
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    PlanCmd plan;
    auto* plan_cmd = app.add_subcommand("plan", "plan a single path and print its waypoints");
    plan_cmd->add_option("--map", plan.map_file, "ASCII map file")->required()->check(CLI::ExistingFile);
    plan_cmd->add_option("--start", plan.start, "start cell x,y")->required()->check(kPoseValidator);
    plan_cmd->add_option("--goal", plan.goal, "goal cell x,y")->required()->check(kPoseValidator);
    plan_cmd->add_option("--planner", plan.planner, "planner")
        ->check(CLI::IsMember({"astar", "rrt", "grounded", "fullpath"}))
        ->envname("GRIDLLM_PLANNER");
    plan_cmd->add_option("--scorer", plan.scorer, "task scorer backend for grounded/fullpath")
        ->check(CLI::IsMember({"mock", "oracle", "remote"}))
        ->envname("GRIDLLM_SCORER");
    plan_cmd->add_option("--instruction", plan.instruction, "natural-language instruction");
    plan_cmd->add_option("--tau", plan.tau, "mock scorer temperature")->check(CLI::PositiveNumber)->envname("GRIDLLM_TAU");
    plan_cmd->add_option("--seed", plan.seed, "RRT seed")->envname("GRIDLLM_SEED");
    plan_cmd->add_option("--connectivity", plan.connectivity, "4 or 8 (A* only)")->check(CLI::IsMember({4, 8}));
    plan_cmd->add_option("--max-steps", plan.max_steps, "grounded step limit")->check(CLI::NonNegativeNumber);
    plan_cmd->add_option("--revisit-penalty", plan.revisit_penalty, "grounded revisit penalty")
        ->check(CLI::Range(0.0, 1.0));
    plan_cmd->add_option("--out-dir", plan.out_dir, "write trace.jsonl and path.svg here");
    plan.endpoint.add(plan_cmd);

    BenchCmd bench;
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark suite");
    bench_cmd->add_option("suite", bench.suite, "suite JSON file")->required();
    bench_cmd->add_option("--out-dir", bench.out_dir, "output directory")->required();
    bench_cmd->add_option("--parallelism", bench.parallelism, "worker threads")
        ->check(CLI::PositiveNumber)
        ->envname("GRIDLLM_PARALLELISM");
    bench.endpoint.add(bench_cmd);

    GenMapsCmd gen;
    auto* gen_cmd = app.add_subcommand("gen-maps", "generate random maps");
    gen_cmd->add_option("--count", gen.count, "number of maps")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--width", gen.width, "width in cells")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--height", gen.height, "height in cells")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--density", gen.density, "obstacle density in [0,1]")->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--seed", gen.seed, "seed of the first map");
    gen_cmd->add_option("--resolution", gen.resolution, "meters per cell")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--out-dir", gen.out_dir, "output directory")->required();

    PlotCmd plot;
    auto* plot_cmd = app.add_subcommand("plot", "execute planners on a scenario and plot their trajectories");
    plot_cmd->add_option("--scenario", plot.scenario, "scenario JSON file")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--planners", plot.planners, "planner ids")->delimiter(',');
    plot_cmd->add_option("--seed", plot.seed, "RRT seed");
    plot_cmd->add_option("--out-dir", plot.out_dir, "output directory")->required();
    plot.endpoint.add(plot_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*plan_cmd) return plan.run();
        if (*bench_cmd) return bench.run();
        if (*gen_cmd) return gen.run();
        if (*plot_cmd) return plot.run();
    } catch (const InvalidEndpoint& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
