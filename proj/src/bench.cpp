#include "gridllm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>
#include <utility>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace gridllm {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

class AStarPlanner final : public Planner {
public:
    explicit AStarPlanner(Connectivity c) : connectivity_(c) {}
    PlanAttempt plan(const OccupancyGrid& map, GridPose start, GridPose goal, const std::string&) override {
        auto path = astar(map, start, goal, connectivity_);
        if (!path) return {std::nullopt, "no path", 0.0};
        return {std::move(path->waypoints), {}, 0.0};
    }

private:
    Connectivity connectivity_;
};

class RrtPlanner final : public Planner {
public:
    explicit RrtPlanner(RrtParams params) : params_(params) {}
    PlanAttempt plan(const OccupancyGrid& map, GridPose start, GridPose goal, const std::string&) override {
        auto path = rrt(map, start, goal, params_);
        // A replan draws a fresh stream so it does not retrace the failed tree.
        ++params_.seed;
        if (!path) return {std::nullopt, "no path within iteration budget", 0.0};
        return {std::move(path->waypoints), {}, 0.0};
    }

private:
    RrtParams params_;
};

/// Forwards to a backend and accumulates time spent inside remote calls.
class TimedScorer final : public TaskScorer {
public:
    TimedScorer(std::unique_ptr<TaskScorer> inner, bool remote) : inner_(std::move(inner)), remote_(remote) {}
    std::array<double, 4> score(const TaskScorerQuery& q) override {
        const auto t0 = Clock::now();
        struct Accumulate {
            TimedScorer* self;
            Clock::time_point t0;
            ~Accumulate() {
                if (self->remote_) self->seconds_ += seconds_since(t0);
            }
        } acc{this, t0};
        return inner_->score(q);
    }
    std::string name() const override { return inner_->name(); }
    double take_seconds() { return std::exchange(seconds_, 0.0); }

private:
    std::unique_ptr<TaskScorer> inner_;
    bool remote_;
    double seconds_ = 0.0;
};

class GroundedPlanner final : public Planner {
public:
    GroundedPlanner(std::unique_ptr<TaskScorer> scorer, bool remote, PlannerConfig config)
        : scorer_(std::move(scorer), remote), config_(config) {}

    PlanAttempt plan(const OccupancyGrid& map, GridPose start, GridPose goal, const std::string& text) override {
        return finish(gridllm::plan(scorer_, map, start, Instruction{text, goal}, config_));
    }
    PlanAttempt replan(const OccupancyGrid& map, GridPose current, GridPose goal, const std::string& text) override {
        return finish(gridllm::replan(scorer_, map, current, Instruction{text, goal}, config_));
    }

private:
    PlanAttempt finish(GroundedPlan result) {
        PlanAttempt out;
        out.scorer_seconds = scorer_.take_seconds();
        if (result.ok()) {
            out.waypoints = std::move(result.path.waypoints);
        } else {
            out.failure = fmt::format("{}: {}", failure_name(result.failure->kind), result.failure->detail);
        }
        return out;
    }

    TimedScorer scorer_;
    PlannerConfig config_;
};

/// One-shot planner: the source proposes a whole coordinate list which is parsed but not
/// validated, so infeasible proposals surface as incorrect trials.
class FullPathPlanner final : public Planner {
public:
    FullPathPlanner(std::unique_ptr<PathReplySource> source, bool remote)
        : source_(std::move(source)), remote_(remote) {}

    PlanAttempt plan(const OccupancyGrid& map, GridPose start, GridPose goal, const std::string& text) override {
        PlanAttempt out;
        const auto t0 = Clock::now();
        try {
            const std::string reply = source_->propose(map, start, Instruction{text, goal});
            if (remote_) out.scorer_seconds = seconds_since(t0);
            out.waypoints = parse_coordinate_list(reply).waypoints;
        } catch (const std::exception& e) {
            if (remote_) out.scorer_seconds = seconds_since(t0);
            out.failure = e.what();
        }
        return out;
    }

private:
    std::unique_ptr<PathReplySource> source_;
    bool remote_;
};

}  // namespace

ChatClient make_chat_client(const PlannerOptions& options) {
    std::shared_ptr<ChatTransport> transport;
    if (!options.cassette.empty()) {
        transport = std::make_shared<CassetteTransport>(options.cassette);
    } else if (!options.allow_network) {
        throw ConfigError("remote backend needs network access; pass --allow-network or a cassette");
    }
    ChatClient client(options.endpoint, std::move(transport));
    if (!options.cassette.empty()) {
        const char* key = std::getenv(options.endpoint.api_key_env.c_str());
        if (key == nullptr || *key == '\0') client.set_api_key("cassette-replay");
    }
    return client;
}

bool is_known_planner(const std::string& id) {
    static const std::vector<std::string> known{"astar",          "rrt",           "grounded:mock",
                                                "grounded:oracle", "grounded:remote", "fullpath:mock",
                                                "fullpath:oracle", "fullpath:remote"};
    return std::find(known.begin(), known.end(), id) != known.end();
}

std::unique_ptr<Planner> make_planner(const std::string& id, const PlannerOptions& options, std::uint64_t seed) {
    if (id == "astar") return std::make_unique<AStarPlanner>(options.connectivity);
    if (id == "rrt") {
        RrtParams params = options.rrt;
        params.seed = seed;
        params.validate();
        return std::make_unique<RrtPlanner>(params);
    }
    if (id == "grounded:mock") {
        return std::make_unique<GroundedPlanner>(std::make_unique<MockScorer>(options.tau), false, options.grounded);
    }
    if (id == "grounded:oracle") {
        return std::make_unique<GroundedPlanner>(std::make_unique<OracleScorer>(), false, options.grounded);
    }
    if (id == "grounded:remote") {
        return std::make_unique<GroundedPlanner>(std::make_unique<RemoteScorer>(make_chat_client(options)), true,
                                                 options.grounded);
    }
    if (id == "fullpath:mock") return std::make_unique<FullPathPlanner>(std::make_unique<MockPathSource>(), false);
    if (id == "fullpath:oracle") {
        return std::make_unique<FullPathPlanner>(std::make_unique<OraclePathSource>(), false);
    }
    if (id == "fullpath:remote") {
        return std::make_unique<FullPathPlanner>(std::make_unique<RemotePathSource>(make_chat_client(options)), true);
    }
    throw UnknownPlanner(fmt::format("unknown planner '{}'", id));
}

std::uint64_t trial_seed(const std::string& scenario_id, const std::string& planner_id, int trial_index) {
    const std::string key = fmt::format("{}|{}|{}", scenario_id, planner_id, trial_index);
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

/// Times every planner call and splits remote scorer time out of it.
class TimingPlanner final : public Planner {
public:
    explicit TimingPlanner(Planner& inner) : inner_(inner) {}
    PlanAttempt plan(const OccupancyGrid& m, GridPose s, GridPose g, const std::string& t) override {
        return timed([&] { return inner_.plan(m, s, g, t); });
    }
    PlanAttempt replan(const OccupancyGrid& m, GridPose s, GridPose g, const std::string& t) override {
        return timed([&] { return inner_.replan(m, s, g, t); });
    }
    double total_seconds = 0.0;
    double scorer_seconds = 0.0;

private:
    template <class F>
    PlanAttempt timed(F&& f) {
        const auto t0 = Clock::now();
        PlanAttempt a = f();
        total_seconds += seconds_since(t0);
        scorer_seconds += a.scorer_seconds;
        return a;
    }
    Planner& inner_;
};

}  // namespace

TrialResult run_trial(const Scenario& scenario, const std::string& planner_id, std::uint64_t seed,
                      const PlannerOptions& options) {
    if (!is_known_planner(planner_id)) throw UnknownPlanner(fmt::format("unknown planner '{}'", planner_id));

    TrialResult row;
    row.planner_id = planner_id;
    row.scenario_id = scenario.id;
    row.seed = seed;

    try {
        auto planner = make_planner(planner_id, options, seed);
        TimingPlanner timing(*planner);
        const ExecutionRecord rec = execute(scenario, timing);

        row.planning_time_ms = std::max(0.0, timing.total_seconds - timing.scorer_seconds) * 1e3;
        row.scorer_wall_time_ms = timing.scorer_seconds * 1e3;
        row.replan_count = rec.replan_count;
        row.executed = rec.visited;
        row.path_length_m = path_length(PlannedPath{rec.visited, scenario.map.resolution()});

        const auto violation = validate_external_path(scenario, rec.visited);
        row.correct = rec.reached_goal && !rec.collided && !violation;
        if (rec.collided) {
            row.detail = "collision";
        } else if (!rec.failure.empty()) {
            row.detail = rec.failure;
        } else if (violation) {
            row.detail = fmt::format("violation {} at waypoint {}", rule_name(violation->rule), violation->index);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        row.correct = false;
        row.detail = e.what();
    }
    return row;
}

AggregateReport aggregate(const std::vector<TrialResult>& rows) {
    AggregateReport report;
    std::vector<std::string> order;
    std::map<std::string, std::vector<const TrialResult*>> groups;
    for (const auto& r : rows) {
        if (!groups.count(r.planner_id)) order.push_back(r.planner_id);
        groups[r.planner_id].push_back(&r);
    }
    for (const auto& id : order) {
        const auto& g = groups[id];
        PlannerAggregate a;
        a.planner_id = id;
        a.trials = static_cast<int>(g.size());

        std::vector<double> times;
        double scorer = 0.0;
        double replans = 0.0;
        double length = 0.0;
        int correct = 0;
        for (const auto* r : g) {
            times.push_back(r->planning_time_ms);
            scorer += r->scorer_wall_time_ms;
            replans += r->replan_count;
            if (r->correct) {
                ++correct;
                length += r->path_length_m;
            }
        }
        a.mean_time_ms = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
        std::sort(times.begin(), times.end());
        const std::size_t n = times.size();
        a.median_time_ms = n % 2 == 1 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
        a.mean_scorer_time_ms = scorer / static_cast<double>(n);
        a.mean_replans = replans / static_cast<double>(n);
        a.correctness_rate = static_cast<double>(correct) / static_cast<double>(n);
        if (correct > 0) a.mean_path_length_m = length / correct;
        report.planners.push_back(a);
    }
    return report;
}

void SuiteConfig::validate() const {
    if (scenarios.empty()) throw ConfigError("suite needs at least one scenario");
    if (planners.empty()) throw ConfigError("suite needs at least one planner");
    if (trials_per_pair < 1) throw ConfigError("trials_per_pair must be >= 1");
    if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
    for (const auto& p : planners) {
        if (!is_known_planner(p)) throw ConfigError(fmt::format("unknown planner '{}'", p));
    }
}

namespace {

void apply_options(const json& j, PlannerOptions& o, const std::filesystem::path& base) {
    if (j.contains("tau")) o.tau = j["tau"].get<double>();
    if (j.contains("revisit_penalty")) o.grounded.revisit_penalty = j["revisit_penalty"].get<double>();
    if (j.contains("max_steps")) o.grounded.max_steps = j["max_steps"].get<int>();
    if (j.contains("connectivity")) {
        const int c = j["connectivity"].get<int>();
        if (c != 4 && c != 8) throw ConfigError("connectivity must be 4 or 8");
        o.connectivity = c == 4 ? Connectivity::Four : Connectivity::Eight;
    }
    if (j.contains("rrt")) {
        const auto& r = j["rrt"];
        o.rrt.step_size = r.value("step_size", o.rrt.step_size);
        o.rrt.goal_bias = r.value("goal_bias", o.rrt.goal_bias);
        o.rrt.max_iterations = r.value("max_iterations", o.rrt.max_iterations);
        o.rrt.goal_tolerance = r.value("goal_tolerance", o.rrt.goal_tolerance);
    }
    if (j.contains("endpoint")) {
        const auto& e = j["endpoint"];
        o.endpoint.base_url = e.value("base_url", o.endpoint.base_url);
        o.endpoint.model_name = e.value("model_name", o.endpoint.model_name);
        o.endpoint.api_key_env = e.value("api_key_env", o.endpoint.api_key_env);
        o.endpoint.timeout_s = e.value("timeout_s", o.endpoint.timeout_s);
        o.endpoint.max_retries = e.value("max_retries", o.endpoint.max_retries);
        o.endpoint.temperature = e.value("temperature", o.endpoint.temperature);
    }
    if (j.contains("cassette")) o.cassette = (base / j["cassette"].get<std::string>()).string();
}

}  // namespace

SuiteConfig load_suite(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("cannot open suite file '{}'", path));
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    SuiteConfig cfg;
    try {
        const json doc = json::parse(in);
        if (doc.value("version", "") != "suite_v1") throw ConfigError("suite version must be 'suite_v1'");
        for (const auto& s : doc.at("scenarios")) cfg.scenarios.push_back(load_scenario((base / s.get<std::string>()).string()));
        cfg.planners = doc.at("planners").get<std::vector<std::string>>();
        cfg.trials_per_pair = doc.value("trials_per_pair", 1);
        cfg.parallelism = doc.value("parallelism", 1);
        if (doc.contains("options")) apply_options(doc["options"], cfg.options, base);
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("suite file '{}': {}", path, e.what()));
    } catch (const InvalidScenario& e) {
        throw ConfigError(fmt::format("suite file '{}': {}", path, e.what()));
    } catch (const MapError& e) {
        throw ConfigError(fmt::format("suite file '{}': {}", path, e.what()));
    }
    cfg.validate();
    return cfg;
}

SuiteResult run_suite(const SuiteConfig& config, const std::function<void(const TrialResult&)>& on_row) {
    config.validate();
    struct Job {
        std::size_t scenario;
        std::string planner;
        int trial;
    };
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < config.scenarios.size(); ++s) {
        for (const auto& p : config.planners) {
            for (int t = 0; t < config.trials_per_pair; ++t) jobs.push_back({s, p, t});
        }
    }

    std::vector<TrialResult> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex sink;
    std::exception_ptr error;
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const Job& job = jobs[i];
            const Scenario& sc = config.scenarios[job.scenario];
            try {
                TrialResult row = run_trial(sc, job.planner, trial_seed(sc.id, job.planner, job.trial), config.options);
                std::lock_guard lock(sink);
                if (on_row) on_row(row);
                rows[i] = std::move(row);
            } catch (...) {
                std::lock_guard lock(sink);
                if (!error) error = std::current_exception();
            }
        }
    };

    const int threads = std::min<int>(config.parallelism, static_cast<int>(jobs.size()));
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);

    SuiteResult result;
    result.report = aggregate(rows);
    result.rows = std::move(rows);
    return result;
}

std::string csv_row(const TrialResult& r) {
    return fmt::format("{},{},{},{:.6f},{:.6f},{},{:.6f},{}", r.planner_id, r.scenario_id, r.seed,
                       r.planning_time_ms, r.scorer_wall_time_ms, r.correct ? "true" : "false", r.path_length_m,
                       r.replan_count);
}

void write_csv(std::ostream& out, const std::vector<TrialResult>& rows) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) out << csv_row(r) << '\n';
}

std::string format_report(const AggregateReport& report, const std::vector<TrialResult>& rows) {
    std::string out;
    out += "# gridllm benchmark report\n";
    out += "# correctness: per-trial flag; a trial is correct when the executed path reaches the goal without\n";
    out += "#   collision and passes structural validation (start anchoring, 4-connected steps, free cells).\n";
    out += "# mean path length is taken over correct trials only.\n";
    out += "# planning time excludes remote scorer transport, which is reported separately.\n";
    out += "# Published reference figures, listed for reference only and NOT reproduction targets\n";
    out += "#   (they depend on unpublished maps, hardware and a live hosted model):\n";
    out += "#   processing time: language-model planner 10 ms, A* 72 ms, RRT 21 ms\n";
    out += "#   path correctness: language-model planner 81%, A* 95%, RRT 87%\n";
    out += "#   mean path length: language-model planner 6.34 m\n\n";

    out += fmt::format("{:<18} {:>6} {:>14} {:>16} {:>14} {:>12} {:>18} {:>10}\n", "planner", "trials",
                       "mean_time_ms", "median_time_ms", "scorer_ms", "correctness", "mean_path_len_m",
                       "replans");
    for (const auto& a : report.planners) {
        out += fmt::format("{:<18} {:>6} {:>14.3f} {:>16.3f} {:>14.3f} {:>12.3f} {:>18} {:>10.2f}\n", a.planner_id,
                           a.trials, a.mean_time_ms, a.median_time_ms, a.mean_scorer_time_ms, a.correctness_rate,
                           a.mean_path_length_m ? fmt::format("{:.3f}", *a.mean_path_length_m) : "n/a",
                           a.mean_replans);
    }

    // Per scenario: mean length of correct trials for each planner.
    std::vector<std::string> scenarios;
    std::map<std::pair<std::string, std::string>, std::pair<double, int>> lengths;
    for (const auto& r : rows) {
        if (std::find(scenarios.begin(), scenarios.end(), r.scenario_id) == scenarios.end()) {
            scenarios.push_back(r.scenario_id);
        }
        auto& [sum, n] = lengths[{r.scenario_id, r.planner_id}];
        if (r.correct) {
            sum += r.path_length_m;
            ++n;
        }
    }
    out += "\n# per-scenario mean path length over correct trials (m)\n";
    for (const auto& s : scenarios) {
        out += fmt::format("{}:", s);
        for (const auto& a : report.planners) {
            const auto it = lengths.find({s, a.planner_id});
            if (it == lengths.end()) continue;
            const auto [sum, n] = it->second;
            out += n > 0 ? fmt::format(" {}={:.3f}", a.planner_id, sum / n) : fmt::format(" {}=n/a", a.planner_id);
        }
        out += '\n';
    }

    std::string failures;
    for (const auto& r : rows) {
        if (!r.correct) failures += fmt::format("{} {} seed={}: {}\n", r.planner_id, r.scenario_id, r.seed, r.detail);
    }
    if (!failures.empty()) out += "\n# incorrect trials\n" + failures;
    return out;
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

}  // namespace

std::string plot_trajectories(const Scenario& scenario, const std::vector<LabeledPath>& paths) {
    if (paths.empty()) throw EmptyPathList();
    const OccupancyGrid& map = scenario.map;
    const double cell = std::max(4.0, 600.0 / std::max(map.width(), map.height()));
    const double w = cell * map.width();
    const double h = cell * map.height();
    const double legend_h = 18.0 * static_cast<double>(paths.size()) + 10.0;

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n",
        w, h + legend_h, w, h + legend_h);
    svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#ffffff\" stroke=\"#000000\"/>\n",
                       w, h);
    // Blocked cells, merged into horizontal runs.
    svg += "<g fill=\"#404040\">\n";
    for (int y = 0; y < map.height(); ++y) {
        int x = 0;
        while (x < map.width()) {
            if (map.at({x, y}) == CellState::Free) {
                ++x;
                continue;
            }
            const CellState kind = map.at({x, y});
            int run = x;
            while (run < map.width() && map.at({run, y}) == kind) ++run;
            svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\"{}/>\n", x * cell,
                               y * cell, (run - x) * cell, cell,
                               kind == CellState::Unknown ? " fill=\"#a0a0a0\"" : "");
            x = run;
        }
    }
    svg += "</g>\n";
    for (const auto& ob : scenario.dynamic_obstacles) {
        svg += fmt::format(
            "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#ff9900\" opacity=\"0.7\"/>\n",
            ob.cell.x * cell, ob.cell.y * cell, cell, cell);
    }

    for (std::size_t i = 0; i < paths.size(); ++i) {
        const char* color = kPalette[i % std::size(kPalette)];
        std::string points;
        for (const auto& p : paths[i].waypoints) {
            if (!points.empty()) points += ' ';
            points += fmt::format("{:.2f},{:.2f}", (p.x + 0.5) * cell, (p.y + 0.5) * cell);
        }
        svg += fmt::format(
            "<polyline id=\"path-{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.2f}\" stroke-opacity=\"0.85\" "
            "points=\"{}\"><title>{}</title></polyline>\n",
            i, color, std::max(1.5, cell * 0.3), points, paths[i].label);
        const double ly = h + 14.0 + 18.0 * static_cast<double>(i);
        svg += fmt::format("<line x1=\"8\" y1=\"{:.1f}\" x2=\"28\" y2=\"{:.1f}\" stroke=\"{}\" stroke-width=\"3\"/>\n",
                           ly - 4, ly - 4, color);
        svg += fmt::format("<text x=\"34\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n", ly,
                           paths[i].label);
    }

    const double r = std::max(2.5, cell * 0.45);
    svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\" fill=\"#2ca02c\"><title>start</title></circle>\n",
                       (scenario.start.x + 0.5) * cell, (scenario.start.y + 0.5) * cell, r);
    svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\" fill=\"#d62728\"><title>goal</title></circle>\n",
                       (scenario.goal.x + 0.5) * cell, (scenario.goal.y + 0.5) * cell, r);
    svg += "</svg>\n";
    return svg;
}

std::string plot_metrics(const AggregateReport& report) {
    if (report.planners.empty()) throw EmptyPathList();
    constexpr double panel_w = 260.0;
    constexpr double panel_h = 220.0;
    constexpr double margin = 40.0;
    const std::size_t n = report.planners.size();

    struct Panel {
        const char* title;
        std::function<double(const PlannerAggregate&)> value;
    };
    const Panel panels[] = {
        {"Processing time (ms)", [](const PlannerAggregate& a) { return a.mean_time_ms; }},
        {"Path correctness (rate)", [](const PlannerAggregate& a) { return a.correctness_rate; }},
        {"Path length (m)", [](const PlannerAggregate& a) { return a.mean_path_length_m.value_or(0.0); }},
    };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\">\n", 3 * panel_w,
        panel_h + 2 * margin);
    for (std::size_t p = 0; p < 3; ++p) {
        const double x0 = static_cast<double>(p) * panel_w + margin;
        const double base = panel_h + margin / 2;
        const double plot_h = panel_h - margin;
        double vmax = 0.0;
        for (const auto& a : report.planners) vmax = std::max(vmax, panels[p].value(a));
        if (vmax <= 0.0) vmax = 1.0;
        svg += fmt::format("<text x=\"{:.1f}\" y=\"16\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n", x0,
                           panels[p].title);
        svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#000\"/>\n", x0,
                           base, x0 + panel_w - margin, base);
        const double bar_w = (panel_w - margin) / static_cast<double>(n) * 0.7;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = panels[p].value(report.planners[i]);
            const double bh = plot_h * v / vmax;
            const double bx = x0 + (panel_w - margin) * (static_cast<double>(i) + 0.15) / static_cast<double>(n);
            svg += fmt::format(
                "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"{}\"><title>{} {:.4g}</title></rect>\n",
                bx, base - bh, bar_w, bh, kPalette[i % std::size(kPalette)], report.planners[i].planner_id, v);
            svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"10\">{:.3g}</text>\n",
                               bx, base - bh - 3, v);
            svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n",
                               bx, base + 14, report.planners[i].planner_id);
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace gridllm
