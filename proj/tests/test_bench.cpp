#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "gridllm/bench.hpp"
#include "support.hpp"

using namespace gridllm;

namespace {

const std::string kData = GRIDLLM_DATA_DIR;

Scenario small_scenario(const std::string& id = "small") {
    return Scenario{id, load_map("6 4 0.5\n......\n.##...\n...#..\n......\n"), {0, 0}, {5, 3}, "go", {}, 2, 0};
}

std::vector<TrialResult> random_rows(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    const std::vector<std::string> ids{"astar", "rrt", "grounded:mock"};
    std::vector<TrialResult> rows;
    for (int i = 0; i < n; ++i) {
        TrialResult r;
        r.planner_id = ids[rng() % ids.size()];
        r.scenario_id = "s";
        r.planning_time_ms = u(rng);
        r.scorer_wall_time_ms = u(rng);
        r.correct = rng() % 3 != 0;
        r.path_length_m = u(rng);
        r.replan_count = static_cast<int>(rng() % 3);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

TEST(RunTrial, AstarCorrectOnStaticScenario) {
    const auto r = run_trial(small_scenario(), "astar", 1);
    EXPECT_TRUE(r.correct);
    EXPECT_DOUBLE_EQ(r.path_length_m, 8 * 0.5);
    EXPECT_EQ(r.replan_count, 0);
    EXPECT_EQ(r.scorer_wall_time_ms, 0.0);
    EXPECT_GE(r.planning_time_ms, 0.0);
}

TEST(RunTrial, OracleGroundedMatchesAstarLength) {
    for (const auto& inst : gridllm::testing::feasible_instances(12, 12, 0.25, 15)) {
        const Scenario sc{"r", inst.grid, inst.start, inst.goal, "go", {}, 2, 0};
        const auto a = run_trial(sc, "astar", 0);
        const auto g = run_trial(sc, "grounded:oracle", 0);
        ASSERT_TRUE(a.correct && g.correct);
        EXPECT_EQ(g.path_length_m, a.path_length_m);
    }
}

TEST(RunTrial, InvalidFullPathProposalIsIncorrect) {
    // The L-shaped mock proposal walks straight through the wall.
    const Scenario sc{"wall", load_map("5 3 1.0\n.....\n..#..\n.....\n"), {0, 1}, {4, 1}, "go", {}, 2, 0};
    const auto r = run_trial(sc, "fullpath:mock", 0);
    EXPECT_FALSE(r.correct);
    EXPECT_TRUE(run_trial(sc, "fullpath:oracle", 0).correct);
}

TEST(RunTrial, UnknownPlannerAndGatedRemote) {
    EXPECT_THROW(run_trial(small_scenario(), "dstar", 0), UnknownPlanner);
    EXPECT_THROW(run_trial(small_scenario(), "grounded:remote", 0), ConfigError);
    EXPECT_THROW(make_planner("fullpath:remote", {}, 0), ConfigError);
}

TEST(RunTrial, RrtCorridorCorrectnessRate) {
    const Scenario sc = load_scenario(kData + "/scenarios/corridor.json");
    int correct = 0;
    for (int i = 0; i < 100; ++i) correct += run_trial(sc, "rrt", trial_seed(sc.id, "rrt", i)).correct;
    EXPECT_GE(correct, 95);
}

TEST(TrialSeed, DistinctAndStable) {
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 50; ++i) {
        seen.insert(trial_seed("a", "astar", i));
        seen.insert(trial_seed("a", "rrt", i));
        seen.insert(trial_seed("b", "astar", i));
    }
    EXPECT_EQ(seen.size(), 150u);
    EXPECT_EQ(trial_seed("a", "astar", 0), trial_seed("a", "astar", 0));
}

TEST(Aggregate, MatchesBruteForce) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto rows = random_rows(seed, 31);
        const auto report = aggregate(rows);
        for (const auto& a : report.planners) {
            std::vector<double> t;
            double lsum = 0, ssum = 0, rsum = 0;
            int ok = 0;
            for (const auto& r : rows) {
                if (r.planner_id != a.planner_id) continue;
                t.push_back(r.planning_time_ms);
                ssum += r.scorer_wall_time_ms;
                rsum += r.replan_count;
                if (r.correct) {
                    ++ok;
                    lsum += r.path_length_m;
                }
            }
            const double n = static_cast<double>(t.size());
            double tsum = 0;
            for (double v : t) tsum += v;
            std::sort(t.begin(), t.end());
            const double median = t.size() % 2 ? t[t.size() / 2] : (t[t.size() / 2 - 1] + t[t.size() / 2]) / 2;
            EXPECT_EQ(a.trials, static_cast<int>(n));
            EXPECT_NEAR(a.mean_time_ms, tsum / n, 1e-12);
            EXPECT_NEAR(a.median_time_ms, median, 1e-12);
            EXPECT_NEAR(a.mean_scorer_time_ms, ssum / n, 1e-12);
            EXPECT_NEAR(a.mean_replans, rsum / n, 1e-12);
            EXPECT_NEAR(a.correctness_rate, ok / n, 1e-12);
            ASSERT_EQ(a.mean_path_length_m.has_value(), ok > 0);
            if (ok) EXPECT_NEAR(*a.mean_path_length_m, lsum / ok, 1e-12);
        }
        EXPECT_EQ(aggregate(rows).planners, report.planners);
    }
}

TEST(RunSuite, CountsAndOrder) {
    SuiteConfig cfg;
    cfg.scenarios = {small_scenario("s1"), small_scenario("s2")};
    cfg.planners = {"astar", "grounded:mock"};
    cfg.trials_per_pair = 3;
    cfg.parallelism = 3;
    int streamed = 0;
    const auto res = run_suite(cfg, [&](const TrialResult&) { ++streamed; });
    ASSERT_EQ(res.rows.size(), 12u);
    EXPECT_EQ(streamed, 12);
    EXPECT_EQ(res.rows[0].scenario_id, "s1");
    EXPECT_EQ(res.rows[3].planner_id, "grounded:mock");
    EXPECT_EQ(res.rows[6].scenario_id, "s2");
    EXPECT_EQ(res.rows[4].seed, trial_seed("s1", "grounded:mock", 1));
    ASSERT_EQ(res.report.planners.size(), 2u);
    EXPECT_EQ(res.report.planners[0].trials, 6);
}

TEST(RunSuite, SingleTripleAggregatesThree) {
    SuiteConfig cfg;
    cfg.scenarios = {small_scenario()};
    cfg.planners = {"rrt"};
    cfg.trials_per_pair = 3;
    const auto res = run_suite(cfg);
    EXPECT_EQ(res.rows.size(), 3u);
    EXPECT_EQ(res.report.planners.at(0).trials, 3);
}

TEST(RunSuite, ParallelismDoesNotChangeResults) {
    SuiteConfig cfg;
    cfg.scenarios = {load_scenario(kData + "/scenarios/corridor.json"), small_scenario()};
    cfg.planners = {"astar", "rrt", "grounded:mock"};
    cfg.trials_per_pair = 2;
    const auto serial = run_suite(cfg);
    cfg.parallelism = 6;
    const auto parallel = run_suite(cfg);
    ASSERT_EQ(serial.rows.size(), parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        EXPECT_EQ(serial.rows[i].seed, parallel.rows[i].seed);
        EXPECT_EQ(serial.rows[i].correct, parallel.rows[i].correct);
        EXPECT_EQ(serial.rows[i].path_length_m, parallel.rows[i].path_length_m);
        EXPECT_EQ(serial.rows[i].executed, parallel.rows[i].executed);
    }
}

TEST(SuiteConfig, Validation) {
    SuiteConfig cfg;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.scenarios = {small_scenario()};
    cfg.planners = {"bogus"};
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.planners = {"astar"};
    cfg.parallelism = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(SuiteFile, BundledSuitesLoad) {
    const auto cfg = load_suite(kData + "/suites/default.json");
    EXPECT_EQ(cfg.planners, (std::vector<std::string>{"astar", "rrt", "grounded:mock"}));
    EXPECT_EQ(cfg.scenarios.size(), 5u);
    EXPECT_DOUBLE_EQ(cfg.options.grounded.revisit_penalty, 0.5);
    EXPECT_THROW(load_suite(kData + "/suites/missing.json"), Error);
}

TEST(Csv, HeaderAndRow) {
    TrialResult r;
    r.planner_id = "astar";
    r.scenario_id = "x";
    r.seed = 42;
    r.planning_time_ms = 1.5;
    r.correct = true;
    r.path_length_m = 6.34;
    r.replan_count = 2;
    EXPECT_EQ(csv_row(r), "astar,x,42,1.500000,0.000000,true,6.340000,2");
    std::ostringstream out;
    write_csv(out, {r});
    EXPECT_EQ(out.str(), std::string(kCsvHeader) + "\nastar,x,42,1.500000,0.000000,true,6.340000,2\n");
}

TEST(Report, HeaderAndTable) {
    const auto rows = random_rows(1, 12);
    const auto text = format_report(aggregate(rows), rows);
    EXPECT_NE(text.find("for reference only"), std::string::npos);
    EXPECT_NE(text.find("6.34 m"), std::string::npos);
    for (const char* col : {"mean_time_ms", "correctness", "mean_path_len_m"}) {
        EXPECT_NE(text.find(col), std::string::npos);
    }
}

TEST(Plot, TrajectoriesLabelled) {
    const Scenario sc = load_scenario(kData + "/scenarios/reference_world_a.json");
    std::vector<LabeledPath> paths;
    for (const char* id : {"astar", "rrt", "grounded:mock"}) {
        paths.push_back({id, run_trial(sc, id, 0).executed});
    }
    const auto svg = plot_trajectories(sc, paths);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    const std::regex poly("<polyline");
    EXPECT_EQ(std::distance(std::sregex_iterator(svg.begin(), svg.end(), poly), std::sregex_iterator()), 3);
    for (const auto& p : paths) EXPECT_NE(svg.find(">" + p.label + "<"), std::string::npos);
    EXPECT_THROW(plot_trajectories(sc, {}), EmptyPathList);
}

TEST(Plot, MetricsPanels) {
    const auto rows = random_rows(2, 20);
    const auto svg = plot_metrics(aggregate(rows));
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    for (const char* title : {"Processing time", "Path correctness", "Path length"}) {
        EXPECT_NE(svg.find(title), std::string::npos) << title;
    }
}
