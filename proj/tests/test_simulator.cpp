#include <gtest/gtest.h>

#include "gridllm/bench.hpp"
#include "gridllm/simulator.hpp"
#include "support.hpp"

using namespace gridllm;

namespace {

const std::string kData = GRIDLLM_DATA_DIR;

/// Replays fixed waypoint lists: the first for plan(), the rest for successive replans.
class ScriptPlanner final : public Planner {
public:
    explicit ScriptPlanner(std::vector<std::vector<GridPose>> plans) : plans_(std::move(plans)) {}
    PlanAttempt plan(const OccupancyGrid& map, GridPose start, GridPose, const std::string&) override {
        maps.push_back(map);
        starts.push_back(start);
        if (next_ >= plans_.size()) return {std::nullopt, "script exhausted", 0.0};
        return {plans_[next_++], "", 0.0};
    }
    std::vector<OccupancyGrid> maps;
    std::vector<GridPose> starts;

private:
    std::vector<std::vector<GridPose>> plans_;
    std::size_t next_ = 0;
};

Scenario scenario(const std::string& map_text, GridPose s, GridPose g, std::vector<DynamicObstacle> obs = {},
                  int radius = 2) {
    return Scenario{"t", load_map(map_text), s, g, "go", std::move(obs), radius, 0};
}

std::vector<GridPose> row(int y, int x0, int x1) {
    std::vector<GridPose> out;
    for (int x = x0; x <= x1; ++x) out.push_back({x, y});
    return out;
}

}  // namespace

TEST(Execute, StaticScenarioReachesGoal) {
    auto planner = make_planner("astar", {}, 0);
    const auto sc = scenario("5 1 1.0\n.....\n", {0, 0}, {4, 0});
    const auto rec = execute(sc, *planner);
    EXPECT_TRUE(rec.reached_goal);
    EXPECT_FALSE(rec.collided);
    EXPECT_EQ(rec.replan_count, 0);
    EXPECT_EQ(rec.steps_taken, 4);
    EXPECT_EQ(rec.visited, row(0, 0, 4));
    EXPECT_EQ(rec.visit_ticks, (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(Execute, StartAtGoal) {
    ScriptPlanner p({});
    const auto rec = execute(scenario("2 1 1.0\n..\n", {0, 0}, {0, 0}), p);
    EXPECT_TRUE(rec.reached_goal);
    EXPECT_TRUE(p.maps.empty());
}

TEST(Execute, TwoCorridorReplan) {
    // Hand trace: Up wins the tie at (1,3); at tick 4 the robot stands on (3,1), which is within
    // radius 2 of the obstacle at (5,1), so the remaining path is blocked and a replan follows.
    const Scenario sc = load_scenario(kData + "/scenarios/two_corridor_dynamic.json");
    auto planner = make_planner("grounded:oracle", {}, 0);
    const auto rec = execute(sc, *planner);
    EXPECT_EQ(rec.replan_count, 1);
    EXPECT_FALSE(rec.collided);
    EXPECT_TRUE(rec.reached_goal);
    ASSERT_GE(rec.visited.size(), 5u);
    EXPECT_EQ(rec.visited[4], (GridPose{3, 1}));
    EXPECT_EQ(rec.steps_taken, 4 + 16);
}

TEST(Execute, UnseenObstacleCausesCollision) {
    // The obstacle appears right where the robot is about to step, outside any chance to sense it.
    const auto sc = scenario("6 1 1.0\n......\n", {0, 0}, {5, 0}, {{{3, 0}, 3}}, 1);
    ScriptPlanner p({row(0, 0, 5)});
    const auto rec = execute(sc, p);
    EXPECT_TRUE(rec.collided);
    EXPECT_FALSE(rec.reached_goal);
    EXPECT_EQ(rec.visited.back(), (GridPose{2, 0}));
}

TEST(Execute, ObstacleOffPathDoesNotReplan) {
    const auto sc = scenario("6 2 1.0\n......\n......\n", {0, 0}, {5, 0}, {{{3, 1}, 0}}, 2);
    ScriptPlanner p({row(0, 0, 5)});
    const auto rec = execute(sc, p);
    EXPECT_TRUE(rec.reached_goal);
    EXPECT_EQ(rec.replan_count, 0);
}

TEST(Execute, WorkingMapOnlyGains) {
    const auto sc = scenario("7 3 1.0\n.......\n.......\n.......\n", {0, 1}, {6, 1},
                             {{{3, 1}, 0}, {{5, 1}, 0}, {{5, 2}, 2}}, 2);
    ScriptPlanner p({row(1, 0, 6), {{1, 1}, {1, 2}, {2, 2}, {3, 2}, {4, 2}, {5, 2}, {6, 2}, {6, 1}},
                     {{3, 2}, {4, 2}, {4, 1}, {4, 0}, {5, 0}, {6, 0}, {6, 1}}});
    const auto rec = execute(sc, p);
    ASSERT_EQ(p.maps.size(), 3u);
    for (std::size_t i = 1; i < p.maps.size(); ++i) {
        for (std::size_t c = 0; c < p.maps[i].size(); ++c) {
            if (p.maps[i - 1].cells()[c] == CellState::Occupied) EXPECT_EQ(p.maps[i].cells()[c], CellState::Occupied);
        }
        EXPECT_GE(p.maps[i].count(CellState::Occupied), p.maps[i - 1].count(CellState::Occupied));
    }
    EXPECT_TRUE(rec.reached_goal);
}

TEST(Execute, VisitedCellsFreeAtTheirTick) {
    const Scenario sc = load_scenario(kData + "/scenarios/two_corridor_dynamic.json");
    for (const char* id : {"astar", "rrt", "grounded:oracle", "grounded:mock"}) {
        auto planner = make_planner(id, {}, 3);
        const auto rec = execute(sc, *planner);
        ASSERT_EQ(rec.visited.size(), rec.visit_ticks.size());
        for (std::size_t i = 0; i < rec.visited.size(); ++i) {
            EXPECT_TRUE(world_at(sc, rec.visit_ticks[i]).is_free(rec.visited[i])) << id;
            if (i > 0) EXPECT_EQ(manhattan(rec.visited[i - 1], rec.visited[i]), 1) << id;
        }
    }
}

TEST(Execute, PlannerFailureRecorded) {
    ScriptPlanner p({});
    const auto rec = execute(scenario("3 1 1.0\n...\n", {0, 0}, {2, 0}), p);
    EXPECT_FALSE(rec.reached_goal);
    EXPECT_EQ(rec.failure, "script exhausted");
}

TEST(Execute, InvalidScenario) {
    ScriptPlanner p({});
    EXPECT_THROW(execute(scenario("3 1 1.0\n.#.\n", {1, 0}, {2, 0}), p), InvalidScenario);
    EXPECT_THROW(execute(scenario("3 1 1.0\n...\n", {0, 0}, {2, 0}, {{{5, 0}, 1}}), p), InvalidScenario);
    EXPECT_THROW(execute(scenario("3 1 1.0\n...\n", {0, 0}, {2, 0}, {}, 0), p), InvalidScenario);
}

TEST(ValidatePath, Rules) {
    const auto sc = scenario("4 2 1.0\n..#.\n....\n", {0, 0}, {3, 0});
    using R = PathViolation::Rule;
    EXPECT_FALSE(validate_external_path(sc, {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {3, 1}, {3, 0}}));
    EXPECT_EQ(validate_external_path(sc, {{1, 0}, {0, 0}})->rule, R::Start);
    EXPECT_EQ(validate_external_path(sc, {})->rule, R::Start);
    const auto jump = validate_external_path(sc, {{0, 0}, {1, 1}, {2, 1}});
    EXPECT_EQ(jump->rule, R::Adjacency);
    EXPECT_EQ(jump->index, 1u);
    EXPECT_EQ(validate_external_path(sc, {{0, 0}, {1, 0}, {2, 0}, {3, 0}})->rule, R::Blocked);
    EXPECT_EQ(validate_external_path(sc, {{0, 0}, {1, 0}})->rule, R::Goal);
    EXPECT_EQ(rule_name(R::Adjacency), "adjacency");
}

TEST(ScenarioFile, Parse) {
    const auto sc = parse_scenario(R"({"version":"scenario_v1","id":"x","map":"3 1 1.0\n...\n","start":[0,0],
        "goal":[2,0],"instruction":"go","dynamic_obstacles":[{"cell":[1,0],"appears_at_step":4}]})");
    EXPECT_EQ(sc.id, "x");
    EXPECT_EQ(sc.goal, (GridPose{2, 0}));
    EXPECT_EQ(sc.sensing_radius, 2);
    ASSERT_EQ(sc.dynamic_obstacles.size(), 1u);
    EXPECT_EQ(sc.dynamic_obstacles[0].appears_at_step, 4);
    EXPECT_THROW(parse_scenario("{"), InvalidScenario);
    EXPECT_THROW(parse_scenario(R"({"version":"scenario_v2"})"), InvalidScenario);
    EXPECT_THROW(parse_scenario(R"({"version":"scenario_v1","id":"x","start":[0,0],"goal":[1,0],"instruction":"g"})"),
                 InvalidScenario);
}

TEST(ScenarioFile, BundledScenariosLoad) {
    for (const char* name : {"corridor", "two_corridor_dynamic", "reference_world_a", "reference_world_b",
                             "reference_world_c"}) {
        const auto sc = load_scenario(kData + "/scenarios/" + name + ".json");
        EXPECT_EQ(sc.id, name);
        EXPECT_TRUE(gridllm::testing::bfs_steps(sc.map, sc.start, sc.goal)) << name;
    }
    const auto world = load_map_file(kData + "/maps/reference_world.map");
    EXPECT_EQ(world.width(), 100);
    EXPECT_EQ(world.height(), 100);
    EXPECT_DOUBLE_EQ(world.resolution(), 0.1);
}
