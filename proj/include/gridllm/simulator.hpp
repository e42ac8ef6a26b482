#pragma once

// Kinematic grid-world executor. The robot advances one waypoint per tick, scheduled obstacles
// appear in the true world, and anything inside the Chebyshev sensing radius is copied into the
// robot's working map. A newly sensed obstacle on the remaining path triggers a replan.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gridllm/classical.hpp"
#include "gridllm/gridmap.hpp"

namespace gridllm {

struct DynamicObstacle {
    GridPose cell;
    int appears_at_step = 0;
};

struct Scenario {
    std::string id;
    OccupancyGrid map;
    GridPose start;
    GridPose goal;
    std::string instruction_text;
    std::vector<DynamicObstacle> dynamic_obstacles;
    int sensing_radius = 2;
    std::uint64_t seed = 0;

    void validate() const;
};

class InvalidScenario : public Error {
public:
    using Error::Error;
};

inline constexpr std::string_view kScenarioVersion = "scenario_v1";

/// JSON scenario file. The map is either inline (`"map": "<ASCII map text>"`) or a path
/// relative to the scenario file (`"map_file": "../maps/x.map"`).
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& base_dir = ".");

struct PlanAttempt {
    std::optional<std::vector<GridPose>> waypoints;
    std::string failure;  // empty on success
    double scorer_seconds = 0.0;
};

/// What the simulator drives. replan() defaults to plan().
class Planner {
public:
    virtual ~Planner() = default;
    virtual PlanAttempt plan(const OccupancyGrid& map, GridPose start, GridPose goal,
                             const std::string& instruction) = 0;
    virtual PlanAttempt replan(const OccupancyGrid& map, GridPose current, GridPose goal,
                               const std::string& instruction) {
        return plan(map, current, goal, instruction);
    }
};

struct ExecutionRecord {
    std::vector<GridPose> visited;
    /// Tick at which each visited cell was entered; parallel to `visited`.
    std::vector<int> visit_ticks;
    bool collided = false;
    bool reached_goal = false;
    int replan_count = 0;
    int steps_taken = 0;
    std::string failure;  // planner failure or budget exhaustion, empty otherwise
};

ExecutionRecord execute(const Scenario& scenario, Planner& planner);

struct PathViolation {
    enum class Rule { Start, Adjacency, Blocked, Goal };
    Rule rule;
    std::size_t index;
};

std::string_view rule_name(PathViolation::Rule rule);

/// nullopt when the path starts at the start cell, moves by Four-connected steps over Free
/// base-map cells, and ends at the goal. Otherwise the first violation by waypoint index.
std::optional<PathViolation> validate_external_path(const Scenario& scenario, const std::vector<GridPose>& waypoints);

/// The true world at `tick`: base map plus every obstacle with appears_at_step <= tick.
OccupancyGrid world_at(const Scenario& scenario, int tick);

}  // namespace gridllm
