#include "gridllm/simulator.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace gridllm {

using json = nlohmann::json;

void Scenario::validate() const {
    if (!map.is_free(start)) throw InvalidScenario(fmt::format("scenario '{}': start is not a free cell", id));
    if (!map.is_free(goal)) throw InvalidScenario(fmt::format("scenario '{}': goal is not a free cell", id));
    if (sensing_radius < 1) throw InvalidScenario(fmt::format("scenario '{}': sensing_radius must be >= 1", id));
    for (const auto& ob : dynamic_obstacles) {
        if (!map.in_bounds(ob.cell)) {
            throw InvalidScenario(fmt::format("scenario '{}': obstacle ({},{}) off the map", id, ob.cell.x, ob.cell.y));
        }
        if (ob.appears_at_step < 0) {
            throw InvalidScenario(fmt::format("scenario '{}': appears_at_step must be >= 0", id));
        }
    }
}

namespace {

GridPose pose_from(const json& j, const char* field) {
    if (!j.is_array() || j.size() != 2) throw InvalidScenario(fmt::format("'{}' must be [x, y]", field));
    return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidScenario(fmt::format("scenario is not valid JSON: {}", e.what()));
    }
    try {
        if (doc.value("version", "") != kScenarioVersion) {
            throw InvalidScenario(fmt::format("scenario version must be '{}'", kScenarioVersion));
        }
        std::optional<OccupancyGrid> map;
        if (doc.contains("map")) {
            map = load_map(doc["map"].get<std::string>());
        } else if (doc.contains("map_file")) {
            map = load_map_file((std::filesystem::path(base_dir) / doc["map_file"].get<std::string>()).string());
        } else {
            throw InvalidScenario("scenario needs 'map' or 'map_file'");
        }
        Scenario sc{doc.at("id").get<std::string>(),
                    std::move(*map),
                    pose_from(doc.at("start"), "start"),
                    pose_from(doc.at("goal"), "goal"),
                    doc.at("instruction").get<std::string>(),
                    {},
                    doc.value("sensing_radius", 2),
                    doc.value("seed", std::uint64_t{0})};
        for (const auto& ob : doc.value("dynamic_obstacles", json::array())) {
            sc.dynamic_obstacles.push_back({pose_from(ob.at("cell"), "cell"), ob.at("appears_at_step").get<int>()});
        }
        sc.validate();
        return sc;
    } catch (const json::exception& e) {
        throw InvalidScenario(fmt::format("scenario field error: {}", e.what()));
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidScenario(fmt::format("cannot open scenario file '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), std::filesystem::path(path).parent_path().string());
}

OccupancyGrid world_at(const Scenario& scenario, int tick) {
    OccupancyGrid world = scenario.map;
    for (const auto& ob : scenario.dynamic_obstacles) {
        if (ob.appears_at_step <= tick) world.set(ob.cell, CellState::Occupied);
    }
    return world;
}

ExecutionRecord execute(const Scenario& scenario, Planner& planner) {
    scenario.validate();

    ExecutionRecord rec;
    OccupancyGrid truth = world_at(scenario, 0);
    OccupancyGrid working = scenario.map;
    GridPose pos = scenario.start;
    rec.visited.push_back(pos);
    rec.visit_ticks.push_back(0);

    // Copies materialised obstacles near the robot into the working map; returns new cells.
    auto sense = [&] {
        std::vector<GridPose> fresh;
        for (const auto& ob : scenario.dynamic_obstacles) {
            if (truth.at(ob.cell) != CellState::Occupied || ob.cell == pos) continue;
            if (chebyshev(ob.cell, pos) > scenario.sensing_radius) continue;
            if (working.at(ob.cell) != CellState::Occupied) {
                working.set(ob.cell, CellState::Occupied);
                fresh.push_back(ob.cell);
            }
        }
        return fresh;
    };

    sense();
    if (pos == scenario.goal) {
        rec.reached_goal = true;
        return rec;
    }

    PlanAttempt attempt = planner.plan(working, pos, scenario.goal, scenario.instruction_text);
    if (!attempt.waypoints || attempt.waypoints->empty()) {
        rec.failure = attempt.failure.empty() ? "planner returned no path" : attempt.failure;
        return rec;
    }
    std::vector<GridPose> path = std::move(*attempt.waypoints);
    std::size_t next = path.front() == pos ? 1 : 0;

    const int budget = 10 * (scenario.map.width() + scenario.map.height());
    for (int tick = 1; tick <= budget; ++tick) {
        if (next >= path.size()) {
            rec.failure = "path ended before the goal";
            return rec;
        }
        for (const auto& ob : scenario.dynamic_obstacles) {
            if (ob.appears_at_step == tick) truth.set(ob.cell, CellState::Occupied);
        }

        const GridPose target = path[next];
        if (!truth.is_free(target)) {
            rec.collided = true;
            return rec;
        }
        pos = target;
        ++next;
        ++rec.steps_taken;
        rec.visited.push_back(pos);
        rec.visit_ticks.push_back(tick);
        if (pos == scenario.goal) {
            rec.reached_goal = true;
            return rec;
        }

        const auto fresh = sense();
        const bool blocked = std::any_of(fresh.begin(), fresh.end(), [&](GridPose c) {
            return std::find(path.begin() + static_cast<std::ptrdiff_t>(next), path.end(), c) != path.end();
        });
        if (blocked) {
            ++rec.replan_count;
            attempt = planner.replan(working, pos, scenario.goal, scenario.instruction_text);
            if (!attempt.waypoints || attempt.waypoints->empty()) {
                rec.failure = attempt.failure.empty() ? "replanning found no path" : attempt.failure;
                return rec;
            }
            path = std::move(*attempt.waypoints);
            next = path.front() == pos ? 1 : 0;
        }
    }
    rec.failure = fmt::format("step budget of {} ticks exhausted", budget);
    return rec;
}

std::string_view rule_name(PathViolation::Rule rule) {
    switch (rule) {
        case PathViolation::Rule::Start: return "start";
        case PathViolation::Rule::Adjacency: return "adjacency";
        case PathViolation::Rule::Blocked: return "blocked";
        case PathViolation::Rule::Goal: return "goal";
    }
    return "?";
}

std::optional<PathViolation> validate_external_path(const Scenario& scenario,
                                                    const std::vector<GridPose>& waypoints) {
    using Rule = PathViolation::Rule;
    if (waypoints.empty() || waypoints.front() != scenario.start) return PathViolation{Rule::Start, 0};
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
        if (i > 0 && manhattan(waypoints[i - 1], waypoints[i]) != 1) return PathViolation{Rule::Adjacency, i};
        if (!scenario.map.is_free(waypoints[i])) return PathViolation{Rule::Blocked, i};
    }
    if (waypoints.back() != scenario.goal) return PathViolation{Rule::Goal, waypoints.size() - 1};
    return std::nullopt;
}

}  // namespace gridllm
