#include "gridllm/grounded.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace gridllm {

const ActionSet& default_actions() {
    static const ActionSet actions{{
        {ActionId::Up, {0, -1}, "move up one cell"},
        {ActionId::Right, {1, 0}, "move right one cell"},
        {ActionId::Left, {-1, 0}, "move left one cell"},
        {ActionId::Down, {0, 1}, "move down one cell"},
    }};
    return actions;
}

std::string_view action_name(ActionId id) {
    switch (id) {
        case ActionId::Up: return "up";
        case ActionId::Right: return "right";
        case ActionId::Left: return "left";
        case ActionId::Down: return "down";
    }
    return "?";
}

std::string_view failure_name(PlanFailure::Kind kind) {
    switch (kind) {
        case PlanFailure::Kind::Stuck: return "stuck";
        case PlanFailure::Kind::StepLimit: return "step_limit";
        case PlanFailure::Kind::ScorerFailure: return "scorer_failure";
    }
    return "?";
}

void PlannerConfig::validate() const {
    if (max_steps && *max_steps <= 0) throw InvalidParams("max_steps must be > 0");
    if (!(revisit_penalty >= 0.0 && revisit_penalty <= 1.0)) {
        throw InvalidParams("revisit_penalty must lie in [0,1]");
    }
    auto order = tie_break;
    std::sort(order.begin(), order.end());
    for (int i = 0; i < 4; ++i) {
        if (order[static_cast<std::size_t>(i)] != static_cast<ActionId>(i)) {
            throw InvalidParams("tie_break must be a permutation of the four actions");
        }
    }
}

int PlannerConfig::step_limit(const OccupancyGrid& grid) const {
    return max_steps.value_or(4 * (grid.width() + grid.height()));
}

double affordance(const OccupancyGrid& grid, GridPose s, const Action& action) {
    const GridPose c = apply(s, action);
    if (!grid.is_free(c)) return 0.0;
    for (const auto& a : default_actions()) {
        if (!grid.is_free(apply(c, a))) return 0.8;
    }
    return 1.0;
}

std::array<double, 4> normalize_scores(const std::array<double, 4>& raw) {
    double sum = 0.0;
    for (const double v : raw) {
        if (!std::isfinite(v) || v < 0.0) {
            throw ScorerFailure(fmt::format("scorer returned invalid score {}", v));
        }
        sum += v;
    }
    std::array<double, 4> out{};
    if (sum == 0.0 || !std::isfinite(sum)) {
        if (!std::isfinite(sum)) throw ScorerFailure("scorer scores overflow when summed");
        out.fill(0.25);
        return out;
    }
    for (std::size_t i = 0; i < 4; ++i) out[i] = raw[i] / sum;
    return out;
}

std::vector<ScoredAction> score_candidates(TaskScorer& scorer, const Instruction& instruction,
                                           const OccupancyGrid& grid, GridPose s, const ActionSet& actions,
                                           const PlannerConfig& config) {
    TaskScorerQuery query{&instruction, &grid, s, {}};
    for (std::size_t i = 0; i < 4; ++i) query.candidates[i] = apply(s, actions[i]);

    const auto started = std::chrono::steady_clock::now();
    const auto raw = scorer.score(query);
    if (config.scorer_deadline.count() > 0 && std::chrono::steady_clock::now() - started > config.scorer_deadline) {
        throw ScorerFailure(fmt::format("scorer '{}' exceeded its {} ms deadline", scorer.name(),
                                        config.scorer_deadline.count()));
    }
    const auto p_task = normalize_scores(raw);

    std::vector<ScoredAction> scored;
    scored.reserve(4);
    for (const ActionId id : config.tie_break) {
        const auto it = std::find_if(actions.begin(), actions.end(), [id](const Action& a) { return a.id == id; });
        const auto i = static_cast<std::size_t>(it - actions.begin());
        ScoredAction sa{*it, query.candidates[i], p_task[i], affordance(grid, s, *it), 0.0};
        sa.p_combined = sa.p_gpt * sa.p_util;
        scored.push_back(sa);
    }
    return scored;
}

std::optional<ScoredAction> select_action(const std::vector<ScoredAction>& scored, const VisitedSet& visited,
                                          const PlannerConfig& config) {
    std::optional<ScoredAction> best;
    double best_value = 0.0;
    for (const auto& sa : scored) {
        double value = sa.p_combined;
        if (visited.contains(sa.candidate)) value *= config.revisit_penalty;
        if (value > best_value) {
            best_value = value;
            best = sa;
        }
    }
    return best;
}

namespace {

GroundedPlan run_loop(TaskScorer& scorer, const OccupancyGrid& grid, GridPose start, const Instruction& instruction,
                      const PlannerConfig& config) {
    config.validate();
    require_endpoint(grid, start, "start");
    require_endpoint(grid, instruction.goal, "goal");
    if (instruction.text.empty()) throw InvalidParams("instruction text must not be empty");

    GroundedPlan result;
    result.path = PlannedPath{{start}, grid.resolution()};
    if (start == instruction.goal) return result;

    VisitedSet visited{start};
    GridPose current = start;
    const int limit = config.step_limit(grid);
    for (int step = 0; step < limit; ++step) {
        std::vector<ScoredAction> scored;
        ++result.scorer_calls;
        try {
            scored = score_candidates(scorer, instruction, grid, current, default_actions(), config);
        } catch (const std::exception& e) {
            result.failure = PlanFailure{PlanFailure::Kind::ScorerFailure, e.what()};
            return result;
        }
        const auto chosen = select_action(scored, visited, config);
        if (!chosen) {
            result.trace.push_back({step, current, std::move(scored), std::nullopt});
            result.failure = PlanFailure{PlanFailure::Kind::Stuck,
                                         fmt::format("no admissible move from ({},{})", current.x, current.y)};
            return result;
        }
        result.trace.push_back({step, current, std::move(scored), chosen->action.id});
        current = chosen->candidate;
        result.path.waypoints.push_back(current);
        visited.insert(current);
        if (current == instruction.goal) return result;
    }
    result.failure = PlanFailure{PlanFailure::Kind::StepLimit, fmt::format("goal not reached within {} steps", limit)};
    return result;
}

}  // namespace

GroundedPlan plan(TaskScorer& scorer, const OccupancyGrid& grid, GridPose start, const Instruction& instruction,
                  const PlannerConfig& config) {
    return run_loop(scorer, grid, start, instruction, config);
}

GroundedPlan replan(TaskScorer& scorer, const OccupancyGrid& grid, GridPose current, const Instruction& instruction,
                    const PlannerConfig& config) {
    return run_loop(scorer, grid, current, instruction, config);
}

void write_trace(std::ostream& out, const std::vector<StepRecord>& trace) {
    for (const auto& rec : trace) {
        nlohmann::json line;
        line["step"] = rec.step;
        line["state"] = {rec.state.x, rec.state.y};
        auto& cands = line["candidates"] = nlohmann::json::array();
        for (const auto& sa : rec.scored) {
            cands.push_back({{"action", action_name(sa.action.id)},
                             {"cell", {sa.candidate.x, sa.candidate.y}},
                             {"p_gpt", sa.p_gpt},
                             {"p_util", sa.p_util},
                             {"p_combined", sa.p_combined}});
        }
        line["chosen"] = rec.chosen ? nlohmann::json(action_name(*rec.chosen)) : nlohmann::json(nullptr);
        out << line.dump() << '\n';
    }
}

}  // namespace gridllm
