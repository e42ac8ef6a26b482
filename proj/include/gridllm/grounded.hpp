#pragma once

// Grounded step planner.
//
// Each step scores the four grid moves by
//     p_combined = p_task * p_world
// where p_task is the scorer's (normalised) belief that the move's description is the right
// next step for the instruction, and p_world is the affordance: the probability the move
// actually succeeds on the current map. The planner greedily takes the argmax, appends the
// new state to the path, and repeats until the goal is reached.

#include <array>
#include <chrono>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "gridllm/classical.hpp"
#include "gridllm/gridmap.hpp"
#include "gridllm/translator.hpp"

namespace gridllm {

enum class ActionId { Up = 0, Right = 1, Left = 2, Down = 3 };

struct Action {
    ActionId id;
    GridPose delta;
    std::string_view description;
};

using ActionSet = std::array<Action, 4>;

/// The fixed action set in tie-break order: up, right, left, down.
const ActionSet& default_actions();

std::string_view action_name(ActionId id);

inline GridPose apply(GridPose s, const Action& a) { return {s.x + a.delta.x, s.y + a.delta.y}; }

struct TaskScorerQuery {
    const Instruction* instruction;
    const OccupancyGrid* grid;
    GridPose state;
    /// s + delta for each action, in action order; may be off-map or blocked.
    std::array<GridPose, 4> candidates;
};

/// Produces raw, non-negative task-grounding scores for the four candidate moves.
/// Implementations throw on backend failure.
class TaskScorer {
public:
    virtual ~TaskScorer() = default;
    virtual std::array<double, 4> score(const TaskScorerQuery& query) = 0;
    virtual std::string name() const = 0;
};

class ScorerFailure : public Error {
public:
    using Error::Error;
};

struct ScoredAction {
    Action action;
    GridPose candidate;
    double p_gpt = 0.0;
    double p_util = 0.0;
    double p_combined = 0.0;
};

struct PlannerConfig {
    /// Defaults to 4 * (width + height) of the planning grid.
    std::optional<int> max_steps;
    /// Multiplies the combined score of a previously visited candidate. 1.0 disables it.
    double revisit_penalty = 0.5;
    std::array<ActionId, 4> tie_break{ActionId::Up, ActionId::Right, ActionId::Left, ActionId::Down};
    /// Per scorer call; zero disables the check.
    std::chrono::milliseconds scorer_deadline{0};

    void validate() const;
    int step_limit(const OccupancyGrid& grid) const;
};

/// World-grounding: 0 for a blocked or off-map candidate, 1.0 when all four of its
/// neighbours are free, 0.8 otherwise.
double affordance(const OccupancyGrid& grid, GridPose s, const Action& action);

/// One entry per action in tie-break order. Raw scores are normalised to sum to one;
/// an all-zero reply becomes uniform.
std::vector<ScoredAction> score_candidates(TaskScorer& scorer, const Instruction& instruction,
                                           const OccupancyGrid& grid, GridPose s,
                                           const ActionSet& actions = default_actions(),
                                           const PlannerConfig& config = {});

/// Normalises raw scores into a distribution; throws ScorerFailure on negative or non-finite input.
std::array<double, 4> normalize_scores(const std::array<double, 4>& raw);

using VisitedSet = std::unordered_set<GridPose, GridPoseHash>;

/// Argmax of the penalised combined score; nullopt (stuck) when every adjusted score is zero.
std::optional<ScoredAction> select_action(const std::vector<ScoredAction>& scored, const VisitedSet& visited,
                                          const PlannerConfig& config);

struct StepRecord {
    int step = 0;
    GridPose state;
    std::vector<ScoredAction> scored;
    /// Empty when the planner got stuck at this step.
    std::optional<ActionId> chosen;
};

struct PlanFailure {
    enum class Kind { Stuck, StepLimit, ScorerFailure };
    Kind kind;
    std::string detail;
};

std::string_view failure_name(PlanFailure::Kind kind);

struct GroundedPlan {
    /// On failure this holds the partial path walked so far.
    PlannedPath path;
    std::vector<StepRecord> trace;
    std::optional<PlanFailure> failure;
    int scorer_calls = 0;

    bool ok() const noexcept { return !failure.has_value(); }
};

GroundedPlan plan(TaskScorer& scorer, const OccupancyGrid& grid, GridPose start, const Instruction& instruction,
                  const PlannerConfig& config = {});

/// Same loop as plan() seeded from the robot's current cell with a fresh visit history.
GroundedPlan replan(TaskScorer& scorer, const OccupancyGrid& grid, GridPose current, const Instruction& instruction,
                    const PlannerConfig& config = {});

/// Line-delimited JSON, one object per step.
void write_trace(std::ostream& out, const std::vector<StepRecord>& trace);

}  // namespace gridllm
