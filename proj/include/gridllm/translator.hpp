#pragma once

// Prompt rendering for the language-model scorer and parsing of its replies.
//
// Reply grammar (grammar_v1):
//   step mode      a line  `scores: <up> <right> <left> <down>`   (four non-negative decimals)
//   full-path mode a line  `path: (x1,y1) (x2,y2) ...`
// When several matching lines are present the last one wins.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "gridllm/error.hpp"
#include "gridllm/gridmap.hpp"

namespace gridllm {

inline constexpr std::string_view kGrammarVersion = "grammar_v1";

struct Instruction {
    std::string text;
    GridPose goal;
};

struct StepPrompt {
    std::string system_text;
    std::string user_text;

    friend bool operator==(const StepPrompt&, const StepPrompt&) = default;
};

struct CoordinateReply {
    std::vector<GridPose> waypoints;
};

class OverlappingMarkers : public Error {
public:
    using Error::Error;
};

class MalformedReply : public Error {
public:
    enum class Reason { NoMatch, Arity, InvalidNumber, InvalidCoordinate, Empty };

    MalformedReply(Reason reason, std::string raw, const std::string& detail);

    Reason reason() const noexcept { return reason_; }
    const std::string& raw() const noexcept { return raw_; }

private:
    Reason reason_;
    std::string raw_;
};

/// Renders the map with `R` at the robot and `G` at the goal, one text row per grid row.
std::string render_map_block(const OccupancyGrid& grid, GridPose robot, GridPose goal);

StepPrompt serialize_step_prompt(const OccupancyGrid& grid, GridPose state, const Instruction& instruction,
                                 const std::array<GridPose, 4>& candidates);

StepPrompt serialize_fullpath_prompt(const OccupancyGrid& grid, GridPose start, const Instruction& instruction);

std::array<double, 4> parse_action_scores(std::string_view reply);

CoordinateReply parse_coordinate_list(std::string_view reply);

/// `scores: a b c d` with each value rendered to 6 significant digits.
std::string format_scores(const std::array<double, 4>& scores);

/// `path: (x,y) (x,y) ...`
std::string format_path(const std::vector<GridPose>& waypoints);

}  // namespace gridllm
