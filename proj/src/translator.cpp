#include "gridllm/translator.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

#include <fmt/format.h>

namespace gridllm {

namespace {

constexpr std::string_view kLegend =
    "Map legend: '.' free cell, '#' obstacle, '?' unknown (treat as obstacle), "
    "'R' robot, 'G' goal. Coordinates are (x,y) with x the column and y the row, "
    "origin at the top-left, y increasing downward. The robot moves one cell per step.";

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

/// Body of the last line whose trimmed text starts with `prefix`.
std::optional<std::string_view> last_prefixed_line(std::string_view text, std::string_view prefix) {
    std::optional<std::string_view> found;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const std::string_view line = trim(text.substr(pos, nl - pos));
        if (line.substr(0, prefix.size()) == prefix) found = line.substr(prefix.size());
        pos = nl + 1;
    }
    return found;
}

std::string header_and_map(const OccupancyGrid& grid, GridPose robot, GridPose goal) {
    return fmt::format("map {}x{}\n{}", grid.width(), grid.height(), render_map_block(grid, robot, goal));
}

void check_markers(const OccupancyGrid& grid, GridPose robot, GridPose goal) {
    if (!grid.in_bounds(robot) || !grid.in_bounds(goal)) {
        throw OutOfBounds("robot and goal markers must lie on the map");
    }
    if (robot == goal) {
        throw OverlappingMarkers(fmt::format("robot and goal share cell ({},{})", robot.x, robot.y));
    }
}

bool parse_int(std::string_view s, int& out) {
    s = trim(s);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

MalformedReply::MalformedReply(Reason reason, std::string raw, const std::string& detail)
    : Error("malformed reply: " + detail), reason_(reason), raw_(std::move(raw)) {}

std::string render_map_block(const OccupancyGrid& grid, GridPose robot, GridPose goal) {
    std::string out;
    out.reserve(grid.size() + static_cast<std::size_t>(grid.height()));
    for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) {
            const GridPose p{x, y};
            if (p == goal) {
                out.push_back('G');
            } else if (p == robot) {
                out.push_back('R');
            } else {
                out.push_back(cell_char(grid.at(p)));
            }
        }
        out.push_back('\n');
    }
    return out;
}

StepPrompt serialize_step_prompt(const OccupancyGrid& grid, GridPose state, const Instruction& instruction,
                                 const std::array<GridPose, 4>& candidates) {
    check_markers(grid, state, instruction.goal);
    StepPrompt prompt;
    prompt.system_text = fmt::format(
        "[{}] You are the path planner of a mobile robot on a 2-D occupancy grid. {} "
        "You will be asked to rate the four possible next moves. Reply with exactly one line of the form "
        "'scores: <up> <right> <left> <down>' holding four non-negative numbers; a higher number means a "
        "better next step towards the goal.",
        kGrammarVersion, kLegend);
    prompt.user_text = fmt::format(
        "{}instruction: {}\n"
        "robot at ({},{}), goal at ({},{})\n"
        "moves: up -> ({},{}), right -> ({},{}), left -> ({},{}), down -> ({},{})\n"
        "Rate each move for reaching the goal without hitting obstacles. "
        "Answer with the line: scores: <up> <right> <left> <down>\n",
        header_and_map(grid, state, instruction.goal), instruction.text, state.x, state.y, instruction.goal.x,
        instruction.goal.y, candidates[0].x, candidates[0].y, candidates[1].x, candidates[1].y, candidates[2].x,
        candidates[2].y, candidates[3].x, candidates[3].y);
    return prompt;
}

StepPrompt serialize_fullpath_prompt(const OccupancyGrid& grid, GridPose start, const Instruction& instruction) {
    check_markers(grid, start, instruction.goal);
    StepPrompt prompt;
    prompt.system_text = fmt::format(
        "[{}] You are the path planner of a mobile robot on a 2-D occupancy grid. {} "
        "Moves are up, right, left or down by one cell. Reply with exactly one line of the form "
        "'path: (x1,y1) (x2,y2) ...' listing every cell visited from the robot to the goal, inclusive.",
        kGrammarVersion, kLegend);
    prompt.user_text = fmt::format(
        "{}instruction: {}\n"
        "robot at ({},{}), goal at ({},{})\n"
        "Plan a collision-free path from R to G. Answer with the line: path: (x1,y1) (x2,y2) ...\n",
        header_and_map(grid, start, instruction.goal), instruction.text, start.x, start.y, instruction.goal.x,
        instruction.goal.y);
    return prompt;
}

std::array<double, 4> parse_action_scores(std::string_view reply) {
    using Reason = MalformedReply::Reason;
    const auto body = last_prefixed_line(reply, "scores:");
    if (!body) throw MalformedReply(Reason::NoMatch, std::string(reply), "no 'scores:' line");

    std::vector<std::string_view> tokens;
    std::string_view rest = *body;
    while (true) {
        rest = trim(rest);
        if (rest.empty()) break;
        std::size_t end = 0;
        while (end < rest.size() && !is_space(rest[end])) ++end;
        tokens.push_back(rest.substr(0, end));
        rest.remove_prefix(end);
    }
    if (tokens.size() != 4) {
        throw MalformedReply(Reason::Arity, std::string(reply),
                             fmt::format("expected 4 scores, found {}", tokens.size()));
    }

    std::array<double, 4> scores{};
    for (std::size_t i = 0; i < 4; ++i) {
        const std::string_view tok = tokens[i];
        double v = 0.0;
        const bool digit_first = std::isdigit(static_cast<unsigned char>(tok.front())) || tok.front() == '.';
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (!digit_first || ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v) || v < 0.0) {
            throw MalformedReply(Reason::InvalidNumber, std::string(reply),
                                 fmt::format("score '{}' is not a non-negative finite number", tok));
        }
        scores[i] = v;
    }
    return scores;
}

CoordinateReply parse_coordinate_list(std::string_view reply) {
    using Reason = MalformedReply::Reason;
    const auto body = last_prefixed_line(reply, "path:");
    if (!body) throw MalformedReply(Reason::NoMatch, std::string(reply), "no 'path:' line");

    CoordinateReply out;
    std::string_view rest = *body;
    while (true) {
        rest = trim(rest);
        if (rest.empty()) break;
        if (rest.front() != '(') {
            throw MalformedReply(Reason::InvalidCoordinate, std::string(reply), "expected '(' to open a pair");
        }
        const std::size_t close = rest.find(')');
        const std::size_t comma = rest.find(',');
        if (close == std::string_view::npos || comma == std::string_view::npos || comma > close) {
            throw MalformedReply(Reason::InvalidCoordinate, std::string(reply), "unterminated coordinate pair");
        }
        GridPose p;
        if (!parse_int(rest.substr(1, comma - 1), p.x) || !parse_int(rest.substr(comma + 1, close - comma - 1), p.y)) {
            throw MalformedReply(Reason::InvalidCoordinate, std::string(reply),
                                 fmt::format("bad coordinate pair '{}'", rest.substr(0, close + 1)));
        }
        out.waypoints.push_back(p);
        rest.remove_prefix(close + 1);
        if (!rest.empty() && !is_space(rest.front())) {
            throw MalformedReply(Reason::InvalidCoordinate, std::string(reply), "pairs must be whitespace separated");
        }
    }
    if (out.waypoints.empty()) throw MalformedReply(Reason::Empty, std::string(reply), "'path:' line has no pairs");
    return out;
}

std::string format_scores(const std::array<double, 4>& scores) {
    return fmt::format("scores: {:.6g} {:.6g} {:.6g} {:.6g}", scores[0], scores[1], scores[2], scores[3]);
}

std::string format_path(const std::vector<GridPose>& waypoints) {
    std::string out = "path:";
    for (const auto& p : waypoints) out += fmt::format(" ({},{})", p.x, p.y);
    return out;
}

}  // namespace gridllm
