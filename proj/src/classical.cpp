#include "gridllm/classical.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <random>

#include <fmt/format.h>

namespace gridllm {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double step_cost(GridPose a, GridPose b) {
    return (a.x != b.x && a.y != b.y) ? kSqrt2 : 1.0;
}

double heuristic(GridPose a, GridPose b, Connectivity c) {
    const int dx = std::abs(a.x - b.x);
    const int dy = std::abs(a.y - b.y);
    if (c == Connectivity::Four) return dx + dy;
    return (dx + dy) + (kSqrt2 - 2.0) * std::min(dx, dy);
}

double dist(Point2 a, Point2 b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

GridPose cell_of(Point2 p) {
    return {static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y))};
}

}  // namespace

double path_cost_cells(std::span<const GridPose> waypoints) {
    double total = 0.0;
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        total += std::hypot(waypoints[i].x - waypoints[i - 1].x, waypoints[i].y - waypoints[i - 1].y);
    }
    return total;
}

double path_length(const PlannedPath& path) {
    if (path.waypoints.empty()) throw EmptyPath();
    return path_cost_cells(path.waypoints) * path.resolution;
}

void require_endpoint(const OccupancyGrid& grid, GridPose p, const char* role) {
    if (!grid.in_bounds(p)) {
        throw InvalidEndpoint(fmt::format("{} ({},{}) is out of bounds", role, p.x, p.y));
    }
    if (!grid.is_free(p)) {
        throw InvalidEndpoint(fmt::format("{} ({},{}) is not a free cell", role, p.x, p.y));
    }
}

std::optional<PlannedPath> astar(const OccupancyGrid& grid, GridPose start, GridPose goal,
                                 Connectivity connectivity) {
    require_endpoint(grid, start, "start");
    require_endpoint(grid, goal, "goal");

    struct Entry {
        double f;
        double h;
        std::uint64_t seq;
        std::size_t idx;
    };
    struct Worse {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.f != b.f) return a.f > b.f;
            if (a.h != b.h) return a.h > b.h;
            return a.seq > b.seq;
        }
    };

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> g(grid.size(), inf);
    std::vector<std::size_t> parent(grid.size(), std::numeric_limits<std::size_t>::max());
    std::vector<bool> closed(grid.size(), false);
    std::priority_queue<Entry, std::vector<Entry>, Worse> open;
    std::uint64_t seq = 0;

    const std::size_t start_idx = grid.index(start);
    const std::size_t goal_idx = grid.index(goal);
    g[start_idx] = 0.0;
    const double h0 = heuristic(start, goal, connectivity);
    open.push({h0, h0, seq++, start_idx});

    while (!open.empty()) {
        const Entry top = open.top();
        open.pop();
        if (closed[top.idx]) continue;
        closed[top.idx] = true;
        if (top.idx == goal_idx) break;

        const GridPose cur = grid.pose(top.idx);
        for (const GridPose n : neighbors(grid, cur, connectivity)) {
            const std::size_t ni = grid.index(n);
            if (closed[ni]) continue;
            const double cand = g[top.idx] + step_cost(cur, n);
            if (cand < g[ni]) {
                g[ni] = cand;
                parent[ni] = top.idx;
                const double h = heuristic(n, goal, connectivity);
                open.push({cand + h, h, seq++, ni});
            }
        }
    }

    if (!closed[goal_idx]) return std::nullopt;

    PlannedPath path;
    path.resolution = grid.resolution();
    for (std::size_t i = goal_idx; i != start_idx; i = parent[i]) path.waypoints.push_back(grid.pose(i));
    path.waypoints.push_back(start);
    std::reverse(path.waypoints.begin(), path.waypoints.end());
    return path;
}

std::optional<double> dijkstra_oracle(const OccupancyGrid& grid, GridPose start, GridPose goal,
                                      Connectivity connectivity) {
    require_endpoint(grid, start, "start");
    require_endpoint(grid, goal, "goal");

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(grid.size(), inf);
    std::vector<bool> done(grid.size(), false);
    d[grid.index(start)] = 0.0;

    // Linear scan for the minimum; exhaustive and heap-free on purpose.
    for (;;) {
        std::size_t best = grid.size();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (!done[i] && d[i] < inf && (best == grid.size() || d[i] < d[best])) best = i;
        }
        if (best == grid.size()) break;
        done[best] = true;
        const GridPose cur = grid.pose(best);
        if (cur == goal) return d[best];
        for (const GridPose n : neighbors(grid, cur, connectivity)) {
            const std::size_t ni = grid.index(n);
            d[ni] = std::min(d[ni], d[best] + step_cost(cur, n));
        }
    }
    return std::nullopt;
}

std::vector<int> distance_field(const OccupancyGrid& grid, GridPose goal) {
    std::vector<int> d(grid.size(), -1);
    if (!grid.is_free(goal)) return d;
    std::deque<GridPose> frontier{goal};
    d[grid.index(goal)] = 0;
    while (!frontier.empty()) {
        const GridPose cur = frontier.front();
        frontier.pop_front();
        for (const GridPose n : neighbors(grid, cur, Connectivity::Four)) {
            int& dn = d[grid.index(n)];
            if (dn < 0) {
                dn = d[grid.index(cur)] + 1;
                frontier.push_back(n);
            }
        }
    }
    return d;
}

void RrtParams::validate() const {
    if (!(step_size > 0.0) || !std::isfinite(step_size)) throw InvalidParams("rrt step_size must be > 0");
    if (!(goal_bias >= 0.0 && goal_bias <= 1.0)) throw InvalidParams("rrt goal_bias must lie in [0,1]");
    if (max_iterations <= 0) throw InvalidParams("rrt max_iterations must be > 0");
    if (!(goal_tolerance >= 0.0) || !std::isfinite(goal_tolerance)) {
        throw InvalidParams("rrt goal_tolerance must be >= 0");
    }
}

std::vector<GridPose> supercover(Point2 a, Point2 b) {
    constexpr double eps = 1e-9;
    const int x0 = static_cast<int>(std::floor(std::min(a.x, b.x) - eps));
    const int x1 = static_cast<int>(std::floor(std::max(a.x, b.x) + eps));
    const int y0 = static_cast<int>(std::floor(std::min(a.y, b.y) - eps));
    const int y1 = static_cast<int>(std::floor(std::max(a.y, b.y) + eps));
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;

    // Liang-Barsky clip of the segment against each closed cell square in the bounding box.
    auto touches = [&](int cx, int cy) {
        double t0 = 0.0;
        double t1 = 1.0;
        auto clip = [&](double p, double q) {
            if (p == 0.0) return q >= -eps;
            const double r = q / p;
            if (p < 0.0) {
                if (r > t1 + eps) return false;
                t0 = std::max(t0, r);
            } else {
                if (r < t0 - eps) return false;
                t1 = std::min(t1, r);
            }
            return true;
        };
        return clip(-dx, a.x - cx) && clip(dx, cx + 1.0 - a.x) && clip(-dy, a.y - cy) &&
               clip(dy, cy + 1.0 - a.y) && t0 <= t1 + eps;
    };

    std::vector<GridPose> cells;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (touches(x, y)) cells.push_back({x, y});
        }
    }
    return cells;
}

bool segment_free(const OccupancyGrid& grid, Point2 a, Point2 b) {
    for (const GridPose c : supercover(a, b)) {
        if (!grid.is_free(c)) return false;
    }
    return true;
}

std::vector<GridPose> segment_walk(Point2 a, Point2 b) {
    GridPose cur = cell_of(a);
    const GridPose end = cell_of(b);
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const int step_x = end.x > cur.x ? 1 : -1;
    const int step_y = end.y > cur.y ? 1 : -1;
    const double inf = std::numeric_limits<double>::infinity();

    double t_max_x = inf;
    double t_delta_x = inf;
    if (dx != 0.0) {
        const double boundary = step_x > 0 ? cur.x + 1.0 : static_cast<double>(cur.x);
        t_max_x = (boundary - a.x) / dx;
        t_delta_x = std::abs(1.0 / dx);
    }
    double t_max_y = inf;
    double t_delta_y = inf;
    if (dy != 0.0) {
        const double boundary = step_y > 0 ? cur.y + 1.0 : static_cast<double>(cur.y);
        t_max_y = (boundary - a.y) / dy;
        t_delta_y = std::abs(1.0 / dy);
    }

    int remaining_x = std::abs(end.x - cur.x);
    int remaining_y = std::abs(end.y - cur.y);
    std::vector<GridPose> cells{cur};
    cells.reserve(static_cast<std::size_t>(remaining_x + remaining_y + 1));
    while (remaining_x + remaining_y > 0) {
        const bool take_x = remaining_y == 0 || (remaining_x > 0 && t_max_x <= t_max_y);
        if (take_x) {
            cur.x += step_x;
            t_max_x += t_delta_x;
            --remaining_x;
        } else {
            cur.y += step_y;
            t_max_y += t_delta_y;
            --remaining_y;
        }
        cells.push_back(cur);
    }
    return cells;
}

RrtResult rrt_search(const OccupancyGrid& grid, GridPose start, GridPose goal, const RrtParams& params) {
    params.validate();
    require_endpoint(grid, start, "start");
    require_endpoint(grid, goal, "goal");

    RrtResult result;
    const Point2 goal_pt = cell_center(goal);
    if (start == goal) {
        result.path = PlannedPath{{start}, grid.resolution()};
        result.branch = {goal_pt};
        return result;
    }

    std::vector<Point2> nodes{cell_center(start)};
    std::vector<int> parent{-1};
    std::mt19937_64 rng(params.seed);
    const double w = grid.width();
    const double h = grid.height();

    auto finish = [&](int last) {
        std::vector<Point2> branch;
        for (int i = last; i >= 0; i = parent[static_cast<std::size_t>(i)]) {
            branch.push_back(nodes[static_cast<std::size_t>(i)]);
        }
        std::reverse(branch.begin(), branch.end());

        if (params.shortcut) {
            std::vector<Point2> cut{branch.front()};
            std::size_t i = 0;
            while (i + 1 < branch.size()) {
                std::size_t j = branch.size() - 1;
                while (j > i + 1 && !segment_free(grid, branch[i], branch[j])) --j;
                cut.push_back(branch[j]);
                i = j;
            }
            branch = std::move(cut);
        }

        PlannedPath path{{start}, grid.resolution()};
        for (std::size_t k = 1; k < branch.size(); ++k) {
            const auto walk = segment_walk(branch[k - 1], branch[k]);
            path.waypoints.insert(path.waypoints.end(), walk.begin() + 1, walk.end());
        }
        result.branch = std::move(branch);
        result.path = std::move(path);
    };

    // Tries to close the tree onto the goal from node `i`.
    auto try_connect = [&](int i) {
        const Point2 p = nodes[static_cast<std::size_t>(i)];
        if (dist(p, goal_pt) > params.goal_tolerance) return false;
        if (!segment_free(grid, p, goal_pt)) return false;
        nodes.push_back(goal_pt);
        parent.push_back(i);
        finish(static_cast<int>(nodes.size()) - 1);
        return true;
    };

    if (try_connect(0)) return result;

    for (int it = 0; it < params.max_iterations; ++it) {
        result.iterations = it + 1;
        const Point2 sample{unit_draw(rng) * w, unit_draw(rng) * h};
        const bool to_goal = unit_draw(rng) < params.goal_bias;
        const Point2 target = to_goal ? goal_pt : sample;
        if (!grid.is_free(cell_of(target))) continue;

        std::size_t nearest = 0;
        double best = dist(nodes[0], target);
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            const double d = dist(nodes[i], target);
            if (d < best) {
                best = d;
                nearest = i;
            }
        }
        if (best == 0.0) continue;

        const Point2 from = nodes[nearest];
        Point2 next = target;
        if (best > params.step_size) {
            const double s = params.step_size / best;
            next = {from.x + (target.x - from.x) * s, from.y + (target.y - from.y) * s};
        }
        if (!segment_free(grid, from, next)) continue;

        nodes.push_back(next);
        parent.push_back(static_cast<int>(nearest));
        if (try_connect(static_cast<int>(nodes.size()) - 1)) return result;
    }
    return result;
}

}  // namespace gridllm
