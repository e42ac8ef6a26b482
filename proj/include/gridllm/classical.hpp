#pragma once

// Baseline planners: A*, an exhaustive Dijkstra oracle, and RRT.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gridllm/gridmap.hpp"

namespace gridllm {

struct PlannedPath {
    std::vector<GridPose> waypoints;
    double resolution = 1.0;

    bool empty() const noexcept { return waypoints.empty(); }
    friend bool operator==(const PlannedPath&, const PlannedPath&) = default;
};

/// Sum of Euclidean distances between consecutive waypoints, in meters.
double path_length(const PlannedPath& path);

/// Cost of a path in cell units (1 per cardinal step, sqrt(2) per diagonal).
double path_cost_cells(std::span<const GridPose> waypoints);

/// Throws InvalidEndpoint unless `p` is a Free in-bounds cell.
void require_endpoint(const OccupancyGrid& grid, GridPose p, const char* role);

/// Optimal under the given connectivity; ties resolved by lowest f, then lowest h, then
/// insertion order. Returns nullopt when the goal is unreachable.
std::optional<PlannedPath> astar(const OccupancyGrid& grid, GridPose start, GridPose goal,
                                 Connectivity connectivity = Connectivity::Four);

/// Uniform-cost search without heuristic or heap. Test oracle only.
std::optional<double> dijkstra_oracle(const OccupancyGrid& grid, GridPose start, GridPose goal,
                                      Connectivity connectivity = Connectivity::Four);

/// Four-connected breadth-first distances from `goal` to every cell; -1 where unreachable.
std::vector<int> distance_field(const OccupancyGrid& grid, GridPose goal);

struct RrtParams {
    double step_size = 3.0;        // cells
    double goal_bias = 0.05;
    int max_iterations = 5000;
    double goal_tolerance = 1.0;   // cells
    std::uint64_t seed = 0;
    bool shortcut = false;         // line-of-sight shortcutting; never used in benchmarks

    void validate() const;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Every cell whose closed unit square the segment a-b touches (cell (i,j) spans [i,i+1]x[j,j+1]).
std::vector<GridPose> supercover(Point2 a, Point2 b);

/// True when every cell of the segment's supercover is Free.
bool segment_free(const OccupancyGrid& grid, Point2 a, Point2 b);

/// Four-connected cell walk along the segment; a subset of its supercover.
std::vector<GridPose> segment_walk(Point2 a, Point2 b);

struct RrtResult {
    std::optional<PlannedPath> path;
    /// Continuous tree nodes of the solution branch, start to goal (cell-center coordinates).
    std::vector<Point2> branch;
    int iterations = 0;
};

/// Goal-biased RRT. Per iteration the RNG is consumed in a fixed order: sample x, sample y,
/// then the goal-bias coin. Nodes are continuous points; the solution is re-discretized into
/// a Four-connected cell walk.
RrtResult rrt_search(const OccupancyGrid& grid, GridPose start, GridPose goal, const RrtParams& params);

inline std::optional<PlannedPath> rrt(const OccupancyGrid& grid, GridPose start, GridPose goal,
                                      const RrtParams& params = {}) {
    return rrt_search(grid, start, goal, params).path;
}

inline Point2 cell_center(GridPose p) { return {p.x + 0.5, p.y + 0.5}; }

}  // namespace gridllm
