#pragma once

// Shared helpers for the test binaries: instance generation and independent reference checks.

#include <deque>
#include <optional>
#include <random>
#include <vector>

#include "gridllm/gridmap.hpp"

namespace gridllm::testing {

struct Instance {
    OccupancyGrid grid;
    GridPose start;
    GridPose goal;
    std::uint64_t seed;
};

/// Plain BFS step count over Four-connected free cells; nullopt when unreachable.
inline std::optional<int> bfs_steps(const OccupancyGrid& g, GridPose s, GridPose t) {
    if (!g.is_free(s) || !g.is_free(t)) return std::nullopt;
    std::vector<int> dist(g.size(), -1);
    std::deque<GridPose> q{s};
    dist[g.index(s)] = 0;
    const int dx[] = {0, 1, -1, 0};
    const int dy[] = {-1, 0, 0, 1};
    while (!q.empty()) {
        const GridPose c = q.front();
        q.pop_front();
        if (c == t) return dist[g.index(c)];
        for (int k = 0; k < 4; ++k) {
            const GridPose n{c.x + dx[k], c.y + dy[k]};
            if (g.is_free(n) && dist[g.index(n)] < 0) {
                dist[g.index(n)] = dist[g.index(c)] + 1;
                q.push_back(n);
            }
        }
    }
    return std::nullopt;
}

inline GridPose random_free_cell(const OccupancyGrid& g, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> xs(0, g.width() - 1), ys(0, g.height() - 1);
    while (true) {
        const GridPose p{xs(rng), ys(rng)};
        if (g.is_free(p)) return p;
    }
}

/// Random map with random distinct free endpoints; no feasibility guarantee.
inline Instance any_instance(int w, int h, double density, std::uint64_t seed) {
    OccupancyGrid g = random_map(w, h, density, seed);
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 1);
    const GridPose s = random_free_cell(g, rng);
    GridPose t = random_free_cell(g, rng);
    while (t == s) t = random_free_cell(g, rng);
    return {std::move(g), s, t, seed};
}

/// The first `count` feasible instances found by scanning seeds upward from `first_seed`.
inline std::vector<Instance> feasible_instances(int w, int h, double density, int count,
                                                std::uint64_t first_seed = 0) {
    std::vector<Instance> out;
    for (std::uint64_t seed = first_seed; static_cast<int>(out.size()) < count; ++seed) {
        Instance inst = any_instance(w, h, density, seed);
        if (bfs_steps(inst.grid, inst.start, inst.goal)) out.push_back(std::move(inst));
    }
    return out;
}

/// True when consecutive waypoints are Four-adjacent free cells.
inline bool is_valid_chain(const OccupancyGrid& g, const std::vector<GridPose>& wp) {
    for (std::size_t i = 0; i < wp.size(); ++i) {
        if (!g.is_free(wp[i])) return false;
        if (i > 0 && manhattan(wp[i - 1], wp[i]) != 1) return false;
    }
    return true;
}

}  // namespace gridllm::testing
