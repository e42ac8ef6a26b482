#pragma once

// Occupancy grid representation and the geometric queries shared by all planners.
//
// Coordinates: x is the column, y is the row, origin at the top-left corner and
// y growing downward, matching the row-major ASCII map format.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "gridllm/error.hpp"

namespace gridllm {

enum class CellState : std::uint8_t { Free, Occupied, Unknown };

enum class Connectivity { Four, Eight };

struct GridPose {
    int x = 0;
    int y = 0;

    friend bool operator==(const GridPose&, const GridPose&) = default;
    friend auto operator<=>(const GridPose&, const GridPose&) = default;
};

struct GridPoseHash {
    std::size_t operator()(const GridPose& p) const noexcept {
        return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 32) |
                                          static_cast<std::uint32_t>(p.y));
    }
};

int manhattan(GridPose a, GridPose b) noexcept;
int chebyshev(GridPose a, GridPose b) noexcept;

/// Immutable-by-convention occupancy grid. Planners take it by const reference;
/// the simulator owns a mutable working copy.
class OccupancyGrid {
public:
    OccupancyGrid(int width, int height, double resolution, CellState fill = CellState::Free);
    OccupancyGrid(int width, int height, double resolution, std::vector<CellState> cells);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    double resolution() const noexcept { return resolution_; }
    std::size_t size() const noexcept { return cells_.size(); }

    bool in_bounds(GridPose p) const noexcept {
        return p.x >= 0 && p.y >= 0 && p.x < width_ && p.y < height_;
    }
    /// In bounds and Free. Unknown cells are never traversable.
    bool is_free(GridPose p) const noexcept { return in_bounds(p) && cells_[index(p)] == CellState::Free; }

    /// Bounds-checked access; throws OutOfBounds.
    CellState at(GridPose p) const;
    void set(GridPose p, CellState s);

    std::size_t index(GridPose p) const noexcept {
        return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(p.x);
    }
    GridPose pose(std::size_t idx) const noexcept {
        return {static_cast<int>(idx % static_cast<std::size_t>(width_)),
                static_cast<int>(idx / static_cast<std::size_t>(width_))};
    }

    const std::vector<CellState>& cells() const noexcept { return cells_; }
    std::size_t count(CellState s) const noexcept;

    friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

private:
    int width_;
    int height_;
    double resolution_;
    std::vector<CellState> cells_;
};

class MapError : public Error {
public:
    enum class Kind { MalformedHeader, RaggedRows, UnknownCharacter };

    MapError(Kind kind, int line, int column, const std::string& what);

    Kind kind() const noexcept { return kind_; }
    /// 1-based line in the map text.
    int line() const noexcept { return line_; }
    /// 1-based column, 0 when the whole line is at fault.
    int column() const noexcept { return column_; }

private:
    Kind kind_;
    int line_;
    int column_;
};

class InvalidDensity : public Error {
public:
    using Error::Error;
};

/// Parses the ASCII map format:
///   <width> <height> <resolution>
///   then `height` rows of `width` characters from {'.', '#', '?'}.
OccupancyGrid load_map(std::string_view text);
OccupancyGrid load_map_file(const std::string& path);

/// Canonical text form. serialize_map(load_map(t)) == t for canonical t.
std::string serialize_map(const OccupancyGrid& grid);

char cell_char(CellState s) noexcept;

/// Border cells stay Free; every interior cell is Occupied with probability `density`.
OccupancyGrid random_map(int width, int height, double density, std::uint64_t seed, double resolution = 1.0);

/// Traversable neighbours of `s`. Four: up, right, left, down. Eight appends NE, SE, SW, NW;
/// a diagonal is dropped when both cardinal cells it passes between are blocked.
std::vector<GridPose> neighbors(const OccupancyGrid& grid, GridPose s, Connectivity connectivity);

/// Marks every Free cell within Chebyshev distance `radius` of a blocked cell as Occupied.
OccupancyGrid inflate(const OccupancyGrid& grid, int radius);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw; stable across platforms.
template <class Engine>
double unit_draw(Engine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace gridllm
