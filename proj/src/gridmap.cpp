#include "gridllm/gridmap.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>

namespace gridllm {

int manhattan(GridPose a, GridPose b) noexcept {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

int chebyshev(GridPose a, GridPose b) noexcept {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, CellState fill)
    : OccupancyGrid(width, height, resolution,
                    std::vector<CellState>(width > 0 && height > 0
                                               ? static_cast<std::size_t>(width) * static_cast<std::size_t>(height)
                                               : 0,
                                           fill)) {}

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, std::vector<CellState> cells)
    : width_(width), height_(height), resolution_(resolution), cells_(std::move(cells)) {
    if (width < 1 || height < 1) {
        throw InvalidParams(fmt::format("grid dimensions must be >= 1, got {}x{}", width, height));
    }
    if (!(resolution > 0.0) || !std::isfinite(resolution)) {
        throw InvalidParams(fmt::format("grid resolution must be > 0, got {}", resolution));
    }
    if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw InvalidParams(fmt::format("cell count {} does not match {}x{}", cells_.size(), width, height));
    }
}

CellState OccupancyGrid::at(GridPose p) const {
    if (!in_bounds(p)) {
        throw OutOfBounds(fmt::format("cell ({},{}) outside {}x{} grid", p.x, p.y, width_, height_));
    }
    return cells_[index(p)];
}

void OccupancyGrid::set(GridPose p, CellState s) {
    if (!in_bounds(p)) {
        throw OutOfBounds(fmt::format("cell ({},{}) outside {}x{} grid", p.x, p.y, width_, height_));
    }
    cells_[index(p)] = s;
}

std::size_t OccupancyGrid::count(CellState s) const noexcept {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

MapError::MapError(Kind kind, int line, int column, const std::string& what)
    : Error(column > 0 ? fmt::format("map line {}, column {}: {}", line, column, what)
                       : fmt::format("map line {}: {}", line, what)),
      kind_(kind),
      line_(line),
      column_(column) {}

char cell_char(CellState s) noexcept {
    switch (s) {
        case CellState::Free: return '.';
        case CellState::Occupied: return '#';
        case CellState::Unknown: return '?';
    }
    return '?';
}

namespace {

bool parse_positive_int(std::string_view tok, int& out) {
    if (tok.empty() || tok.front() == '+' || tok.front() == '-') return false;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size() && out >= 1;
}

bool parse_resolution(std::string_view tok, double& out) {
    if (tok.empty() || !(std::isdigit(static_cast<unsigned char>(tok.front())) || tok.front() == '.')) return false;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out, std::chars_format::fixed);
    return ec == std::errc{} && ptr == tok.data() + tok.size() && std::isfinite(out) && out > 0.0;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    // A single trailing newline terminates the last row rather than opening a new one.
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

}  // namespace

OccupancyGrid load_map(std::string_view text) {
    using Kind = MapError::Kind;
    const auto lines = split_lines(text);
    if (lines.empty()) throw MapError(Kind::MalformedHeader, 1, 0, "missing header");

    const std::string_view header = lines.front();
    const std::size_t s1 = header.find(' ');
    const std::size_t s2 = s1 == std::string_view::npos ? s1 : header.find(' ', s1 + 1);
    if (s1 == std::string_view::npos || s2 == std::string_view::npos ||
        header.find(' ', s2 + 1) != std::string_view::npos) {
        throw MapError(Kind::MalformedHeader, 1, 0, "expected '<width> <height> <resolution>'");
    }
    int width = 0;
    int height = 0;
    double resolution = 0.0;
    if (!parse_positive_int(header.substr(0, s1), width)) {
        throw MapError(Kind::MalformedHeader, 1, 1, "width must be a positive integer");
    }
    if (!parse_positive_int(header.substr(s1 + 1, s2 - s1 - 1), height)) {
        throw MapError(Kind::MalformedHeader, 1, static_cast<int>(s1) + 2, "height must be a positive integer");
    }
    if (!parse_resolution(header.substr(s2 + 1), resolution)) {
        throw MapError(Kind::MalformedHeader, 1, static_cast<int>(s2) + 2, "resolution must be a positive decimal");
    }

    std::vector<CellState> cells;
    cells.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    const std::size_t rows = lines.size() - 1;
    for (std::size_t r = 0; r < rows && r < static_cast<std::size_t>(height); ++r) {
        const std::string_view row = lines[r + 1];
        const int line_no = static_cast<int>(r) + 2;
        if (row.size() != static_cast<std::size_t>(width)) {
            throw MapError(Kind::RaggedRows, line_no, 0,
                           fmt::format("row {} has {} characters, expected {}", r + 1, row.size(), width));
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            switch (row[c]) {
                case '.': cells.push_back(CellState::Free); break;
                case '#': cells.push_back(CellState::Occupied); break;
                case '?': cells.push_back(CellState::Unknown); break;
                default:
                    throw MapError(Kind::UnknownCharacter, line_no, static_cast<int>(c) + 1,
                                   fmt::format("unexpected character 0x{:02x}", static_cast<unsigned char>(row[c])));
            }
        }
    }
    if (rows != static_cast<std::size_t>(height)) {
        throw MapError(Kind::MalformedHeader, 1, 0,
                       fmt::format("header declares {} rows but {} follow", height, rows));
    }
    return OccupancyGrid(width, height, resolution, std::move(cells));
}

OccupancyGrid load_map_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open map file '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_map(ss.str());
}

std::string serialize_map(const OccupancyGrid& grid) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), grid.resolution(), std::chars_format::fixed);
    std::string res(buf, end);
    if (res.find('.') == std::string::npos) res += ".0";

    std::string out = fmt::format("{} {} {}\n", grid.width(), grid.height(), res);
    out.reserve(out.size() + grid.size() + static_cast<std::size_t>(grid.height()));
    for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) out.push_back(cell_char(grid.at({x, y})));
        out.push_back('\n');
    }
    return out;
}

OccupancyGrid random_map(int width, int height, double density, std::uint64_t seed, double resolution) {
    if (!(density >= 0.0 && density <= 1.0)) {
        throw InvalidDensity(fmt::format("density must lie in [0,1], got {}", density));
    }
    OccupancyGrid grid(width, height, resolution);
    std::mt19937_64 rng(seed);
    for (int y = 1; y + 1 < height; ++y) {
        for (int x = 1; x + 1 < width; ++x) {
            if (unit_draw(rng) < density) grid.set({x, y}, CellState::Occupied);
        }
    }
    return grid;
}

std::vector<GridPose> neighbors(const OccupancyGrid& grid, GridPose s, Connectivity connectivity) {
    if (!grid.in_bounds(s)) {
        throw OutOfBounds(fmt::format("pose ({},{}) outside {}x{} grid", s.x, s.y, grid.width(), grid.height()));
    }
    static constexpr GridPose kCardinal[4] = {{0, -1}, {1, 0}, {-1, 0}, {0, 1}};
    static constexpr GridPose kDiagonal[4] = {{1, -1}, {1, 1}, {-1, 1}, {-1, -1}};

    std::vector<GridPose> out;
    out.reserve(connectivity == Connectivity::Four ? 4 : 8);
    for (const auto d : kCardinal) {
        const GridPose n{s.x + d.x, s.y + d.y};
        if (grid.is_free(n)) out.push_back(n);
    }
    if (connectivity == Connectivity::Eight) {
        for (const auto d : kDiagonal) {
            const GridPose n{s.x + d.x, s.y + d.y};
            if (!grid.is_free(n)) continue;
            if (!grid.is_free({s.x + d.x, s.y}) && !grid.is_free({s.x, s.y + d.y})) continue;
            out.push_back(n);
        }
    }
    return out;
}

OccupancyGrid inflate(const OccupancyGrid& grid, int radius) {
    if (radius < 0) throw InvalidParams("inflation radius must be >= 0");
    OccupancyGrid out = grid;
    if (radius == 0) return out;
    for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) {
            if (grid.at({x, y}) == CellState::Free) continue;
            for (int dy = -radius; dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    const GridPose n{x + dx, y + dy};
                    if (grid.in_bounds(n) && out.at(n) == CellState::Free) out.set(n, CellState::Occupied);
                }
            }
        }
    }
    return out;
}

}  // namespace gridllm
