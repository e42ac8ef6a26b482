#include <gtest/gtest.h>

#include <random>

#include "gridllm/gridmap.hpp"
#include "support.hpp"

using namespace gridllm;

TEST(LoadMap, DirectCharacterMapping) {
    const auto g = load_map("3 1 1.0\n.#.\n");
    ASSERT_EQ(g.width(), 3);
    ASSERT_EQ(g.height(), 1);
    EXPECT_EQ(g.at({0, 0}), CellState::Free);
    EXPECT_EQ(g.at({1, 0}), CellState::Occupied);
    EXPECT_EQ(g.at({2, 0}), CellState::Free);
}

TEST(LoadMap, HonoursResolution) {
    const auto g = load_map("2 2 0.5\n..\n..\n");
    EXPECT_DOUBLE_EQ(g.resolution(), 0.5);
    EXPECT_EQ(g.count(CellState::Free), 4u);
}

TEST(LoadMap, UnknownCells) {
    const auto g = load_map("2 1 1.0\n?.\n");
    EXPECT_EQ(g.at({0, 0}), CellState::Unknown);
    EXPECT_FALSE(g.is_free({0, 0}));
}

TEST(LoadMap, RaggedRowNamesLine) {
    try {
        load_map("2 2 1.0\n..\n...\n");
        FAIL();
    } catch (const MapError& e) {
        EXPECT_EQ(e.kind(), MapError::Kind::RaggedRows);
        EXPECT_EQ(e.line(), 3);  // header is line 1, so the second row is line 3
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
    }
}

TEST(LoadMap, UnknownCharacterNamesColumn) {
    try {
        load_map("3 1 1.0\n.x.\n");
        FAIL();
    } catch (const MapError& e) {
        EXPECT_EQ(e.kind(), MapError::Kind::UnknownCharacter);
        EXPECT_EQ(e.line(), 2);
        EXPECT_EQ(e.column(), 2);
    }
}

TEST(LoadMap, MalformedHeaders) {
    for (const char* text : {"", "3 1\n...\n", "3  1 1.0\n...\n", "a 1 1.0\n...\n", "3 1 0\n...\n",
                             "3 1 -1.0\n...\n", "0 1 1.0\n\n", "3 2 1.0\n...\n"}) {
        try {
            load_map(text);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const MapError& e) {
            EXPECT_EQ(e.kind(), MapError::Kind::MalformedHeader) << text;
        }
    }
}

TEST(SerializeMap, RoundTrip) {
    for (const char* text : {"3 1 1.0\n.#.\n", "2 2 0.5\n?.\n#.\n", "4 1 0.1\n....\n"}) {
        EXPECT_EQ(serialize_map(load_map(text)), text);
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = random_map(9, 7, 0.3, seed, 0.25);
        EXPECT_EQ(load_map(serialize_map(g)), g);
        EXPECT_EQ(serialize_map(load_map(serialize_map(g))), serialize_map(g));
    }
}

TEST(RandomMap, DensityExtremes) {
    const auto empty = random_map(5, 5, 0.0, 7);
    EXPECT_EQ(empty.count(CellState::Free), 25u);
    const auto full = random_map(5, 5, 1.0, 7);
    EXPECT_EQ(full.count(CellState::Occupied), 9u);
    for (int x = 1; x < 4; ++x) {
        for (int y = 1; y < 4; ++y) EXPECT_EQ(full.at({x, y}), CellState::Occupied);
    }
}

TEST(RandomMap, FrozenRegression) {
    EXPECT_EQ(random_map(20, 20, 0.25, 0).count(CellState::Occupied), 64u);
}

TEST(RandomMap, SeedDeterminism) {
    for (std::uint64_t s = 0; s < 12; ++s) {
        EXPECT_EQ(random_map(16, 16, 0.3, s), random_map(16, 16, 0.3, s));
        EXPECT_NE(random_map(16, 16, 0.3, s), random_map(16, 16, 0.3, s + 100));
    }
}

TEST(RandomMap, RejectsBadDensity) {
    EXPECT_THROW(random_map(5, 5, -0.1, 0), InvalidDensity);
    EXPECT_THROW(random_map(5, 5, 1.2, 0), InvalidDensity);
}

TEST(Neighbors, OpenCentreOrder) {
    const OccupancyGrid g(3, 3, 1.0);
    const std::vector<GridPose> want{{1, 0}, {2, 1}, {0, 1}, {1, 2}};
    EXPECT_EQ(neighbors(g, {1, 1}, Connectivity::Four), want);
}

TEST(Neighbors, SingleCell) {
    EXPECT_TRUE(neighbors(OccupancyGrid(1, 1, 1.0), {0, 0}, Connectivity::Four).empty());
}

TEST(Neighbors, BlockedExcluded) {
    OccupancyGrid g(3, 3, 1.0);
    g.set({2, 1}, CellState::Occupied);
    const std::vector<GridPose> want{{1, 0}, {0, 1}, {1, 2}};
    EXPECT_EQ(neighbors(g, {1, 1}, Connectivity::Four), want);
}

TEST(Neighbors, EightAppendsDiagonals) {
    const OccupancyGrid g(3, 3, 1.0);
    const std::vector<GridPose> want{{1, 0}, {2, 1}, {0, 1}, {1, 2}, {2, 0}, {2, 2}, {0, 2}, {0, 0}};
    EXPECT_EQ(neighbors(g, {1, 1}, Connectivity::Eight), want);
}

TEST(Neighbors, NoCornerCutting) {
    OccupancyGrid g(3, 3, 1.0);
    g.set({1, 0}, CellState::Occupied);
    g.set({2, 1}, CellState::Occupied);
    const auto n = neighbors(g, {1, 1}, Connectivity::Eight);
    EXPECT_EQ(std::count(n.begin(), n.end(), GridPose{2, 0}), 0);
    g.set({2, 1}, CellState::Free);
    const auto m = neighbors(g, {1, 1}, Connectivity::Eight);
    EXPECT_EQ(std::count(m.begin(), m.end(), GridPose{2, 0}), 1);
}

TEST(Neighbors, OutOfBoundsThrows) {
    EXPECT_THROW(neighbors(OccupancyGrid(3, 3, 1.0), {3, 0}, Connectivity::Four), OutOfBounds);
}

TEST(Neighbors, OnlyFreeInBoundsOverRandomMaps) {
    std::mt19937_64 rng(3);
    for (std::uint64_t s = 0; s < 30; ++s) {
        auto g = random_map(12, 10, 0.35, s);
        g.set({0, 0}, CellState::Unknown);
        for (int i = 0; i < 40; ++i) {
            const GridPose p{static_cast<int>(rng() % 12), static_cast<int>(rng() % 10)};
            for (auto c : {Connectivity::Four, Connectivity::Eight}) {
                for (const auto& n : neighbors(g, p, c)) EXPECT_TRUE(g.is_free(n));
            }
        }
    }
}

TEST(Grid, AccessorsRejectOutOfBounds) {
    OccupancyGrid g(2, 2, 1.0);
    EXPECT_THROW(g.at({-1, 0}), OutOfBounds);
    EXPECT_THROW(g.set({0, 2}, CellState::Free), OutOfBounds);
    EXPECT_THROW(OccupancyGrid(0, 2, 1.0), InvalidParams);
    EXPECT_THROW(OccupancyGrid(2, 2, 0.0), InvalidParams);
}

TEST(Inflate, GrowsObstacles) {
    OccupancyGrid g(5, 5, 1.0);
    g.set({2, 2}, CellState::Occupied);
    const auto f = inflate(g, 1);
    EXPECT_EQ(f.count(CellState::Occupied), 9u);
    EXPECT_EQ(inflate(g, 0), g);
}
