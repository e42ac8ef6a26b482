import json
import os
import pathlib

import pytest

import gridllm

DATA = pathlib.Path(os.environ.get("GRIDLLM_DATA_DIR", pathlib.Path(__file__).resolve().parents[2] / "data"))


def test_map_round_trip():
    text = "3 1 1.0\n.#.\n"
    grid = gridllm.load_map(text)
    assert (grid.width, grid.height) == (3, 1)
    assert grid.at((1, 0)) == gridllm.CellState.Occupied
    assert gridllm.serialize_map(grid) == text


def test_bad_map_raises():
    with pytest.raises(gridllm.MapError):
        gridllm.load_map("2 2 1.0\n..\n...\n")


def test_astar_wall_gap():
    grid = gridllm.OccupancyGrid(5, 5)
    for y in range(4):
        grid.set((2, y), gridllm.CellState.Occupied)
    path = gridllm.astar(grid, (0, 0), (4, 0))
    assert len(path) - 1 == 12
    assert gridllm.dijkstra_oracle(grid, (0, 0), (4, 0)) == 12.0
    assert path[0] == (0, 0) and path[-1] == (4, 0)


def test_rrt_and_length():
    grid = gridllm.OccupancyGrid(20, 20)
    path = gridllm.rrt(grid, (1, 1), (18, 17), seed=42)
    assert path is not None
    assert gridllm.path_length(path) >= ((17**2 + 16**2) ** 0.5)


def test_grounded_plan_open_grid():
    grid = gridllm.OccupancyGrid(5, 5)
    result = gridllm.plan(grid, (0, 0), (4, 4), scorer="mock", tau=0.5)
    assert result["failure"] is None
    assert len(result["path"]) - 1 == 8
    trace = [json.loads(line) for line in result["trace"].splitlines()]
    assert len(trace) == result["scorer_calls"] == 8


def test_oracle_matches_astar():
    grid = gridllm.random_map(15, 15, 0.2, 3)
    start, goal = (0, 0), (14, 14)
    ref = gridllm.astar(grid, start, goal)
    got = gridllm.plan(grid, start, goal, scorer="oracle")
    assert got["failure"] is None
    assert len(got["path"]) == len(ref)


def test_parsers():
    assert gridllm.parse_action_scores("thinking\nscores: 0 0 1 0") == [0.0, 0.0, 1.0, 0.0]
    assert gridllm.parse_coordinate_list("path: (0,0) (0,1)") == [(0, 0), (0, 1)]
    with pytest.raises(gridllm.MalformedReply):
        gridllm.parse_action_scores("scores: 1 2 3")
    with pytest.raises(gridllm.MalformedReply):
        gridllm.parse_coordinate_list("path:")


def test_step_prompt():
    system, user = gridllm.step_prompt(gridllm.load_map("3 1 1.0\n...\n"), (0, 0), (2, 0), "go right")
    assert "grammar_v1" in system
    assert user.startswith("map 3x1\nR.G\n")


def test_trial_and_suite():
    row = gridllm.run_trial(str(DATA / "scenarios" / "two_corridor_dynamic.json"), "grounded:oracle")
    assert row["correct"] and row["replan_count"] >= 1
    result = gridllm.run_suite(str(DATA / "suites" / "default.json"))
    assert result["csv"].startswith("planner_id,scenario_id,seed,")
    assert len(result["rows"]) == 45
    assert "for reference only" in result["report"]
