"""Grid path planning: A*, RRT and a grounded planner driven by a pluggable action scorer."""

from ._gridllm import (
    CellState,
    Error,
    MalformedReply,
    MapError,
    OccupancyGrid,
    astar,
    dijkstra_oracle,
    format_path,
    format_scores,
    load_map,
    load_map_file,
    parse_action_scores,
    parse_coordinate_list,
    path_length,
    plan,
    random_map,
    rrt,
    run_suite,
    run_trial,
    serialize_map,
    step_prompt,
)

__all__ = [
    "CellState",
    "Error",
    "MalformedReply",
    "MapError",
    "OccupancyGrid",
    "astar",
    "dijkstra_oracle",
    "format_path",
    "format_scores",
    "load_map",
    "load_map_file",
    "parse_action_scores",
    "parse_coordinate_list",
    "path_length",
    "plan",
    "random_map",
    "rrt",
    "run_suite",
    "run_trial",
    "serialize_map",
    "step_prompt",
]
