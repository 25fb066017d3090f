"""Minimum-energy transmission paths in ad-hoc network snapshots.

A network is a fixed set of positioned devices, each supporting a prefix of
discrete transmit power levels.  The package models the snapshot as a
constraint-optimization problem (one operating level per device, edges only
within the sender's energy, the destination reachable) and finds the
cheapest simple source->destination path with a swing-aware adaptation of
Dijkstra's algorithm, verified by an exhaustive oracle.
"""

from .errors import (
    ComanetError,
    ConfigError,
    FormatError,
    NetworkTooLargeError,
    NetworkValidationError,
    NoFeasiblePathError,
    OutOfBoundsError,
)
from .geometry import (
    EUCLIDEAN_MODE,
    MODES,
    SECTOR_MODE,
    Point,
    PowerLevel,
    SectorGrid,
    default_levels,
    euclidean_distance,
    level_cost,
    level_range_sectors,
    pair_energy,
    sector_distance,
    sector_of,
)
from .maned import (
    BRUTE_FORCE_DEVICE_LIMIT,
    LevelEdge,
    PathResult,
    PathSolver,
    brute_force_min_path,
    build_edges,
    evaluate_path,
    load_solution,
    maned_solve,
    save_solution,
    solution_from_dict,
    solution_to_dict,
)
from .model import (
    Assignment,
    ConstraintReport,
    InducedGraph,
    assignment_from_path,
    check_connectivity,
    check_edge_feasibility,
    check_one_level,
    count_simple_paths,
    export_lp,
    induce_graph,
    objective_value,
)
from .netgen import (
    Device,
    Network,
    Space,
    generate,
    load,
    network_from_dict,
    network_to_dict,
    save,
    validate_network,
)
from .render import level_color, render_dot, render_svg

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BRUTE_FORCE_DEVICE_LIMIT",
    "ComanetError",
    "ConfigError",
    "ConstraintReport",
    "Device",
    "EUCLIDEAN_MODE",
    "FormatError",
    "InducedGraph",
    "LevelEdge",
    "MODES",
    "Network",
    "NetworkTooLargeError",
    "NetworkValidationError",
    "NoFeasiblePathError",
    "OutOfBoundsError",
    "PathResult",
    "PathSolver",
    "Point",
    "PowerLevel",
    "SECTOR_MODE",
    "SectorGrid",
    "Space",
    "assignment_from_path",
    "brute_force_min_path",
    "build_edges",
    "check_connectivity",
    "check_edge_feasibility",
    "check_one_level",
    "count_simple_paths",
    "default_levels",
    "euclidean_distance",
    "evaluate_path",
    "export_lp",
    "generate",
    "induce_graph",
    "level_color",
    "level_cost",
    "level_range_sectors",
    "load",
    "load_solution",
    "maned_solve",
    "network_from_dict",
    "network_to_dict",
    "objective_value",
    "pair_energy",
    "render_dot",
    "render_svg",
    "save",
    "save_solution",
    "sector_distance",
    "sector_of",
    "solution_from_dict",
    "solution_to_dict",
    "validate_network",
]
