"""Constraint view of a network snapshot.

The decision variables are one operating level per device (level 0 meaning
idle, so silent devices satisfy the one-level rule at zero energy) and a set
of directed edge indicators.  The module checks the three feasibility rules
(one level per device, every chosen edge within the sender's energy, the
destination reachable), counts simple paths, evaluates the total-energy
objective, and exports the whole model in LP text format.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from .errors import NetworkValidationError
from .geometry import SECTOR_MODE, check_mode
from .maned import PathResult, evaluate_path
from .netgen import Network

DEFAULT_PATH_CAP = 1_000_000


@dataclass(frozen=True)
class Assignment:
    """Variable state: operating level per device (0 = idle) and chosen edges."""

    levels: dict[int, int]
    edges: frozenset[tuple[int, int]]


@dataclass(frozen=True)
class InducedGraph:
    """Directed graph determined by the devices' operating levels.

    Edge costs equal the sender's level cost.
    """

    vertices: tuple[int, ...]
    edges: dict[tuple[int, int], float]

    @cached_property
    def successors(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for (i, j) in self.edges:
            adj[i].append(j)
        return {v: tuple(sorted(out)) for v, out in adj.items()}


@dataclass(frozen=True)
class ConstraintReport:
    """Outcome of one constraint check; violations identify the offenders."""

    name: str
    ok: bool
    violations: tuple


def _check_levels_known(levels: Mapping, net: Network) -> None:
    for dev_id in levels:
        if dev_id not in net.index_of:
            raise NetworkValidationError(f"unknown device id {dev_id} in level map")


def induce_graph(net: Network, levels: Mapping[int, int], mode: str = SECTOR_MODE) -> InducedGraph:
    """Graph induced by a level map: i -> j present when i operates at a
    level that reaches j.  Devices missing from the map count as idle."""
    check_mode(mode)
    _check_levels_known(levels, net)
    level_count = len(net.levels)
    edges: dict[tuple[int, int], float] = {}
    for dev in net.devices:
        lvl = levels.get(dev.id, 0)
        if not 0 <= lvl <= level_count:
            raise NetworkValidationError(
                f"device {dev.id} assigned level {lvl} outside 0..{level_count}"
            )
        if lvl == 0:
            continue
        cost = net.levels[lvl - 1].cost
        for other in net.devices:
            if other.id != dev.id and net.reaches(dev.id, other.id, lvl, mode):
                edges[(dev.id, other.id)] = cost
    return InducedGraph(
        vertices=tuple(d.id for d in net.devices),
        edges=edges,
    )


def check_one_level(levels, net: Network) -> ConstraintReport:
    """Every device of the network holds exactly one level entry.

    Accepts a mapping or an iterable of (device, level) pairs; the pair form
    can express duplicate entries, which are reported as violations just like
    missing devices and entries for unknown devices.
    """
    pairs = levels.items() if isinstance(levels, Mapping) else list(levels)
    counts: dict[int, int] = {}
    bad: set[int] = set()
    level_count = len(net.levels)
    for dev_id, lvl in pairs:
        counts[dev_id] = counts.get(dev_id, 0) + 1
        if dev_id not in net.index_of or not 0 <= lvl <= level_count:
            bad.add(dev_id)
    for dev in net.devices:
        if counts.get(dev.id, 0) != 1:
            bad.add(dev.id)
    for dev_id, cnt in counts.items():
        if cnt != 1:
            bad.add(dev_id)
    return ConstraintReport("one-level", not bad, tuple(sorted(bad)))


def check_edge_feasibility(assignment: Assignment, net: Network, mode: str = SECTOR_MODE) -> ConstraintReport:
    """Every chosen edge lies within its sender's operating energy.

    The required energy of a pair is the lowest feasible level's cost in
    sector mode, or the continuous power law in Euclidean mode; idle senders
    (level 0) support no edges at all.
    """
    check_mode(mode)
    level_count = len(net.levels)
    bad = []
    for (i, j) in sorted(assignment.edges):
        if i == j or i not in net.index_of or j not in net.index_of:
            bad.append((i, j))
            continue
        lvl = assignment.levels.get(i, 0)
        if not 1 <= lvl <= level_count:
            bad.append((i, j))
            continue
        if net.required_energy(i, j, mode) > net.levels[lvl - 1].cost:
            bad.append((i, j))
    return ConstraintReport("edge-feasibility", not bad, tuple(bad))


def count_simple_paths(graph: InducedGraph, s: int, d: int, cap: int = DEFAULT_PATH_CAP) -> int | None:
    """Number of simple directed paths from s to d, or None once the count
    exceeds ``cap``.  Defined as 0 when s == d."""
    if s not in graph.successors or d not in graph.successors:
        raise NetworkValidationError(f"{s} or {d} is not a vertex of the graph")
    if cap < 1:
        raise NetworkValidationError(f"cap must be >= 1, got {cap}")
    if s == d:
        return 0
    succ = graph.successors
    count = 0
    visited = {s}
    stack: list[tuple[int, int]] = [(s, 0)]
    while stack:
        node, idx = stack[-1]
        out = succ[node]
        if idx >= len(out):
            stack.pop()
            visited.discard(node)
            continue
        stack[-1] = (node, idx + 1)
        nxt = out[idx]
        if nxt == d:
            count += 1
            if count > cap:
                return None
        elif nxt not in visited:
            visited.add(nxt)
            stack.append((nxt, 0))
    return count


def check_connectivity(graph: InducedGraph, s: int, d: int) -> ConstraintReport:
    """The destination is reachable from the source by a directed search."""
    if s not in graph.successors or d not in graph.successors:
        raise NetworkValidationError(f"{s} or {d} is not a vertex of the graph")
    seen = {s}
    frontier = [s]
    while frontier:
        node = frontier.pop()
        if node == d:
            return ConstraintReport("connectivity", True, ())
        for nxt in graph.successors[node]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    ok = d in seen
    return ConstraintReport("connectivity", ok, () if ok else ((s, d),))


def objective_value(assignment: Assignment, net: Network) -> float:
    """Total energy of the assignment: the sum of every device's level cost,
    idle devices contributing 0."""
    _check_levels_known(assignment.levels, net)
    level_count = len(net.levels)
    total = 0
    for dev in net.devices:
        lvl = assignment.levels.get(dev.id, 0)
        if not 0 <= lvl <= level_count:
            raise NetworkValidationError(
                f"device {dev.id} assigned level {lvl} outside 0..{level_count}"
            )
        if lvl:
            total += net.levels[lvl - 1].cost
    return total


def assignment_from_path(path: PathResult, net: Network, mode: str = SECTOR_MODE) -> Assignment:
    """Variable state realizing a solved path: transmitters hold their hop
    levels, every other device idles, and the edge set is the graph those
    levels induce.  Raises if any hop is infeasible in the network."""
    if path.hops:
        evaluate_path(net, path.hops, path.destination, mode)
    levels = {dev.id: 0 for dev in net.devices}
    for dev_id, lvl in path.hops:
        levels[dev_id] = lvl
    graph = induce_graph(net, levels, mode)
    return Assignment(levels=levels, edges=frozenset(graph.edges))


def _fmt_num(value) -> str:
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    return repr(value) if isinstance(value, float) else str(value)


def export_lp(net: Network, s: int, d: int, mode: str = SECTOR_MODE, out=None) -> str:
    """LP-format text of the full model for one source/destination pair.

    Binary variables v_<device>_<level> pick levels, x_<i>_<j> pick edges;
    continuous f_<i>_<j> in [0, 1] carry a unit flow from s to d.  The flow
    rows are a linear stand-in for requiring a feasible path: a unit flow
    over the chosen edges exists exactly when d is reachable from s.
    Pairs no level can reach get a degenerate reach row forcing x to 0.
    """
    check_mode(mode)
    net.device(s)
    net.device(d)
    if s == d:
        raise NetworkValidationError("source and destination must differ")

    ids = [dev.id for dev in net.devices]
    levels = net.levels
    lines = [
        r"\ Minimum-energy level assignment for one source->destination message.",
        r"\ one_level_<i>: device i operates at exactly one level.",
        r"\ reach_<i>_<j>: edge (i, j) needs sender energy covering the pair.",
        r"\ flow_<k>, cap_<i>_<j>: a unit flow from the source to the",
        r"\   destination over chosen edges; feasible exactly when some",
        r"\   path of chosen edges connects them, which linearizes the",
        r"\   path-existence requirement.",
        f"\\ source: {s}  destination: {d}  mode: {mode}",
        "Minimize",
    ]
    obj_terms = []
    for i in ids:
        for lvl in levels:
            obj_terms.append(f"{_fmt_num(lvl.cost)} v_{i}_{lvl.id}")
    lines.append(" obj: " + " + ".join(obj_terms))
    lines.append("Subject To")
    for i in ids:
        terms = " + ".join(f"v_{i}_{lvl.id}" for lvl in levels)
        lines.append(f" one_level_{i}: {terms} = 1")
    for i in ids:
        for j in ids:
            if i == j:
                continue
            need = net.required_energy(i, j, mode)
            if math.isinf(need):
                lines.append(f" reach_{i}_{j}: x_{i}_{j} <= 0")
                continue
            lhs = [f"{_fmt_num(need)} x_{i}_{j}"]
            lhs += [f"- {_fmt_num(lvl.cost)} v_{i}_{lvl.id}" for lvl in levels]
            lines.append(f" reach_{i}_{j}: " + " ".join(lhs) + " <= 0")
    for k in ids:
        outs = [f"f_{k}_{j}" for j in ids if j != k]
        ins = [f"f_{j}_{k}" for j in ids if j != k]
        rhs = 1 if k == s else (-1 if k == d else 0)
        expr = " + ".join(outs) + "".join(f" - {t}" for t in ins)
        lines.append(f" flow_{k}: {expr} = {rhs}")
    for i in ids:
        for j in ids:
            if i != j:
                lines.append(f" cap_{i}_{j}: f_{i}_{j} - x_{i}_{j} <= 0")
    lines.append("Bounds")
    for i in ids:
        for j in ids:
            if i != j:
                lines.append(f" 0 <= f_{i}_{j} <= 1")
    lines.append("Binary")
    for i in ids:
        for lvl in levels:
            lines.append(f" v_{i}_{lvl.id}")
    for i in ids:
        for j in ids:
            if i != j:
                lines.append(f" x_{i}_{j}")
    lines.append("End")
    text = "\n".join(lines) + "\n"
    if out is not None:
        Path(out).write_text(text, encoding="utf-8")
    return text
