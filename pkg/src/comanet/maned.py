"""Minimum-energy path search over a network snapshot.

Edges connect each ordered device pair at the sender's lowest feasible level.
The solver finds the cheapest simple source->destination path where a path
pays the level cost of every transmission, a swing cost ``cb`` at each relay
whose transmit level differs from its predecessor's, and a fixed ``cd`` at
the destination.

Because the swing charge depends on how a device was reached, plain
per-device Dijkstra is wrong whenever ``cb > 0``; the search instead runs
over (device, inbound level) states, of which there are at most
``n * (level_count + 1)``.  Ties are broken by fewer hops, then by the
lexicographically smaller device-id sequence, so results are deterministic
and the exhaustive oracle must agree exactly.
"""

from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from heapq import heappop, heappush
from pathlib import Path

from .errors import (
    FormatError,
    NetworkTooLargeError,
    NetworkValidationError,
    NoFeasiblePathError,
)
from .geometry import EUCLIDEAN_MODE, SECTOR_MODE, check_mode
from .netgen import Network

BRUTE_FORCE_DEVICE_LIMIT = 14


@dataclass(frozen=True)
class LevelEdge:
    """Directed connection u -> v at level ``level`` costing ``cost``."""

    u: int
    v: int
    level: int
    cost: float


@dataclass(frozen=True)
class PathResult:
    """A solved path: transmitters with their levels, then the destination.

    ``hops`` lists (device id, transmit level) for the source and every
    relay; the destination only receives.  ``total_cost`` is the sum of hop
    costs plus ``swings * cb`` plus ``cd``, or 0 for the empty
    source-equals-destination path.
    """

    source: int
    destination: int
    hops: tuple[tuple[int, int], ...]
    edges: tuple[LevelEdge, ...]
    swings: int
    total_cost: float
    cb: float
    cd: float

    @property
    def devices(self) -> tuple[int, ...]:
        if not self.hops:
            return (self.destination,)
        return tuple(h[0] for h in self.hops) + (self.destination,)


def _neighbor_groups(
    net: Network, mode: str, all_levels: bool
) -> list[list[tuple[int, list[int]]]]:
    """Per device index: [(level, [target indices...]), ...].

    Default: each reachable target appears once, under the sender's lowest
    supported level that reaches it.  With ``all_levels`` a target appears
    under every supported level that reaches it.
    """
    check_mode(mode)
    devices = net.devices
    n = len(devices)
    levels = net.levels
    level_count = len(levels)
    size = net.sector_size

    if mode == SECTOR_MODE:
        sx = [d.position.x // size for d in devices]
        sy = [d.position.y // size for d in devices]
        max_range = levels[-1].range_sectors
        # lowest level covering each Chebyshev distance, 0..max_range
        min_level = [0] * (max_range + 1)
        for dist in range(max_range + 1):
            for lvl in levels:
                if dist <= lvl.range_sectors:
                    min_level[dist] = lvl.id
                    break
        rows: dict[int, list[tuple[int, int]]] = {}
        for i in range(n):
            rows.setdefault(sy[i], []).append((sx[i], i))
        for row in rows.values():
            row.sort()

        result = []
        for u in range(n):
            ux, uy = sx[u], sy[u]
            reach = levels[devices[u].max_level - 1].range_sectors
            groups: list[list[int]] = [[] for _ in range(devices[u].max_level)]
            for ry in range(uy - reach, uy + reach + 1):
                row = rows.get(ry)
                if row is None:
                    continue
                dy = abs(ry - uy)
                lo = bisect_left(row, (ux - reach, -1))
                hi = bisect_right(row, (ux + reach, n))
                for k in range(lo, hi):
                    vx, v = row[k]
                    if v == u:
                        continue
                    dx = abs(vx - ux)
                    cheb = dx if dx > dy else dy
                    lvl = min_level[cheb]
                    if lvl > devices[u].max_level:
                        continue
                    if all_levels:
                        for l2 in range(lvl, devices[u].max_level + 1):
                            groups[l2 - 1].append(v)
                    else:
                        groups[lvl - 1].append(v)
            result.append([(li + 1, g) for li, g in enumerate(groups) if g])
        return result

    # Euclidean mode: feasibility is (distance_px / sector_size) ** alpha
    # <= level cost, i.e. distance_px <= sector_size * cost ** (1 / alpha).
    alpha = net.alpha
    thresholds_sq = [(size * lvl.cost ** (1.0 / alpha)) ** 2 for lvl in levels]
    result = []
    for u in range(n):
        du = devices[u]
        cap = du.max_level
        groups = [[] for _ in range(cap)]
        max_sq = thresholds_sq[cap - 1]
        for v in range(n):
            if v == u:
                continue
            dv = devices[v]
            d_sq = (
                (du.position.x - dv.position.x) ** 2
                + (du.position.y - dv.position.y) ** 2
                + (du.position.z - dv.position.z) ** 2
            )
            if d_sq > max_sq:
                continue
            lvl = next(
                l + 1 for l in range(level_count) if d_sq <= thresholds_sq[l]
            )
            if all_levels:
                for l2 in range(lvl, cap + 1):
                    groups[l2 - 1].append(v)
            else:
                groups[lvl - 1].append(v)
        result.append([(li + 1, g) for li, g in enumerate(groups) if g])
    return result


def build_edges(
    net: Network, mode: str = SECTOR_MODE, all_levels: bool = False
) -> tuple[LevelEdge, ...]:
    """All directed connections of the network, sorted by (u, v, level).

    An edge u -> v exists when some level supported by u reaches v; by
    default only the lowest such level is kept.  Edges are directed, so
    u -> v may exist without v -> u.
    """
    devices = net.devices
    edges = []
    for u_idx, groups in enumerate(_neighbor_groups(net, mode, all_levels)):
        u_id = devices[u_idx].id
        for lvl, targets in groups:
            cost = net.levels[lvl - 1].cost
            for v_idx in targets:
                edges.append(LevelEdge(u_id, devices[v_idx].id, lvl, cost))
    edges.sort(key=lambda e: (e.u, e.v, e.level))
    return tuple(edges)


class PathSolver:
    """Reusable solver holding the prebuilt adjacency of one network.

    Building the adjacency is the expensive part; a built solver answers
    many source/destination queries cheaply and is safe to share read-only.
    """

    def __init__(self, net: Network, mode: str = SECTOR_MODE, all_levels: bool = False):
        self.network = net
        self.mode = check_mode(mode)
        self.all_levels = all_levels
        n = len(net.devices)
        self._n = n
        self._sw = len(net.levels) + 1  # state width: inbound 0 (none) .. L
        costs = [lvl.cost for lvl in net.levels]
        # per device: (base cost, level, [target state index ...])
        self._adj: list[list[tuple[float, int, list[int]]]] = []
        sw = self._sw
        for groups in _neighbor_groups(net, mode, all_levels):
            self._adj.append(
                [(costs[lvl - 1], lvl, [v * sw + lvl for v in targets])
                 for lvl, targets in groups]
            )

    def solve(self, source: int, destination: int) -> PathResult:
        """Cheapest simple path from source to destination.

        Raises NetworkValidationError for unknown ids and
        NoFeasiblePathError when the destination cannot be reached.
        """
        net = self.network
        index_of = net.index_of
        try:
            s = index_of[source]
            d = index_of[destination]
        except KeyError as exc:
            raise NetworkValidationError(f"unknown device id {exc.args[0]}") from None
        cb, cd = net.cb, net.cd
        if s == d:
            return PathResult(source, destination, (), (), 0, 0, cb, cd)

        sw = self._sw
        n_states = self._n * sw
        inf = float("inf")
        dist = [inf] * n_states
        hops = [0] * n_states
        pred = [-1] * n_states
        settled = bytearray(n_states)
        best_dev = [inf] * self._n
        adj = self._adj

        start = s * sw
        dist[start] = 0
        heap = [(0, 0, start)]
        d_candidates: list[int] = []
        best_d_cost = inf
        while heap:
            c, h, state = heappop(heap)
            if settled[state]:
                continue
            if c > best_d_cost:
                break
            settled[state] = 1
            u = state // sw
            if c > best_dev[u] + cb:
                # Strictly dominated: even a free swing cannot recover cb.
                continue
            if c < best_dev[u]:
                best_dev[u] = c
            if u == d:
                d_candidates.append(state)
                if c < best_d_cost:
                    best_d_cost = c
                continue
            lin = state - u * sw
            h1 = h + 1
            for base, lvl, targets in adj[u]:
                w = base + cb if lin and lvl != lin else base
                nc = c + w
                for t in targets:
                    if settled[t]:
                        continue
                    dt = dist[t]
                    if nc < dt:
                        dist[t] = nc
                        hops[t] = h1
                        pred[t] = state
                        heappush(heap, (nc, h1, t))
                    elif nc == dt:
                        ht = hops[t]
                        if h1 < ht:
                            hops[t] = h1
                            pred[t] = state
                            heappush(heap, (nc, h1, t))
                        elif h1 == ht and self._chain(pred, state) < self._chain(pred, pred[t]):
                            pred[t] = state

        if not d_candidates:
            raise NoFeasiblePathError(
                f"no feasible path from {source} to {destination}"
            )
        best = min(
            d_candidates,
            key=lambda st: (dist[st], hops[st], self._chain(pred, st)),
        )
        return self._reconstruct(best, pred, dist[best] + cd)

    def _chain(self, pred: list[int], state: int) -> list[int]:
        """Device-index sequence of the path leading to ``state``."""
        seq = []
        sw = self._sw
        while state != -1:
            seq.append(state // sw)
            state = pred[state]
        seq.reverse()
        return seq

    def _reconstruct(self, last_state: int, pred: list[int], total) -> PathResult:
        net = self.network
        sw = self._sw
        states = []
        st = last_state
        while st != -1:
            states.append(st)
            st = pred[st]
        states.reverse()
        devices = net.devices
        ids = [devices[st // sw].id for st in states]
        lvls = [states[i + 1] % sw for i in range(len(states) - 1)]
        hop_list = tuple(zip(ids[:-1], lvls))
        edges = tuple(
            LevelEdge(ids[i], ids[i + 1], lvls[i], net.levels[lvls[i] - 1].cost)
            for i in range(len(lvls))
        )
        swings = sum(1 for a, b in zip(lvls, lvls[1:]) if a != b)
        return PathResult(
            source=ids[0],
            destination=ids[-1],
            hops=hop_list,
            edges=edges,
            swings=swings,
            total_cost=total,
            cb=net.cb,
            cd=net.cd,
        )


def maned_solve(
    net: Network,
    source: int,
    destination: int,
    mode: str = SECTOR_MODE,
    all_levels: bool = False,
) -> PathResult:
    """One-shot solve; build a PathSolver instead for repeated queries."""
    return PathSolver(net, mode, all_levels).solve(source, destination)


def evaluate_path(
    net: Network,
    hops,
    destination: int,
    mode: str = SECTOR_MODE,
) -> PathResult:
    """Cost breakdown of one candidate path given as (device, level) hops.

    Every hop must be feasible: the stated level supported by its sender and
    reaching the next device under the given mode.  Levels need not be the
    lowest feasible ones.  Empty ``hops`` means source == destination and
    costs nothing.
    """
    check_mode(mode)
    hops = tuple((int(dev), int(lvl)) for dev, lvl in hops)
    net.device(destination)
    if not hops:
        return PathResult(destination, destination, (), (), 0, 0, net.cb, net.cd)

    chain = [dev for dev, _ in hops] + [destination]
    if len(set(chain)) != len(chain):
        raise NetworkValidationError(f"path repeats a device: {chain}")
    edges = []
    for i, (dev, lvl) in enumerate(hops):
        sender = net.device(dev)
        nxt = chain[i + 1]
        net.device(nxt)
        if not 1 <= lvl <= len(net.levels):
            raise NetworkValidationError(
                f"hop {i} ({dev} -> {nxt}): level {lvl} is not in the level table"
            )
        if lvl > sender.max_level:
            raise NetworkValidationError(
                f"hop {i} ({dev} -> {nxt}): device {dev} does not support level {lvl}"
            )
        if not net.reaches(dev, nxt, lvl, mode):
            raise NetworkValidationError(
                f"hop {i} ({dev} -> {nxt}): level {lvl} does not reach device {nxt}"
            )
        edges.append(LevelEdge(dev, nxt, lvl, net.levels[lvl - 1].cost))

    lvls = [lvl for _, lvl in hops]
    swings = sum(1 for a, b in zip(lvls, lvls[1:]) if a != b)
    total = sum(e.cost for e in edges) + swings * net.cb + net.cd
    return PathResult(
        source=hops[0][0],
        destination=destination,
        hops=hops,
        edges=tuple(edges),
        swings=swings,
        total_cost=total,
        cb=net.cb,
        cd=net.cd,
    )


def brute_force_min_path(
    net: Network,
    source: int,
    destination: int,
    device_limit: int = BRUTE_FORCE_DEVICE_LIMIT,
    mode: str = SECTOR_MODE,
    all_levels: bool = False,
) -> PathResult:
    """Exhaustive oracle: enumerate every simple path and keep the cheapest.

    Uses the same edge construction and the same (cost, hops, device
    sequence) tie-break as the solver, so on networks within
    ``device_limit`` the two must return identical results.
    """
    n = len(net.devices)
    if n > device_limit:
        raise NetworkTooLargeError(
            f"{n} devices exceeds the exhaustive limit of {device_limit}"
        )
    index_of = net.index_of
    try:
        s = index_of[source]
        d = index_of[destination]
    except KeyError as exc:
        raise NetworkValidationError(f"unknown device id {exc.args[0]}") from None
    cb, cd = net.cb, net.cd
    if s == d:
        return PathResult(source, destination, (), (), 0, 0, cb, cd)

    groups = _neighbor_groups(net, mode, all_levels)
    adj: list[list[tuple[int, int, float]]] = [[] for _ in range(n)]
    for u, gs in enumerate(groups):
        for lvl, targets in gs:
            cost = net.levels[lvl - 1].cost
            for v in targets:
                adj[u].append((v, lvl, cost))

    best_key = None
    best: list[tuple[int, int]] = []
    visited = [False] * n
    path: list[tuple[int, int]] = []  # (device index, transmit level)

    def walk(u: int, cost, last_level: int):
        nonlocal best_key, best
        visited[u] = True
        for v, lvl, lvl_cost in adj[u]:
            if visited[v]:
                continue
            swing = cb if last_level and lvl != last_level else 0
            c2 = cost + lvl_cost + swing
            path.append((u, lvl))
            if v == d:
                seq = tuple(p[0] for p in path) + (d,)
                key = (c2 + cd, len(path), seq)
                if best_key is None or key < best_key:
                    best_key = key
                    best = list(path)
            else:
                walk(v, c2, lvl)
            path.pop()
        visited[u] = False

    walk(s, 0, 0)
    if best_key is None:
        raise NoFeasiblePathError(f"no feasible path from {source} to {destination}")

    devices = net.devices
    hop_list = tuple((devices[u].id, lvl) for u, lvl in best)
    chain_ids = [h[0] for h in hop_list] + [destination]
    edges = tuple(
        LevelEdge(chain_ids[i], chain_ids[i + 1], lvl, net.levels[lvl - 1].cost)
        for i, (_, lvl) in enumerate(hop_list)
    )
    lvls = [lvl for _, lvl in hop_list]
    swings = sum(1 for a, b in zip(lvls, lvls[1:]) if a != b)
    return PathResult(
        source=source,
        destination=destination,
        hops=hop_list,
        edges=edges,
        swings=swings,
        total_cost=best_key[0],
        cb=cb,
        cd=cd,
    )


def solution_to_dict(result: PathResult) -> dict:
    return {
        "source": result.source,
        "destination": result.destination,
        "hops": [{"device": dev, "level": lvl} for dev, lvl in result.hops],
        "swings": result.swings,
        "total_cost": result.total_cost,
        "breakdown": [
            {"from": e.u, "to": e.v, "level": e.level, "cost": e.cost}
            for e in result.edges
        ],
        "cb": result.cb,
        "cd": result.cd,
    }


def solution_from_dict(doc) -> PathResult:
    if not isinstance(doc, dict):
        raise FormatError("solution document must be a JSON object", field="")
    allowed = {"source", "destination", "hops", "swings", "total_cost",
               "breakdown", "cb", "cd"}
    for key in doc:
        if key not in allowed:
            raise FormatError(f"unknown field {key!r}", field=key)
    for key in allowed:
        if key not in doc:
            raise FormatError(f"missing field {key!r}", field=key)
    hops = []
    for k, item in enumerate(doc["hops"]):
        if not isinstance(item, dict) or set(item) != {"device", "level"}:
            raise FormatError(f"bad hop entry at hops[{k}]", field=f"hops[{k}]")
        hops.append((item["device"], item["level"]))
    edges = []
    for k, item in enumerate(doc["breakdown"]):
        if not isinstance(item, dict) or set(item) != {"from", "to", "level", "cost"}:
            raise FormatError(f"bad breakdown entry at breakdown[{k}]",
                              field=f"breakdown[{k}]")
        edges.append(LevelEdge(item["from"], item["to"], item["level"], item["cost"]))
    return PathResult(
        source=doc["source"],
        destination=doc["destination"],
        hops=tuple(hops),
        edges=tuple(edges),
        swings=doc["swings"],
        total_cost=doc["total_cost"],
        cb=doc["cb"],
        cd=doc["cd"],
    )


def save_solution(result: PathResult, destination) -> None:
    text = json.dumps(solution_to_dict(result), indent=2) + "\n"
    Path(destination).write_text(text, encoding="utf-8")


def load_solution(source) -> PathResult:
    try:
        doc = json.loads(Path(source).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}", field="") from exc
    return solution_from_dict(doc)
