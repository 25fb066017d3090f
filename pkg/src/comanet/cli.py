"""Command-line front end: generate, solve, validate, export, render, bench.

Exit codes: 0 success, 2 usage, 3 I/O, 4 format/validation, 5 no feasible
path.  All commands are deterministic for fixed flags and input files
(benchmark timings aside).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import random
import re
import statistics
import sys
import time

from .errors import (
    ComanetError,
    ConfigError,
    FormatError,
    NetworkTooLargeError,
    NetworkValidationError,
    NoFeasiblePathError,
)
from .geometry import MODES, SECTOR_MODE
from .maned import (
    BRUTE_FORCE_DEVICE_LIMIT,
    PathResult,
    PathSolver,
    brute_force_min_path,
    load_solution,
    save_solution,
    solution_to_dict,
)
from .model import (
    assignment_from_path,
    check_connectivity,
    check_edge_feasibility,
    check_one_level,
    export_lp,
    induce_graph,
    objective_value,
)
from .netgen import Network, generate, load, save
from .render import render_dot, render_svg

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_VALIDATION = 4
EXIT_NO_PATH = 5

DEFAULT_SECTOR_SIZE = 26
DEFAULT_BENCH_SIZES = (100, 500, 1000, 2000, 3000, 4000, 5000)
# Reference occupancy for benchmark spaces: 50 devices on a 27x27 grid.
BENCH_DENSITY = 50 / 729


def _fmt_device(net: Network, dev_id: int) -> str:
    p = net.device(dev_id).position
    return f"{dev_id}[{p.x};{p.y};{p.z}]"


def format_path_text(result: PathResult, net: Network) -> str:
    """Arrow notation for a solved path.

    Transmissions print as ``-C<level>->``; a relay that changes level is
    repeated around a ``-Cb->`` arrow, and the destination is repeated
    after ``-Cd->``.
    """
    if not result.hops:
        return _fmt_device(net, result.destination)
    parts = [_fmt_device(net, result.hops[0][0])]
    prev_level = result.hops[0][1]
    for dev_id, lvl in result.hops[1:]:
        parts.append(f"-C{prev_level}-> {_fmt_device(net, dev_id)}")
        if lvl != prev_level:
            parts.append(f"-Cb-> {_fmt_device(net, dev_id)}")
        prev_level = lvl
    dest = _fmt_device(net, result.destination)
    parts.append(f"-C{prev_level}-> {dest}")
    parts.append(f"-Cd-> {dest}")
    return " ".join(parts)


_DEVICE_TOKEN = re.compile(r"^(\d+)\[(-?\d+);(-?\d+);(-?\d+)\]$")
_LEVEL_ARROW = re.compile(r"^-C(\d+)->$")


def parse_path_text(text: str) -> tuple[int, int, tuple[tuple[int, int], ...]]:
    """Inverse of :func:`format_path_text`: (source, destination, hops)."""
    tokens = text.strip().split()
    devices: list[int] = []
    arrows: list[str] = []
    for i, tok in enumerate(tokens):
        if i % 2 == 0:
            m = _DEVICE_TOKEN.match(tok)
            if not m:
                raise FormatError(f"bad device token {tok!r}", field="path")
            devices.append(int(m.group(1)))
        else:
            arrows.append(tok)
    if len(devices) == 1 and not arrows:
        return devices[0], devices[0], ()
    if not arrows or arrows[-1] != "-Cd->":
        raise FormatError("path must end with a -Cd-> arrow", field="path")
    hops: list[tuple[int, int]] = []
    idx = 0
    while idx < len(arrows) - 1:
        arrow = arrows[idx]
        m = _LEVEL_ARROW.match(arrow)
        if m:
            hops.append((devices[idx], int(m.group(1))))
            idx += 1
        elif arrow == "-Cb->":
            if devices[idx] != devices[idx + 1]:
                raise FormatError("swing arrow must repeat its device", field="path")
            idx += 1
        else:
            raise FormatError(f"bad arrow token {arrow!r}", field="path")
    if devices[-1] != devices[-2]:
        raise FormatError("destination must repeat after -Cd->", field="path")
    # drop the repeated pre-swing entries: a device transmits once
    cleaned: list[tuple[int, int]] = []
    for dev, lvl in hops:
        if cleaned and cleaned[-1][0] == dev:
            cleaned[-1] = (dev, lvl)
        else:
            cleaned.append((dev, lvl))
    return cleaned[0][0], devices[-1], tuple(cleaned)


def _apply_overrides(net: Network, args) -> Network:
    changes = {}
    if getattr(args, "cb", None) is not None:
        changes["cb"] = args.cb
    if getattr(args, "cd", None) is not None:
        changes["cd"] = args.cd
    return dataclasses.replace(net, **changes) if changes else net


def cmd_generate(args) -> int:
    net = generate(
        args.devices,
        args.width,
        args.height,
        sector_size=args.sector_size,
        level_count=args.levels,
        seed=args.seed,
        alpha=args.alpha,
        cb=args.cb if args.cb is not None else 1,
        cd=args.cd if args.cd is not None else 2,
    )
    save(net, args.out)
    print(f"generated {len(net.devices)} devices (seed {net.seed}) -> {args.out}")
    return EXIT_OK


def cmd_solve(args) -> int:
    net = _apply_overrides(load(args.network), args)
    solver = PathSolver(net, mode=args.mode)
    result = solver.solve(args.source, args.dest)
    if args.out:
        save_solution(result, args.out)
    if args.format == "json":
        print(json.dumps(solution_to_dict(result), indent=2))
    else:
        print(format_path_text(result, net))
        print(f"Total Cost: {result.total_cost}")
    if args.oracle:
        reference = brute_force_min_path(net, args.source, args.dest, mode=args.mode)
        if (reference.total_cost == result.total_cost
                and reference.hops == result.hops):
            print("oracle: match")
        else:
            print(
                f"oracle: MISMATCH (solver {result.total_cost}, "
                f"exhaustive {reference.total_cost})"
            )
            return EXIT_VALIDATION
    return EXIT_OK


def cmd_validate(args) -> int:
    net = _apply_overrides(load(args.network), args)
    sol = load_solution(args.solution)
    failures = 0

    def report(name: str, ok: bool, detail: str = ""):
        nonlocal failures
        status = "PASS" if ok else "FAIL"
        suffix = f" ({detail})" if detail and not ok else ""
        print(f"{status}: {name}{suffix}")
        if not ok:
            failures += 1

    result = None
    try:
        from .maned import evaluate_path

        result = evaluate_path(net, sol.hops, sol.destination, args.mode)
        report("path feasibility", True)
    except (NetworkValidationError, FormatError) as exc:
        report("path feasibility", False, str(exc))
        print("validation aborted: solution does not fit the network")
        return EXIT_VALIDATION

    consistent = (
        result.total_cost == sol.total_cost and result.swings == sol.swings
    )
    report(
        "recorded totals",
        consistent,
        f"recomputed cost {result.total_cost} swings {result.swings}, "
        f"file says {sol.total_cost}/{sol.swings}",
    )

    assignment = assignment_from_path(result, net, args.mode)
    r1 = check_one_level(assignment.levels, net)
    report("one level per device", r1.ok, f"devices {r1.violations}")
    r2 = check_edge_feasibility(assignment, net, args.mode)
    report("edge feasibility", r2.ok, f"edges {r2.violations}")
    graph = induce_graph(net, assignment.levels, args.mode)
    r3 = check_connectivity(graph, sol.source, sol.destination)
    report("source-destination connectivity", r3.ok, f"{r3.violations}")

    energy = objective_value(assignment, net)
    expected = result.total_cost - result.swings * net.cb - net.cd
    decomposed = result.hops == () or energy == expected
    report(
        "objective decomposition",
        decomposed,
        f"device energy {energy} != total - swings*cb - cd = {expected}",
    )
    return EXIT_OK if failures == 0 else EXIT_VALIDATION


def cmd_export(args) -> int:
    net = load(args.network)
    text = export_lp(net, args.source, args.dest, mode=args.mode)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_render(args) -> int:
    net = load(args.network)
    result = load_solution(args.solution) if args.solution else None
    svg = render_svg(net, result, mode=args.mode,
                     show_connections=not args.no_connections)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"wrote {args.out}")
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(render_dot(net, result, mode=args.mode))
        print(f"wrote {args.dot}")
    return EXIT_OK


def bench_space_side(n: int, sector_size: int = DEFAULT_SECTOR_SIZE) -> int:
    """Benchmark space side in pixels, keeping the per-sector device density
    of the 50-device reference scene as sizes grow."""
    sectors = max(1, math.ceil(math.sqrt(n / BENCH_DENSITY)))
    return sectors * sector_size


def cmd_bench(args) -> int:
    sizes = args.sizes
    repeats = max(args.repeats, 1)
    rows = []
    for n in sizes:
        side = bench_space_side(n, args.sector_size)
        gen_times, build_times, solve_times = [], [], []
        pick = random.Random(args.seed ^ n)
        for r in range(repeats):
            seed = args.seed + 1000 * r + n
            t0 = time.perf_counter()
            net = generate(n, side, side, sector_size=args.sector_size, seed=seed)
            t1 = time.perf_counter()
            solver = PathSolver(net)
            t2 = time.perf_counter()
            s = net.devices[pick.randrange(n)].id
            d = net.devices[pick.randrange(n)].id
            t3 = time.perf_counter()
            try:
                solver.solve(s, d)
            except NoFeasiblePathError:
                pass
            t4 = time.perf_counter()
            gen_times.append(t1 - t0)
            build_times.append(t2 - t1)
            solve_times.append(t4 - t3)
        rows.append({
            "n": n,
            "space_px": side,
            "generate_ms": statistics.median(gen_times) * 1e3,
            "build_ms": statistics.median(build_times) * 1e3,
            "solve_ms": statistics.median(solve_times) * 1e3,
        })
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'n':>6} {'space_px':>9} {'generate_ms':>12} {'build_ms':>10} {'solve_ms':>9}")
        for row in rows:
            print(
                f"{row['n']:>6} {row['space_px']:>9} "
                f"{row['generate_ms']:>12.2f} {row['build_ms']:>10.2f} "
                f"{row['solve_ms']:>9.3f}"
            )
    return EXIT_OK


def _sizes_arg(text: str) -> list[int]:
    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad sizes list {text!r}")
    if not sizes or any(n < 1 for n in sizes):
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="comanet",
        description="Minimum-energy paths in ad-hoc network snapshots "
                    "with discrete transmit power levels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a seeded random network file")
    p.add_argument("--devices", "-n", type=int, required=True)
    p.add_argument("--width", type=int, default=702)
    p.add_argument("--height", type=int, default=702)
    p.add_argument("--sector-size", type=int, default=DEFAULT_SECTOR_SIZE)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--cb", type=float, default=None, help="swing cost (default 1)")
    p.add_argument("--cd", type=float, default=None, help="destination cost (default 2)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="find the minimum-energy path")
    p.add_argument("--network", required=True)
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--dest", type=int, required=True)
    p.add_argument("--mode", choices=MODES, default=SECTOR_MODE)
    p.add_argument("--cb", type=float, default=None)
    p.add_argument("--cd", type=float, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None, help="also write the solution as JSON")
    p.add_argument("--oracle", action="store_true",
                   help=f"cross-check against exhaustive search "
                        f"(n <= {BRUTE_FORCE_DEVICE_LIMIT})")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="check a solution against its network")
    p.add_argument("--network", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--mode", choices=MODES, default=SECTOR_MODE)
    p.add_argument("--cb", type=float, default=None)
    p.add_argument("--cd", type=float, default=None)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("export", help="write the constraint model in LP format")
    p.add_argument("--network", required=True)
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--dest", type=int, required=True)
    p.add_argument("--mode", choices=MODES, default=SECTOR_MODE)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("render", help="draw the network (and a solution) as SVG")
    p.add_argument("--network", required=True)
    p.add_argument("--solution", default=None)
    p.add_argument("--mode", choices=MODES, default=SECTOR_MODE)
    p.add_argument("--out", required=True)
    p.add_argument("--dot", default=None, help="also write a DOT file")
    p.add_argument("--no-connections", action="store_true",
                   help="skip the possible-connection underlay")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="time generation and solves per size")
    p.add_argument("--sizes", type=_sizes_arg,
                   default=list(DEFAULT_BENCH_SIZES),
                   help="comma-separated device counts")
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--sector-size", type=int, default=DEFAULT_SECTOR_SIZE)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoFeasiblePathError:
        print("no feasible path", file=sys.stderr)
        return EXIT_NO_PATH
    except (FormatError, NetworkValidationError, NetworkTooLargeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ComanetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
