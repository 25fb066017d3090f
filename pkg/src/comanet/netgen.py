"""Network snapshot model, seeded random generation, and JSON (de)serialization.

A network is an immutable snapshot of devices at fixed positions.  Each device
supports a prefix {1..max_level} of the level table: level 1 always, each
further level with a conditional probability (3/4 for level 2, 1/2 afterwards),
giving marginal support rates 1, 0.75, 0.375 for the default three levels.

The file format is JSON (version 1).  Version 1 pins the generator RNG to
Python's Mersenne Twister (``random.Random``), so a (seed, parameters) pair
identifies a network exactly.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from .errors import ConfigError, FormatError, NetworkValidationError
from .geometry import (
    EUCLIDEAN_MODE,
    SECTOR_MODE,
    Point,
    PowerLevel,
    SectorGrid,
    check_mode,
    default_levels,
    euclidean_distance,
    sector_distance,
    sector_of,
)

FORMAT_VERSION = 1

# Conditional probability that a device supporting level l-1 also supports l.
_P_LEVEL2 = 0.75
_P_FURTHER = 0.5


@dataclass(frozen=True)
class Device:
    """A positioned node supporting transmit levels 1..max_level."""

    id: int
    position: Point
    max_level: int


@dataclass(frozen=True)
class Space:
    x: int
    y: int
    z: int = 0


@dataclass(frozen=True)
class Network:
    """Immutable network snapshot: space, level table, devices, cost parameters.

    ``cb`` is the energy charged when a relay changes transmit level between
    its inbound and outbound hop; ``cd`` is the fixed charge at the
    destination device.
    """

    space: Space
    sector_size: int
    levels: tuple[PowerLevel, ...]
    devices: tuple[Device, ...]
    alpha: float = 2.0
    cb: float = 1
    cd: float = 2
    seed: int | None = None

    def __post_init__(self):
        ordered = tuple(sorted(self.devices, key=lambda d: d.id))
        object.__setattr__(self, "devices", ordered)
        object.__setattr__(self, "levels", tuple(self.levels))

    @cached_property
    def grid(self) -> SectorGrid:
        return SectorGrid(self.sector_size, self.space.x, self.space.y)

    @cached_property
    def _by_id(self) -> dict[int, Device]:
        return {d.id: d for d in self.devices}

    @cached_property
    def index_of(self) -> dict[int, int]:
        return {d.id: i for i, d in enumerate(self.devices)}

    def device(self, device_id: int) -> Device:
        try:
            return self._by_id[device_id]
        except KeyError:
            raise NetworkValidationError(f"unknown device id {device_id}") from None

    def device_sector(self, device_id: int) -> tuple[int, int]:
        return sector_of(self.device(device_id).position, self.grid)

    def required_energy(self, u_id: int, v_id: int, mode: str = SECTOR_MODE):
        """Minimum energy for u to reach v under the given distance mode.

        Sector mode: cost of the lowest level whose sector range covers the
        pair (exact integer).  Euclidean mode: (distance / sector_size)
        ** alpha, the continuous power law in sector units.  Returns
        ``math.inf`` if no level of the table reaches v in sector mode.
        """
        check_mode(mode)
        u, v = self.device(u_id), self.device(v_id)
        if mode == EUCLIDEAN_MODE:
            d = euclidean_distance(u.position, v.position) / self.sector_size
            return d**self.alpha
        lvl = self._min_level_sector(u, v)
        return self.levels[lvl - 1].cost if lvl is not None else math.inf

    def min_feasible_level(self, u_id: int, v_id: int, mode: str = SECTOR_MODE) -> int | None:
        """Lowest level of the table that reaches v from u, ignoring what u
        supports; None when even the highest level falls short."""
        check_mode(mode)
        u, v = self.device(u_id), self.device(v_id)
        if mode == SECTOR_MODE:
            return self._min_level_sector(u, v)
        need = self.required_energy(u_id, v_id, mode)
        for lvl in self.levels:
            if need <= lvl.cost:
                return lvl.id
        return None

    def reaches(self, u_id: int, v_id: int, level: int, mode: str = SECTOR_MODE) -> bool:
        """Whether a transmission from u at ``level`` reaches v (support not
        checked; levels outside the table never reach)."""
        if not 1 <= level <= len(self.levels):
            return False
        lvl = self.min_feasible_level(u_id, v_id, mode)
        return lvl is not None and lvl <= level

    def _min_level_sector(self, u: Device, v: Device) -> int | None:
        dist = sector_distance(
            sector_of(u.position, self.grid), sector_of(v.position, self.grid)
        )
        for lvl in self.levels:
            if dist <= lvl.range_sectors:
                return lvl.id
        return None


def generate(
    n: int,
    width: int,
    height: int,
    *,
    sector_size: int = 26,
    level_count: int = 3,
    seed: int | None = None,
    alpha: float = 2.0,
    cb: float = 1,
    cd: float = 2,
) -> Network:
    """Generate a random heterogeneous network of ``n`` devices.

    Positions are uniform integers over [0, width) x [0, height); every
    device supports level 1, and each next level is drawn only when the
    previous one succeeded, so supported levels always form a prefix.
    Identical parameters and seed yield identical networks.
    """
    if n < 1:
        raise ConfigError(f"device count must be >= 1, got {n}")
    if width < 1 or height < 1:
        raise ConfigError(f"space dimensions must be positive, got {width}x{height}")
    if level_count < 1:
        raise ConfigError(f"level count must be >= 1, got {level_count}")
    if sector_size < 1:
        raise ConfigError(f"sector size must be positive, got {sector_size}")

    rng = random.Random(seed)
    devices = []
    for i in range(n):
        x = rng.randrange(width)
        y = rng.randrange(height)
        max_level = 1
        for lvl in range(2, level_count + 1):
            p = _P_LEVEL2 if lvl == 2 else _P_FURTHER
            if rng.random() >= p:
                break
            max_level = lvl
        devices.append(Device(id=i, position=Point(x, y), max_level=max_level))

    return Network(
        space=Space(width, height, 0),
        sector_size=sector_size,
        levels=default_levels(level_count),
        devices=tuple(devices),
        alpha=alpha,
        cb=cb,
        cd=cd,
        seed=seed,
    )


def validate_network(net: Network) -> None:
    """Check network invariants; raise NetworkValidationError on the first hit."""
    if net.sector_size < 1:
        raise NetworkValidationError(f"sector_size must be positive, got {net.sector_size}")
    if not 2.0 <= net.alpha <= 4.0:
        raise NetworkValidationError(f"alpha must be in [2, 4], got {net.alpha}")
    if net.cb < 0 or net.cd < 0:
        raise NetworkValidationError(f"cb and cd must be >= 0, got cb={net.cb} cd={net.cd}")
    if not net.levels:
        raise NetworkValidationError("level table is empty")
    for i, lvl in enumerate(net.levels, start=1):
        if lvl.id != i:
            raise NetworkValidationError(f"level ids must be consecutive from 1, got {lvl.id} at position {i}")
        if lvl.range_sectors < 1 or lvl.cost < 1:
            raise NetworkValidationError(f"level {lvl.id} has non-positive range or cost")
    for a, b in zip(net.levels, net.levels[1:]):
        if not (a.range_sectors < b.range_sectors and a.cost < b.cost):
            raise NetworkValidationError(
                f"level ranges and costs must strictly increase, violated at level {b.id}"
            )
    seen = set()
    for dev in net.devices:
        if dev.id in seen:
            raise NetworkValidationError(f"duplicate device id {dev.id}")
        seen.add(dev.id)
        p = dev.position
        if not (0 <= p.x <= net.space.x and 0 <= p.y <= net.space.y and 0 <= p.z <= net.space.z):
            raise NetworkValidationError(
                f"device {dev.id} at ({p.x}, {p.y}, {p.z}) is outside the space"
            )
        if not 1 <= dev.max_level <= len(net.levels):
            raise NetworkValidationError(
                f"device {dev.id} max_level {dev.max_level} outside 1..{len(net.levels)}"
            )


def network_to_dict(net: Network) -> dict:
    return {
        "version": FORMAT_VERSION,
        "seed": net.seed,
        "space": {"x": net.space.x, "y": net.space.y, "z": net.space.z},
        "sector_size": net.sector_size,
        "alpha": net.alpha,
        "cb": net.cb,
        "cd": net.cd,
        "levels": [
            {"id": l.id, "range_sectors": l.range_sectors, "cost": l.cost}
            for l in net.levels
        ],
        "devices": [
            {"id": d.id, "x": d.position.x, "y": d.position.y, "z": d.position.z,
             "max_level": d.max_level}
            for d in sorted(net.devices, key=lambda d: d.id)
        ],
    }


def _require(obj: dict, field_name: str, types, context: str = ""):
    where = f"{context}.{field_name}" if context else field_name
    if field_name not in obj:
        raise FormatError(f"missing field {where!r}", field=where)
    value = obj[field_name]
    if not isinstance(value, types) or isinstance(value, bool):
        raise FormatError(f"field {where!r} has wrong type {type(value).__name__}", field=where)
    return value


def _reject_unknown(obj: dict, allowed: set[str], context: str = "") -> None:
    for key in obj:
        if key not in allowed:
            where = f"{context}.{key}" if context else key
            raise FormatError(f"unknown field {where!r}", field=where)


def network_from_dict(doc) -> Network:
    if not isinstance(doc, dict):
        raise FormatError("network document must be a JSON object", field="")
    _reject_unknown(doc, {"version", "seed", "space", "sector_size", "alpha",
                          "cb", "cd", "levels", "devices"})
    version = _require(doc, "version", int)
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported version {version}", field="version")
    if "seed" not in doc:
        raise FormatError("missing field 'seed'", field="seed")
    seed = doc["seed"]
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise FormatError("field 'seed' must be an integer or null", field="seed")

    space_doc = _require(doc, "space", dict)
    _reject_unknown(space_doc, {"x", "y", "z"}, "space")
    space = Space(
        x=_require(space_doc, "x", int, "space"),
        y=_require(space_doc, "y", int, "space"),
        z=_require(space_doc, "z", int, "space"),
    )
    sector_size = _require(doc, "sector_size", int)
    alpha = float(_require(doc, "alpha", (int, float)))
    cb = _require(doc, "cb", (int, float))
    cd = _require(doc, "cd", (int, float))

    levels = []
    for k, item in enumerate(_require(doc, "levels", list)):
        ctx = f"levels[{k}]"
        if not isinstance(item, dict):
            raise FormatError(f"field {ctx!r} must be an object", field=ctx)
        _reject_unknown(item, {"id", "range_sectors", "cost"}, ctx)
        levels.append(PowerLevel(
            id=_require(item, "id", int, ctx),
            range_sectors=_require(item, "range_sectors", int, ctx),
            cost=_require(item, "cost", (int, float), ctx),
        ))

    devices = []
    for k, item in enumerate(_require(doc, "devices", list)):
        ctx = f"devices[{k}]"
        if not isinstance(item, dict):
            raise FormatError(f"field {ctx!r} must be an object", field=ctx)
        _reject_unknown(item, {"id", "x", "y", "z", "max_level"}, ctx)
        devices.append(Device(
            id=_require(item, "id", int, ctx),
            position=Point(
                x=_require(item, "x", int, ctx),
                y=_require(item, "y", int, ctx),
                z=_require(item, "z", int, ctx),
            ),
            max_level=_require(item, "max_level", int, ctx),
        ))

    net = Network(
        space=space,
        sector_size=sector_size,
        levels=tuple(levels),
        devices=tuple(devices),
        alpha=alpha,
        cb=cb,
        cd=cd,
        seed=seed,
    )
    validate_network(net)
    return net


def save(net: Network, destination) -> None:
    """Write a network as canonical JSON (devices sorted by id)."""
    text = json.dumps(network_to_dict(net), indent=2) + "\n"
    Path(destination).write_text(text, encoding="utf-8")


def load(source) -> Network:
    """Read and validate a network file written by :func:`save`."""
    try:
        doc = json.loads(Path(source).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}", field="") from exc
    return network_from_dict(doc)
