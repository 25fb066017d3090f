"""Space, sector grid, distance metrics and the power-level range/cost model.

A transmit level ``l`` covers ``l * (l + 1)`` sectors and costs the square of
that range in energy units, so the default three levels reach 2, 6 and 12
sectors at costs 4, 36 and 144.  Sector-based visibility uses the Chebyshev
distance between floor-divided sector coordinates; plain Euclidean visibility
is available as an alternative mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError, OutOfBoundsError

# Distance modes accepted by every operation that tests reachability.
SECTOR_MODE = "sector"
EUCLIDEAN_MODE = "euclidean"
MODES = (SECTOR_MODE, EUCLIDEAN_MODE)

ALPHA_MIN = 2.0
ALPHA_MAX = 4.0


@dataclass(frozen=True)
class Point:
    """Position in pixels; z stays 0 in the default 2D mode."""

    x: int
    y: int
    z: int = 0


@dataclass(frozen=True)
class SectorGrid:
    """Square-sector partition of a space, covering it by ceil division."""

    sector_size: int
    space_width: int
    space_height: int

    def __post_init__(self):
        if self.sector_size <= 0:
            raise ConfigError(f"sector_size must be positive, got {self.sector_size}")

    @property
    def sectors_x(self) -> int:
        return -(-self.space_width // self.sector_size)

    @property
    def sectors_y(self) -> int:
        return -(-self.space_height // self.sector_size)


@dataclass(frozen=True)
class PowerLevel:
    """A transmit level: index, range in sectors, energy cost per transmission."""

    id: int
    range_sectors: int
    cost: int


def level_range_sectors(level: int) -> int:
    """Distance in sectors covered by a transmit level: ``l * (l + 1)``."""
    if level < 1:
        raise ConfigError(f"level index must be >= 1, got {level}")
    return level * (level + 1)


def level_cost(level: int) -> int:
    """Energy cost of a transmit level: the square of its sector range."""
    return level_range_sectors(level) ** 2


def default_levels(count: int) -> tuple[PowerLevel, ...]:
    """The standard level table for ``count`` levels (ranges 2, 6, 12, ...)."""
    if count < 1:
        raise ConfigError(f"level count must be >= 1, got {count}")
    return tuple(
        PowerLevel(id=l, range_sectors=level_range_sectors(l), cost=level_cost(l))
        for l in range(1, count + 1)
    )


def euclidean_distance(p: Point, q: Point) -> float:
    return math.sqrt((p.x - q.x) ** 2 + (p.y - q.y) ** 2 + (p.z - q.z) ** 2)


def pair_energy(p: Point, q: Point, alpha: float) -> float:
    """Minimum transmitter power for p to reach q: distance ** alpha.

    The proportionality constant is 1; alpha is the channel-loss exponent
    and must lie in [2, 4].
    """
    if not ALPHA_MIN <= alpha <= ALPHA_MAX:
        raise ConfigError(f"alpha must be in [{ALPHA_MIN}, {ALPHA_MAX}], got {alpha}")
    return euclidean_distance(p, q) ** alpha


def sector_of(p: Point, grid: SectorGrid) -> tuple[int, int]:
    """Sector coordinates of a point: floor division of x and y by the size."""
    if not (0 <= p.x <= grid.space_width and 0 <= p.y <= grid.space_height):
        raise OutOfBoundsError(
            f"point ({p.x}, {p.y}) outside space "
            f"{grid.space_width}x{grid.space_height}"
        )
    return (p.x // grid.sector_size, p.y // grid.sector_size)


def sector_distance(a: tuple[int, int], b: tuple[int, int]) -> int:
    """Chebyshev distance between two sector coordinates."""
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ConfigError(f"unknown distance mode {mode!r}, expected one of {MODES}")
    return mode
