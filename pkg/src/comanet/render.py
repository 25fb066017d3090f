"""Deterministic SVG and DOT rendering of networks and solved paths.

With up to three levels, connections use the fixed palette green / blue /
red for levels 1 / 2 / 3.  Larger level tables fall back to a ramp of
evenly spaced hues (``hsl(360 * (l - 1) / L, 75%, 40%)``), so any table
renders with distinct, stable colors.  Identical inputs always produce
byte-identical output: devices are drawn in id order and edges in sorted
order, with no timestamps or random ids.
"""

from __future__ import annotations

from .geometry import SECTOR_MODE
from .maned import PathResult, build_edges
from .netgen import Network

_PALETTE = {1: "#1e9e1e", 2: "#1e5fd0", 3: "#d02f1e"}

_MARGIN = 24
_DEVICE_RADIUS = 4


def level_color(level: int, level_count: int) -> str:
    """Stroke color for a transmit level."""
    if level_count <= 3:
        return _PALETTE[level]
    hue = round(360 * (level - 1) / level_count)
    return f"hsl({hue}, 75%, 40%)"


def _swing_devices(result: PathResult) -> list[int]:
    return [
        result.hops[i][0]
        for i in range(1, len(result.hops))
        if result.hops[i][1] != result.hops[i - 1][1]
    ]


def render_svg(
    net: Network,
    result: PathResult | None = None,
    mode: str = SECTOR_MODE,
    show_connections: bool = True,
) -> str:
    """Render the sector grid, every device, the possible connections, and
    (optionally) a solved path in bold with swing devices ringed."""
    grid = net.grid
    level_count = len(net.levels)
    width = grid.sectors_x * net.sector_size
    height = grid.sectors_y * net.sector_size
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width + 2 * _MARGIN}" height="{height + 2 * _MARGIN}" '
        f'viewBox="{-_MARGIN} {-_MARGIN} {width + 2 * _MARGIN} {height + 2 * _MARGIN}">',
        f'<rect x="{-_MARGIN}" y="{-_MARGIN}" width="{width + 2 * _MARGIN}" '
        f'height="{height + 2 * _MARGIN}" fill="#ffffff"/>',
        '<g class="grid" stroke="#dddddd" stroke-width="0.5">',
    ]
    for gx in range(grid.sectors_x + 1):
        x = gx * net.sector_size
        out.append(f'<line x1="{x}" y1="0" x2="{x}" y2="{height}"/>')
    for gy in range(grid.sectors_y + 1):
        y = gy * net.sector_size
        out.append(f'<line x1="0" y1="{y}" x2="{width}" y2="{y}"/>')
    out.append("</g>")

    if show_connections:
        out.append('<g class="connections" stroke-width="0.6" stroke-opacity="0.45">')
        for e in build_edges(net, mode):
            pu = net.device(e.u).position
            pv = net.device(e.v).position
            out.append(
                f'<line x1="{pu.x}" y1="{pu.y}" x2="{pv.x}" y2="{pv.y}" '
                f'stroke="{level_color(e.level, level_count)}"/>'
            )
        out.append("</g>")

    if result is not None and result.edges:
        out.append('<g class="path" stroke-width="2.5" fill="none">')
        for e in result.edges:
            pu = net.device(e.u).position
            pv = net.device(e.v).position
            out.append(
                f'<line class="path-edge" x1="{pu.x}" y1="{pu.y}" '
                f'x2="{pv.x}" y2="{pv.y}" '
                f'stroke="{level_color(e.level, level_count)}"/>'
            )
        out.append("</g>")
        for dev_id in _swing_devices(result):
            p = net.device(dev_id).position
            out.append(
                f'<circle class="swing" cx="{p.x}" cy="{p.y}" r="8" '
                'fill="none" stroke="#e08000" stroke-width="1.8"/>'
            )
        for dev_id, label in ((result.source, "s"), (result.destination, "d")):
            p = net.device(dev_id).position
            out.append(
                f'<circle class="endpoint endpoint-{label}" cx="{p.x}" cy="{p.y}" '
                'r="11" fill="none" stroke="#333333" stroke-width="1" '
                'stroke-dasharray="3 2"/>'
            )

    for dev in net.devices:
        p = dev.position
        parts = [f'<g class="device" data-id="{dev.id}">']
        parts.append(
            f'<circle cx="{p.x}" cy="{p.y}" r="{_DEVICE_RADIUS}" fill="#222222"/>'
        )
        # one tick per supported level, rising with the level index
        for lvl in range(1, dev.max_level + 1):
            x = p.x - 4 + 3 * (lvl - 1)
            parts.append(
                f'<line x1="{x}" y1="{p.y - 6}" x2="{x}" y2="{p.y - 6 - 2 * lvl}" '
                f'stroke="{level_color(lvl, level_count)}" stroke-width="1.2"/>'
            )
        parts.append(
            f'<text x="{p.x + 6}" y="{p.y + 4}" font-size="9" '
            f'font-family="sans-serif" fill="#444444">{dev.id}</text>'
        )
        parts.append("</g>")
        out.append("".join(parts))

    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_dot(net: Network, result: PathResult | None = None, mode: str = SECTOR_MODE) -> str:
    """DOT digraph of the connection graph, path edges emphasized."""
    level_count = len(net.levels)
    path_edges = {(e.u, e.v) for e in result.edges} if result is not None else set()
    lines = ["digraph comanet {", '  node [shape=circle, fontsize=10];']
    for dev in net.devices:
        p = dev.position
        lines.append(
            f'  {dev.id} [pos="{p.x},{p.y}!", label="{dev.id}/L{dev.max_level}"];'
        )
    for e in build_edges(net, mode):
        attrs = [f'color="{level_color(e.level, level_count)}"', f'label="C{e.level}"']
        if (e.u, e.v) in path_edges:
            attrs.append("penwidth=3")
        lines.append(f"  {e.u} -> {e.v} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
