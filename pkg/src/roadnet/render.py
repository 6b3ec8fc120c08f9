"""Deterministic SVG drawing of a network graph."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import EmptyGraph, IoFailure
from .network import NetworkGraph, PlanarPoint


@dataclass(frozen=True)
class RenderStyle:
    width: int = 800
    height: int = 800
    node_radius: float = 4.0
    stroke_width: float = 2.0
    margin: float = 0.05
    link_color: str = "#4a5a6a"
    node_color: str = "#d9480f"

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0 or self.node_radius <= 0 or self.stroke_width <= 0:
            raise ValueError("render dimensions must be positive")
        if not 0 <= self.margin < 0.5:
            raise ValueError("margin must be a fraction in [0, 0.5)")


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def render_svg(g: NetworkGraph, style: RenderStyle = RenderStyle()) -> str:
    """Fit planar coordinates onto the canvas (north up) and draw links then nodes.

    A link and its reverse collapse to a single stroke; links without a
    reverse partner get an arrowhead.
    """
    if not g.nodes:
        raise EmptyGraph("graph has no nodes to draw")

    nodes = g.node_by_id()
    strokes: list[tuple[list[PlanarPoint], bool]] = []
    seen: set[tuple[int, int]] = set()
    pairs = {(l.from_node_id, l.to_node_id) for l in g.links}
    for l in sorted(g.links, key=lambda l: l.link_id):
        key = (min(l.from_node_id, l.to_node_id), max(l.from_node_id, l.to_node_id))
        if key in seen:
            continue
        seen.add(key)
        pts = [nodes[l.from_node_id].planar]
        pts += [g.projection.to_planar(p) for p in l.geometry[1:-1]]
        pts.append(nodes[l.to_node_id].planar)
        strokes.append((pts, (l.to_node_id, l.from_node_id) not in pairs))

    every = [n.planar for n in g.nodes] + [p for pts, _ in strokes for p in pts]
    min_x, max_x = min(p.x for p in every), max(p.x for p in every)
    min_y, max_y = min(p.y for p in every), max(p.y for p in every)
    cx, cy = (min_x + max_x) / 2, (min_y + max_y) / 2
    usable_w = style.width * (1 - 2 * style.margin)
    usable_h = style.height * (1 - 2 * style.margin)
    fits = [usable_w / (max_x - min_x)] if max_x > min_x else []
    fits += [usable_h / (max_y - min_y)] if max_y > min_y else []
    scale = min(fits) if fits else 1.0

    def xy(p: PlanarPoint) -> tuple[str, str]:
        return _fmt(style.width / 2 + (p.x - cx) * scale), _fmt(style.height / 2 - (p.y - cy) * scale)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{style.width}" height="{style.height}" '
        f'viewBox="0 0 {style.width} {style.height}">'
    ]
    if any(oneway for _, oneway in strokes):
        out.append(
            '<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" '
            'markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" '
            f'fill="{style.link_color}"/></marker></defs>'
        )
    out.append(
        f'<g class="links" stroke="{style.link_color}" stroke-width="{_fmt(style.stroke_width)}" '
        'fill="none" stroke-linecap="round">'
    )
    for pts, oneway in strokes:
        marker = ' marker-end="url(#arrow)"' if oneway else ""
        if len(pts) == 2:
            (x1, y1), (x2, y2) = xy(pts[0]), xy(pts[1])
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"{marker}/>')
        else:
            coords = " ".join(",".join(xy(p)) for p in pts)
            out.append(f'<polyline points="{coords}"{marker}/>')
    out.append("</g>")
    out.append(f'<g class="nodes" fill="{style.node_color}">')
    for n in sorted(g.nodes, key=lambda n: n.node_id):
        x, y = xy(n.planar)
        out.append(f'<circle id="n{n.node_id}" cx="{x}" cy="{y}" r="{_fmt(style.node_radius)}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(g: NetworkGraph, path, style: RenderStyle = RenderStyle()) -> Path:
    target = Path(path).resolve()
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(render_svg(g, style), encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {target}: {exc}") from exc
    return target
