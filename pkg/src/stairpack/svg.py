from __future__ import annotations

from .geom import Point, StairPolygon
from .packing import PackingInstance, overlap_graph
from .stair import StairFamily

SCALE = 100
PALETTE = ("#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2", "#edc948", "#9c755f")


def _n(v) -> str:
    s = f"{float(v) * SCALE:.3f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def layers(p: PackingInstance) -> list[int]:
    """Greedy colouring of the interior-overlap graph in index order."""
    adj = overlap_graph(p.offsets)
    back: list[set[int]] = [set() for _ in p.offsets]
    for i, js in enumerate(adj):
        for j in js:
            back[j].add(i)
    out: list[int] = []
    for i in range(p.N):
        used = {out[j] for j in back[i]}
        c = 0
        while c in used:
            c += 1
        out.append(c)
    return out


def _path(points: list[Point], l: int) -> str:
    return "M" + " L".join(f"{_n(x)},{_n(l - y)}" for x, y in points) + " Z"


def _stair_outline(s: StairPolygon) -> list[Point]:
    pts = [Point(s.xs[0], s.bottom)]
    for i in range(s.r + 1):
        pts.append(Point(s.xs[i], s.ys[i]))
        pts.append(Point(s.xs[i + 1], s.ys[i]))
    pts.append(Point(s.xs[-1], s.bottom))
    return pts


def render_svg(p: PackingInstance, fam: StairFamily | None = None) -> str:
    """SVG 1.1 drawing of the triangles, optionally with stairs and press corners.

    Elements are emitted in index order so identical input gives identical bytes.
    """
    l = p.l
    side = _n(l)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{side}" height="{side}" '
        f'viewBox="0 0 {side} {side}">',
        f'<rect x="0" y="0" width="{side}" height="{side}" fill="white" stroke="black" stroke-width="1"/>',
        '<g id="triangles">',
    ]
    for i, (o, layer) in enumerate(zip(p.offsets, layers(p))):
        tri = [o, o + (1, 0), o + (0, 1)]
        out.append(
            f'<path id="T{i}" d="{_path(tri, l)}" fill="{PALETTE[layer % len(PALETTE)]}" '
            f'fill-opacity="0.35" stroke="#333" stroke-width="0.5"/>'
        )
    out.append("</g>")
    if fam is not None:
        out.append('<g id="stairs" fill="none" stroke="#c00" stroke-width="1">')
        for i, s in enumerate(fam.stairs):
            out.append(f'<path id="S{i}" d="{_path(_stair_outline(s), l)}"/>')
        out.append("</g>")
        out.append('<g id="corners" fill="#c00">')
        for i, cs in enumerate(fam.corners):
            for c in cs:
                out.append(f'<circle cx="{_n(c.x)}" cy="{_n(l - c.y)}" r="2"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
