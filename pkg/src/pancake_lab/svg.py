"""Deterministic SVG drawings of placed shapes."""

from __future__ import annotations

import math
from typing import Optional

from .arrangement import build
from .kernel import Arc, Circle, Line, Ray, Segment

MARGIN = 0.15


def _fmt(x: float) -> str:
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _clip(ox, oy, dx, dy, t_lo, t_hi, box):
    """Parameter range of o + t d inside box, intersected with [t_lo, t_hi] (Liang-Barsky)."""
    x0, y0, x1, y1 = box
    for p, q in ((-dx, ox - x0), (dx, x1 - ox), (-dy, oy - y0), (dy, y1 - oy)):
        if p == 0:
            if q < 0:
                return None
            continue
        t = q / p
        if p < 0:
            t_lo = max(t_lo, t)
        else:
            t_hi = min(t_hi, t)
    return (t_lo, t_hi) if t_lo <= t_hi else None


def _extent(instances, crossings):
    xs, ys = [], []
    for inst in instances:
        for p, _ in inst.base_nodes:
            xs.append(float(p.x))
            ys.append(float(p.y))
        for c in inst.primitives:
            if isinstance(c, (Circle, Arc)):
                cx, cy, r = float(c.center.x), float(c.center.y), float(c.radius)
                xs += [cx - r, cx + r]
                ys += [cy - r, cy + r]
            elif isinstance(c, (Segment, Ray, Line)):
                xs.append(float(c.origin.x))
                ys.append(float(c.origin.y))
                if isinstance(c, Segment):
                    xs.append(float(c.q.x))
                    ys.append(float(c.q.y))
    for p in crossings:
        xs.append(p[0])
        ys.append(p[1])
    if not xs:
        return (-1.0, -1.0, 1.0, 1.0)
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1.0)
    pad = MARGIN * span
    return (x0 - pad, y0 - pad, x1 + pad, y1 + pad)


def render(instances, width: int = 800, mark_crossings: bool = False) -> str:
    """SVG text: one path per linear primitive or arc, circle elements for circles.

    Infinite arms are clipped at the viewport and carry arrowheads; base nodes are
    small filled dots (ellipse elements, so circle elements mean shape circles only).
    """
    instances = list(instances)
    crossings = []
    if instances:
        arr = build(instances)
        crossings = sorted({p.as_float() for p in (r.point for r in arr.records)})
    box = _extent(instances, crossings)
    x0, y0, x1, y1 = box
    scale = width / (x1 - x0)
    height = max(1, round((y1 - y0) * scale))

    def sx(x):
        return _fmt((x - x0) * scale)

    def sy(y):
        return _fmt((y1 - y) * scale)

    dot_r = _fmt(max(2.0, width / 200))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "<defs>",
        '<marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" '
        'orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z"/></marker>',
        "</defs>",
        '<g fill="none" stroke="black" stroke-width="1.5">',
    ]
    for inst in instances:
        for c in inst.primitives:
            tag = f'data-shape="{inst.id}" data-arm="{c.arm}"'
            if isinstance(c, Circle):
                out.append(f'<circle {tag} cx="{sx(float(c.center.x))}" cy="{sy(float(c.center.y))}" '
                           f'r="{_fmt(float(c.radius) * scale)}"/>')
            elif isinstance(c, Arc):
                r = float(c.radius)
                s, e = c.start.as_float(), c.end.as_float()
                cx, cy = float(c.center.x), float(c.center.y)
                sweep = (math.atan2(e[1] - cy, e[0] - cx) - math.atan2(s[1] - cy, s[0] - cx)) % (2 * math.pi)
                large = 1 if sweep > math.pi else 0
                # counter-clockwise in the plane is clockwise once y is flipped
                out.append(f'<path {tag} class="arc" d="M{sx(s[0])},{sy(s[1])} A{_fmt(r * scale)},'
                           f'{_fmt(r * scale)} 0 {large} 0 {sx(e[0])},{sy(e[1])}"/>')
            else:
                ox, oy = float(c.origin.x), float(c.origin.y)
                dx, dy = float(c.direction.x), float(c.direction.y)
                lo = -math.inf if isinstance(c, Line) else 0.0
                hi = 1.0 if isinstance(c, Segment) else math.inf
                span = _clip(ox, oy, dx, dy, lo, hi, box)
                if span is None:
                    continue
                a, b = span
                cls = "segment" if isinstance(c, Segment) else "ray" if isinstance(c, Ray) else "line"
                marks = ""
                if not isinstance(c, Segment):
                    marks += ' marker-end="url(#arrow)"'
                if isinstance(c, Line):
                    marks += ' marker-start="url(#arrow)"'
                out.append(f'<path {tag} class="{cls}" d="M{sx(ox + a * dx)},{sy(oy + a * dy)} '
                           f'L{sx(ox + b * dx)},{sy(oy + b * dy)}"{marks}/>')
    out.append("</g>")
    out.append('<g fill="black" stroke="none">')
    for inst in instances:
        for p, _ in inst.base_nodes:
            out.append(f'<ellipse class="base-node" cx="{sx(float(p.x))}" cy="{sy(float(p.y))}" '
                       f'rx="{dot_r}" ry="{dot_r}"/>')
    if mark_crossings:
        for x, y in crossings:
            out.append(f'<ellipse class="crossing" fill="red" cx="{sx(x)}" cy="{sy(y)}" '
                       f'rx="{dot_r}" ry="{dot_r}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write(instances, path, width: int = 800, mark_crossings: bool = False) -> None:
    with open(path, "w") as fh:
        fh.write(render(instances, width, mark_crossings))
