"""Independent oracles and random configuration builders shared by the suites."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from math import comb

from pancake_lab.constructions import NotStored, best_known, construct
from pancake_lab.kernel import Arc, Circle, Line, Ray, Segment
from pancake_lab.shapes import AFFINE, ShapeKind, catalog, transform

K = ShapeKind

# (kind, k) pairs covering every catalog entry
ALL_KINDS = [
    (K.LINE, None), (K.HATPIN, None), (K.KV, 3), (K.KCHAIN, 4), (K.KCHAIN, 5), (K.LONG_A, None),
    (K.LONG_Z, None), (K.LONG_W, None), (K.LBAR, None), (K.XBAR, None), (K.HBAR, None),
    (K.PHIBAR, None), (K.TBAR, None), (K.ABAR, None), (K.POLYGON, 5), (K.CONCAVE_QUAD, None),
    (K.CIRCLE, None), (K.FIGURE8, None), (K.PENTAGRAM, None), (K.HEXAGRAM, None), (K.LOLLIPOP, None),
]

PYTHAGOREAN = [(1, 0, 1), (3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29)]


# -- closed forms written out independently of the package ---------------------------------

def table1(k: int, n: int) -> int:
    return comb(n, 2) * k * k + n * (k - 1) + 1


def table2(k: int, n: int) -> int:
    return (k * k * n * n - 3 * k * n) // 2 + 2 * n + 1


# -- float crossing oracle --------------------------------------------------------------------

def _pieces(inst):
    out = []
    for c in inst.primitives:
        if isinstance(c, Segment):
            out.append(("lin", c.p.as_float(), (float(c.q.x - c.p.x), float(c.q.y - c.p.y)), 0.0, 1.0, c.arm))
        elif isinstance(c, Ray):
            out.append(("lin", c.start.as_float(), c.dir.as_float(), 0.0, math.inf, c.arm))
        elif isinstance(c, Line):
            out.append(("lin", c.point.as_float(), c.dir.as_float(), -math.inf, math.inf, c.arm))
        elif isinstance(c, Arc):
            cx, cy = c.center.as_float()
            a0 = math.atan2(float(c.start.y) - cy, float(c.start.x) - cx)
            a1 = math.atan2(float(c.end.y) - cy, float(c.end.x) - cx)
            out.append(("arc", (cx, cy), float(c.radius), a0, a1, c.arm))
        elif isinstance(c, Circle):
            out.append(("arc", c.center.as_float(), float(c.radius), None, None, c.arm))
    return out


def _on_arc(piece, x, y, tol=1e-9):
    _, (cx, cy), _, a0, a1, _ = piece
    if a0 is None:
        return True
    span = (a1 - a0) % (2 * math.pi)
    rel = (math.atan2(y - cy, x - cx) - a0) % (2 * math.pi)
    if span < tol:  # whole circle minus one point
        return rel > tol
    return tol < rel < span - tol


def _points(p, q, tol=1e-9):
    if p[0] == "lin" and q[0] == "lin":
        (px, py), (dx, dy), lo1, hi1 = p[1], p[2], p[3], p[4]
        (qx, qy), (ex, ey), lo2, hi2 = q[1], q[2], q[3], q[4]
        den = dx * ey - dy * ex
        if abs(den) < 1e-15:
            return []
        wx, wy = qx - px, qy - py
        t = (wx * ey - wy * ex) / den
        s = (wx * dy - wy * dx) / den
        if lo1 + tol < t < hi1 - tol and lo2 + tol < s < hi2 - tol:
            return [(px + t * dx, py + t * dy)]
        return []
    if p[0] == "arc" and q[0] == "lin":
        p, q = q, p
    if p[0] == "lin":
        (px, py), (dx, dy), lo, hi = p[1], p[2], p[3], p[4]
        (cx, cy), r = q[1], q[2]
        fx, fy = px - cx, py - cy
        a, b, c = dx * dx + dy * dy, 2 * (fx * dx + fy * dy), fx * fx + fy * fy - r * r
        disc = b * b - 4 * a * c
        if disc <= 1e-12:
            return []
        out = []
        for t in ((-b - math.sqrt(disc)) / (2 * a), (-b + math.sqrt(disc)) / (2 * a)):
            x, y = px + t * dx, py + t * dy
            if lo + tol < t < hi - tol and _on_arc(q, x, y):
                out.append((x, y))
        return out
    (ax, ay), ar = p[1], p[2]
    (bx, by), br = q[1], q[2]
    d = math.hypot(bx - ax, by - ay)
    if d < 1e-12 or d >= ar + br - 1e-12 or d <= abs(ar - br) + 1e-12:
        return []
    along = (ar * ar - br * br + d * d) / (2 * d)
    h = math.sqrt(max(ar * ar - along * along, 0.0))
    ux, uy = (bx - ax) / d, (by - ay) / d
    mx, my = ax + along * ux, ay + along * uy
    out = []
    for sgn in (1, -1):
        x, y = mx - sgn * h * uy, my + sgn * h * ux
        if _on_arc(p, x, y) and _on_arc(q, x, y):
            out.append((x, y))
    return out


def float_crossings(instances) -> int:
    """Crossing points counted in floating point, independently of the exact kernel.

    Points within 1e-7 of a base node of either instance are not crossings.
    """
    points = []
    parts = [(_pieces(i), [b.as_float() for b, _ in i.base_nodes]) for i in instances]
    for i, (pi, bi) in enumerate(parts):
        for j in range(i, len(parts)):
            pj, bj = parts[j]
            for x, a in enumerate(pi):
                for y, b in enumerate(pj):
                    if i == j and y <= x:
                        continue
                    for pt in _points(a, b):
                        near = [q for q in bi + bj if math.hypot(pt[0] - q[0], pt[1] - q[1]) < 1e-7]
                        if not near:
                            points.append(pt)
    distinct = []
    for p in points:
        if all(math.hypot(p[0] - q[0], p[1] - q[1]) > 1e-7 for q in distinct):
            distinct.append(p)
    return len(distinct)


# -- random configurations --------------------------------------------------------------------

def template(kind, k):
    """One placed copy of a kind (from its n = 1 construction)."""
    try:
        return construct(kind, 1, k).instances[0]
    except (NotStored, ValueError):
        return best_known(kind, 1).instances[0]


def extent(inst) -> Fraction:
    coords = [abs(v) for b, _ in inst.base_nodes for v in (b.x, b.y)]
    for c in inst.primitives:
        if isinstance(c, (Circle, Arc)):
            coords += [abs(c.center.x) + c.radius, abs(c.center.y) + c.radius]
        elif isinstance(c, (Segment, Ray, Line)):
            coords += [abs(c.origin.x), abs(c.origin.y)]
    return max([Fraction(1)] + [Fraction(v) for v in coords if isinstance(v, (int, Fraction))])


def random_similarity(rng: random.Random):
    a, b, c = rng.choice(PYTHAGOREAN)
    if rng.random() < 0.5:
        a, b = b, a
    cos, sin = Fraction(a, c) * rng.choice((1, -1)), Fraction(b, c) * rng.choice((1, -1))
    s = Fraction(rng.randint(1, 6), rng.randint(1, 4))
    m = ((s * cos, -s * sin), (s * sin, s * cos))
    if rng.random() < 0.5:  # reflect
        m = ((m[0][0], -m[0][1]), (m[1][0], -m[1][1]))
    return m


def random_affine(rng: random.Random):
    while True:
        m = tuple(tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(2)) for _ in range(2))
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0:
            return m


def random_map(kind, k, rng: random.Random):
    if catalog(kind, k).family == AFFINE and rng.random() < 0.5:
        return random_affine(rng)
    return random_similarity(rng)


def random_configuration(kind, k, rng: random.Random, n: int):
    base = template(kind, k)
    size = extent(base)
    out = []
    for i in range(n):
        m = random_map(kind, k, rng)
        t = tuple(Fraction(rng.randint(-16, 16), 16) * size for _ in range(2))
        out.append(transform(base, m, t, id=i))
    return out
