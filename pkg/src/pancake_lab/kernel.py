"""Geometric primitives and exact predicates.

Everything linear is exact over the rationals.  Circle intersections are exact
quadratic surds; ordering them around a circle may need interval refinement,
which is certified (see :func:`pancake_lab.numbers.certified_sign`).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .numbers import (
    AmbiguousOrderError,
    Interval,
    Number,
    Surd,
    certified_sign,
    compare,
    enclose,
    exact_equal,
    sign,
    surd,
)

__all__ = [
    "AmbiguousOrderError", "OverlapError", "Point", "Segment", "Ray", "Line",
    "Circle", "Arc", "IntersectionRecord", "orientation", "intersect",
    "order_along", "on_curve", "curve_param", "tangent_at", "curvature_at",
]


class OverlapError(ValueError):
    """Two curves share infinitely many points."""


@dataclass(frozen=True, eq=False)
class Point:
    x: Number
    y: Number

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return exact_equal(self.x, other.x) and exact_equal(self.y, other.y)

    def __hash__(self):
        if isinstance(self.x, Surd) or isinstance(self.y, Surd):
            return 0x5EED  # surd points are compared exactly, never bucketed by hash
        return hash((self.x, self.y))

    @property
    def is_rational(self) -> bool:
        return not (isinstance(self.x, Surd) or isinstance(self.y, Surd))

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def scale(self, k) -> "Point":
        return Point(self.x * k, self.y * k)

    def as_float(self) -> tuple[float, float]:
        return float(self.x), float(self.y)

    def __repr__(self):
        if self.is_rational:
            return f"Point({self.x}, {self.y})"
        return f"Point(~{float(self.x):.9g}, ~{float(self.y):.9g})"


def P(x, y) -> Point:
    return Point(Fraction(x), Fraction(y))


def cross(u: Point, v: Point):
    return u.x * v.y - u.y * v.x


def dot(u: Point, v: Point):
    return u.x * v.x + u.y * v.y


def _sign_of(fn, *points: Point) -> int:
    """Sign of fn(*points); exact when the operands share a field, else certified."""
    try:
        return sign(fn(*points))
    except ValueError:
        pass
    scale = max(1, *(abs(float(c)) for p in points for c in (p.x, p.y)))
    scale = Fraction(scale) ** 2

    def ev(e):
        pts = [Point(e(p.x), e(p.y)) for p in points]
        return fn(*pts)

    return certified_sign(ev, scale)


def orientation(p: Point, q: Point, r: Point) -> int:
    """+1 for a counter-clockwise turn p->q->r, -1 clockwise, 0 collinear."""
    return _sign_of(lambda a, b, c: cross(b - a, c - a), p, q, r)


# -- primitive curves ----------------------------------------------------------

@dataclass(frozen=True)
class _Curve:
    owner: Optional[int] = field(default=None, kw_only=True)
    arm: int = field(default=0, kw_only=True)

    @property
    def cid(self):
        return (self.owner, self.arm)


@dataclass(frozen=True)
class _Linear(_Curve):
    @property
    def origin(self) -> Point:
        raise NotImplementedError

    @property
    def direction(self) -> Point:
        raise NotImplementedError

    def bounds(self):
        raise NotImplementedError

    def at(self, t) -> Point:
        o, u = self.origin, self.direction
        return Point(o.x + t * u.x, o.y + t * u.y)


@dataclass(frozen=True)
class Segment(_Linear):
    p: Point
    q: Point

    def __post_init__(self):
        if self.p == self.q:
            raise ValueError("segment endpoints coincide")

    @property
    def origin(self):
        return self.p

    @property
    def direction(self):
        return self.q - self.p

    def bounds(self):
        return Fraction(0), Fraction(1)

    def endpoints(self):
        return [self.p, self.q]


@dataclass(frozen=True)
class Ray(_Linear):
    start: Point
    dir: Point

    def __post_init__(self):
        if self.dir.x == 0 and self.dir.y == 0:
            raise ValueError("ray direction is zero")

    @property
    def origin(self):
        return self.start

    @property
    def direction(self):
        return self.dir

    def bounds(self):
        return Fraction(0), None

    def endpoints(self):
        return [self.start]


@dataclass(frozen=True)
class Line(_Linear):
    point: Point
    dir: Point

    def __post_init__(self):
        if self.dir.x == 0 and self.dir.y == 0:
            raise ValueError("line direction is zero")

    @property
    def origin(self):
        return self.point

    @property
    def direction(self):
        return self.dir

    def bounds(self):
        return None, None

    def endpoints(self):
        return []


@dataclass(frozen=True)
class Circle(_Curve):
    center: Point
    radius: Fraction

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    def endpoints(self):
        return []


@dataclass(frozen=True)
class Arc(_Curve):
    """Counter-clockwise arc of a circle from ``start`` to ``end`` (rational points on it).

    ``start == end`` means the whole circle minus that point.
    """

    center: Point
    radius: Fraction
    start: Point
    end: Point

    def __post_init__(self):
        r2 = self.radius * self.radius
        for q in (self.start, self.end):
            if dot(q - self.center, q - self.center) != r2:
                raise ValueError("arc endpoint is not on its circle")

    def endpoints(self):
        return [self.start, self.end] if self.start != self.end else [self.start]


Curve = Union[Segment, Ray, Line, Circle, Arc]


def is_linear(c) -> bool:
    return isinstance(c, _Linear)


def is_round(c) -> bool:
    return isinstance(c, (Circle, Arc))


@dataclass(frozen=True, eq=False)
class IntersectionRecord:
    a: tuple
    b: tuple
    point: Point
    tangential: bool = False

    def enclosure(self, width: Fraction = Fraction(1, 10**12)) -> tuple[Interval, Interval]:
        bits = 32
        while True:
            ix, iy = enclose(self.point.x, bits), enclose(self.point.y, bits)
            if ix.width <= width and iy.width <= width:
                return ix, iy
            bits *= 2


# -- membership helpers ---------------------------------------------------------

def _in_range(t, lo, hi, strict=True) -> bool:
    if lo is not None:
        s = compare(t, lo)
        if s < 0 or (strict and s == 0):
            return False
    if hi is not None:
        s = compare(t, hi)
        if s > 0 or (strict and s == 0):
            return False
    return True


def _on_arc(arc: Arc, p: Point, strict=True) -> bool:
    """p is known to be on the arc's circle."""
    c = arc.center
    s, e, v = arc.start - c, arc.end - c, p - c
    if p == arc.start or p == arc.end:
        return not strict and True
    if arc.start == arc.end:
        return True
    se = sign(cross(s, e))
    if se > 0:
        return sign(cross(s, v)) > 0 and sign(cross(v, e)) > 0
    if se < 0:
        return not (sign(cross(e, v)) >= 0 and sign(cross(v, s)) >= 0)
    return sign(cross(s, v)) > 0  # half circle


def curve_param(curve, p: Point):
    """Parameter of a point known to lie on a linear curve."""
    o, u = curve.origin, curve.direction
    return dot(p - o, u) / dot(u, u)


def on_curve(curve, p: Point, interior_only: bool = False) -> bool:
    """Exact test that p lies on the curve (optionally excluding endpoints)."""
    if is_linear(curve):
        o, u = curve.origin, curve.direction
        if sign(cross(p - o, u)) != 0:
            return False
        lo, hi = curve.bounds()
        return _in_range(curve_param(curve, p), lo, hi, strict=interior_only)
    d = p - curve.center
    if sign(dot(d, d) - curve.radius * curve.radius) != 0:
        return False
    if isinstance(curve, Arc):
        return _on_arc(curve, p, strict=interior_only)
    return True


# -- intersections ----------------------------------------------------------------

def _lin_lin(a, b):
    pa, ua, pb, ub = a.origin, a.direction, b.origin, b.direction
    den = cross(ua, ub)
    w = pb - pa
    if den == 0:
        if cross(w, ua) != 0:
            return []
        # collinear: overlap of parameter ranges measured along a
        uu = dot(ua, ua)
        lo_b, hi_b = b.bounds()
        t0 = dot(w, ua) / uu
        k = dot(ub, ua) / uu  # b(s) = a(t0 + k s)
        ends = []
        for s in (lo_b, hi_b):
            ends.append(None if s is None else t0 + k * s)
        if k < 0:
            ends.reverse()
        lo2 = ends[0]
        hi2 = ends[1]
        lo_a, hi_a = a.bounds()
        lo = lo_a if lo2 is None else (lo2 if lo_a is None else max(lo_a, lo2))
        hi = hi_a if hi2 is None else (hi2 if hi_a is None else min(hi_a, hi2))
        if lo is None or hi is None or lo < hi:
            raise OverlapError(f"collinear overlap between {a.cid} and {b.cid}")
        return []  # touching at a shared endpoint at most
    ta = cross(w, ub) / den
    tb = cross(w, ua) / den
    lo, hi = a.bounds()
    if not _in_range(ta, lo, hi):
        return []
    lo, hi = b.bounds()
    if not _in_range(tb, lo, hi):
        return []
    return [(a.at(ta), False)]


def _lin_round(a, c):
    o, u = a.origin, a.direction
    w = o - c.center
    A = dot(u, u)
    B = dot(u, w)
    C0 = dot(w, w) - c.radius * c.radius
    disc = B * B - A * C0
    if disc < 0:
        return []
    if disc == 0:
        cands = [(-B / A, True)]
    else:
        cands = [(surd(-B / A, -1 / A, disc), False), (surd(-B / A, 1 / A, disc), False)]
    lo, hi = a.bounds()
    out = []
    for t, tang in cands:
        if not _in_range(t, lo, hi):
            continue
        p = Point(o.x + t * u.x, o.y + t * u.y)
        if isinstance(c, Arc) and not _on_arc(c, p):
            continue
        out.append((p, tang))
    return out


def _round_round(a, b):
    c1, c2, r1, r2 = a.center, b.center, a.radius, b.radius
    v = c2 - c1
    d2 = dot(v, v)
    if d2 == 0:
        if r1 != r2:
            return []
        if isinstance(a, Circle) or isinstance(b, Circle):
            raise OverlapError(f"coincident circles {a.cid} and {b.cid}")
        # two arcs of one circle: overlap unless they only share endpoints
        for arc, other in ((a, b), (b, a)):
            for q in other.endpoints():
                if _on_arc(arc, q, strict=True):
                    raise OverlapError(f"overlapping arcs {a.cid} and {b.cid}")
        if a.start == b.start and a.end == b.end:
            raise OverlapError(f"identical arcs {a.cid} and {b.cid}")
        return []
    outer, inner = (r1 + r2) ** 2, (r1 - r2) ** 2
    if d2 > outer or d2 < inner:
        return []
    if d2 == outer or d2 == inner:
        # tangency: d is rational here
        dd = r1 + r2 if d2 == outer else abs(r1 - r2)
        k = r1 / dd if (d2 == outer or r1 > r2) else -r1 / dd
        cands = [(Point(c1.x + k * v.x, c1.y + k * v.y), True)]
    else:
        al = (r1 * r1 - r2 * r2 + d2) / (2 * d2)
        D = r1 * r1 / d2 - al * al
        fx, fy = c1.x + al * v.x, c1.y + al * v.y
        cands = [
            (Point(surd(fx, -s * v.y, D), surd(fy, s * v.x, D)), False)
            for s in (-1, 1)
        ]
    out = []
    for p, tang in cands:
        if isinstance(a, Arc) and not _on_arc(a, p):
            continue
        if isinstance(b, Arc) and not _on_arc(b, p):
            continue
        out.append((p, tang))
    return out


def intersect(a, b) -> list[IntersectionRecord]:
    """All common points interior to both curves.

    Endpoints of segments, rays and arcs never produce records.  Raises
    OverlapError when the curves share a continuum of points.
    """
    if is_linear(a) and is_linear(b):
        raw = _lin_lin(a, b)
    elif is_linear(a):
        raw = _lin_round(a, b)
    elif is_linear(b):
        raw = _lin_round(b, a)
    else:
        raw = _round_round(a, b)
    return [IntersectionRecord(a.cid, b.cid, p, tang) for p, tang in raw]


# -- ordering -------------------------------------------------------------------

def _half(v: Point) -> int:
    sy = sign(v.y)
    if sy > 0 or (sy == 0 and sign(v.x) > 0):
        return 0
    return 1


def angle_cmp(v1: Point, v2: Point) -> int:
    """Compare polar angles in [0, 2pi) of two nonzero vectors."""
    h1, h2 = _half(v1), _half(v2)
    if h1 != h2:
        return -1 if h1 < h2 else 1
    return -_sign_of(cross, v1, v2)


def _param_key(curve, p: Point):
    if is_linear(curve):
        return curve_param(curve, p)
    return p - curve.center


def order_along(curve, pts) -> list:
    """Sort points (or records) along a curve.

    Linear curves sort by parameter, circles by angle counter-clockwise from
    the positive x direction, arcs by angle counter-clockwise from their start.
    Coinciding parameters raise AmbiguousOrderError.
    """
    items = list(pts)
    keys = {}
    for i, it in enumerate(items):
        p = it.point if isinstance(it, IntersectionRecord) else it
        keys[i] = _param_key(curve, p)

    if is_linear(curve):
        def cmp(i, j):
            s = compare(keys[i], keys[j])
            if s == 0 and i != j:
                raise AmbiguousOrderError("two points share a parameter along the curve")
            return s
    else:
        ref = curve.start - curve.center if isinstance(curve, Arc) else Point(Fraction(1), Fraction(0))

        def rel(v):
            # rotate so that ref maps to the positive x axis (no normalisation needed)
            return Point(v.x * ref.x + v.y * ref.y, v.y * ref.x - v.x * ref.y)

        def cmp(i, j):
            if i == j:
                return 0
            if keys[i] == keys[j]:
                raise AmbiguousOrderError("two points coincide on the circle")
            return angle_cmp(rel(keys[i]), rel(keys[j]))

    order = sorted(range(len(items)), key=functools.cmp_to_key(cmp))
    return [items[i] for i in order]


# -- local geometry at a point ------------------------------------------------------

def tangent_at(curve, p: Point, forward: bool = True) -> Point:
    """Direction of travel along the curve at p (counter-clockwise for circles)."""
    if is_linear(curve):
        u = curve.direction
    else:
        r = p - curve.center
        u = Point(-r.y, r.x)
    return u if forward else Point(-u.x, -u.y)


def curvature_at(curve, forward: bool = True) -> Fraction:
    """Signed curvature (positive turning left) when travelling the curve."""
    if is_linear(curve):
        return Fraction(0)
    k = 1 / curve.radius
    return k if forward else -k
