"""The shape catalog.

A shape instance is a small planar graph: primitive curves (its *arms*) joined
at *base nodes*.  Poses are dictionaries of exact named numbers.  Kinds whose
pose involves an orientation accept either an angle (``phi``, radians, parsed
exactly and turned into a rational unit vector) or the unit vector itself
(``ux``, ``uy``).  :func:`resolve_pose` rewrites angles into unit vectors so
that every later computation, including affine and similarity maps, is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Optional

import mpmath

from .kernel import Arc, Circle, Line, Point, Ray, Segment, cross, dot, intersect, orientation
from .numbers import as_fraction, precise_direction

ANGLE_DIGITS = 30


class ValidationError(ValueError):
    """A pose violates the constraints of its shape kind."""


class ShapeKind(str, Enum):
    LINE = "line"
    HATPIN = "hatpin"
    KV = "kv"
    KCHAIN = "kchain"
    LONG_A = "longa"
    LONG_Z = "longz"
    LONG_W = "longw"
    LBAR = "lbar"
    XBAR = "xbar"
    HBAR = "hbar"
    PHIBAR = "phibar"
    TBAR = "tbar"
    ABAR = "abar"
    POLYGON = "polygon"
    CONCAVE_QUAD = "concave_quad"
    CIRCLE = "circle"
    FIGURE8 = "figure8"
    PENTAGRAM = "pentagram"
    HEXAGRAM = "hexagram"
    LOLLIPOP = "lollipop"

    @classmethod
    def parse(cls, text) -> "ShapeKind":
        if isinstance(text, ShapeKind):
            return text
        key = str(text).strip().lower().replace("-", "").replace("_", "")
        for kind in cls:
            if kind.value.replace("_", "") == key:
                return kind
        aliases = {
            "karmedv": cls.KV, "kc": cls.KCHAIN, "chain": cls.KCHAIN, "pancake": cls.LINE,
            "constrainedl": cls.LBAR, "constrainedx": cls.XBAR, "constrainedh": cls.HBAR,
            "constrainedphi": cls.PHIBAR, "constrainedt": cls.TBAR, "constraineda": cls.ABAR,
            "convexpolygon": cls.POLYGON, "concavequadrilateral": cls.CONCAVE_QUAD,
            "figureeight": cls.FIGURE8, "eight": cls.FIGURE8, "8": cls.FIGURE8,
            "zigzag": cls.LONG_Z, "z": cls.LONG_Z, "w": cls.LONG_W, "m": cls.LONG_W, "a": cls.LONG_A,
        }
        if key in aliases:
            return aliases[key]
        raise KeyError(f"unknown shape kind {text!r}")


AFFINE = "affine"
SIMILARITY = "similarity"

EXACT = "exact"
CONJECTURED = "conjectured"
UPPER_BOUND = "upper_bound"

KINDS_WITH_K = {ShapeKind.KV, ShapeKind.KCHAIN, ShapeKind.POLYGON}


@dataclass(frozen=True)
class CatalogEntry:
    kind: ShapeKind
    k: Optional[int]
    sigma: int
    kappa: int
    base_degrees: tuple
    infinite_ends: int
    arms: int
    status: str
    family: str

    @property
    def base_count(self) -> int:
        return len(self.base_degrees)

    @property
    def degree_sum(self) -> int:
        return sum(self.base_degrees)

    @property
    def bounded(self) -> bool:
        return self.infinite_ends == 0


def _check_k(kind, k):
    if kind in KINDS_WITH_K:
        if k is None:
            raise ValueError(f"{kind.value} needs k")
        lo = 3 if kind is ShapeKind.POLYGON else 1
        if k < lo:
            raise ValueError(f"{kind.value} needs k >= {lo}")
    return k if kind in KINDS_WITH_K else None


def catalog(kind, k: Optional[int] = None) -> CatalogEntry:
    """Per-kind constants: sigma, kappa, base degrees, infinite ends, arm count, status."""
    kind = ShapeKind.parse(kind)
    k = _check_k(kind, k)
    K = ShapeKind
    table = {
        K.LINE: (0, 1, (), 2, 1, EXACT, AFFINE),
        K.HATPIN: (0, 1, (1,), 1, 1, EXACT, AFFINE),
        K.LONG_A: (0, 9, (2, 3, 3), 2, 5, EXACT, AFFINE),
        K.LONG_Z: (0, 9, (2, 2), 2, 3, EXACT, AFFINE),
        K.LONG_W: (0, 16, (2, 2, 2), 2, 4, EXACT, AFFINE),
        K.LBAR: (0, 3, (2,), 2, 2, EXACT, SIMILARITY),
        K.XBAR: (0, 4, (4,), 4, 4, EXACT, SIMILARITY),
        K.HBAR: (0, 7, (3, 3), 4, 5, EXACT, SIMILARITY),
        K.PHIBAR: (0, 7, (4, 4), 2, 5, EXACT, SIMILARITY),
        K.TBAR: (0, 4, (3,), 3, 3, CONJECTURED, SIMILARITY),
        K.ABAR: (0, 8, (2, 3, 3), 2, 5, CONJECTURED, SIMILARITY),
        K.CONCAVE_QUAD: (0, 16, (2,) * 4, 0, 4, EXACT, SIMILARITY),
        K.CIRCLE: (0, 2, (), 0, 1, EXACT, SIMILARITY),
        K.FIGURE8: (0, 8, (4,), 0, 2, CONJECTURED, SIMILARITY),
        K.PENTAGRAM: (5, 20, (2,) * 5, 0, 5, EXACT, SIMILARITY),
        K.HEXAGRAM: (6, 24, (2,) * 6, 0, 6, EXACT, SIMILARITY),
        K.LOLLIPOP: (0, 7, (3,), 1, 2, UPPER_BOUND, SIMILARITY),
    }
    if kind is K.KV:
        row = (0, k * k, (k,), k, k, EXACT, AFFINE)
    elif kind is K.KCHAIN:
        if k == 1:
            row = (0, 1, (), 2, 1, EXACT, AFFINE)
        else:
            row = (comb(k - 1, 2), k * k, (2,) * (k - 1), 2, k, EXACT, AFFINE)
    elif kind is K.POLYGON:
        row = (0, 2 * k, (2,) * k, 0, k, EXACT, AFFINE)
    else:
        row = table[kind]
    return CatalogEntry(kind, k, *row)


# -- pose schema ------------------------------------------------------------------

@dataclass(frozen=True)
class Schema:
    points: tuple = ()
    vectors: tuple = ()
    units: tuple = ()
    lengths: tuple = ()
    scalars: tuple = ()


def schema(kind: ShapeKind, k: Optional[int], pose: Optional[dict] = None) -> Schema:
    """Which resolved pose entries are points, free vectors, unit vectors, lengths."""
    K = ShapeKind
    pt = ("x", "y")
    if kind in (K.LINE, K.HATPIN):
        return Schema(points=(pt,), vectors=(("dx", "dy"),))
    if kind is K.KV:
        return Schema(points=(pt,), vectors=tuple((f"dx{i}", f"dy{i}") for i in range(1, k + 1)))
    if kind is K.KCHAIN:
        if k == 1:
            return Schema(points=(("x1", "y1"),), vectors=(("dx0", "dy0"),))
        return Schema(points=tuple((f"x{i}", f"y{i}") for i in range(1, k)),
                      vectors=(("dx0", "dy0"), (f"dx{k}", f"dy{k}")))
    if kind in (K.LONG_A,):
        return Schema(points=(pt,), vectors=(("dx1", "dy1"), ("dx2", "dy2")), scalars=("t1", "t2"))
    if kind is K.LONG_Z:
        return Schema(points=(("x1", "y1"), ("x2", "y2")), vectors=(("dx0", "dy0"), ("dx3", "dy3")))
    if kind is K.LONG_W:
        return Schema(points=(("x1", "y1"), ("x2", "y2"), ("x3", "y3")),
                      vectors=(("dx0", "dy0"), ("dx4", "dy4")))
    if kind in (K.LBAR, K.XBAR):
        return Schema(points=(pt,), vectors=(("dx1", "dy1"), ("dx2", "dy2")))
    if kind is K.HBAR:
        return Schema(points=(("x1", "y1"), ("x2", "y2")), vectors=(("dx", "dy"),))
    if kind in (K.PHIBAR, K.FIGURE8, K.LOLLIPOP):
        return Schema(points=(pt,), units=(("ux", "uy"),), lengths=("r",))
    if kind is K.TBAR:
        return Schema(points=(pt,), units=(("ux", "uy"),))
    if kind is K.ABAR:
        return Schema(points=(pt,), units=(("ux1", "uy1"), ("ux2", "uy2")), lengths=("d",))
    if kind in (K.POLYGON, K.CONCAVE_QUAD):
        m = k if kind is K.POLYGON else 4
        return Schema(points=tuple((f"x{i}", f"y{i}") for i in range(1, m + 1)))
    if kind is K.CIRCLE:
        return Schema(points=(pt,), lengths=("r",))
    if kind in (K.PENTAGRAM, K.HEXAGRAM):
        m = 5 if kind is K.PENTAGRAM else 6
        if pose is not None and "x1" in pose:
            return Schema(points=tuple((f"x{i}", f"y{i}") for i in range(1, m + 1)))
        return Schema(points=(pt,), units=(("ux", "uy"),), lengths=("r",))
    raise KeyError(kind)


_ANGLE_KEYS = {"phi": ("ux", "uy"), "phi1": ("ux1", "uy1"), "phi2": ("ux2", "uy2")}


def resolve_pose(kind, pose: dict) -> dict:
    """Exact copy of the pose with angles replaced by rational unit vectors."""
    out = {key: as_fraction(v) for key, v in pose.items()}
    for akey, (xk, yk) in _ANGLE_KEYS.items():
        if akey in out and xk not in out:
            out[xk], out[yk] = precise_direction(out.pop(akey), ANGLE_DIGITS)
        else:
            out.pop(akey, None)
    return out


# -- instances ----------------------------------------------------------------------

@dataclass(frozen=True)
class ShapeInstance:
    id: int
    kind: ShapeKind
    k: Optional[int]
    pose: dict
    primitives: tuple
    base_nodes: tuple  # of (Point, degree)
    family: str
    resolved: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def entry(self) -> CatalogEntry:
        return catalog(self.kind, self.k)

    @property
    def infinite_ends(self) -> int:
        n = 0
        for c in self.primitives:
            if isinstance(c, Line):
                n += 2
            elif isinstance(c, Ray):
                n += 1
        return n


def _pt(pose, xk="x", yk="y") -> Point:
    try:
        return Point(pose[xk], pose[yk])
    except KeyError as exc:
        raise ValidationError(f"missing pose parameter {exc.args[0]!r}") from None


def _rot_m90(u: Point) -> Point:
    return Point(u.y, -u.x)


def _neg(u: Point) -> Point:
    return Point(-u.x, -u.y)


def _regular_offsets(m: int, digits=ANGLE_DIGITS):
    """Exact rational unit vectors near angle 2*pi*j/m, j = 0..m-1."""
    out = []
    for j in range(m):
        with mpmath.workdps(digits + 10):
            ang = 2 * mpmath.pi * j / m
            out.append(precise_direction(Fraction(mpmath.nstr(ang, digits + 5)), digits))
    return out


def _rotate(u: Point, cs) -> Point:
    c, s = cs
    return Point(u.x * c - u.y * s, u.x * s + u.y * c)


def _star_vertices(kind, pose) -> list:
    m = 5 if kind is ShapeKind.PENTAGRAM else 6
    if "x1" in pose:
        return [_pt(pose, f"x{i}", f"y{i}") for i in range(1, m + 1)]
    c, u, r = _pt(pose), _pt(pose, "ux", "uy"), pose["r"]
    return [c + _rotate(u, cs).scale(r) for cs in _regular_offsets(m)]


def _build(kind: ShapeKind, k, pose: dict, sid):
    """Return (primitives, base_nodes) for a resolved pose."""
    K = ShapeKind
    prims, bases = [], []

    def add(curve_cls, *args):
        prims.append(curve_cls(*args, owner=sid, arm=len(prims)))

    if kind is K.LINE:
        add(Line, _pt(pose), _pt(pose, "dx", "dy"))
    elif kind is K.HATPIN:
        h = _pt(pose)
        add(Ray, h, _pt(pose, "dx", "dy"))
        bases.append((h, 1))
    elif kind is K.KV:
        t = _pt(pose)
        for i in range(1, k + 1):
            add(Ray, t, _pt(pose, f"dx{i}", f"dy{i}"))
        bases.append((t, k))
    elif kind is K.KCHAIN:
        if k == 1:
            add(Line, _pt(pose, "x1", "y1"), _pt(pose, "dx0", "dy0"))
        else:
            joints = [_pt(pose, f"x{i}", f"y{i}") for i in range(1, k)]
            add(Ray, joints[0], _pt(pose, "dx0", "dy0"))
            for a, b in zip(joints, joints[1:]):
                add(Segment, a, b)
            add(Ray, joints[-1], _pt(pose, f"dx{k}", f"dy{k}"))
            bases.extend((j, 2) for j in joints)
    elif kind in (K.LONG_A, K.ABAR):
        t = _pt(pose)
        if kind is K.ABAR:
            u1, u2 = _pt(pose, "ux1", "uy1"), _pt(pose, "ux2", "uy2")
            t1 = t2 = pose["d"]
        else:
            u1, u2 = _pt(pose, "dx1", "dy1"), _pt(pose, "dx2", "dy2")
            t1, t2 = pose["t1"], pose["t2"]
        e1, e2 = t + u1.scale(t1), t + u2.scale(t2)
        add(Segment, t, e1)
        add(Ray, e1, u1)
        add(Segment, t, e2)
        add(Ray, e2, u2)
        add(Segment, e1, e2)
        bases += [(t, 2), (e1, 3), (e2, 3)]
    elif kind is K.LONG_Z:
        j1, j2 = _pt(pose, "x1", "y1"), _pt(pose, "x2", "y2")
        add(Ray, j1, _pt(pose, "dx0", "dy0"))
        add(Segment, j1, j2)
        add(Ray, j2, _pt(pose, "dx3", "dy3"))
        bases += [(j1, 2), (j2, 2)]
    elif kind is K.LONG_W:
        js = [_pt(pose, f"x{i}", f"y{i}") for i in (1, 2, 3)]
        add(Ray, js[0], _pt(pose, "dx0", "dy0"))
        add(Segment, js[0], js[1])
        add(Segment, js[1], js[2])
        add(Ray, js[2], _pt(pose, "dx4", "dy4"))
        bases += [(j, 2) for j in js]
    elif kind in (K.LBAR, K.XBAR):
        c = _pt(pose)
        d1, d2 = _pt(pose, "dx1", "dy1"), _pt(pose, "dx2", "dy2")
        dirs = [d1, d2] if kind is K.LBAR else [d1, d2, _neg(d1), _neg(d2)]
        for d in dirs:
            add(Ray, c, d)
        bases.append((c, len(dirs)))
    elif kind is K.TBAR:
        c, u = _pt(pose), _pt(pose, "ux", "uy")
        add(Ray, c, u)
        add(Ray, c, _neg(u))
        add(Ray, c, _rot_m90(u))
        bases.append((c, 3))
    elif kind is K.HBAR:
        e1, e2, v = _pt(pose, "x1", "y1"), _pt(pose, "x2", "y2"), _pt(pose, "dx", "dy")
        add(Segment, e1, e2)
        for e in (e1, e2):
            add(Ray, e, v)
            add(Ray, e, _neg(v))
        bases += [(e1, 3), (e2, 3)]
    elif kind is K.PHIBAR:
        c, u, r = _pt(pose), _pt(pose, "ux", "uy"), pose["r"]
        b1, b2 = c + u.scale(r), c - u.scale(r)
        add(Ray, b1, u)
        add(Ray, b2, _neg(u))
        add(Segment, b2, b1)
        add(Arc, c, r, b1, b2)
        add(Arc, c, r, b2, b1)
        bases += [(b1, 4), (b2, 4)]
    elif kind in (K.POLYGON, K.CONCAVE_QUAD):
        m = k if kind is K.POLYGON else 4
        vs = [_pt(pose, f"x{i}", f"y{i}") for i in range(1, m + 1)]
        for i in range(m):
            add(Segment, vs[i], vs[(i + 1) % m])
        bases += [(v, 2) for v in vs]
    elif kind is K.CIRCLE:
        add(Circle, _pt(pose), pose["r"])
    elif kind is K.FIGURE8:
        t, u, r = _pt(pose), _pt(pose, "ux", "uy"), pose["r"]
        add(Circle, t + u.scale(r), r)
        add(Circle, t - u.scale(r), r)
        bases.append((t, 4))
    elif kind in (K.PENTAGRAM, K.HEXAGRAM):
        vs = _star_vertices(kind, pose)
        if kind is K.PENTAGRAM:
            for j in range(5):
                add(Segment, vs[j], vs[(j + 2) % 5])
        else:
            for tri in ((0, 2, 4), (1, 3, 5)):
                for a in range(3):
                    add(Segment, vs[tri[a]], vs[tri[(a + 1) % 3]])
        bases += [(v, 2) for v in vs]
    elif kind is K.LOLLIPOP:
        c, u, r = _pt(pose), _pt(pose, "ux", "uy"), pose["r"]
        b = c + u.scale(r)
        add(Circle, c, r)
        add(Ray, b, u)
        bases.append((b, 3))
    else:  # pragma: no cover
        raise KeyError(kind)
    return tuple(prims), tuple(bases)


def instantiate(kind, pose: dict, k: Optional[int] = None, id: int = 0,
                check: bool = True) -> ShapeInstance:
    """Build a placed copy of a catalog shape and (by default) validate it."""
    kind = ShapeKind.parse(kind)
    k = _check_k(kind, k)
    resolved = resolve_pose(kind, pose)
    try:
        prims, bases = _build(kind, k, resolved, id)
    except KeyError as exc:
        raise ValidationError(f"missing pose parameter {exc.args[0]!r}") from None
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"{kind.value}: {exc}") from None
    inst = ShapeInstance(id, kind, k, dict(pose), prims, bases, catalog(kind, k).family, resolved)
    if check:
        validate(inst)
    return inst


# -- validation ----------------------------------------------------------------------

def _perp(u: Point, v: Point, what: str):
    if dot(u, v) != 0:
        raise ValidationError(f"perpendicularity: {what} are not perpendicular")


def _unit(u: Point, what: str):
    if dot(u, u) != 1:
        raise ValidationError(f"unit vector: {what} must have length exactly 1")


def _simple_polygon(vs) -> bool:
    m = len(vs)
    edges = [Segment(vs[i], vs[(i + 1) % m]) for i in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            if j == i + 1 or (i == 0 and j == m - 1):
                continue
            if intersect(edges[i], edges[j]):
                return False
    return True


def validate(inst: ShapeInstance) -> None:
    """Raise ValidationError naming the violated constraint; return None if fine."""
    K = ShapeKind
    kind, pose = inst.kind, inst.resolved
    entry = inst.entry
    if len(inst.primitives) != entry.arms:
        raise ValidationError(f"arm count {len(inst.primitives)} != {entry.arms}")
    if tuple(d for _, d in inst.base_nodes) != entry.base_degrees:
        raise ValidationError("base-node degrees do not match the catalog")
    if inst.infinite_ends != entry.infinite_ends:
        raise ValidationError("infinite-arm count does not match the catalog")
    pts = [p for p, _ in inst.base_nodes]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if pts[i] == pts[j]:
                raise ValidationError("base nodes coincide")

    if kind is K.LONG_Z:
        d0, d3 = _pt(pose, "dx0", "dy0"), _pt(pose, "dx3", "dy3")
        if cross(d0, d3) != 0 or dot(d0, d3) >= 0:
            raise ValidationError("parallelism: the two infinite limbs of a Z must be antiparallel")
    elif kind is K.LONG_W:
        seg = _pt(pose, "x2", "y2") - _pt(pose, "x1", "y1")
        if cross(seg, _pt(pose, "dx4", "dy4")) != 0:
            raise ValidationError("parallelism: the last arm of a W must be parallel to the second")
    elif kind is K.LONG_A:
        if pose["t1"] <= 0 or pose["t2"] <= 0:
            raise ValidationError("crossbar must meet both arms away from the tip")
        if cross(_pt(pose, "dx1", "dy1"), _pt(pose, "dx2", "dy2")) == 0:
            raise ValidationError("arms of an A must not be parallel")
    elif kind is K.KV:
        dirs = [_pt(pose, f"dx{i}", f"dy{i}") for i in range(1, inst.k + 1)]
        for i in range(len(dirs)):
            for j in range(i + 1, len(dirs)):
                if cross(dirs[i], dirs[j]) == 0 and dot(dirs[i], dirs[j]) > 0:
                    raise ValidationError("two arms of a V coincide")
    elif kind in (K.LBAR, K.XBAR):
        _perp(_pt(pose, "dx1", "dy1"), _pt(pose, "dx2", "dy2"), "arms")
    elif kind is K.HBAR:
        _perp(_pt(pose, "x2", "y2") - _pt(pose, "x1", "y1"), _pt(pose, "dx", "dy"), "crossbar and legs")
    elif kind is K.ABAR:
        t = _pt(pose)
        e1, e2 = inst.base_nodes[1][0], inst.base_nodes[2][0]
        if dot(e1 - t, e1 - t) != dot(e2 - t, e2 - t):
            raise ValidationError("equidistance: crossbar ends are not equidistant from the tip")
        if pose["d"] <= 0:
            raise ValidationError("crossbar distance must be positive")
        if cross(e1 - t, e2 - t) == 0:
            raise ValidationError("arms of an A must not be parallel")
    elif kind in (K.PHIBAR, K.FIGURE8, K.LOLLIPOP, K.TBAR) or (
            kind in (K.PENTAGRAM, K.HEXAGRAM) and "ux" in pose):
        if kind is not K.TBAR:
            _unit(_pt(pose, "ux", "uy"), "ux, uy")
            if pose["r"] <= 0:
                raise ValidationError("radius must be positive")
    elif kind is K.CIRCLE:
        if pose["r"] <= 0:
            raise ValidationError("radius must be positive")
    elif kind is K.POLYGON:
        vs = [p for p, _ in inst.base_nodes]
        m = len(vs)
        turns = {orientation(vs[i], vs[(i + 1) % m], vs[(i + 2) % m]) for i in range(m)}
        if len(turns) != 1 or 0 in turns:
            raise ValidationError("convexity: polygon has a reflex or straight vertex")
        s = turns.pop()
        for i in range(m):
            a, b = vs[i], vs[(i + 1) % m]
            for j in range(m):
                if j not in (i, (i + 1) % m) and orientation(a, b, vs[j]) != s:
                    raise ValidationError("convexity: polygon is not convex")
    elif kind is K.CONCAVE_QUAD:
        vs = [p for p, _ in inst.base_nodes]
        turns = [orientation(vs[i], vs[(i + 1) % 4], vs[(i + 2) % 4]) for i in range(4)]
        if 0 in turns or sorted(turns) not in ([-1, 1, 1, 1], [-1, -1, -1, 1]):
            raise ValidationError("concavity: need exactly one reflex vertex")
        if not _simple_polygon(vs):
            raise ValidationError("concavity: quadrilateral is self-intersecting")

    if kind in (K.PENTAGRAM, K.HEXAGRAM):
        selfx = sum(
            len(intersect(a, b))
            for i, a in enumerate(inst.primitives) for b in inst.primitives[i + 1:]
        )
        if selfx != entry.sigma:
            raise ValidationError(f"star polygon has {selfx} self-crossings, expected {entry.sigma}")


# -- maps ------------------------------------------------------------------------------

def transform(inst: ShapeInstance, m: tuple, t: tuple = (0, 0), id: Optional[int] = None) -> ShapeInstance:
    """Image of an instance under x -> M x + t, with M = ((a, b), (c, d)) rational.

    Similarity-family kinds require M to be a similarity with rational scale.
    """
    (a, b), (c, d) = [[Fraction(v) for v in row] for row in m]
    tx, ty = Fraction(t[0]), Fraction(t[1])
    det = a * d - b * c
    if det == 0:
        raise ValueError("singular map")
    sch = schema(inst.kind, inst.k, inst.resolved)
    scale = None
    if sch.units or sch.lengths:
        if not (a * a + c * c == b * b + d * d and a * b + c * d == 0):
            raise ValueError("lengths and unit vectors need a similarity map")
        s2 = a * a + c * c
        num, den = s2.numerator, s2.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn != num or rd * rd != den:
            raise ValueError("similarity scale must be rational")
        scale = Fraction(rn, rd)
    pose = dict(inst.resolved)
    for xk, yk in sch.points:
        x, y = pose[xk], pose[yk]
        pose[xk], pose[yk] = a * x + b * y + tx, c * x + d * y + ty
    for xk, yk in sch.vectors:
        x, y = pose[xk], pose[yk]
        pose[xk], pose[yk] = a * x + b * y, c * x + d * y
    for xk, yk in sch.units:
        x, y = pose[xk], pose[yk]
        pose[xk], pose[yk] = (a * x + b * y) / scale, (c * x + d * y) / scale
    for lk in sch.lengths:
        pose[lk] = pose[lk] * scale
    if inst.kind is ShapeKind.TBAR and det < 0:
        # a reflection flips the stem side; keep the stem by reversing the line direction
        pose["ux"], pose["uy"] = -pose["ux"], -pose["uy"]
    return instantiate(inst.kind, pose, k=inst.k, id=inst.id if id is None else id)
