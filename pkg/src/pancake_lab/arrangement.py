"""Planar graphs induced by placed shapes, and two independent region counters."""

from __future__ import annotations

import functools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .formulas import crossing_bound, max_regions
from .kernel import (
    Arc, Circle, IntersectionRecord, Line, OverlapError, Point, Ray, Segment,
    angle_cmp, curvature_at, intersect, is_linear, on_curve, order_along, tangent_at,
)
from .numbers import AmbiguousOrderError
from .shapes import ShapeInstance

TRIPLE_POINT = "TriplePoint"
FOREIGN_BASE_NODE = "ArmThroughForeignBaseNode"
COLLINEAR_OVERLAP = "CollinearOverlap"
TANGENCY = "InterInstanceTangency"
COINCIDENT_BASE_NODES = "CoincidentBaseNodes"


class DegenerateInput(ValueError):
    pass


class DisconnectedInput(ValueError):
    def __init__(self, components: int):
        super().__init__(f"arrangement has {components} components")
        self.components = components


class ResolutionExceeded(ArithmeticError):
    pass


@dataclass(frozen=True)
class Finding:
    kind: str
    location: tuple
    detail: str = ""


@dataclass
class DegeneracyReport:
    findings: list = field(default_factory=list)

    def __bool__(self):
        return bool(self.findings)

    def __len__(self):
        return len(self.findings)

    def kinds(self) -> set:
        return {f.kind for f in self.findings}

    def add(self, kind, point, detail=""):
        loc = point.as_float() if isinstance(point, Point) else tuple(point)
        self.findings.append(Finding(kind, loc, detail))


@dataclass(frozen=True)
class RegionReport:
    V_B: int
    V_C: int
    E_i: int
    E_f: int
    R_i: int
    R_f: int
    method: str

    @property
    def V(self):
        return self.V_B + self.V_C

    @property
    def E(self):
        return self.E_i + self.E_f

    @property
    def R(self):
        return self.R_i + self.R_f

    def euler(self) -> int:
        return self.R - self.E + self.V

    def as_dict(self) -> dict:
        return {"V_B": self.V_B, "V_C": self.V_C, "V": self.V, "E_i": self.E_i, "E_f": self.E_f,
                "E": self.E, "R_i": self.R_i, "R_f": self.R_f, "R": self.R, "method": self.method}

    def same_counts(self, other: "RegionReport") -> bool:
        a, b = self.as_dict(), other.as_dict()
        a.pop("method"), b.pop("method")
        return a == b


class PointIndex:
    """Deduplicates exact points using a float grid as a candidate filter."""

    def __init__(self, cell: float = 1e-7):
        self.cell = cell
        self.grid = defaultdict(list)
        self.points: list[Point] = []

    def _key(self, p: Point):
        x, y = p.as_float()
        return (math.floor(x / self.cell), math.floor(y / self.cell))

    def find(self, p: Point) -> Optional[int]:
        kx, ky = self._key(p)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for i in self.grid.get((kx + dx, ky + dy), ()):
                    if self.points[i] == p:
                        return i
        return None

    def add(self, p: Point) -> tuple[int, bool]:
        i = self.find(p)
        if i is not None:
            return i, False
        i = len(self.points)
        self.points.append(p)
        self.grid[self._key(p)].append(i)
        return i, True


@dataclass
class Arrangement:
    instances: list
    primitives: dict                 # cid -> curve
    self_crossings: list
    crossings: list
    base_points: list                # (Point, degree, owner)
    synthetic: list                  # (Point, cid) for vertex-free closed curves and lines
    vertices_on: dict                # cid -> ordered list of Points
    report: DegeneracyReport
    components: int
    overlaps: list = field(default_factory=list)
    finite_components: int = 1

    @property
    def records(self) -> list:
        return self.self_crossings + self.crossings

    @property
    def infinite_ends(self) -> int:
        return sum(i.infinite_ends for i in self.instances)


def _owner_bases(inst: ShapeInstance):
    return [p for p, _ in inst.base_nodes]


def build(instances) -> Arrangement:
    """Intersect everything, sort vertices along every arm, and report degeneracies."""
    instances = list(instances)
    report = DegeneracyReport()
    prims = {}
    for inst in instances:
        for c in inst.primitives:
            prims[c.cid] = c
    own_bases = {inst.id: _owner_bases(inst) for inst in instances}
    if len(own_bases) != len(instances):
        raise ValueError("instance ids must be unique")

    self_x, pair_x, overlaps = [], [], []
    for ai, a in enumerate(instances):
        for b in instances[ai:]:
            same = a is b
            for i, ca in enumerate(a.primitives):
                for cb in (a.primitives[i + 1:] if same else b.primitives):
                    try:
                        recs = intersect(ca, cb)
                    except OverlapError:
                        overlaps.append((ca.cid, cb.cid))
                        pts = [p for p in ca.endpoints() + cb.endpoints()] or [Point(Fraction(0), Fraction(0))]
                        report.add(COLLINEAR_OVERLAP, pts[0], f"{ca.cid} and {cb.cid}")
                        continue
                    for r in recs:
                        if same:
                            if any(r.point == q for q in own_bases[a.id]):
                                continue  # where an instance's own arms meet
                            if r.tangential:
                                report.add(TANGENCY, r.point, f"self-tangency in instance {a.id}")
                            self_x.append(r)
                        else:
                            if r.tangential:
                                report.add(TANGENCY, r.point, f"{ca.cid} touches {cb.cid}")
                            pair_x.append(r)

    # base nodes: coincidences and foreign arms through them
    base_points = []
    bindex = PointIndex()
    first_owner = {}
    for inst in instances:
        for p, d in inst.base_nodes:
            base_points.append((p, d, inst.id))
            i, new = bindex.add(p)
            if new:
                first_owner[i] = inst.id
            elif first_owner[i] != inst.id:
                report.add(COINCIDENT_BASE_NODES, p, f"instances {first_owner[i]} and {inst.id}")

    on_arm = defaultdict(list)
    for inst in instances:
        for c in inst.primitives:
            for p in own_bases[inst.id]:
                if on_curve(c, p):
                    on_arm[c.cid].append(p)
    for p, _, owner in base_points:
        for cid, c in prims.items():
            if cid[0] != owner and on_curve(c, p):
                report.add(FOREIGN_BASE_NODE, p, f"arm {cid} passes base node of instance {owner}")
                on_arm[cid].append(p)

    # triple points: two records at the same place
    rindex = PointIndex()
    count_at = defaultdict(int)
    for r in self_x + pair_x:
        i, _ = rindex.add(r.point)
        count_at[i] += 1
        if count_at[i] == 2:
            report.add(TRIPLE_POINT, r.point, "more than two arms meet")
    for r in self_x + pair_x:
        on_arm[r.a].append(r.point)
        on_arm[r.b].append(r.point)

    vertices_on, synthetic = {}, []
    for cid, c in prims.items():
        pts = []
        idx = PointIndex()
        for p in on_arm[cid]:
            if idx.add(p)[1]:
                pts.append(p)
        if not pts and isinstance(c, (Circle, Line)):
            q = c.center + Point(c.radius, Fraction(0)) if isinstance(c, Circle) else c.point
            synthetic.append((q, cid))
            pts = [q]
        vertices_on[cid] = order_along(c, pts)

    records = self_x + pair_x
    return Arrangement(instances, prims, self_x, pair_x, base_points, synthetic, vertices_on, report,
                       _components(instances, records, overlaps), overlaps,
                       _components(instances, records, overlaps, join_infinity=False))


def _components(instances, records, overlaps, join_infinity=True) -> int:
    """Connected components, by default with infinite arms joined at a point at infinity."""
    parent = {inst.id: inst.id for inst in instances}
    parent["inf"] = "inf"

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for r in records:
        union(r.a[0], r.b[0])
    for a, b in overlaps:
        union(a[0], b[0])
    has_inf = False
    for inst in instances:
        if inst.infinite_ends and join_infinity:
            union(inst.id, "inf")
            has_inf = True
    roots = {find(x) for x in parent if x != "inf" or has_inf}
    return len(roots)


# -- counting by the identity ----------------------------------------------------------

def count_regions_formula(arr: Arrangement) -> RegionReport:
    """Regions from crossings, base-node degrees and infinite arms alone."""
    if arr.report:
        raise DegenerateInput(f"degenerate configuration: {sorted(arr.report.kinds())}")
    if not arr.instances:
        return RegionReport(0, 0, 0, 0, 1, 0, "formula")
    if arr.finite_components > 1:
        raise DisconnectedInput(arr.finite_components)
    v_c = len(arr.records)
    v_b = len(arr.base_points) + len(arr.synthetic)
    deg_sum = sum(d for _, d, _ in arr.base_points) + 2 * len(arr.synthetic)
    e_i = arr.infinite_ends
    extra = 1 if e_i else 2
    regions = v_c + (deg_sum - 2 * v_b + e_i) // 2 + extra
    e_f = 2 * v_c + (deg_sum - e_i) // 2
    r_i = max(e_i, 1)
    return RegionReport(v_b, v_c, e_i, e_f, r_i, regions - r_i, "formula")


# -- counting by face enumeration -------------------------------------------------------

def _box_param(p: Point, m: Fraction) -> Fraction:
    """Position along the box boundary, counter-clockwise from the lower-left corner."""
    x, y = p.x, p.y
    if y == -m:
        return x + m
    if x == m:
        return 2 * m + y + m
    if y == m:
        return 4 * m + (m - x)
    return 6 * m + (m - y)


def _exit_param(origin: Point, d: Point, m: Fraction) -> Fraction:
    ts = []
    for o, v in ((origin.x, d.x), (origin.y, d.y)):
        if v > 0:
            ts.append((m - o) / v)
        elif v < 0:
            ts.append((-m - o) / v)
    return min(ts)


def _box_half_size(arr: Arrangement) -> Fraction:
    biggest = 1.0
    for pts in arr.vertices_on.values():
        for p in pts:
            x, y = p.as_float()
            biggest = max(biggest, abs(x), abs(y))
    for c in arr.primitives.values():
        if isinstance(c, (Circle, Arc)):
            cx, cy = c.center.as_float()
            biggest = max(biggest, abs(cx) + float(c.radius), abs(cy) + float(c.radius))
    return Fraction(10 * (math.ceil(biggest) + 1))


@dataclass
class PlanarMap:
    """Clipped subdivision as half-edges: 2e runs tail -> head of edge e, 2e+1 runs back."""
    points: list
    edges: list                 # (tail, head, curve)
    rotation: dict              # vertex -> half-edges leaving it, counter-clockwise
    position: dict              # half-edge -> index within its tail's rotation
    box_edges: set
    box_points: list            # exit points of infinite arms, one per infinite end
    ring: list                  # box vertices in counter-clockwise order
    base_ids: set
    synth_ids: set
    crossing_ids: set

    def head(self, h: int) -> int:
        a, b, _ = self.edges[h // 2]
        return b if h % 2 == 0 else a

    def tail(self, h: int) -> int:
        return self.head(h ^ 1)

    def next_in_face(self, h: int) -> int:
        hs = self.rotation[self.head(h)]
        return hs[(self.position[h ^ 1] - 1) % len(hs)]


def planar_map(arr: Arrangement) -> PlanarMap:
    if arr.overlaps:
        raise DegenerateInput("collinear overlaps cannot be traced as faces")
    m = _box_half_size(arr)
    vindex = PointIndex()
    base_ids, synth_ids = set(), set()
    for p, _, _ in arr.base_points:
        base_ids.add(vindex.add(p)[0])
    for p, _ in arr.synthetic:
        synth_ids.add(vindex.add(p)[0])
    for r in arr.records:
        vindex.add(r.point)
    crossing_ids = {vindex.find(r.point) for r in arr.records} - base_ids - synth_ids

    edges = []
    box_points = []
    for cid, c in arr.primitives.items():
        ids = [vindex.add(p)[0] for p in arr.vertices_on[cid]]
        if isinstance(c, Circle):
            for i in range(len(ids)):
                edges.append((ids[i], ids[(i + 1) % len(ids)], c))
            continue
        if isinstance(c, (Ray, Line)):
            d = c.direction
            far = c.origin + d.scale(_exit_param(c.origin, d, m))
            if isinstance(c, Line):
                back = Point(-d.x, -d.y)
                near = c.origin + back.scale(_exit_param(c.origin, back, m))
                j, _ = vindex.add(near)
                box_points.append(j)
                ids = [j] + ids
            j, _ = vindex.add(far)
            box_points.append(j)
            ids = ids + [j]
        for a, b in zip(ids, ids[1:]):
            edges.append((a, b, c))

    corners = [Point(-m, -m), Point(m, -m), Point(m, m), Point(-m, m)]
    ring = set(box_points)
    for q in corners:
        ring.add(vindex.add(q)[0])
    ring = sorted(ring, key=lambda i: _box_param(vindex.points[i], m))
    box_edges = set()
    for i in range(len(ring)):
        a, b = ring[i], ring[(i + 1) % len(ring)]
        edges.append((a, b, Segment(vindex.points[a], vindex.points[b], owner="box", arm=i)))
        box_edges.add(len(edges) - 1)

    pts = vindex.points
    out = defaultdict(list)
    for e, (a, b, c) in enumerate(edges):
        out[a].append(2 * e)
        out[b].append(2 * e + 1)

    def direction(h):
        a, b, c = edges[h // 2]
        fwd = h % 2 == 0
        at = pts[a] if fwd else pts[b]
        return tangent_at(c, at, fwd), curvature_at(c, fwd)

    def cmp(h1, h2):
        (d1, k1), (d2, k2) = direction(h1), direction(h2)
        s = angle_cmp(d1, d2)
        if s:
            return s
        if k1 != k2:
            return -1 if k1 < k2 else 1
        raise ResolutionExceeded("two edges leave a vertex along the same curve")

    rotation, position = {}, {}
    try:
        for v, hs in out.items():
            hs.sort(key=functools.cmp_to_key(cmp))
            rotation[v] = hs
            for i, h in enumerate(hs):
                position[h] = i
    except AmbiguousOrderError as exc:
        raise ResolutionExceeded(str(exc)) from None
    return PlanarMap(pts, edges, rotation, position, box_edges, box_points, ring,
                     base_ids, synth_ids, crossing_ids)


def count_regions_faces(arr: Arrangement) -> RegionReport:
    """Regions by tracing every face of the subdivision clipped to a large box."""
    if not arr.instances:
        return RegionReport(0, 0, 0, 0, 1, 0, "faces")
    pm = planar_map(arr)
    edges = pm.edges
    e_i = len(pm.box_points)
    e_total = len(edges) - len(pm.box_edges)

    seen = set()
    cycles = 0
    infinite = 0
    for start in range(2 * len(edges)):
        if start in seen:
            continue
        cycles += 1
        touches_box = False
        h = start
        while h not in seen:
            seen.add(h)
            if h // 2 in pm.box_edges and h % 2 == 0:
                touches_box = True
            h = pm.next_in_face(h)
        infinite += touches_box

    # components of the clipped graph
    parent = list(range(len(pm.points)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, _ in edges:
        parent[find(a)] = find(b)
    used = {a for a, _, _ in edges} | {b for _, b, _ in edges}
    comps = len({find(v) for v in used})

    faces = cycles - (comps - 1)
    regions = faces - 1
    v_b = len(pm.base_ids | pm.synth_ids)
    r_i = infinite
    return RegionReport(v_b, len(pm.crossing_ids), e_i, e_total - e_i, r_i, regions - r_i, "faces")


# -- verification ------------------------------------------------------------------------

OPTIMAL_CONFIRMED = "OPTIMAL_CONFIRMED"
CONSISTENT = "CONSISTENT"
MISMATCH = "MISMATCH"


@dataclass
class VerificationOutcome:
    status: str
    formula: Optional[RegionReport]
    faces: Optional[RegionReport]
    closed_form: tuple
    bound: int
    crossings: int
    degeneracies: DegeneracyReport
    notes: list = field(default_factory=list)

    @property
    def regions(self) -> Optional[int]:
        rep = self.faces or self.formula
        return rep.R if rep else None


def euler_target(arr: Arrangement) -> int:
    base = 1 if arr.infinite_ends else 2
    return base + arr.components - 1


def verify(kind, k, n, instances, expected_regions: Optional[int] = None) -> VerificationOutcome:
    """Cross-check both counters against the closed form and the crossing bound."""
    if expected_regions is None:
        expected_regions = getattr(instances, "expected_regions", None)
    instances = list(getattr(instances, "instances", instances))
    arr = build(instances)
    notes = []
    formula = faces = None
    try:
        formula = count_regions_formula(arr)
    except (DegenerateInput, DisconnectedInput) as exc:
        notes.append(f"formula counter: {exc}")
    try:
        faces = count_regions_faces(arr)
    except (DegenerateInput, ResolutionExceeded) as exc:
        notes.append(f"face counter: {exc}")
    closed = max_regions(kind, k, n)
    bound = crossing_bound(kind, k, n)
    v_c = len(arr.records)
    status = MISMATCH
    if formula is not None and faces is not None:
        if not formula.same_counts(faces):
            notes.append(f"counters disagree: formula R={formula.R}, faces R={faces.R}")
        elif faces.euler() != euler_target(arr):
            notes.append("Euler relation fails")
        elif v_c > bound:
            notes.append(f"{v_c} crossings exceed the bound {bound}")
        elif expected_regions is not None and faces.R != expected_regions:
            notes.append(f"expected {expected_regions} regions, counted {faces.R}")
        elif v_c == bound:
            status = OPTIMAL_CONFIRMED
        else:
            status = CONSISTENT
    return VerificationOutcome(status, formula, faces, closed, bound, v_c, arr.report, notes)
