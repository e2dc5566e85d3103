"""Counting combinatorially distinct arrangements through canonical map codes.

Every drawing is turned into a combinatorial map on the sphere: half-edges, the
counter-clockwise successor of each half-edge around its tail vertex, and a label
for that vertex.  Unbounded arms all end at one extra vertex standing for infinity.
Two drawings are equivalent when their maps are isomorphic, reflections included;
the canonical code is the lexicographically least traversal code over all allowed
roots and both orientations.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import comb
from typing import Iterator, Optional

from .arrangement import build, count_regions_faces, planar_map
from .kernel import cross, dot
from .shapes import ShapeKind, instantiate

INF, CROSSING, BASE, SYNTHETIC, JOINT = "inf", "x", "base", "synthetic", "joint"
MAX_LINES = 6
MAX_CHAIN = 5


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class CombinatorialMap:
    sigma: list          # half-edge -> next half-edge counter-clockwise around the same tail
    labels: list         # half-edge -> label of its tail vertex
    roots: list          # half-edges a canonical traversal may start from

    def vertex_count(self) -> int:
        seen, count = set(), 0
        for h in range(len(self.sigma)):
            if h in seen:
                continue
            count += 1
            while h not in seen:
                seen.add(h)
                h = self.sigma[h]
        return count

    def face_count(self) -> int:
        seen, count = set(), 0
        for h in range(len(self.sigma)):
            if h in seen:
                continue
            count += 1
            while h not in seen:
                seen.add(h)
                h = self.sigma[h ^ 1]
        return count

    def is_planar(self) -> bool:
        """Euler characteristic 2 (the map is assumed connected)."""
        return self.vertex_count() - len(self.sigma) // 2 + self.face_count() == 2

    def canonical_code(self) -> tuple:
        inverse = [0] * len(self.sigma)
        for h, g in enumerate(self.sigma):
            inverse[g] = h
        return min(_traverse(s, self.labels, r) for r in self.roots for s in (self.sigma, inverse))


def _traverse(sigma, labels, root) -> tuple:
    num = {root: 0}
    order = [root]
    i = 0
    while i < len(order):
        h = order[i]
        i += 1
        for nxt in (sigma[h], h ^ 1):
            if nxt not in num:
                num[nxt] = len(order)
                order.append(nxt)
    return tuple((labels[h], num[sigma[h]], num[h ^ 1]) for h in order)


def _strand_map(strands, rotations, vertex_labels, root_vertex) -> CombinatorialMap:
    """Map from strands (vertex sequences) and per-vertex rotations.

    A rotation entry (s, j, forward) is the half-edge leaving position j of strand s,
    along the strand if forward, against it otherwise.
    """
    offset, total = [], 0
    for seq in strands:
        offset.append(total)
        total += len(seq) - 1

    def half_edge(s, j, forward):
        return 2 * (offset[s] + j) if forward else 2 * (offset[s] + j - 1) + 1

    sigma = [None] * (2 * total)
    labels = [None] * (2 * total)
    roots = []
    for v, rot in rotations.items():
        hs = [half_edge(*entry) for entry in rot]
        for a, b in zip(hs, hs[1:] + hs[:1]):
            sigma[a] = b
            labels[a] = vertex_labels[v]
        if v == root_vertex:
            roots = hs
    if None in sigma:
        raise ValueError("rotation system misses a half-edge")
    return CombinatorialMap(sigma, labels, roots)


# -- line arrangements via wiring diagrams --------------------------------------------

def commutation_classes(n: int) -> Iterator[tuple]:
    """Reduced words of the longest permutation, one per commutation class.

    Letter a swaps the wires at positions a and a+1.  A word is kept only in its
    lexicographic normal form: no letter may move left past a larger letter it
    commutes with.
    """
    length = n * (n - 1) // 2
    perm = list(range(n))
    word: list[int] = []

    def extend():
        if len(word) == length:
            yield tuple(word)
            return
        for a in range(n - 1):
            if perm[a] > perm[a + 1]:
                continue
            normal = True
            for c in reversed(word):
                if abs(c - a) <= 1:
                    break
                if c > a:
                    normal = False
                    break
            if not normal:
                continue
            perm[a], perm[a + 1] = perm[a + 1], perm[a]
            word.append(a)
            yield from extend()
            word.pop()
            perm[a], perm[a + 1] = perm[a + 1], perm[a]

    yield from extend()


def wiring_map(n: int, word) -> CombinatorialMap:
    """Map of the wiring diagram: wires run left to right, position 0 at the bottom."""
    pos = list(range(n))
    strands = [[INF] for _ in range(n)]
    rotations, labels = {}, {INF: INF}
    for v, a in enumerate(word):
        lo, hi = pos[a], pos[a + 1]
        jl, jh = len(strands[lo]), len(strands[hi])
        strands[lo].append(v)
        strands[hi].append(v)
        # the lower wire climbs, the upper one descends
        rotations[v] = [(lo, jl, True), (hi, jh, False), (lo, jl, False), (hi, jh, True)]
        labels[v] = CROSSING
        pos[a], pos[a + 1] = hi, lo
    for seq in strands:
        seq.append(INF)
    # counter-clockwise around a large circle: right ends upwards, then left ends downwards
    boundary = [(w, len(strands[w]) - 1, False) for w in pos]
    boundary += [(w, 0, True) for w in reversed(range(n))]
    rotations[INF] = boundary[::-1]
    return _strand_map(strands, rotations, labels, INF)


def line_arrangement_codes(n: int) -> set:
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > MAX_LINES:
        raise BudgetExceeded(f"line census is limited to n <= {MAX_LINES}")
    if n == 0:
        return {()}
    return {wiring_map(n, w).canonical_code() for w in commutation_classes(n)}


def enumerate_line_arrangements(n: int) -> int:
    """Simple arrangements of n lines up to isomorphism of the plane drawing, reflections included."""
    return len(line_arrangement_codes(n))


# -- optimal k-chains ----------------------------------------------------------------------

def _chain_map(k: int, orders: dict, signs: dict) -> CombinatorialMap:
    """Map of one k-chain traversed from infinity through joints 1..k-1 back to infinity.

    orders[p] lists the pieces crossing piece p in the order met along the chain;
    signs[(p, q)] with p < q is +1 when q crosses p from right to left.
    """
    seq = [INF]
    labels = {INF: INF}
    where: dict = {}
    for p in range(k):
        if p:
            seq.append(("joint", p))
            labels[("joint", p)] = JOINT
        for q in orders[p]:
            v = (min(p, q), max(p, q))
            where.setdefault(v, {})[p] = len(seq)
            seq.append(v)
            labels[v] = CROSSING
    seq.append(INF)
    rotations = {INF: [(0, 0, True), (0, len(seq) - 1, False)]}
    for j, v in enumerate(seq):
        if labels[v] == JOINT:
            rotations[v] = [(0, j, True), (0, j, False)]
    for (p, q), at in where.items():
        jp, jq = at[p], at[q]
        if signs[(p, q)] > 0:
            rotations[(p, q)] = [(0, jp, True), (0, jq, True), (0, jp, False), (0, jq, False)]
        else:
            rotations[(p, q)] = [(0, jp, True), (0, jq, False), (0, jp, False), (0, jq, True)]
    return _strand_map([seq], rotations, labels, INF)


def _chain_pairs(k: int) -> list:
    return [(p, q) for p in range(k) for q in range(p + 2, k)]


def chain_candidate_codes(k: int) -> set:
    """Codes of all planar drawings of a k-chain where each non-adjacent pair of pieces crosses once."""
    _check_chain(k)
    pairs = _chain_pairs(k)
    partners = [[q for q in range(k) if abs(p - q) >= 2] for p in range(k)]
    codes = set()
    for orders in itertools.product(*(itertools.permutations(ps) for ps in partners)):
        for signs in itertools.product((1, -1), repeat=len(pairs)):
            m = _chain_map(k, dict(enumerate(orders)), dict(zip(pairs, signs)))
            if m.is_planar():
                codes.add(m.canonical_code())
    return codes


def _check_chain(k: int):
    if k < 1:
        raise ValueError("k must be positive")
    if k > MAX_CHAIN:
        raise BudgetExceeded(f"chain census is limited to k <= {MAX_CHAIN}")


def chain_code(inst) -> Optional[tuple]:
    """Canonical code of a single chain instance, or None unless it is optimal and generic."""
    k = inst.k
    arr = build([inst])
    if arr.report or len(arr.self_crossings) != comb(k - 1, 2):
        return None
    if k == 1:
        return _chain_map(1, {0: ()}, {}).canonical_code()
    prims = inst.primitives
    # chain direction of each piece; the first ray is walked towards its joint
    heading = [prims[0].direction.scale(-1)] + [c.direction for c in prims[1:]]
    anchor = [prims[0].origin] + [c.origin for c in prims[1:]]
    met: dict = {p: [] for p in range(k)}
    signs = {}
    for rec in arr.self_crossings:
        p, q = sorted((rec.a[1], rec.b[1]))
        for piece, other in ((p, q), (q, p)):
            met[piece].append((dot(rec.point - anchor[piece], heading[piece]), other))
        signs[(p, q)] = 1 if cross(heading[p], heading[q]) > 0 else -1
    orders = {p: tuple(q for _, q in sorted(met[p])) for p in range(k)}
    return _chain_map(k, orders, signs).canonical_code()


def _float_chain_crossings(joints, d_first, d_last) -> int:
    from .optimizer import _intersect

    pieces = [("ray", *joints[0], *d_first)]
    for a, b in zip(joints, joints[1:]):
        pieces.append(("seg", *a, b[0] - a[0], b[1] - a[1]))
    pieces.append(("ray", *joints[-1], *d_last))
    return sum(len(_intersect(pieces[p], pieces[q])) for p, q in _chain_pairs(len(pieces)))


def _chain_pose(joints, d_first, d_last) -> dict:
    k = len(joints) + 1
    pose = {"dx0": d_first[0], "dy0": d_first[1], f"dx{k}": d_last[0], f"dy{k}": d_last[1]}
    for i, (x, y) in enumerate(joints, start=1):
        pose[f"x{i}"], pose[f"y{i}"] = x, y
    return pose


def chain_witnesses(k: int, seed: int = 0, restarts: int = 400, steps: int = 300) -> dict:
    """Integer-coordinate optimal k-chains found by hill climbing, one per class found."""
    _check_chain(k)
    if k == 1:
        inst = instantiate(ShapeKind.KCHAIN, {"x1": 0, "y1": 0, "dx0": 1, "dy0": 0}, k=1)
        return {chain_code(inst): inst.pose}
    goal = comb(k - 1, 2)
    wanted = chain_candidate_codes(k)
    rng = random.Random(seed)
    found: dict = {}

    def coord():
        return rng.randint(-12, 12)

    def direction():
        while True:
            d = (rng.randint(-6, 6), rng.randint(-6, 6))
            if d != (0, 0):
                return d

    for _ in range(restarts):
        joints = [(coord(), coord()) for _ in range(k - 1)]
        d_first, d_last = direction(), direction()
        score = _float_chain_crossings(joints, d_first, d_last)
        for _ in range(steps):
            nj, nf, nl = list(joints), d_first, d_last
            pick = rng.randrange(k + 1)
            if pick < k - 1:
                nj[pick] = (nj[pick][0] + rng.randint(-3, 3), nj[pick][1] + rng.randint(-3, 3))
            elif pick == k - 1:
                nf = direction()
            else:
                nl = direction()
            if len(set(nj)) < len(nj):
                continue
            s = _float_chain_crossings(nj, nf, nl)
            if s >= score:
                joints, d_first, d_last, score = nj, nf, nl, s
            if score == goal:
                break
        if score == goal:
            inst = instantiate(ShapeKind.KCHAIN, _chain_pose(joints, d_first, d_last), k=k)
            code = chain_code(inst)
            if code is not None and code not in found:
                if code not in wanted:
                    raise AssertionError("realized chain missing from the combinatorial candidates")
                found[code] = inst.pose
        if len(found) == len(wanted):
            break
    return found


def enumerate_optimal_kchains(k: int, seed: int = 0) -> int:
    """Classes of single k-chains with every non-adjacent pair of pieces crossing, each with a witness."""
    return len(chain_witnesses(k, seed))


# -- signatures of placed configurations ---------------------------------------------------

@dataclass(frozen=True)
class ArrangementSignature:
    counts: tuple        # (V_B, V_C, E, R)
    code: tuple          # sorted canonical codes of the connected pieces


def signature(instances) -> ArrangementSignature:
    """Canonical code of the drawing's map, with every infinite end joined at one vertex."""
    arr = build(list(instances))
    report = count_regions_faces(arr)
    pm = planar_map(arr)
    ring = set(pm.ring)
    keep = [e for e in range(len(pm.edges)) if e not in pm.box_edges]
    new_id = {e: i for i, e in enumerate(keep)}

    def renamed(h):
        return 2 * new_id[h // 2] + (h & 1)

    sigma = [0] * (2 * len(keep))
    labels = [None] * (2 * len(keep))
    for v, hs in pm.rotation.items():
        if v in ring:
            continue
        tag = BASE if v in pm.base_ids else SYNTHETIC if v in pm.synth_ids else CROSSING
        hs = [renamed(h) for h in hs]
        for a, b in zip(hs, hs[1:] + hs[:1]):
            sigma[a], labels[a] = b, tag
    at_infinity = []
    for v in pm.ring:
        inner = [h for h in pm.rotation[v] if h // 2 not in pm.box_edges]
        if len(inner) > 1:
            raise ValueError("two arms leave through the same box point")
        at_infinity.extend(renamed(h) for h in inner)
    at_infinity.reverse()
    for a, b in zip(at_infinity, at_infinity[1:] + at_infinity[:1]):
        sigma[a], labels[a] = b, INF

    # split into connected pieces
    parent = list(range(len(sigma)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for h in range(len(sigma)):
        parent[find(h)] = find(sigma[h])
        parent[find(h)] = find(h ^ 1)
    groups: dict = {}
    for h in range(len(sigma)):
        groups.setdefault(find(h), []).append(h)
    inf_set = set(at_infinity)
    codes = []
    for hs in groups.values():
        roots = [h for h in hs if h in inf_set] or hs
        codes.append(CombinatorialMap(sigma, labels, roots).canonical_code())
    counts = (report.V_B, report.V_C, report.E, report.R)
    return ArrangementSignature(counts, tuple(sorted(codes)))
