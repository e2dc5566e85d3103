"""Closed-form region maxima with their certainty status."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Optional

from .shapes import CONJECTURED, EXACT, UPPER_BOUND, KINDS_WITH_K, ShapeKind, catalog


class UnknownKind(KeyError):
    pass


def _kind(kind) -> ShapeKind:
    try:
        return ShapeKind.parse(kind)
    except KeyError as exc:
        raise UnknownKind(str(exc)) from None


def _tbar(n):
    lam = -(-n // 3)
    return 2 * n * n + n + 1 - lam * n + 3 * comb(lam, 2)


def _value_fn(kind: ShapeKind, k: Optional[int]) -> Callable[[int], int]:
    K = ShapeKind
    fns = {
        K.LINE: lambda n: n * (n + 1) // 2 + 1,
        K.HATPIN: lambda n: comb(n, 2) + 1,
        K.LONG_A: lambda n: (9 * n * n - 5 * n + 2) // 2,
        K.LONG_Z: lambda n: (9 * n * n - 7 * n + 2) // 2,
        K.LONG_W: lambda n: 8 * n * n - 7 * n + 1,
        K.LBAR: lambda n: (3 * n * n - n + 2) // 2,
        K.XBAR: lambda n: 2 * n * n + n + 1,
        K.HBAR: lambda n: (7 * n * n - n + 2) // 2,
        K.PHIBAR: lambda n: (7 * n * n - n + 2) // 2,
        K.TBAR: _tbar,
        K.ABAR: lambda n: (10 * n * n) // 3 if n else 1,
        K.CONCAVE_QUAD: lambda n: 2 * (2 * n - 1) ** 2 if n else 1,
        K.CIRCLE: lambda n: n * n - n + 2 if n else 1,
        K.FIGURE8: lambda n: 4 * n * n - 3 * n + 2 if n else 1,
        K.PENTAGRAM: lambda n: 10 * n * n - 5 * n + 2 if n else 1,
        K.HEXAGRAM: lambda n: 2 * (6 * n * n - 3 * n + 1) if n else 1,
        K.LOLLIPOP: lambda n: (7 * n * n - 5 * n + 2) // 2,
    }
    if kind is K.KV:
        return lambda n: comb(n, 2) * k * k + n * (k - 1) + 1
    if kind is K.KCHAIN:
        return lambda n: (k * k * n * n - 3 * k * n) // 2 + 2 * n + 1
    if kind is K.POLYGON:
        return lambda n: k * n * n - k * n + 2 if n else 1
    return fns[kind]


@dataclass(frozen=True)
class FormulaEntry:
    kind: ShapeKind
    k: Optional[int]
    value: Callable[[int], int]
    status: str
    anchor: str

    def __call__(self, n: int) -> int:
        return self.value(n)


_ANCHORS = {
    ShapeKind.LINE: "n(n+1)/2 + 1",
    ShapeKind.HATPIN: "C(n,2) + 1",
    ShapeKind.KV: "C(n,2) k^2 + n(k-1) + 1",
    ShapeKind.KCHAIN: "k^2 n^2/2 - 3kn/2 + 2n + 1",
    ShapeKind.LONG_A: "(9n^2 - 5n + 2)/2",
    ShapeKind.LONG_Z: "(9n^2 - 7n + 2)/2",
    ShapeKind.LONG_W: "8n^2 - 7n + 1",
    ShapeKind.LBAR: "(3n^2 - n + 2)/2",
    ShapeKind.XBAR: "2n^2 + n + 1",
    ShapeKind.HBAR: "(7n^2 - n + 2)/2",
    ShapeKind.PHIBAR: "(7n^2 - n + 2)/2",
    ShapeKind.TBAR: "2n^2 + n + 1 - lambda n + 3 C(lambda,2), lambda = ceil(n/3)",
    ShapeKind.ABAR: "floor(10n^2/3)",
    ShapeKind.POLYGON: "k n^2 - k n + 2 (n >= 1)",
    ShapeKind.CONCAVE_QUAD: "2(2n-1)^2 (n >= 1)",
    ShapeKind.CIRCLE: "n^2 - n + 2 (n >= 1)",
    ShapeKind.FIGURE8: "4n^2 - 3n + 2 (n >= 1)",
    ShapeKind.PENTAGRAM: "10n^2 - 5n + 2 (n >= 1)",
    ShapeKind.HEXAGRAM: "2(6n^2 - 3n + 1) (n >= 1)",
    ShapeKind.LOLLIPOP: "(7n^2 - 5n + 2)/2",
}


def entry(kind, k: Optional[int] = None) -> FormulaEntry:
    kind = _kind(kind)
    cat = catalog(kind, k)
    return FormulaEntry(kind, cat.k, _value_fn(kind, cat.k), cat.status, _ANCHORS[kind])


def _check_n(n):
    if n < 0:
        raise ValueError("n must be non-negative")


def max_regions(kind, k: Optional[int] = None, n: int = 0) -> tuple[int, str]:
    """Best known maximum number of regions for n copies, with its status flag."""
    _check_n(n)
    e = entry(kind, k)
    if n == 0:
        return 1, EXACT
    return e.value(n), e.status


def crossing_bound(kind, k: Optional[int] = None, n: int = 0) -> int:
    """Most crossings n copies can have: n*sigma + C(n,2)*kappa."""
    _check_n(n)
    cat = catalog(_kind(kind), k)
    return n * cat.sigma + comb(n, 2) * cat.kappa


def region_offset(kind, k: Optional[int] = None, n: int = 0) -> int:
    """Regions minus crossings for a connected, degeneracy-free arrangement."""
    cat = catalog(_kind(kind), k)
    if n == 0:
        return 1
    extra = 2 if cat.bounded else 1
    return n * (cat.degree_sum - 2 * cat.base_count + cat.infinite_ends) // 2 + extra


def region_upper_bound(kind, k: Optional[int] = None, n: int = 0) -> int:
    """Region count implied by the crossing bound; no arrangement can exceed it."""
    return crossing_bound(kind, k, n) + region_offset(kind, k, n)


def cpa(kind, k: Optional[int] = None, n: int = 1) -> Fraction:
    """Crossings per arm at the crossing bound."""
    if n < 1:
        raise ValueError("cpa needs n >= 1")
    cat = catalog(_kind(kind), k)
    return Fraction(2 * crossing_bound(kind, k, n), n * cat.arms)


def emit_table(kind, k_max: int, n_max: int) -> list[list[int]]:
    """Rows k = 1..k_max, columns n = 0..n_max."""
    kind = _kind(kind)
    if kind not in (ShapeKind.KV, ShapeKind.KCHAIN):
        raise ValueError("tables exist for kv and kchain only")
    if k_max < 0 or n_max < 0:
        raise ValueError("bounds must be non-negative")
    return [[max_regions(kind, k, n)[0] for n in range(n_max + 1)] for k in range(1, k_max + 1)]


def format_table(rows: list[list[int]], fmt: str = "plain") -> str:
    header = ["k\\n"] + [str(n) for n in range(len(rows[0]) if rows else 0)]
    body = [[str(k)] + [str(v) for v in row] for k, row in enumerate(rows, start=1)]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(body)
        return buf.getvalue()
    if fmt != "plain":
        raise ValueError(f"unknown table format {fmt!r}")
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in [header] + body]
    return "\n".join(lines) + "\n"


__all__ = [
    "FormulaEntry", "UnknownKind", "entry", "max_regions", "crossing_bound", "region_offset",
    "region_upper_bound", "cpa", "emit_table", "format_table", "EXACT", "CONJECTURED", "UPPER_BOUND",
    "KINDS_WITH_K",
]
