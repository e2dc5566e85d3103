"""Acceptance criteria, one test each; every check prints a PASS/FAIL line.

Run with pytest (the lines appear in the terminal summary) or directly:
    python3 tests/test_acceptance.py
Integer results are compared exactly.  Time limits are pinned below.
"""

from __future__ import annotations

import json
import random
import subprocess
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from helpers import ALL_KINDS, random_configuration, table1, table2  # noqa: E402
from pancake_lab import census, svg  # noqa: E402
from pancake_lab.arrangement import (  # noqa: E402
    OPTIMAL_CONFIRMED, DisconnectedInput, build, count_regions_faces, count_regions_formula, euler_target,
    verify,
)
from pancake_lab.constructions import a_to_chain, a_to_kv, best_known, construct  # noqa: E402
from pancake_lab.formulas import crossing_bound, max_regions, region_upper_bound  # noqa: E402
from pancake_lab.optimizer import SEARCHABLE, SearchConfig, _State, _random_params, search  # noqa: E402
from pancake_lab.shapes import EXACT, ShapeKind as K, catalog  # noqa: E402

FORMULA_SWEEP_SECONDS = 60          # criterion 1
RANDOM_PER_KIND = 500               # criterion 3
SEARCH_SECONDS = 600                # criterion 5, per target
CENSUS_SECONDS = 300                # criterion 7
SEED = 0
QUOTED_TBAR = {5: 54, 6: 79}        # values printed alongside the closed form

RESULTS: list[tuple[int, str, bool, str]] = []


def record(number: int, title: str, ok: bool, detail: str) -> bool:
    RESULTS.append((number, title, ok, detail))
    return ok


def line(result) -> str:
    n, title, ok, detail = result
    return f"[{'PASS' if ok else 'FAIL'}] {n}. {title}: {detail}"


def summary_lines() -> list[str]:
    return [line(r) for r in sorted(RESULTS)]


def exact_cases():
    cases = []
    for kind in K:
        if kind in (K.KV, K.KCHAIN):
            cases += [(kind, k) for k in range(1, 8)]
        elif kind is K.POLYGON:
            cases += [(kind, k) for k in range(3, 8)]
        elif catalog(kind, None).status == EXACT:
            cases.append((kind, None))
    return cases


# -- 1 ---------------------------------------------------------------------------------------------

def check_formula_agreement() -> bool:
    start = time.perf_counter()
    problems, checked = [], 0
    for kind, k in exact_cases():
        for n in range(1, 9):
            out = verify(kind, k, n, construct(kind, n, k))
            value = max_regions(kind, k, n)[0]
            if kind is K.KV:
                value_ok = value == table1(k, n)
            elif kind is K.KCHAIN:
                value_ok = value == table2(k, n)
            else:
                value_ok = True
            checked += 1
            if not (out.status == OPTIMAL_CONFIRMED and out.formula.R == out.faces.R == value and value_ok):
                problems.append(f"{kind.value} k={k} n={n}: {out.status} {out.regions} vs {value}")
    corners = (max_regions(K.KV, 7, 8)[0], max_regions(K.KCHAIN, 7, 8)[0])
    elapsed = time.perf_counter() - start
    ok = not problems and corners == (1421, 1501) and elapsed < FORMULA_SWEEP_SECONDS
    detail = (f"{checked} (kind, k, n) cases, kV(7,8)={corners[0]}, kC(7,8)={corners[1]}, "
              f"{elapsed:.1f}s (limit {FORMULA_SWEEP_SECONDS}s)")
    if problems:
        detail += "; " + "; ".join(problems[:5])
    return record(1, "formula and construction agreement", ok, detail)


# -- 2 ---------------------------------------------------------------------------------------------

def _golden():
    def r(con):
        return count_regions_faces(build(con.instances)).R

    def rv(con):
        arr = build(con.instances)
        return count_regions_faces(arr).R, len(arr.records)

    cases = [
        ("pancake n=5", lambda: r(construct(K.LINE, 5)), 16),
        ("long A n=2", lambda: r(construct(K.LONG_A, 2)), 14),
        ("3V n=4 (R, V_C)", lambda: rv(construct(K.KV, 4, 3)), (63, 54)),
        ("3-chain n=3", lambda: r(construct(K.KCHAIN, 3, 3)), 34),
        ("long W n=2", lambda: r(construct(K.LONG_W, 2)), 19),
        ("L-bar n=5", lambda: r(construct(K.LBAR, 5)), 36),
        ("X-bar n=3", lambda: r(construct(K.XBAR, 3)), 22),
        ("H-bar n=0..4", lambda: [count_regions_faces(build([])).R] + [r(construct(K.HBAR, n)) for n in range(1, 5)],
         [1, 4, 14, 31, 55]),
        ("octagons n=2", lambda: r(construct(K.POLYGON, 2, 8)), 18),
        ("concave quads n=2", lambda: r(construct(K.CONCAVE_QUAD, 2)), 18),
        ("circles n=4", lambda: r(construct(K.CIRCLE, 4)), 14),
        ("pentagrams n=3", lambda: r(construct(K.PENTAGRAM, 3)), 77),
        ("figure-8 n=2", lambda: r(best_known(K.FIGURE8, 2)), 12),
        ("lollipop n=2", lambda: r(best_known(K.LOLLIPOP, 2)), 10),
        ("lollipop n=3", lambda: r(best_known(K.LOLLIPOP, 3)), 25),
        ("T-bar n=3", lambda: r(best_known(K.TBAR, 3)), 19),
        ("T-bar n=4", lambda: r(best_known(K.TBAR, 4)), 32),
    ]
    for n, R, vc in [(1, 3, 0), (2, 13, 8), (3, 30, 23), (4, 53, 44), (5, 83, 72)]:
        cases.append((f"A-bar table row n={n} (R, V_C)", lambda n=n: rv(best_known(K.ABAR, n)), (R, vc)))
    return cases


def check_golden_values() -> bool:
    wrong = []
    cases = _golden()
    for name, fn, want in cases:
        got = fn()
        if got != want:
            wrong.append(f"{name}: {got} != {want}")
    detail = f"{len(cases) - len(wrong)}/{len(cases)} figure values exact"
    if wrong:
        detail += "; " + "; ".join(wrong)
    return record(2, "figure-level golden values", not wrong, detail)


# -- 3 ---------------------------------------------------------------------------------------------

def _dual(arr) -> str | None:
    """None when both counters agree and the Euler identity holds, else a reason."""
    faces = count_regions_faces(arr)
    formula = count_regions_formula(arr)
    if not formula.same_counts(faces):
        return f"formula R={formula.R}, faces R={faces.R}"
    if faces.euler() != euler_target(arr):
        return "Euler identity fails"
    if arr.components == 1 and arr.infinite_ends and faces.R - faces.E + faces.V != 1:
        return "R - E + V != 1"
    return None


def check_dual_counters() -> bool:
    start = time.perf_counter()
    problems, constructions = [], 0
    for kind, k in exact_cases():
        for n in range(1, 9):
            why = _dual(build(construct(kind, n, k).instances))
            constructions += 1
            if why:
                problems.append(f"{kind.value} k={k} n={n} construction: {why}")
    for kind in SEARCHABLE + (K.CONCAVE_QUAD,):
        for n in range(1, 6):
            try:
                con = best_known(kind, n)
            except Exception:
                continue
            constructions += 1
            why = _dual(build(con.instances))
            if why:
                problems.append(f"{kind.value} n={n} stored: {why}")
    fewest = None
    for kind, k in ALL_KINDS:
        rng = random.Random(f"acceptance:{kind.value}:{k}")
        good = 0
        for _ in range(20 * RANDOM_PER_KIND):
            if good >= RANDOM_PER_KIND:
                break
            n = rng.randint(1, 3)
            insts = random_configuration(kind, k, rng, n)
            arr = build(insts)
            if arr.report:
                continue
            try:
                why = _dual(arr)
            except DisconnectedInput:
                continue
            good += 1
            if why:
                problems.append(f"{kind.value} k={k} random: {why}")
            if len(arr.records) > crossing_bound(kind, k, n):
                problems.append(f"{kind.value} k={k} random: crossing bound exceeded")
        fewest = good if fewest is None else min(fewest, good)
    ok = not problems and fewest >= RANDOM_PER_KIND
    detail = (f"{constructions} constructions, >= {fewest} random nondegenerate configurations for each of "
              f"{len(ALL_KINDS)} kinds, {time.perf_counter() - start:.0f}s")
    if problems:
        detail += "; " + "; ".join(problems[:5])
    return record(3, "dual counters and Euler identity", ok, detail)


# -- 4 ---------------------------------------------------------------------------------------------

def check_rewrites() -> bool:
    rows, bad = [], []
    for n in range(1, 9):
        insts = construct(K.LONG_A, n).instances
        want = count_regions_faces(build(insts)).R
        as_v = count_regions_faces(build([a_to_kv(i) for i in insts])).R
        as_chain = count_regions_faces(build([a_to_chain(i) for i in insts])).R
        rows.append(str(want))
        if not want == as_v == as_chain:
            bad.append(f"n={n}: A {want}, 3V {as_v}, 3-chain {as_chain}")
    detail = "A = 3V = 3-chain regions for n=1..8: " + ",".join(rows)
    if bad:
        detail += "; " + "; ".join(bad)
    return record(4, "A to 3V and 3-chain rewrites", not bad, detail)


# -- 5 ---------------------------------------------------------------------------------------------

SEARCHES: dict = {}


def timed_search(kind: K, n: int, stop_at: int):
    """Default-budget search, run once per target and kept for the bound checks."""
    key = (kind, n, stop_at)
    if key not in SEARCHES:
        start = time.perf_counter()
        res = search(SearchConfig(kind, n, seed=SEED, stop_at=stop_at))
        SEARCHES[key] = (res, time.perf_counter() - start)
    return SEARCHES[key]


def check_optimizer() -> bool:
    parts, ok = [], True
    for kind, n, want in [(K.TBAR, 3, 19), (K.TBAR, 4, 32), (K.ABAR, 2, 13), (K.LOLLIPOP, 3, 25)]:
        res, secs = timed_search(kind, n, want)
        hit = res.exact and res.regions >= want and secs <= SEARCH_SECONDS
        ok &= hit
        parts.append(f"{kind.value} n={n} R={res.regions}/{want} in {secs:.1f}s")
    for n in (5, 6):
        value = max_regions(K.TBAR, None, n)[0]
        res, secs = timed_search(K.TBAR, n, value)
        parts.append(f"tbar n={n} R={res.regions} vs closed form {value} (quoted {QUOTED_TBAR[n]}), "
                     f"gap {value - res.regions}, {secs:.0f}s, report only")
    return record(5, "optimizer reproduction", ok, "; ".join(parts))


# -- 6 ---------------------------------------------------------------------------------------------

def check_bounds() -> bool:
    problems, checked = [], 0
    for kind, k in ALL_KINDS:
        rng = random.Random(f"bounds:{kind.value}:{k}")
        for _ in range(60):
            n = rng.randint(1, 5)
            arr = build(random_configuration(kind, k, rng, n))
            if arr.report:
                continue
            checked += 1
            R = count_regions_faces(arr).R
            if len(arr.records) > crossing_bound(kind, k, n) or R > region_upper_bound(kind, k, n):
                problems.append(f"{kind.value} k={k} n={n}")
    for kind in SEARCHABLE:
        rng = random.Random(f"bounds:search:{kind.value}")
        for _ in range(200):
            n = rng.randint(2, 6)
            vc, _ = _State(kind, [_random_params(kind, rng) for _ in range(n)]).evaluate()
            checked += 1
            if vc > crossing_bound(kind, None, n):
                problems.append(f"{kind.value} float n={n}")
    for (kind, n, _), (res, _) in SEARCHES.items():
        checked += 1
        if res.crossings > crossing_bound(kind, None, n) or res.regions > region_upper_bound(kind, None, n):
            problems.append(f"search {kind.value} n={n}")
    detail = f"{checked} configurations and search results within crossing and region bounds"
    if problems:
        detail += "; " + "; ".join(problems[:5])
    return record(6, "bound discipline", not problems, detail)


# -- 7 ---------------------------------------------------------------------------------------------

def check_census() -> bool:
    start = time.perf_counter()
    got = (census.enumerate_line_arrangements(5), census.enumerate_line_arrangements(6),
           census.enumerate_optimal_kchains(5))
    elapsed = time.perf_counter() - start
    ok = got == (6, 43, 2) and elapsed < CENSUS_SECONDS
    detail = (f"5 lines -> {got[0]}, 6 lines -> {got[1]}, optimal 5-chains -> {got[2]}, "
              f"{elapsed:.1f}s (limit {CENSUS_SECONDS}s)")
    return record(7, "census values", ok, detail)


# -- 8 ---------------------------------------------------------------------------------------------

def _cli(*argv, cwd):
    return subprocess.run([sys.executable, "-m", "pancake_lab", *argv], cwd=cwd, capture_output=True,
                          text=True, check=False)


def check_determinism(workdir: Path) -> bool:
    outputs = []
    for run in ("a", "b"):
        d = workdir / run
        d.mkdir(parents=True, exist_ok=True)
        s = _cli("search", "--kind", "lollipop", "--n", "3", "--seed", "5", "--restarts", "3", "--steps", "4000",
                 "--out", "best.json", cwd=d)
        r = _cli("render", "best.json", "--out", "best.svg", "--crossings", cwd=d)
        c = _cli("count", "best.json", "--svg", "count.svg", cwd=d)
        files = {name: (d / name).read_bytes() for name in ("best.json", "best.report.json", "best.svg", "count.svg")}
        outputs.append((s.returncode, r.returncode, c.returncode, s.stdout, c.stdout, files))
    same = outputs[0] == outputs[1]
    codes_ok = outputs[0][:3] == (0, 0, 0)
    report = json.loads(outputs[0][5]["best.report.json"])
    detail = (f"two separate runs: search config, report (R={report['regions']}, seed {report['seed']}), "
              f"two SVGs and stdout {'byte-identical' if same else 'differ'}")
    return record(8, "determinism", same and codes_ok, detail)


# -- pytest entry points ---------------------------------------------------------------------------

def test_criterion_1_formula_agreement():
    assert check_formula_agreement()


def test_criterion_2_golden_values():
    assert check_golden_values()


def test_criterion_3_dual_counters():
    assert check_dual_counters()


def test_criterion_4_rewrites():
    assert check_rewrites()


def test_criterion_5_optimizer():
    assert check_optimizer()


def test_criterion_6_bounds():
    assert check_bounds()


def test_criterion_7_census():
    assert check_census()


def test_criterion_8_determinism(tmp_path):
    assert check_determinism(tmp_path)


if __name__ == "__main__":
    import tempfile

    checks = [check_formula_agreement, check_golden_values, check_dual_counters, check_rewrites,
              check_optimizer, check_bounds, check_census]
    for check in checks:
        check()
        print(line(RESULTS[-1]), flush=True)
    with tempfile.TemporaryDirectory() as tmp:
        check_determinism(Path(tmp))
    print(line(RESULTS[-1]))
    sys.exit(0 if all(ok for _, _, ok, _ in RESULTS) else 1)
