"""Command-line front end.

Exit status: 0 success, 1 mismatch or failed expectation, 2 degenerate input,
3 unreadable or invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import census, config as cfgmod, formulas, svg
from .arrangement import (
    MISMATCH, DegenerateInput, DisconnectedInput, ResolutionExceeded, build, count_regions_faces,
    count_regions_formula, verify,
)
from .constructions import ConstructionFailed, NotStored, best_known, construct
from .optimizer import SEARCHABLE, SearchConfig, search
from .shapes import KINDS_WITH_K, ShapeKind, ValidationError, instantiate

OK, FAILED, DEGENERATE, PARSE_ERROR = 0, 1, 2, 3


def _report_lines(rep) -> list[str]:
    return [f"{rep.method}: V_B={rep.V_B} V_C={rep.V_C} E_i={rep.E_i} E_f={rep.E_f} "
            f"R_i={rep.R_i} R_f={rep.R_f} R={rep.R}"]


def cmd_count(args) -> int:
    conf = cfgmod.load(args.config)
    instances = conf.instances()
    arr = build(instances)
    if arr.report:
        print("degenerate input:")
        for f in arr.report.findings:
            x, y = f.location
            print(f"  {f.kind} at ({x:.6g}, {y:.6g}) {f.detail}".rstrip())
        return DEGENERATE
    reports = []
    try:
        if args.method in ("formula", "both"):
            reports.append(count_regions_formula(arr))
        if args.method in ("faces", "both"):
            reports.append(count_regions_faces(arr))
    except (DegenerateInput, ResolutionExceeded) as exc:
        print(f"degenerate input: {exc}")
        return DEGENERATE
    except DisconnectedInput as exc:
        print(f"formula counter refused: {exc}; rerun with --method faces")
        return DEGENERATE
    for rep in reports:
        print(*_report_lines(rep), sep="\n")
    status = OK
    if len(reports) == 2 and not reports[0].same_counts(reports[1]):
        print("MISMATCH: the two counters disagree")
        status = FAILED
    rep = reports[-1]
    kinds = {(i.kind, i.k) for i in instances}
    if len(kinds) == 1:
        kind, k = kinds.pop()
        n = len(instances)
        value, flag = formulas.max_regions(kind, k, n)
        bound = formulas.crossing_bound(kind, k, n)
        verdict = "at the crossing bound" if rep.V_C == bound else "below the crossing bound"
        verdict += ", matches the closed form" if rep.R == value else f", closed form differs by {value - rep.R}"
        print(f"{kind.value} n={n}: closed form {value} ({flag}), crossing bound {bound}, {verdict}")
    if conf.expected:
        for key, want in conf.expected.items():
            got = rep.V_C if key == "V_C" else rep.R
            if got != want:
                print(f"MISMATCH: expected {key}={want}, got {got}")
                status = FAILED
    if args.svg:
        svg.write(instances, args.svg)
    return status


def cmd_verify(args) -> int:
    kind = ShapeKind.parse(args.kind)
    k = args.k if kind in KINDS_WITH_K else None
    status = OK
    print(f"{'n':>3} {'R':>8} {'closed':>8} {'V_C':>8} {'bound':>8}  status")
    for n in range(1, args.n_max + 1):
        try:
            con = construct(kind, n, k)
        except (NotStored, ConstructionFailed, ValueError):
            try:
                con = best_known(kind, n)
            except (NotStored, ValueError) as exc:
                print(f"{n:>3} {'-':>8} {formulas.max_regions(kind, k, n)[0]:>8}  no configuration ({exc})")
                continue
        out = verify(kind, k, n, con)
        value = out.closed_form[0]
        regions = out.regions if out.regions is not None else "-"
        print(f"{n:>3} {regions:>8} {value:>8} {out.crossings:>8} {out.bound:>8}  {out.status}")
        if out.status == MISMATCH:
            status = FAILED
    return status


def cmd_table(args) -> int:
    rows = formulas.emit_table(args.shape, args.k_max, args.n_max)
    sys.stdout.write(formulas.format_table(rows, args.format))
    return OK


def cmd_search(args) -> int:
    kind = ShapeKind.parse(args.kind)
    steps = args.steps
    if args.budget is not None:
        steps = max(1, args.budget // args.restarts)
    conf = SearchConfig(kind, args.n, restarts=args.restarts, steps=steps, seed=args.seed,
                        stop_at=args.stop_at, workers=args.workers)
    res = search(conf)
    print(f"{kind.value} n={args.n}: R={res.regions} V_C={res.crossings} margin={res.margin:.3g} "
          f"restart={res.restart} exact={res.exact}")
    print("best crossings every 1000 steps:", " ".join(map(str, res.trace)))
    out = args.out or f"{kind.value}_n{args.n}.json"
    insts = [instantiate(kind, p, id=i) for i, p in enumerate(res.poses)]
    expected = {"V_C": res.crossings, "R": res.regions} if res.exact else None
    cfgmod.dump(cfgmod.from_instances(insts, expected), out)
    Path(out).with_suffix(".report.json").write_text(json.dumps(res.report(), indent=2) + "\n")
    print(f"wrote {out}")
    return OK


def cmd_render(args) -> int:
    conf = cfgmod.load(args.config)
    svg.write(conf.instances(), args.out, args.width, args.crossings)
    return OK


def cmd_census(args) -> int:
    if args.lines is not None:
        print(census.enumerate_line_arrangements(args.lines))
    else:
        print(census.enumerate_optimal_kchains(args.kchains))
    return OK


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pancake-lab", description="Region counts of placed shape arrangements.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="count regions of a configuration file")
    c.add_argument("config")
    c.add_argument("--method", choices=("formula", "faces", "both"), default="both")
    c.add_argument("--svg")
    c.set_defaults(func=cmd_count)

    v = sub.add_parser("verify", help="check constructions against the closed forms")
    v.add_argument("--kind", required=True)
    v.add_argument("--k", type=int)
    v.add_argument("--n-max", type=int, required=True)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", help="print the kv or kchain table")
    t.add_argument("--shape", choices=("kv", "kc"), required=True)
    t.add_argument("--k-max", type=int, required=True)
    t.add_argument("--n-max", type=int, required=True)
    t.add_argument("--format", choices=("plain", "csv"), default="plain")
    t.set_defaults(func=cmd_table)

    s = sub.add_parser("search", help="anneal poses of a shape without a known construction")
    s.add_argument("--kind", required=True, choices=[k.value for k in SEARCHABLE])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=int, default=20)
    s.add_argument("--steps", type=int, default=50_000)
    s.add_argument("--budget", type=int, help="total steps, split evenly over the restarts")
    s.add_argument("--stop-at", type=int, help="stop once this many regions are reached")
    s.add_argument("--workers", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)

    r = sub.add_parser("render", help="draw a configuration as SVG")
    r.add_argument("config")
    r.add_argument("--out", required=True)
    r.add_argument("--width", type=int, default=800)
    r.add_argument("--crossings", action="store_true", help="mark crossing nodes")
    r.set_defaults(func=cmd_render)

    e = sub.add_parser("census", help="count combinatorially distinct arrangements")
    g = e.add_mutually_exclusive_group(required=True)
    g.add_argument("--lines", type=int)
    g.add_argument("--kchains", type=int)
    e.set_defaults(func=cmd_census)
    return p


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    try:
        return args.func(args)
    except cfgmod.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return PARSE_ERROR
    except (ValidationError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return PARSE_ERROR
    except census.BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
