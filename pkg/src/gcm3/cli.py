"""Command-line entry point: gcm3 {enumerate,twists,weyl,extend,pipeline,render}.

Exit codes
    0  success
    2  bad flags or unreadable input
    3  enumerate --diff found discrepancies
    4  a twist coefficient is unbounded and no --cap was given
    5  singular linear system
    6  a search bound was exhausted, or max_sides reached (status open)
    7  no solution (no admissible root, rejected seed, empty twist set)
    8  degenerate chamber data for render

Data goes to stdout (or --out); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass

from gcm3.algebra import SingularMatrix, format_fraction
from gcm3.lattice import format_vec, parse_vec
from gcm3.render import DegenerateChamber, render_svg
from gcm3.search import (
    PipelineConfig,
    PolygonCandidate,
    UnboundedSearch,
    default_workers,
    diff_triples,
    enumerate_triples,
    extend_polygon,
    label_of,
    load_printed_lists,
    run_pipeline,
    seed_from_triple,
    solve_twists,
    solve_weyl,
)

EXIT_OK, EXIT_USAGE, EXIT_DIFF, EXIT_UNBOUNDED, EXIT_SINGULAR, EXIT_BOUND, EXIT_NONE, EXIT_DEGENERATE = 0, 2, 3, 4, 5, 6, 7, 8

log = logging.getLogger("gcm3")


class UsageError(Exception):
    pass


@dataclass
class Config:
    cross_bound: int = 14
    lambda_cap: int = 12
    coeff_bound: int | None = None  # None: Step 4 roots enumerated exactly
    max_sides: int = 20
    output_format: str = "text"
    workers: int = 1

    def validate(self) -> None:
        for name in ("cross_bound", "max_sides", "workers"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be >= 1")
        if self.coeff_bound is not None and self.coeff_bound < 1:
            raise UsageError("coeff_bound must be >= 1")
        if self.lambda_cap < 0:
            raise UsageError("lambda_cap must be >= 0")

    def pipeline(self) -> PipelineConfig:
        return PipelineConfig(
            cross_bound=self.cross_bound,
            lambda_cap=self.lambda_cap,
            coeff_bound=self.coeff_bound,
            max_sides=self.max_sides,
            workers=self.workers,
        )


# -- argument helpers -------------------------------------------------------


def _ints(text: str, count: int | None = None) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if count is not None and len(vals) != count:
        raise argparse.ArgumentTypeError(f"expected {count} integers, got {len(vals)}")
    return vals


def _triple(text: str):
    parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("a triple is three roots, e.g. c,a,b or 'b+2c,a,b'")
    try:
        return tuple(parse_vec(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def _load_candidate(path: str, index: int) -> PolygonCandidate:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "candidates" in data:
        data = data["candidates"]
    if isinstance(data, list):
        if not data:
            raise DegenerateChamber("candidate file is empty")
        data = data[index]
    return PolygonCandidate.from_dict(data)


def candidate_text(c: PolygonCandidate) -> str:
    lines = [
        f"status: {c.status}" + (f" ({c.reason})" if c.reason else ""),
        f"n: {c.n}",
        "deltas: " + ", ".join(label_of(d) for d in c.deltas),
        "lambdas: " + ", ".join(str(x) for x in c.lambdas),
    ]
    if c.weyl:
        lines.append(str(c.weyl))
    if c.status == "closed" and c.realization:
        lines.append("realization:")
        lines.append(c.realization.to_text())
    return "\n".join(lines) + "\n"


CSV_FIELDS = ["delta2", "status", "n", "deltas", "lambdas", "rho", "rho_norm", "realization", "reason"]


def candidates_csv(cands) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for c in cands:
        r = c.realization if c.status == "closed" else None
        w.writerow([
            c.delta2,
            c.status,
            c.n,
            " ".join(format_vec(d) for d in c.deltas),
            " ".join(str(x) for x in c.lambdas),
            " ".join(format_fraction(x) for x in c.weyl.coords) if c.weyl else "",
            format_fraction(c.weyl.norm) if c.weyl else "",
            json.dumps(r.rows) if r else "",
            c.reason,
        ])
    return buf.getvalue()


# -- commands ---------------------------------------------------------------


def cmd_enumerate(args) -> int:
    names = "abc" if args.delta2 == "all" else args.delta2
    if args.diff:
        fixture = load_printed_lists(args.diff)
        report = diff_triples(fixture, args.cross_bound, names)
        total = sum(r["computed"] for r in report.values())
        printed = sum(r["printed"] for r in report.values())
        bad = any(r["missing_from_printed"] or r["extra_in_printed"] for r in report.values())
        if args.format == "json":
            _emit(args, _dump({"lists": report, "computed_total": total, "printed_total": printed,
                               "claimed_total": fixture.get("claimed_total")}))
        else:
            out = []
            for name, r in report.items():
                out.append(f"delta2={name}: computed {r['computed']}, printed {r['printed']}")
                out += [f"  + {x}, {y}  (computed, not printed)" for x, y in r["missing_from_printed"]]
                out += [f"  - {x}, {y}  (printed, not computed)" for x, y in r["extra_in_printed"]]
            out.append(f"total: computed {total}, printed {printed}, claimed {fixture.get('claimed_total')}")
            _emit(args, "\n".join(out) + "\n")
        return EXIT_DIFF if bad else EXIT_OK

    triples = [t for n in names for t in enumerate_triples(n, args.cross_bound)]
    counts = {n: sum(1 for t in triples if t.label == n) for n in names}
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["delta1", "delta3", "delta2", "g12", "g13", "g23"])
        for t in triples:
            w.writerow([label_of(t.delta1), label_of(t.delta3), t.label, *t.g])
        _emit(args, buf.getvalue())
    elif args.format == "json":
        _emit(args, _dump({
            "triples": [{"delta1": list(t.delta1), "delta2": t.label, "delta3": list(t.delta3), "g": list(t.g)}
                        for t in triples],
            "counts": counts,
            "total": len(triples),
        }))
    else:
        out = []
        for n in names:
            out.append(f"delta2 = {n}: {counts[n]} triples")
            out += [f"  {label_of(t.delta1)}, {label_of(t.delta3)}" for t in triples if t.label == n]
        out.append(f"total: {len(triples)}")
        _emit(args, "\n".join(out) + "\n")
    return EXIT_OK


def cmd_twists(args) -> int:
    try:
        sols = solve_twists(*args.gram, cap=args.cap)
    except UnboundedSearch as exc:
        print(f"error: {exc}; pass --cap to bound it", file=sys.stderr)
        return EXIT_UNBOUNDED
    if args.format == "json":
        _emit(args, _dump({"gram": list(args.gram), "solutions": [list(s) for s in sols], "count": len(sols)}))
    elif args.format == "csv":
        _emit(args, "l1,l2,l3\n" + "".join(f"{x},{y},{z}\n" for x, y, z in sols))
    else:
        _emit(args, "".join(f"{x}, {y}, {z}\n" for x, y, z in sols) + f"Number of solutions {len(sols)}\n")
    return EXIT_OK if sols else EXIT_NONE


def cmd_weyl(args) -> int:
    try:
        w = solve_weyl(args.triple, args.lam)
    except SingularMatrix as exc:
        print(f"error: singular system: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    if args.format == "json":
        _emit(args, _dump({**w.to_dict(), "timelike": w.timelike}))
    elif args.format == "csv":
        _emit(args, "rho_a,rho_b,rho_c,norm\n" + ",".join(w.to_dict()["coords"] + [w.to_dict()["norm"]]) + "\n")
    else:
        _emit(args, f"{w}\n")
    return EXIT_OK


def _exit_for(c: PolygonCandidate) -> int:
    if c.status == "closed":
        return EXIT_OK
    if c.status == "open" or c.reason.startswith("bound_exhausted"):
        return EXIT_BOUND
    return EXIT_NONE


def cmd_extend(args, cfg: Config) -> int:
    if args.seed:
        seed = _load_candidate(args.seed, args.index)
    elif args.triple and args.lam:
        try:
            seed = seed_from_triple(args.triple, args.lam)
        except SingularMatrix as exc:
            print(f"error: singular system: {exc}", file=sys.stderr)
            return EXIT_SINGULAR
    else:
        raise UsageError("extend needs --seed FILE or --triple and --lambda")
    c = extend_polygon(seed, cfg.max_sides, cfg.coeff_bound, cfg.lambda_cap)
    if c.status != "closed":
        print(f"{c.status}: {c.reason}", file=sys.stderr)
    if args.format == "json":
        _emit(args, _dump(c.to_dict()))
    elif args.format == "csv":
        _emit(args, candidates_csv([c]))
    else:
        _emit(args, candidate_text(c))
    return _exit_for(c)


def cmd_pipeline(args, cfg: Config) -> int:
    result = run_pipeline(cfg.pipeline())
    outdir = args.out or "results"
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "candidates.json"), "w") as fh:
        fh.write(_dump({"candidates": [c.to_dict() for c in result.candidates]}))
    with open(os.path.join(outdir, "candidates.csv"), "w", newline="") as fh:
        fh.write(candidates_csv(result.candidates))
    with open(os.path.join(outdir, "summary.json"), "w") as fh:
        fh.write(_dump(result.summary))
    s = result.summary
    if args.format == "json":
        sys.stdout.write(_dump(s))
    else:
        per = ", ".join(f"{k}={s['triples'][k]}" for k in "abc")
        print(f"triples: {s['triples']['total']} ({per})")
        print(f"seeds: {s['seeds']}")
        print(f"closed polygons: {s['closed_polygons']}  distinct G(A): {s['distinct_realizations']}")
        print(f"max lambda: {s['max_lambda']}  all <= 12: {s['all_lambda_le_12']}  all <= 6: {s['all_lambda_le_6']}")
        print(f"written to {outdir}/")
    return EXIT_OK


def cmd_render(args) -> int:
    try:
        c = _load_candidate(args.candidate, args.index)
        svg = render_svg(c.deltas, c.weyl.coords if c.weyl else None, title=", ".join(label_of(d) for d in c.deltas))
    except (DegenerateChamber, IndexError, KeyError) as exc:
        print(f"error: degenerate chamber: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    _emit(args, svg)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, help="output file (pipeline: directory)")

    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--cross-bound", type=int, default=14)
    bounds.add_argument("--lambda-cap", type=int, default=12)
    bounds.add_argument("--coeff-bound", type=int, default=None)
    bounds.add_argument("--max-sides", type=int, default=20)

    p = argparse.ArgumentParser(prog="gcm3", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p.add_argument("--out", default=None)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", parents=[common], help="Step 1 chamber triples")
    e.add_argument("--delta2", choices=["a", "b", "c", "all"], default="all")
    e.add_argument("--cross-bound", type=int, default=14)
    e.add_argument("--diff", metavar="FIXTURE", help="compare with a printed-list fixture (paper_lists.json is bundled)")

    t = sub.add_parser("twists", parents=[common], help="Step 2 twist coefficients")
    t.add_argument("--gram", type=lambda s: _ints(s, 3), required=True, metavar="G12,G13,G23")
    t.add_argument("--cap", type=int, default=None)

    w = sub.add_parser("weyl", parents=[common], help="Step 3 Weyl vector")
    w.add_argument("--triple", type=_triple, required=True)
    w.add_argument("--lambda", dest="lam", type=lambda s: _ints(s, 3), required=True)

    x = sub.add_parser("extend", parents=[common, bounds], help="Step 4 polygon extension")
    x.add_argument("--triple", type=_triple)
    x.add_argument("--lambda", dest="lam", type=lambda s: _ints(s, 3))
    x.add_argument("--seed", help="candidate JSON file")
    x.add_argument("--index", type=int, default=0)

    pl = sub.add_parser("pipeline", parents=[common, bounds], help="all four steps")
    pl.add_argument("--workers", type=int, default=None, help="default: GCM3_THREADS or 1")

    r = sub.add_parser("render", parents=[common], help="Klein-disk SVG of a candidate")
    r.add_argument("candidate", help="candidate JSON (single record, list, or pipeline output)")
    r.add_argument("--index", type=int, default=0)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        cfg = Config(
            cross_bound=getattr(args, "cross_bound", 14),
            lambda_cap=getattr(args, "lambda_cap", 12),
            coeff_bound=getattr(args, "coeff_bound", None),
            max_sides=getattr(args, "max_sides", 20),
            output_format=args.format,
            workers=getattr(args, "workers", None) or default_workers(),
        )
        cfg.validate()
        if args.command == "enumerate":
            return cmd_enumerate(args)
        if args.command == "twists":
            return cmd_twists(args)
        if args.command == "weyl":
            return cmd_weyl(args)
        if args.command == "extend":
            return cmd_extend(args, cfg)
        if args.command == "pipeline":
            return cmd_pipeline(args, cfg)
        return cmd_render(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
