"""Command-line front end.

    artifact norm    --group cyclic:2 --symbol "[1,3]" --which bg,dec,cb
    artifact project --group S3 --map random-cp --seed 1
    artifact verify  --suite default --seed 7 --out reports/
    artifact folner  --family heisenberg --radius 4 --generators xy
    artifact group   --group D4

Exit codes: 0 when every requested check passes, 1 when a check fails,
2 on a usage or input error.  Reports are JSON with a schema tag and sorted
keys, so the same arguments and seed give byte-identical files.
"""
import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .amenability import RegionError, inner_folner_ratio
from .balls import BallError, enumerate_ball, family
from .groups import GroupError, center, construct_group, subgroups
from .norms import NormError, map_norm_report, symbol_norm_report
from .projections import fourier_projection_report, herz_schur_projection_report
from .schur import fourier_multiplier
from .superop import conjugation_map, identity_map, random_cp_map, random_superoperator, transpose_map
from .symbols import SymbolError, bisymbol_from_json, symbol_from_json
from .verification import (REGISTRY, SUITES, _jsonable, make_suite, random_symbol, run_suite, suite_report,
                           summary_csv)
from .vn import left_regular

SCHEMA = "artifact.report/1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("artifact")


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _read_arg(text):
    """Inline text, or the contents of a file when prefixed with @."""
    if text.startswith("@"):
        path = Path(text[1:])
        if not path.is_file():
            raise UsageError(f"no such file: {path}")
        return path.read_text()
    return text


def _dump(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _write(out, name, text):
    if out is None:
        return
    d = Path(out)
    d.mkdir(parents=True, exist_ok=True)
    (d / name).write_text(text)


def _split(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _complex_list(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v).reshape(-1)]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_norm(args):
    which = _split(args.which)
    bad = [w for w in which if w not in ("bg", "dec", "cb")]
    if bad or not which:
        raise UsageError(f"--which takes a subset of bg,dec,cb; got {args.which!r}")
    G = construct_group(args.group)
    if (args.symbol is None) == (args.map is None):
        raise UsageError("give exactly one of --symbol and --map")
    if args.symbol is not None:
        phi = symbol_from_json(_read_arg(args.symbol), G)
        rep = symbol_norm_report(phi, which, subject="fourier-multiplier")
        subject = {"kind": "symbol", "values": _complex_list(phi.values)}
    else:
        if "bg" in which:
            raise UsageError("bg needs a symbol, not a map")
        T = _make_map(args.map, G, np.random.default_rng(args.seed))
        rep = map_norm_report(T, which, subject=args.map)
        subject = {"kind": "map", "map": args.map, "seed": args.seed}
    body = rep.to_dict()
    passed = body["max_discrepancy"] <= args.tol * max(1.0, max(v for v in (rep.cb, rep.dec, rep.bg) if v is not None))
    report = {"schema": SCHEMA, "command": "norm", "group": G.name, "subject": subject,
              "which": which, "tol": args.tol, "passed": passed, **{k: body[k] for k in which},
              "oracle_values": body["oracle_values"], "max_discrepancy": body["max_discrepancy"],
              "solver_stats": body["solver_stats"]}
    text = _dump(report)
    _write(args.out, "report.json", text)
    sys.stdout.write(text)
    return EXIT_OK if passed else EXIT_FAIL


def _make_map(spec, G, rng):
    n = G.order
    if spec == "identity":
        return identity_map(n)
    if spec == "transpose":
        return transpose_map(n)
    if spec == "random":
        return random_superoperator(n, rng)
    if spec == "random-cp":
        return random_cp_map(n, rng)
    if spec == "fourier":
        return fourier_multiplier(random_symbol(G, rng))
    if spec.startswith("ad:"):
        g = G.check_index(int(spec[3:]))
        return conjugation_map(left_regular(G, g).astype(complex))
    raise UsageError(f"unknown map {spec!r}; use identity, transpose, random, random-cp, fourier or ad:<g>")


def cmd_project(args):
    G = construct_group(args.group)
    if (args.map is None) == (args.bisymbol is None):
        raise UsageError("give exactly one of --map and --bisymbol")
    if args.map is not None:
        T = _make_map(args.map, G, np.random.default_rng(args.seed))
        rep = fourier_projection_report(T, G, subject=args.map)
        kind = "fourier"
    else:
        psi = bisymbol_from_json(_read_arg(args.bisymbol), G)
        rep = herz_schur_projection_report(psi, subject="bisymbol")
        kind = "herz-schur"
    body = rep.to_dict()
    contractive = rep.cb_after <= rep.cb_before + args.tol
    passed = contractive and rep.cp_preserved
    report = {"schema": SCHEMA, "command": "project", "projection": kind, "group": G.name,
              "seed": args.seed, "tol": args.tol, "contractive": contractive, "passed": passed, **body}
    text = _dump(report)
    _write(args.out, "report.json", text)
    sys.stdout.write(text)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_verify(args):
    theorems = _split(args.theorems) if args.theorems else None
    groups = _split(args.groups) if args.groups else None
    for g in groups or []:
        construct_group(g)
    try:
        suite = make_suite(args.suite, seed=args.seed, theorems=theorems, groups=groups, tol=args.tol)
    except ValueError as err:
        raise UsageError(str(err)) from None
    rows = run_suite(suite, jobs=args.jobs)
    report = suite_report(suite, rows)
    csv_text = summary_csv(rows)
    _write(args.out, "report.json", _dump(report))
    _write(args.out, "summary.csv", csv_text)
    sys.stdout.write(csv_text)
    fails = [r for r in rows if not r.passed]
    if fails:
        sys.stdout.write(f"\n{len(fails)} failing check(s):\n")
        sys.stdout.write(f"{'theorem':<18} {'group':<14} {'case':<22} {'discrepancy':>12} {'tol':>9}  anchor\n")
        for r in fails:
            sys.stdout.write(f"{r.theorem:<18} {r.group:<14} {r.case:<22} {r.discrepancy:>12.3e} "
                             f"{r.tolerance:>9.1e}  {r.anchor}\n")
        return EXIT_FAIL
    sys.stdout.write(f"\nall {len(rows)} checks passed\n")
    return EXIT_OK


def cmd_folner(args):
    fam = family(args.family)
    names = list(args.generators) if args.generators else list(fam.generator_names)
    unknown = [g for g in names if g not in fam.generator_names]
    if unknown:
        raise UsageError(f"unknown generator(s) {unknown}; {fam.group_id} has {''.join(fam.generator_names)}")
    if args.radius < 1:
        raise UsageError("--radius must be at least 1")
    # conjugating by a generator adds at most 2 to the word length
    B = enumerate_ball(fam.group_id, args.radius + 2)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["radius", "generator", "ball_size", "ratio"])
    for r in range(1, args.radius + 1):
        V = B.sub_ball(r)
        for name in names:
            ratio = inner_folner_ratio(V, fam.generator_names[name], B)
            w.writerow([r, name, len(V), repr(float(ratio))])
    text = buf.getvalue()
    _write(args.out, "folner.csv", text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_group(args):
    G = construct_group(args.group)
    subs = subgroups(G)
    report = {"schema": SCHEMA, "command": "group", "name": G.name, "order": G.order,
              "abelian": G.is_abelian(), "center": sorted(center(G)),
              "element_orders": [G.element_order(s) for s in range(G.order)],
              "labels": list(G.labels), "subgroup_orders": sorted(len(K) for K in subs),
              "subgroup_count": len(subs)}
    text = _dump(report)
    _write(args.out, "report.json", text)
    sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="artifact", description=__doc__.split("\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    n = sub.add_parser("norm", help="cb, dec and B(G) norms of a symbol or a map")
    n.add_argument("--group", required=True)
    n.add_argument("--symbol", help="JSON list of values, or @file")
    n.add_argument("--map", help="identity, transpose, random, random-cp, fourier or ad:<g>")
    n.add_argument("--which", default="bg,dec,cb")
    n.add_argument("--seed", type=int, default=0)
    n.add_argument("--tol", type=float, default=1e-4)
    n.add_argument("--out")
    n.set_defaults(func=cmd_norm)

    pr = sub.add_parser("project", help="Fourier or Herz-Schur projection with a contractivity check")
    pr.add_argument("--group", required=True)
    pr.add_argument("--map")
    pr.add_argument("--bisymbol", help="JSON |G| x |G| array, or @file")
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--tol", type=float, default=1e-4)
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_project)

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("--suite", default="default", choices=sorted(SUITES))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--tol", type=float, default=1e-4)
    v.add_argument("--theorems", help="comma list from: " + ", ".join(REGISTRY))
    v.add_argument("--groups", help="comma list of group descriptors, overrides the suite's")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("folner", help="inner-Folner ratios of balls, as CSV")
    f.add_argument("--family", default="heisenberg")
    f.add_argument("--radius", type=int, required=True)
    f.add_argument("--generators", help="generator names, e.g. xy")
    f.add_argument("--out")
    f.set_defaults(func=cmd_folner)

    g = sub.add_parser("group", help="describe a finite group")
    g.add_argument("--group", required=True)
    g.add_argument("--out")
    g.set_defaults(func=cmd_group)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if getattr(args, "jobs", 1) < 1:
        sys.stderr.write("error: --jobs must be positive\n")
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, GroupError, SymbolError, BallError, RegionError, json.JSONDecodeError) as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_USAGE
    except NormError as err:
        sys.stderr.write(f"solver failure: {err}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
