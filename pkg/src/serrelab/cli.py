"""Batch front door: load or generate lattices, run the check suites, emit
machine-readable reports.

The JSON report goes to stdout (byte-identical across runs on identical
input); human-oriented progress and timing go to stderr.  Exit codes:
0 success, 1 malformed input, 2 verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time

from . import geom as geom_mod
from . import typea as ta
from .coxeter import combinatorial_serre_check, cross_check
from .derived import serre_orbit
from .errors import Disagreement, MaxStepsExceeded, SerrelabError
from .fields import parse_field
from .lattice import (
    Lattice,
    boolean_lattice,
    chain_product,
    lattice_to_json_dict,
    load_lattice,
    product,
)

SCHEMA_VERSION = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # malformed input is exit code 1, not argparse's 2
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _generator_lattice(spec) -> Lattice:
    kind, args = spec[0], spec[1:]
    if kind == "tamari":
        return ta.gen_tamari(int(args[0]))
    if kind == "typeI":
        return ta.gen_type_i(int(args[0]))
    if kind == "boolean":
        return boolean_lattice(int(args[0]))
    if kind == "chainprod":
        return chain_product([int(a) for a in args])
    if kind == "product":
        return product(load_lattice(args[0]), load_lattice(args[1]))
    raise ValueError(f"unknown generator {kind!r}")


def _resolve_input(path, gen):
    if (path is None) == (gen is None):
        raise ValueError("give exactly one of a lattice file or --gen")
    if path is not None:
        lat = load_lattice(path)
        detail = str(path)
        kind = "file"
    else:
        lat = _generator_lattice(gen)
        detail = " ".join(str(g) for g in gen)
        kind = "generator"
    blob = json.dumps(lattice_to_json_dict(lat), sort_keys=True).encode()
    fp = hashlib.sha256(blob).hexdigest()
    return lat, {"kind": kind, "detail": detail, "fingerprint": fp}


def _emit(report, json_path):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _fcy_pair(orbits):
    """(total_shift, power) uniform over all injective orbits, or None."""
    periods = [o.period for o in orbits]
    if any(p is None for p in periods):
        return None
    power = math.lcm(*periods)
    totals = {o.total_shift * (power // o.period) for o in orbits}
    if len(totals) != 1:
        return None
    return [totals.pop(), power]


def _derived_orbits(lat, starts, field, max_steps):
    orbits = []
    failures = []
    for a in starts:
        try:
            o = serre_orbit(lat, a, max_steps=max_steps, field=field)
        except MaxStepsExceeded:
            failures.append({"start": str(a), "reason": "max-steps"})
            continue
        orbits.append(o)
        if o.failure is not None:
            failures.append({"start": str(a), "reason": "non-stalk"})
    return orbits, failures


def cmd_check(args):
    lat, input_info = _resolve_input(args.lattice, args.gen)
    field = parse_field(args.field)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "check",
        "input": input_info,
        "checks": [],
    }
    rep = combinatorial_serre_check(lat, max_steps=args.max_steps)
    report["checks"].append(
        {
            "name": "combinatorial-serre-formal",
            "ok": rep.is_serre_formal,
            "report": rep.to_json_dict(),
        }
    )
    ok = rep.is_serre_formal
    if args.derived:
        orbits, failures = _derived_orbits(lat, lat.labels, field, args.max_steps)
        complete = [o for o in orbits if o.failure is None]
        pair = _fcy_pair(complete) if len(complete) == lat.n else None
        derived_ok = not failures and len(complete) == lat.n
        report["checks"].append(
            {
                "name": "derived-serre-orbits",
                "ok": derived_ok,
                "orbits": [o.to_json_dict() for o in orbits],
                "failures": failures,
                "fcy_pair": pair,
            }
        )
        ok = ok and derived_ok
    report["ok"] = ok
    _emit(report, args.json)
    return 0 if ok else 2


def cmd_orbit(args):
    lat, input_info = _resolve_input(args.lattice, args.gen)
    field = parse_field(args.field)
    starts = [args.start] if args.start is not None else list(lat.labels)
    for s in starts:
        if s not in lat.index:
            raise ValueError(f"unknown element {s!r}")
    orbits, failures = _derived_orbits(lat, starts, field, args.max_steps)
    ok = not failures
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "orbit",
        "input": input_info,
        "orbits": [o.to_json_dict() for o in orbits],
        "failures": failures,
        "ok": ok,
    }
    _emit(report, args.json)
    return 0 if ok else 2


def cmd_gen(args):
    lat = _generator_lattice(args.gen)
    report = lattice_to_json_dict(lat)
    _emit(report, args.json)
    return 0


def cmd_typea(args):
    if args.all_orientations:
        orientations = ta.all_orientations(args.n)
    else:
        if args.orientation is None and args.n > 1:
            raise ValueError("give --orientation or --all-orientations")
        orientations = [args.orientation or ""]
    runs = []
    ok = True
    for o in orientations:
        suite = run_typea_suite(ta.QuiverA(args.n, o), categorical=not args.fast)
        runs.append(suite)
        ok = ok and suite["ok"]
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "typea",
        "input": {"kind": "quiver", "detail": f"n={args.n}", "fingerprint": ""},
        "runs": runs,
        "ok": ok,
    }
    _emit(report, args.json)
    return 0 if ok else 2


def run_typea_suite(q: ta.QuiverA, categorical=True) -> dict:
    """Counts, Serre-permutation statistics, mutation and rotation checks,
    cluster bijection, and the categorical integration."""
    from .lattice import IntervalRef
    from .reps import interval_module
    from .derived import StalkResult, serre
    from .typea import _engine

    eng = _engine(q)
    out = {"orientation": q.orientation, "n": q.n, "checks": {}}
    lat, _ = eng.tors_lattice()
    out["tors_lattice"] = lattice_to_json_dict(lat)
    ivs = ta.mutable_intervals(q)
    triples = ta.cluster_triples(q)
    expected = ta.fuss_catalan_count(q.n)
    out["checks"]["counts"] = {
        "torsion_classes": len(eng.tors_masks),
        "wide_subcats": len(eng.wide_subcats()),
        "mutable_intervals": len(ivs),
        "cluster_triples": len(triples),
        "expected_two_catalan": expected,
        "ok": len(ivs) == len(triples) == expected,
    }
    try:
        stats = ta.serre_orbit_stats(q)
        out["checks"]["serre_periods"] = {"ok": True, **stats}
    except SerrelabError as exc:
        out["checks"]["serre_periods"] = {"ok": False, "error": str(exc)}
    muts = ta.interval_mutations(q)
    out["checks"]["interval_mutations"] = {
        "count": len(muts),
        "expected_three_to_n": q.n * len(ivs),
        "ok": 3 * len(muts) == q.n * len(ivs),
    }
    try:
        ta.rotation_check(q)
        out["checks"]["rotation"] = {"ok": True, "triples": len(muts)}
    except SerrelabError as exc:
        out["checks"]["rotation"] = {"ok": False, "error": str(exc)}
    images = {ta.interval_of(q, t).key for t in triples}
    roundtrip = all(
        ta.interval_of(q, ta.ClusterTriple(iv.t_free, iv.t_tors, iv.t_supp)).key == iv.key
        for iv in ivs
    )
    out["checks"]["cluster_bijection"] = {
        "ok": images == {iv.key for iv in ivs} and roundtrip,
        "roundtrip": roundtrip,
    }
    out["mutable_intervals"] = [
        {
            "lo": eng.mask_label(iv.lo),
            "hi": eng.mask_label(iv.hi),
            "delta_ranks": list(iv.delta_ranks),
            "k": iv.k,
        }
        for iv in ivs
    ]
    out["serre_permutation_cycles"] = _interval_cycles(eng, ivs)
    if categorical:
        bad = []
        for iv in ivs:
            M = interval_module(lat, IntervalRef(eng.mask_label(iv.lo), eng.mask_label(iv.hi)))
            res = serre(M)
            s = eng.serre_perm(iv)
            want = IntervalRef(eng.mask_label(s.lo), eng.mask_label(s.hi))
            good = (
                isinstance(res, StalkResult)
                and res.interval == want
                and res.shift == iv.k
            )
            if not good:
                bad.append(eng.mask_label(iv.lo) + "<=" + eng.mask_label(iv.hi))
        out["checks"]["categorical_serre"] = {"ok": not bad, "failures": bad, "total": len(ivs)}
    out["ok"] = all(c.get("ok", False) for c in out["checks"].values())
    return out


def _interval_cycles(eng, ivs):
    succ = {iv.key: eng.serre_perm(iv).key for iv in ivs}
    seen = set()
    cycles = []
    for iv in ivs:
        if iv.key in seen:
            continue
        cyc = []
        k = iv.key
        while k not in seen:
            seen.add(k)
            cyc.append(f"{eng.mask_label(k[0])}<={eng.mask_label(k[1])}")
            k = succ[k]
        cycles.append(cyc)
    return cycles


def cmd_geom(args):
    n = args.n
    trees = geom_mod.enumerate_trees(n)
    quads = geom_mod.enumerate_quads(n)
    expected = geom_mod.fuss_catalan_geom(n)
    counts_ok = len(trees) == len(quads) == expected
    equivariant = all(
        geom_mod.stokes(geom_mod.rotate_quad(q)) == geom_mod.planar_dual(geom_mod.stokes(q))
        for q in quads
    )
    injective = len({geom_mod.stokes(q) for q in quads}) == len(quads)
    checks = {
        "counts": {"trees": len(trees), "quads": len(quads), "expected": expected, "ok": counts_ok},
        "stokes_bijection": {"ok": injective},
        "equivariance": {"ok": equivariant},
    }
    if n <= 4:
        rot_cycles = _rotation_cycle_lengths(quads)
        q = ta.linear_quiver(n)
        serre_cycles = ta.serre_orbit_stats(q)["cycle_lengths"]
        checks["cycle_multiset_vs_typea"] = {
            "rotation": rot_cycles,
            "serre": serre_cycles,
            "ok": rot_cycles == serre_cycles,
        }
    ok = all(c["ok"] for c in checks.values())
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "geom",
        "input": {"kind": "generator", "detail": f"geom n={n}", "fingerprint": ""},
        "checks": checks,
        "ok": ok,
    }
    if n <= 3:  # full object listings stay readable at this size
        report["trees"] = [t.sorted_edges() for t in trees]
        report["quadrangulations"] = [q.sorted_diagonals() for q in quads]
    _emit(report, args.json)
    return 0 if ok else 2


def _rotation_cycle_lengths(quads):
    seen = set()
    lengths = []
    for q in quads:
        if q in seen:
            continue
        k = 0
        cur = q
        while True:
            cur = geom_mod.rotate_quad(cur)
            k += 1
            seen.add(cur)
            if cur == q:
                break
        lengths.append(k)
    return sorted(lengths)


def cmd_crosscheck(args):
    lat, input_info = _resolve_input(args.lattice, args.gen)
    try:
        cc = cross_check(lat, max_steps=args.max_steps, field=parse_field(args.field))
        ok = cc.ok
        payload = cc.to_json_dict()
    except Disagreement as exc:
        ok = False
        payload = {"agree": False, "disagreement": str(exc)}
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "crosscheck",
        "input": input_info,
        "result": payload,
        "ok": ok,
    }
    _emit(report, args.json)
    return 0 if ok else 2


def _add_lattice_source(p):
    p.add_argument("lattice", nargs="?", default=None, help="lattice JSON file")
    p.add_argument("--gen", nargs="+", default=None, metavar="SPEC",
                   help="generator: tamari N | typeI M | boolean K | chainprod A B | product F1 F2")


def build_parser():
    parser = _Parser(prog="serrelab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="combinatorial (and optionally derived) Serre-formality check")
    _add_lattice_source(p)
    p.add_argument("--derived", action="store_true", help="also run derived Serre orbits per injective")
    p.add_argument("--field", default="rational", help="rational | fp:P")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--json", default=None, help="also write the report to this file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("orbit", help="derived Serre orbit of one or all injectives")
    _add_lattice_source(p)
    p.add_argument("--start", default=None, help="element label (default: all)")
    p.add_argument("--field", default="rational")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("gen", help="emit a generated lattice as JSON")
    p.add_argument("--gen", nargs="+", required=True, metavar="SPEC")
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("typea", help="full type-A suite for one or all orientations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--orientation", default=None)
    p.add_argument("--all-orientations", action="store_true")
    p.add_argument("--fast", action="store_true", help="skip the categorical integration")
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_typea)

    p = sub.add_parser("geom", help="polygon model: counts, Stokes bijection, equivariance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_geom)

    p = sub.add_parser("crosscheck", help="Coxeter-matrix check against the derived machinery")
    _add_lattice_source(p)
    p.add_argument("--field", default="rational")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_crosscheck)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.monotonic()
    try:
        code = args.func(args)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SerrelabError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 2
    finally:
        print(f"elapsed: {time.monotonic() - t0:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
