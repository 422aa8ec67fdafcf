"""Command-line front end.

    python3 -m lozimax simulate --map lozi3 --a 1/2 --b 1/2 --x0 0 --x1 0 --steps 8 --mode exact
    python3 -m lozimax conjugate --alpha 1.5 --beta 0.5 --gamma -1 --delta 0
    python3 -m lozimax analyze --a 0.75 --b 0.75
    python3 -m lozimax verify-region --levels 3 --max-steps 64 --eta 1/1048576
    python3 -m lozimax attractor --a 1.7 --b 0.3 --x0 0 --x1 0 --out cloud.csv
    python3 -m lozimax reproduce all

JSON goes to stdout (sorted keys, ``"schema": "1"``).  Errors go to stderr as
a JSON record and the exit status is nonzero.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction
from numbers import Rational

import numpy as np

from . import analysis as an
from .attractor import (box_count, misiurewicz_check, sample_attractor,
                        trapping_triangle, verify_trapping)
from .conjugation import (ChangeOfVariables, classify_family, conjugate_family,
                          derive_max_params, recover_generalized)
from .experiments import PRESETS, run_preset
from .maps import (DEFAULT_GUARD, Formulation, GeneralizedLoziParams, LoziParams,
                   MaxEqParams, format_number, iterate, orbit_to_csv, points_to_csv)
from .region import (HALF, verify_global_attraction_a_half,
                     advance_until_contained)

SCHEMA = "1"
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_MAPS = {"lozi1": Formulation.SYS1, "lozi2": Formulation.SYS2, "lozi3": Formulation.SYS3}


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def parse_value(text: str, mode: str):
    """Exact mode takes integers and ``num/den``; float mode takes decimals."""
    text = text.strip()
    if mode == "exact":
        if not _RATIONAL.match(text):
            raise CliError(f"exact mode needs an integer or num/den, got {text!r}")
        return Fraction(text)
    if "/" in text:
        raise CliError(f"num/den value {text!r} needs --mode exact")
    try:
        return float(text)
    except ValueError:
        raise CliError(f"not a number: {text!r}") from None


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Rational):
        return format_number(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    return str(obj)


def emit(record: dict, out=None):
    record = {"schema": SCHEMA, **record}
    text = json.dumps(to_jsonable(record), sort_keys=True, indent=2) + "\n"
    (out or sys.stdout).write(text)


def _write(path, text):
    with open(path, "w", newline="") as fh:
        fh.write(text)


# -- map descriptors from flags ----------------------------------------------------

def _add_map_flags(p, with_map=True):
    if with_map:
        p.add_argument("--map", choices=["lozi1", "lozi2", "lozi3", "genlozi", "maxeq"])
    for name in ("a", "b", "alpha", "beta", "gamma", "delta", "k", "l", "m", "M", "c"):
        p.add_argument(f"--{name}", dest=f"p_{name}")
    p.add_argument("--mode", choices=["float", "exact"], default="float")


def _params(args, names):
    vals = {}
    for n in names:
        raw = getattr(args, f"p_{n}")
        if raw is None:
            raise CliError(f"missing --{n}")
        vals[n] = parse_value(raw, args.mode)
    return vals


def _infer_map(args, default_lozi="lozi3"):
    if getattr(args, "map", None):
        return args.map
    if args.p_alpha is not None:
        return "genlozi"
    if args.p_k is not None:
        return "maxeq"
    if args.p_a is not None:
        return default_lozi
    raise CliError("give --a/--b, --alpha..--delta or --k..--M")


def build_descriptor(args, default_lozi="lozi3"):
    kind = _infer_map(args, default_lozi)
    if kind in _MAPS:
        v = _params(args, ["a", "b"])
        return kind, LoziParams(v["a"], v["b"])
    if kind == "genlozi":
        v = _params(args, ["alpha", "beta", "gamma", "delta"])
        return kind, GeneralizedLoziParams(v["alpha"], v["beta"], v["gamma"], v["delta"])
    v = _params(args, ["k", "l", "m", "M"])
    c = parse_value(args.p_c, args.mode) if args.p_c is not None else 1
    return kind, MaxEqParams(v["k"], v["l"], v["m"], v["M"], c)


def _stepper(kind, desc):
    return (desc, _MAPS[kind]) if kind in _MAPS else desc


def _initial(args):
    if args.x0 is None or args.x1 is None:
        raise CliError("missing --x0/--x1")
    return parse_value(args.x0, args.mode), parse_value(args.x1, args.mode)


# -- subcommands -------------------------------------------------------------------

def cmd_simulate(args):
    kind, desc = build_descriptor(args)
    orbit = iterate(_stepper(kind, desc), _initial(args), args.steps,
                    exact=args.mode == "exact", guard=args.guard)
    if args.format == "json":
        emit({"command": "simulate", "map": kind, "termination": str(orbit.termination),
              "points": [list(p) for p in orbit.points]})
    else:
        text = orbit_to_csv(orbit)
        if args.out:
            _write(args.out, text)
        else:
            sys.stdout.write(text)
    return 0


def cmd_conjugate(args):
    if args.p_k is not None:
        kind, mp = build_descriptor(args)
        gl, cov = recover_generalized(mp, float(args.A) if args.A else 2.0)
        emit({"command": "conjugate", "direction": "max-to-lozi",
              "alpha": gl.alpha, "beta": gl.beta, "gamma": gl.gamma, "delta": gl.delta,
              "case": classify_family(gl).value, "cov": {"A": cov.A, "p": cov.p, "q": cov.q}})
        return 0
    args.map = "genlozi"
    _, gl = build_descriptor(args)
    if args.p is None and args.q is None:
        case, cov, mp = conjugate_family(gl, float(args.A) if args.A else 2.0)
    else:
        cov = ChangeOfVariables(float(args.A) if args.A else 2.0,
                                float(args.p) if args.p else 0.0,
                                float(args.q) if args.q else 1.0)
        case, mp = classify_family(gl), derive_max_params(gl, cov)
    emit({"command": "conjugate", "direction": "lozi-to-max",
          "k": mp.k, "l": mp.l, "m": mp.m, "M": mp.M, "c": mp.c,
          "case": case.value, "cov": {"A": cov.A, "p": cov.p, "q": cov.q}})
    return 0


def _eq_record(eq):
    if isinstance(eq, an.HalfLine):
        return {"type": "HalfLine", "endpoint": eq.endpoint, "direction": eq.direction,
                "extra": list(eq.extra)}
    return {"type": "Finite", "points": list(eq.points)}


def cmd_analyze(args):
    kind, desc = build_descriptor(args)
    record = {"command": "analyze", "map": kind}
    if kind in _MAPS:
        if kind != "lozi3":
            raise CliError("analyze works on the lozi3 formulation")
        eq = an.equilibria(desc) if desc.a == desc.b else an.equilibria(desc.as_generalized())
    else:
        eq = an.equilibria(desc)
    record["equilibria"] = _eq_record(eq)
    cycles = []
    if kind in _MAPS and isinstance(eq, an.Finite):
        cands = [an.Cycle(1, (an.Point(x, x),)) for x in eq.points]
        if desc.a == desc.b:
            cands += an.two_cycles_lozi_ab(desc.a)
        for cyc in cands:
            entry = {"period": cyc.period, "points": [list(p) for p in cyc.points]}
            try:
                rep = an.cycle_stability(desc, cyc)
                entry.update(eigenvalues=list(rep.eigenvalues),
                             classification=rep.classification.value)
            except an.NonSmooth as exc:
                entry.update(eigenvalues=None, classification=None, note=str(exc))
            cycles.append(entry)
        if desc.a == desc.b == HALF or (desc.a == desc.b == 0.5):
            record["two_cycle_continuum"] = "states (v, 2 - v), 0 <= v <= 2"
    record["cycles"] = cycles
    if args.x0 is not None:
        cyc = an.detect_asymptotic_cycle(_stepper(kind, desc), _initial(args),
                                         args.burn, args.window, args.eps)
        record["asymptotic_cycle"] = None if cyc is None else {
            "period": cyc.period, "points": [list(p) for p in cyc.points]}
    emit(record)
    return 0


def cmd_verify_region(args):
    a = parse_value(args.a, "exact")
    eta = parse_value(args.eta, "exact")
    reports = verify_global_attraction_a_half(args.levels, args.max_steps, eta, a=a,
                                              seed=args.seed, workers=args.workers)
    if args.trace:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "step", "vertices"])
        for r in reports:
            _trace_check(a, r, args, w)
        _write(args.trace, buf.getvalue())
    emit({"command": "verify-region", "a": a, "levels": args.levels,
          "max_steps": args.max_steps, "eta": eta,
          "all_certified": all(r.certified for r in reports),
          "reports": [r.to_dict() for r in reports]})
    return 0


def _trace_check(a, report, args, writer):
    # re-run the advance checks with a trace hook; one-step checks get their image
    from .polygon import ConvexPolygon
    from .region import Square, level_region, segment_s0, segment_s2
    label = report.lemma
    m = re.match(r"^(S\(1,0\)|S\(1,2\)|C\((-?\d+),(-?\d+)\)) -> (C\(0,0\)|R(\d+))$", label)
    if not m:
        return
    if m.group(1) == "S(1,0)":
        start = segment_s0()
    elif m.group(1) == "S(1,2)":
        start = segment_s2()
    else:
        start = ConvexPolygon.square(int(m.group(2)), int(m.group(3)))
    target = Square(0, 0) if m.group(4) == "C(0,0)" else level_region(int(m.group(5)))

    def hook(step, piece):
        verts = " ".join(f"({format_number(x)} {format_number(y)})" for x, y in piece.vertices)
        writer.writerow([label, step, verts])

    advance_until_contained(a, start, target, args.max_steps, parse_value(args.eta, "exact"),
                            trace=hook)


def cmd_attractor(args):
    kind, desc = build_descriptor(args, default_lozi="lozi1")
    record = {"command": "attractor", "map": kind}
    if kind in _MAPS:
        record["misiurewicz"] = misiurewicz_check(desc.a, desc.b).to_dict()
        try:
            tri = trapping_triangle(desc.a, desc.b)
            ok, worst = verify_trapping(tri, desc, args.density)
            record["trapping_triangle"] = tri.to_dict()
            record["trapping"] = {"ok": ok, "max_violation": worst, "density": args.density}
        except ValueError as exc:
            record["trapping_triangle"] = None
            record["trapping"] = {"error": str(exc)}
    cloud = sample_attractor(_stepper(kind, desc), _initial(args), args.burn, args.samples,
                             args.guard, exact=args.mode == "exact")
    record["cloud"] = {"bounded": cloud.bounded, "burn": args.burn, "samples": len(cloud),
                       "final_state": list(cloud.final_state)}
    if len(cloud):
        record["cloud"]["box_counts"] = {str(g): box_count(cloud, g) for g in args.grid}
    if args.out:
        _write(args.out, points_to_csv(cloud.points))
    emit(record)
    return 0


def cmd_reproduce(args):
    if args.preset == "list":
        emit({"command": "reproduce", "presets": {n: p.claim for n, p in sorted(PRESETS.items())}})
        return 0
    names = sorted(PRESETS) if args.preset == "all" else [args.preset]
    results = [run_preset(n, args.seed) for n in names]
    if args.preset != "all":
        emit({"command": "reproduce", "seed": args.seed, **results[0]})
        return 0 if results[0]["pass"] else 1
    emit({"command": "reproduce", "seed": args.seed, "results": results,
          "passed": sum(r["pass"] for r in results), "total": len(results)})
    if args.table:
        rows = [["claim id", "expected", "observed", "pass/fail"]]
        rows += [[r["preset"], json.dumps(to_jsonable(r["expected"])),
                  json.dumps(to_jsonable(r["observed"])), "pass" if r["pass"] else "fail"]
                 for r in results]
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        _write(args.table, buf.getvalue())
    return 0 if all(r["pass"] for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lozimax", description="Lozi maps and max-type equations")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized sweeps (numpy PCG64)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="iterate a map and write the orbit as CSV")
    _add_map_flags(p)
    p.add_argument("--x0")
    p.add_argument("--x1")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--guard", type=float, default=DEFAULT_GUARD)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("conjugate", help="generalized Lozi <-> max-equation parameters")
    _add_map_flags(p, with_map=False)
    p.add_argument("--A")
    p.add_argument("--p")
    p.add_argument("--q")
    p.set_defaults(func=cmd_conjugate, map=None)

    p = sub.add_parser("analyze", help="equilibria, cycles and their stability")
    _add_map_flags(p)
    p.add_argument("--x0")
    p.add_argument("--x1")
    p.add_argument("--burn", type=int, default=1000)
    p.add_argument("--window", type=int, default=64)
    p.add_argument("--eps", type=float, default=1e-8)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify-region", help="exact invariant-region certificate")
    p.add_argument("--a", default="1/2", help="1/2 (full suite) or -1/2 (descent checks)")
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--max-steps", type=int, default=64)
    p.add_argument("--eta", default="1/1048576")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--trace", help="CSV file receiving every live piece per step")
    p.set_defaults(func=cmd_verify_region)

    p = sub.add_parser("attractor", help="parameter checks, trapping triangle, point cloud")
    _add_map_flags(p)
    p.add_argument("--x0", default="0")
    p.add_argument("--x1", default="0")
    p.add_argument("--burn", type=int, default=1000)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--guard", type=float, default=DEFAULT_GUARD)
    p.add_argument("--density", type=int, default=100)
    p.add_argument("--grid", type=float, nargs="*", default=[0.1, 0.01])
    p.add_argument("--out", help="CSV file for the cloud")
    p.set_defaults(func=cmd_attractor)

    p = sub.add_parser("reproduce", help="run a named reproduction preset")
    p.add_argument("preset", help="preset name, 'all' or 'list'")
    p.add_argument("--table", help="CSV summary table for 'all'")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "reproduce" and args.preset not in PRESETS | {"all": 0, "list": 0}:
            raise CliError(f"unknown preset {args.preset!r}")
        return args.func(args)
    except (CliError, ValueError, TypeError, KeyError, ZeroDivisionError,
            OverflowError, an.Diverged) as exc:
        record = {"schema": SCHEMA, "error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
