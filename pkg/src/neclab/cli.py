"""Batch front end: compute bounds, run verification suites, print demos.

Output is deterministic for a fixed seed: JSON is emitted with sorted keys and
table output uses fixed formatting, so identical invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import boolfn, constructions, formula, neciporuk, verify
from . import quantum as q
from .errors import CapExceeded, InvalidInput

DEFAULT_SEED = 271828


def _load_function(args) -> tuple[boolfn.BooleanFunction, boolfn.FamilySpec | None]:
    if args.family != "none":
        family_s = args.s if args.family in ("d", "ad") else None
        spec = boolfn.FamilySpec(args.family.upper(), args.n, family_s)
        return boolfn.make_family(spec), spec
    if not args.table:
        raise InvalidInput("--family none requires --table FILE")
    with open(args.table, "r", encoding="ascii") as fh:
        return boolfn.parse_table_text(fh.read()), None


def _partition(args, f, spec):
    if args.partition == "singletons" or spec is None:
        return boolfn.VarPartition.singletons(f.arity)
    return neciporuk.preset_partition(spec)


def _bounds_report(args) -> dict:
    f, spec = _load_function(args)
    p = _partition(args, f, spec)
    if args.method == "standard":
        rep = neciporuk.neciporuk(f, p)
    elif args.method == "vc":
        witnesses = {}
        if spec is not None and spec.name == "ISA" and args.partition == "preset" and spec.n in (4, 16):
            lg = spec.n.bit_length() - 1
            witnesses = {
                b: constructions.isa_shatter_witness(spec.n, b)
                for b in range(spec.n // lg)
            }
        rep = neciporuk.vc_neciporuk(f, p, witnesses)
    elif args.method == "nondet":
        rep = neciporuk.nondet_neciporuk(f, p, args.s if args.s is not None else 1)
    else:
        raise InvalidInput(f"unknown method {args.method}")
    params = {"n": args.n} if spec is not None else {"table": args.table}
    if spec is not None and spec.s is not None:
        params["s"] = spec.s
    return {
        "method": rep.method,
        "family": args.family,
        "params": params,
        "per_block": [
            {"block": sorted(b.block), "value": b.value, "status": b.status}
            for b in rep.per_block
        ],
        "total": rep.total,
        "theorem": rep.theorem_tag,
    }


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_bounds(args) -> int:
    report = _bounds_report(args)
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        lines = [
            f"method:  {report['method']}",
            f"family:  {report['family']}  params: {report['params']}",
            f"theorem: {report['theorem']}",
            "per-block:",
        ]
        for blk in report["per_block"]:
            val = "unavailable" if blk["value"] is None else f"{blk['value']:.6f}"
            lines.append(f"  vars {blk['block']}: {val} [{blk['status']}]")
        lines.append(f"total:   {report['total']:.6f}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def cmd_verify(args) -> int:
    tables = []
    for path in args.table or []:
        with open(path, "r", encoding="ascii") as fh:
            tables.append(boolfn.parse_table_text(fh.read()))
    results = verify.run_suite(args.suite, args.seed, tables, not args.no_builtins)
    failed = sum(1 for r in results if not r.ok)
    if args.format == "json":
        payload = {
            "suite": args.suite,
            "seed": args.seed,
            "checks": [{"name": r.name, "ok": bool(r.ok), "detail": r.detail} for r in results],
            "passed": len(results) - failed,
            "failed": failed,
        }
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        lines = []
        for r in results:
            mark = "ok  " if r.ok else "FAIL"
            detail = f"  ({r.detail})" if r.detail else ""
            lines.append(f"{mark} {r.name}{detail}")
        lines.append(f"{len(results) - failed} passed, {failed} failed (seed {args.seed})")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 1 if failed else 0


def _demo_superdense() -> str:
    lines = ["superdense coding: two classical bits through one qubit of an EPR pair"]
    for b1 in (0, 1):
        for b2 in (0, 1):
            d1, d2 = q.superdense(b1, b2)
            lines.append(f"  send ({b1},{b2}) -> decoded ({d1},{d2})")
    return "\n".join(lines) + "\n"


def _demo_pqg(seed: int) -> str:
    rng = np.random.default_rng(seed)
    u = q.random_unitary(2, rng)
    d = q.random_pure_state(2, rng)
    res = q.pqg_retry(d, u, rng)
    fid = abs(np.vdot(u @ d, res.state)) ** 2
    lines = [f"programmable gate retry (seed {seed})"]
    for i, outcome in enumerate(res.outcomes, 1):
        status = "success" if outcome == "phi+" else f"error {outcome}, corrected next round"
        lines.append(f"  attempt {i}: measured {outcome} -> {status}")
    lines.append(f"  attempts: {res.attempts}, final fidelity to target: {fid:.12f}")
    return "\n".join(lines) + "\n"


def _demo_protocol() -> str:
    f = formula.or_(formula.and_(formula.Input(1), formula.Input(3)), formula.Input(2))
    prot = formula.to_oneway_protocol(f, {3})
    lines = [
        "one-way protocol compiled from (x1 AND x3) OR x2 with Bob holding x3",
        f"  message length: {prot.message_length} bits",
    ]
    for xi in range(8):
        x = boolfn.index_assignment(xi, 3)
        msg = prot.alice_message(x)
        out = prot.bob_output(msg, x)
        lines.append(f"  x={x} message={msg} bob outputs {out} (formula value {formula.eval_det(f, x)})")
    return "\n".join(lines) + "\n"


def cmd_demo(args) -> int:
    if args.kind == "superdense":
        text = _demo_superdense()
    elif args.kind == "pqg-retry":
        text = _demo_pqg(args.seed)
    elif args.kind == "formula-protocol":
        text = _demo_protocol()
    else:
        raise InvalidInput(f"unknown demo {args.kind}")
    _emit(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="neclab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="compute formula-size lower bounds")
    b.add_argument("--family", choices=["ix", "disj", "isa", "mp", "d", "ad", "none"], required=True)
    b.add_argument("--n", type=int, default=4)
    b.add_argument("--s", type=int, default=None, help="family size s, or guess bits for --method nondet")
    b.add_argument("--table", help="truth-table file for --family none")
    b.add_argument("--partition", choices=["preset", "singletons"], default="preset")
    b.add_argument("--method", choices=["standard", "vc", "nondet"], required=True)
    b.add_argument("--seed", type=int, default=DEFAULT_SEED)
    b.add_argument("--format", choices=["table", "json"], default="table")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("verify", help="run a module's invariant suite")
    v.add_argument("suite", choices=list(verify.SUITES))
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--table", action="append", help="extra truth-table file to include (repeatable)")
    v.add_argument("--no-builtins", action="store_true", help="check only supplied tables")
    v.add_argument("--format", choices=["table", "json"], default="table")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("demo", help="print a seeded transcript of one protocol run")
    d.add_argument("kind", choices=["pqg-retry", "superdense", "formula-protocol"])
    d.add_argument("--seed", type=int, default=DEFAULT_SEED)
    d.add_argument("--out")
    d.set_defaults(func=cmd_demo)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (CapExceeded, InvalidInput, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
