"""Command line surface.

Every subcommand writes its data payload to stdout and keeps progress and
timing on stderr, so identical invocations produce byte-identical stdout.
Exit codes: 0 success, 2 usage or domain error, 3 internal inconsistency
(an oracle/filter disagreement, which must never occur).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

from .classify import classify
from .cycles import find_cycles
from .errors import DomainError, InconsistencyError
from .modmath import factorize, order_of_4, simplicity_index, _prime_order
from .numerics import DEFAULT_DEPTH, SpectrumTruncation, gram_matrix, mu_hat
from .sieve import (
    SieveReport,
    infinitude_witness,
    prime_order_table,
    scan_conjectures,
    sieve_primitives,
)


def _tuple_text(values) -> str:
    return "(" + ", ".join(str(v) for v in values) + ")"


def _emit_json(command: str, inputs: dict, result) -> None:
    envelope = {"command": command, "input": inputs, "result": result}
    sys.stdout.write(json.dumps(envelope, sort_keys=True) + "\n")


def _write_rows(rows, path: str | None) -> None:
    if path is None:
        writer = csv.writer(sys.stdout, quoting=csv.QUOTE_MINIMAL,
                            lineterminator="\n")
        writer.writerows(rows)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writerows(rows)


def _sieve_rows(report: SieveReport) -> list[list[str]]:
    rows = []
    for rec in report.primitives:
        primes = rec.factors.primes
        if len(primes) == 1 and rec.factors.exponents[0] == 1:
            rows.append([str(rec.modulus)])
        else:
            rows.append([
                str(rec.modulus),
                ",".join(str(p) for p in primes),
                ",".join(str(o) for o in rec.prime_orders),
            ])
    return rows


def _cmd_classify(args) -> int:
    verdict = classify(args.m)
    if args.json:
        witness = None
        if verdict.witness is not None:
            witness = {
                "points": list(verdict.witness.points),
                "digits": list(verdict.witness.digits),
            }
        _emit_json("classify", {"m": args.m}, {
            "m": verdict.modulus,
            "complete": verdict.complete,
            "primitive": verdict.primitive,
            "decided_by": verdict.decided_by,
            "witness": witness,
        })
        return 0
    if verdict.complete:
        sys.stdout.write(f"{args.m}: COMPLETE, rule={verdict.decided_by}\n")
    else:
        kind = "primitive" if verdict.primitive else "not primitive"
        sys.stdout.write(
            f"{args.m}: INCOMPLETE ({kind}), witness cycle "
            f"{_tuple_text(verdict.witness.points)} digits "
            f"{_tuple_text(verdict.witness.digits)}, "
            f"rule={verdict.decided_by}\n"
        )
    return 0


def _cmd_cycles(args) -> int:
    inventory = find_cycles(args.m)
    if args.json:
        _emit_json("cycles", {"m": args.m}, {
            "m": inventory.modulus,
            "point_count": inventory.point_count,
            "cycles": [
                {"points": list(c.points), "digits": list(c.digits)}
                for c in inventory.cycles
            ],
        })
        return 0
    sys.stdout.write(
        f"m={args.m}: {len(inventory.cycles)} non-trivial extreme cycles, "
        f"{inventory.point_count} cycle points\n"
    )
    for c in inventory.cycles:
        sys.stdout.write(
            f"  points {_tuple_text(c.points)} digits {_tuple_text(c.digits)}\n"
        )
    return 0


def _cmd_order(args) -> int:
    record = order_of_4(args.m, cross_check=True)
    factors = factorize(args.m)
    per_prime = [
        {"p": p, "o4": _prime_order(p), "iota4": simplicity_index(p)}
        for p in factors.primes
    ]
    if args.json:
        _emit_json("order", {"m": args.m}, {
            "m": args.m,
            "o4": record.order,
            "group_size": record.group_size,
            "factors": [list(pair) for pair in factors.factors],
            "primes": per_prime,
        })
        return 0
    sys.stdout.write(f"o4={record.order}\n")
    sys.stdout.write(
        f"m={args.m} group_size={record.group_size} factors="
        + "*".join(
            f"{p}^{k}" if k > 1 else str(p) for p, k in factors.factors
        )
        + "\n"
    )
    for entry in per_prime:
        sys.stdout.write(
            f"p={entry['p']}: o4={entry['o4']} iota4={entry['iota4']}\n"
        )
    return 0


def _progress(message: str) -> None:
    sys.stderr.write(message + "\n")
    sys.stderr.flush()


def _cmd_sieve(args) -> int:
    cache = args.cache if args.cache is not None else os.environ.get("SPECTRAL_CACHE")
    report = sieve_primitives(
        args.max, args.workers, cache_path=cache, progress=_progress,
    )
    rows = _sieve_rows(report)
    _write_rows(rows, args.csv)
    stats = ", ".join(f"{k}={v}" for k, v in report.filter_stats.items())
    sys.stderr.write(
        f"{len(report.primitives)} primitives up to {args.max} "
        f"in {report.elapsed:.2f}s ({stats})\n"
    )
    return 0


def _cmd_table2(args) -> int:
    started = time.perf_counter()
    table = prime_order_table(args.max)
    _write_rows([[str(p), str(o)] for p, o in table], args.csv)
    sys.stderr.write(
        f"{len(table)} primes up to {args.max} "
        f"in {time.perf_counter() - started:.2f}s\n"
    )
    return 0


def _cmd_witness(args) -> int:
    m, verified = infinitude_witness(args.n)
    sys.stdout.write(
        f"n={args.n} m={m} verified={'true' if verified else 'false'}\n"
    )
    return 0


def _cmd_conjectures(args) -> int:
    report = scan_conjectures(args.max, workers=args.workers, progress=_progress)
    payload = {
        "max": report.max_bound,
        "squarefree_violations": [dict(v) for v in report.squarefree_violations],
        "lcm_violations": [dict(v) for v in report.lcm_violations],
        "coprime_complete_violations": [
            dict(v) for v in report.coprime_complete_violations
        ],
    }
    if args.json:
        _emit_json("conjectures", {"max": args.max}, payload)
        return 0
    sys.stdout.write(
        f"max={report.max_bound} violations={report.violation_count()}\n"
    )
    for name in ("squarefree_violations", "lcm_violations",
                 "coprime_complete_violations"):
        for v in payload[name]:
            sys.stdout.write(
                f"VIOLATION {name.removesuffix('_violations')}: "
                f"m={v['m']} {v['reason']}\n"
            )
    return 0


def _cmd_muhat(args) -> int:
    t = args.t
    if float(t).is_integer():
        t = int(t)
    value = mu_hat(t, args.depth)
    sys.stdout.write(
        f"t={args.t!r} depth={args.depth} re={value.real!r} im={value.imag!r} "
        f"abs={abs(value)!r}\n"
    )
    return 0


def _cmd_gram(args) -> int:
    s = SpectrumTruncation(args.m, args.level)
    matrix = gram_matrix(s, args.depth)
    rows = []
    for i in range(matrix.shape[0]):
        for j in range(matrix.shape[1]):
            entry = complex(matrix[i, j])
            rows.append([str(i), str(j), repr(entry.real), repr(entry.imag)])
    _write_rows(rows, None)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cantorspec",
        description="Classify odd moduli by their extreme cycles and "
        "reproduce the primitive-number tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="verdict and deciding rule for one modulus")
    p.add_argument("m", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("cycles", help="full non-trivial cycle inventory")
    p.add_argument("m", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_cycles)

    p = sub.add_parser("order", help="order of 4 and per-prime data")
    p.add_argument("m", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_order)

    p = sub.add_parser("sieve", help="enumerate primitive numbers")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv", type=str, default=None)
    p.add_argument("--cache", type=str, default=None)
    p.set_defaults(func=_cmd_sieve)

    p = sub.add_parser("table2", help="o4 for every odd prime up to a bound")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--csv", type=str, default=None)
    p.set_defaults(func=_cmd_table2)

    p = sub.add_parser("witness", help="incomplete modulus of cycle length n+1")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("conjectures", help="scan the open conjectures")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_conjectures)

    p = sub.add_parser("muhat", help="truncated transform at one frequency")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.set_defaults(func=_cmd_muhat)

    p = sub.add_parser("gram", help="Gram matrix entries as long-form CSV")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--depth", type=int, default=None)
    p.set_defaults(func=_cmd_gram)

    return parser


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DomainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except InconsistencyError as exc:
        sys.stderr.write(f"inconsistency: {exc}\n")
        return 3


def main(argv: list[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)
