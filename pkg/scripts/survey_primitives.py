#!/usr/bin/env python3
"""Survey primitive numbers up to a bound and summarize how each odd
modulus was settled.

Example:
    python3 scripts/survey_primitives.py --max 1000000 --cache waves.jsonl
"""

import argparse
import sys

from cantorspec import sieve_primitives


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max", type=int, default=10**6)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--cache", type=str, default=None)
    parser.add_argument("--quiet", action="store_true",
                        help="suppress per-wave progress")
    args = parser.parse_args()

    progress = None if args.quiet else lambda msg: print(msg, file=sys.stderr)
    report = sieve_primitives(
        args.max, args.workers, cache_path=args.cache, progress=progress,
    )

    print(f"primitive numbers up to {args.max}: {len(report.primitives)}")
    for rec in report.primitives:
        decomposition = " * ".join(
            f"{p}^{k}" if k > 1 else str(p) for p, k in rec.factors.factors
        )
        orders = ",".join(str(o) for o in rec.prime_orders)
        print(f"  {rec.modulus} = {decomposition}  o4 per prime: {orders}  "
              f"witness starts at {rec.witness.points[0]}")
    print("settled by:")
    for rule, count in report.filter_stats.items():
        print(f"  {rule:>16}: {count}")
    print(f"elapsed: {report.elapsed:.2f}s with {report.worker_count} worker(s)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
