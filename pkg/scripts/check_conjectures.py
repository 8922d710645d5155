#!/usr/bin/env python3
"""Scan the two open conjectures and exit non-zero if a violation shows up.

Checks every primitive for square-freeness and for the lcm of its
per-prime orders being attained at a single prime, and every odd
composite not divisible by 3 whose primes and per-prime orders are
mutually prime for completeness.
"""

import argparse
import sys

from cantorspec import scan_conjectures


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max", type=int, default=10**6)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    report = scan_conjectures(
        args.max,
        workers=args.workers,
        progress=lambda msg: print(msg, file=sys.stderr),
    )

    groups = (
        ("square-freeness", report.squarefree_violations),
        ("lcm attained at a single prime", report.lcm_violations),
        ("mutually prime orders imply complete", report.coprime_complete_violations),
    )
    for label, violations in groups:
        print(f"{label}: {len(violations)} violation(s)")
        for v in violations:
            print(f"  !!! m={v['m']}: {v['reason']}")
    if report.violation_count():
        print("FINDING: at least one conjecture fails in this range")
        return 1
    print(f"clean up to {report.max_bound}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
