"""Bulk enumeration of primitive numbers and the derived tables.

The range [3, max_bound] is processed in geometric waves [lo, min(5*lo,
max_bound+1)).  Inside one wave no surviving modulus can be divisible by a
primitive found in the same wave (the smallest odd multiple of any in-wave
q that is not already a multiple of 3 is 5q >= 5*lo, which lies beyond the
wave), so the settled verdicts depend only on primitives from earlier
waves.  That makes the report a pure function of max_bound: worker count
and chunking affect scheduling only.

Every wave first strikes out odd multiples of 3 (except 3 itself) and odd
multiples of previously found primitives with vectorized masks, then runs
the per-modulus cascade (prime power, family, order bound, residue scan,
cycle oracle) over the survivors.  Primitives are re-verified against the
single-threaded oracle before the report is returned.
"""

from __future__ import annotations

import json
import math
import os
import time
from dataclasses import dataclass
from multiprocessing import get_context
from typing import Callable

import numpy as np

from .classify import (
    PrimitiveCache,
    _all_proper_divisors_complete,
    family_members,
    gmembership_filter,
)
from .cycles import ExtremeCycle, cycle_point_count_bound, find_cycles, step, validate_cycle
from .errors import DomainError, InconsistencyError
from .modmath import FactoredInteger, _prime_order, order_by_formula

CACHE_FORMAT = "cantorspec-sieve-cache"
CACHE_VERSION = 1

RULE_KEYS = (
    "multiple-of-3",
    "divisor-witness",
    "prime-power",
    "family",
    "order-bound",
    "gmembership",
    "oracle",
)

# worker state shared through fork; set once per sieve run before any pool
# is created
_SPF: np.ndarray | None = None
_FAMILY_SET: frozenset[int] = frozenset()


@dataclass(frozen=True)
class PrimitiveRecord:
    modulus: int
    factors: FactoredInteger
    prime_orders: tuple[int, ...]
    witness: ExtremeCycle


@dataclass(frozen=True)
class SieveReport:
    max_bound: int
    primitives: tuple[PrimitiveRecord, ...]
    filter_stats: dict[str, int]
    elapsed: float
    worker_count: int

    def cache_view(self) -> PrimitiveCache:
        return PrimitiveCache(
            self.max_bound, {r.modulus: r.witness for r in self.primitives}
        )


@dataclass(frozen=True)
class ConjectureReport:
    max_bound: int
    squarefree_violations: tuple[dict, ...]
    lcm_violations: tuple[dict, ...]
    coprime_complete_violations: tuple[dict, ...]

    def violation_count(self) -> int:
        return (
            len(self.squarefree_violations)
            + len(self.lcm_violations)
            + len(self.coprime_complete_violations)
        )


@dataclass
class _WaveResult:
    lo: int
    hi: int
    stats: dict[str, int]
    records: list[PrimitiveRecord]


def _prime_factor_table(limit: int) -> np.ndarray:
    """Smallest odd prime factor for every odd index; 0 marks primes and 1."""
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(3, math.isqrt(limit) + 1, 2):
        if spf[p] == 0:
            seg = spf[p * p :: 2 * p]
            seg[seg == 0] = p
    return spf


def _table_factor(m: int) -> tuple[tuple[int, int], ...]:
    pairs = []
    while m > 1:
        p = int(_SPF[m])
        if p == 0:
            p = m
        k = 0
        while m % p == 0:
            m //= p
            k += 1
        pairs.append((p, k))
    return tuple(pairs)


def _waves(max_bound: int):
    lo = 3
    while lo <= max_bound:
        hi = min(5 * lo, max_bound + 1)
        yield lo, hi
        lo = hi


def _mask_wave(lo: int, hi: int, primitive_moduli: list[int]):
    """Strike multiples of 3 and of known primitives; return survivors."""
    start = lo if lo % 2 == 1 else lo + 1
    values = np.arange(start, hi, 2, dtype=np.int64)
    rules = np.zeros(values.shape[0], dtype=np.uint8)
    for j in range(min(3, values.shape[0])):
        if (start + 2 * j) % 3 == 0:
            rules[j::3] = 1
            break
    if lo <= 3 < hi:
        rules[(3 - start) // 2] = 0
    for q in primitive_moduli:
        if q == 3:
            continue
        k = max(3, -(-lo // q))
        if k % 2 == 0:
            k += 1
        v0 = k * q
        if v0 >= hi:
            continue
        seg = rules[(v0 - start) // 2 :: q]
        seg[seg == 0] = 2
    stats = {
        "multiple-of-3": int(np.count_nonzero(rules == 1)),
        "divisor-witness": int(np.count_nonzero(rules == 2)),
    }
    return values[rules == 0], stats


def _settle_value(m: int):
    """Cascade for one survivor; returns (rule, primitive record or None)."""
    pairs = _table_factor(m)
    if len(pairs) == 1 and pairs[0][0] > 3:
        return "prime-power", None
    if m % 3 != 0:
        if m in _FAMILY_SET:
            return "family", None
        order = order_by_formula(FactoredInteger(m, pairs))
        if order > cycle_point_count_bound(m):
            # no known primitive divides m and none can hide in this wave,
            # so ruling out primitivity settles m as complete
            return "order-bound", None
        if gmembership_filter(m):
            return "gmembership", None
    inventory = find_cycles(m)
    if not inventory.cycles:
        return "oracle", None
    witness = inventory.cycles[0]
    return "oracle", (m, pairs, witness.points, witness.digits)


def _settle_chunk(values: np.ndarray):
    counts: dict[str, int] = {}
    found = []
    for v in values.tolist():
        rule, record = _settle_value(v)
        counts[rule] = counts.get(rule, 0) + 1
        if record is not None:
            found.append(record)
    return counts, found


def _record_from_payload(m, pairs, points, digits) -> PrimitiveRecord:
    f = FactoredInteger(m, tuple(tuple(x) for x in pairs))
    return PrimitiveRecord(
        modulus=m,
        factors=f,
        prime_orders=tuple(_prime_order(p) for p in f.primes),
        witness=ExtremeCycle(m, tuple(points), tuple(digits)),
    )


def _warm_kernels() -> None:
    find_cycles(5)
    gmembership_filter(5)
    _prime_order.cache_clear()
    _prime_order(5)


def _verify_primitive(rec: PrimitiveRecord, earlier: list[int]) -> None:
    m = rec.modulus
    inventory = find_cycles(m)
    if not inventory.cycles:
        raise InconsistencyError(f"reported primitive {m} has no cycle on re-run")
    if inventory.cycles[0] != rec.witness:
        raise InconsistencyError(f"witness for {m} does not match the oracle re-run")
    if not validate_cycle(rec.witness):
        raise InconsistencyError(f"witness for {m} is invalid")
    for q in earlier:
        if m % q == 0:
            raise InconsistencyError(
                f"{m} is divisible by the smaller primitive {q}"
            )
    if rec.factors.value != m:
        raise InconsistencyError(f"factorization mismatch for {m}")
    if rec.prime_orders != tuple(_prime_order(p) for p in rec.factors.primes):
        raise InconsistencyError(f"per-prime orders mismatch for {m}")
    if not _all_proper_divisors_complete(rec.factors):
        raise InconsistencyError(f"{m} has an incomplete proper divisor")


def _load_cache_waves(path: str) -> list[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line for line in fh.read().splitlines() if line.strip()]
    if not lines:
        raise DomainError(f"cache file {path} is empty")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise DomainError(f"cache file {path} is not parseable: {exc}") from exc
    if header.get("format") != CACHE_FORMAT:
        raise DomainError(f"cache file {path} has an unknown format")
    if header.get("version") != CACHE_VERSION:
        raise DomainError(f"cache file {path} has an unsupported version")
    waves: list[dict] = []
    for line in lines[1:]:
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DomainError(f"cache file {path} is corrupt: {exc}") from exc
        kind = obj.get("kind")
        if kind == "wave":
            waves.append({"lo": obj["lo"], "hi": obj["hi"],
                          "stats": obj["stats"], "primitives": []})
        elif kind == "primitive":
            if not waves:
                raise DomainError(f"cache file {path}: primitive before any wave")
            waves[-1]["primitives"].append(obj)
        else:
            raise DomainError(f"cache file {path}: unknown record kind {kind!r}")
    return waves


def _write_cache(path: str, waves: list[_WaveResult]) -> None:
    lines = [json.dumps({"format": CACHE_FORMAT, "version": CACHE_VERSION},
                        sort_keys=True)]
    for wave in waves:
        lines.append(json.dumps(
            {"kind": "wave", "lo": wave.lo, "hi": wave.hi, "stats": wave.stats},
            sort_keys=True,
        ))
        for rec in wave.records:
            lines.append(json.dumps(
                {
                    "kind": "primitive",
                    "m": rec.modulus,
                    "verdict": "incomplete",
                    "decided_by": "oracle",
                    "factors": [list(pair) for pair in rec.factors.factors],
                    "prime_orders": list(rec.prime_orders),
                    "witness": {
                        "points": list(rec.witness.points),
                        "digits": list(rec.witness.digits),
                    },
                },
                sort_keys=True,
            ))
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def sieve_primitives(
    max_bound: int,
    workers: int = 1,
    *,
    cache_path: str | None = None,
    progress: Callable[[str], None] | None = None,
) -> SieveReport:
    """Find every primitive number in [3, max_bound].

    The result depends only on max_bound.  With cache_path, wave results
    are replayed from (and persisted to) a line-delimited record file;
    replayed primitives are re-verified against the oracle before use.
    """
    global _SPF, _FAMILY_SET
    if not isinstance(max_bound, int) or max_bound < 3:
        raise DomainError(f"max_bound must be an integer >= 3, got {max_bound!r}")
    if not isinstance(workers, int) or workers < 1:
        raise DomainError(f"workers must be an integer >= 1, got {workers!r}")
    started = time.perf_counter()
    say = progress if progress is not None else (lambda _msg: None)

    cached_waves: list[dict] = []
    if cache_path is not None and os.path.exists(cache_path):
        cached_waves = _load_cache_waves(cache_path)
        say(f"cache: loaded {len(cached_waves)} wave records from {cache_path}")

    _SPF = _prime_factor_table(max_bound)
    _FAMILY_SET = family_members(max_bound)
    _warm_kernels()

    pool = None
    if workers > 1:
        pool = get_context("fork").Pool(processes=workers)
    waves: list[_WaveResult] = []
    primitive_moduli: list[int] = []
    replaying = True
    try:
        for index, (lo, hi) in enumerate(_waves(max_bound)):
            if (
                replaying
                and index < len(cached_waves)
                and cached_waves[index]["lo"] == lo
                and cached_waves[index]["hi"] == hi
            ):
                cached = cached_waves[index]
                records = []
                for obj in cached["primitives"]:
                    rec = _record_from_payload(
                        obj["m"], obj["factors"],
                        obj["witness"]["points"], obj["witness"]["digits"],
                    )
                    _verify_primitive(rec, primitive_moduli)
                    records.append(rec)
                    primitive_moduli.append(rec.modulus)
                waves.append(_WaveResult(lo, hi, dict(cached["stats"]), records))
                say(f"wave [{lo}, {hi}): replayed from cache, "
                    f"{len(records)} primitives")
                continue
            replaying = False

            survivors, stats = _mask_wave(lo, hi, primitive_moduli)
            if pool is not None and survivors.shape[0] > 1024:
                parts = np.array_split(survivors, workers * 4)
                chunk_results = pool.map(_settle_chunk, [p for p in parts if p.size])
            else:
                chunk_results = [_settle_chunk(survivors)]
            records = []
            for counts, found in chunk_results:
                for rule, count in counts.items():
                    stats[rule] = stats.get(rule, 0) + count
                for payload in found:
                    rec = _record_from_payload(*payload)
                    records.append(rec)
                    primitive_moduli.append(rec.modulus)
            waves.append(_WaveResult(lo, hi, stats, records))
            say(f"wave [{lo}, {hi}): {survivors.shape[0]} survivors, "
                f"{len(records)} primitives")
    finally:
        if pool is not None:
            pool.close()
            pool.join()

    records = [rec for wave in waves for rec in wave.records]
    moduli = [rec.modulus for rec in records]
    for i, rec in enumerate(records):
        _verify_primitive(rec, moduli[:i])

    filter_stats = {key: 0 for key in RULE_KEYS}
    for wave in waves:
        for rule, count in wave.stats.items():
            filter_stats[rule] += count
    examined = (max_bound + 1) // 2 - 1
    if sum(filter_stats.values()) != examined:
        raise InconsistencyError(
            f"filter statistics cover {sum(filter_stats.values())} moduli, "
            f"expected {examined}"
        )

    if cache_path is not None:
        _write_cache(cache_path, waves)
        say(f"cache: wrote {len(waves)} waves to {cache_path}")

    return SieveReport(
        max_bound=max_bound,
        primitives=tuple(records),
        filter_stats=filter_stats,
        elapsed=time.perf_counter() - started,
        worker_count=workers,
    )


def prime_order_table(max_prime: int) -> list[tuple[int, int]]:
    """(p, o4(p)) for every odd prime p <= max_prime, ascending."""
    if not isinstance(max_prime, int) or max_prime < 3:
        raise DomainError(f"max_prime must be an integer >= 3, got {max_prime!r}")
    composite = np.zeros(max_prime + 1, dtype=bool)
    table = []
    for p in range(3, max_prime + 1, 2):
        if not composite[p]:
            table.append((p, _prime_order(p)))
            composite[p * p :: 2 * p] = True
    return table


def infinitude_witness(n: int) -> tuple[int, bool]:
    """The modulus (4^(n+1) - 1)/3 together with a walk-based verification.

    Verified means the walk started at 7 returns to 7, i.e. 7 is a point
    of a non-trivial cycle, so the modulus is incomplete.  Arbitrary-width
    integers throughout; n can push the modulus far past 64 bits.
    """
    if not isinstance(n, int) or n < 3:
        raise DomainError(f"the construction needs n >= 3, got {n!r}")
    m = (4 ** (n + 1) - 1) // 3
    x = 7
    seen = {7}
    for _ in range(4 * (n + 2)):
        nxt = step(x, m)
        if nxt is None:
            return m, False
        x = nxt[0]
        if x in seen:
            return m, x == 7
        seen.add(x)
    return m, False


def scan_conjectures(
    max_bound: int,
    *,
    workers: int = 1,
    sieve_report: SieveReport | None = None,
    progress: Callable[[str], None] | None = None,
) -> ConjectureReport:
    """Scan the two open conjectures up to max_bound.

    For every primitive: square-freeness, and the lcm of the per-prime
    orders being attained at a single prime.  For every odd composite m
    not divisible by 3 whose primes and per-prime orders are mutually
    prime: completeness.  Completeness is decided by primitive
    divisibility, which is equivalent to the cycle criterion here because
    every primitive up to max_bound is known.
    """
    global _SPF
    if not isinstance(max_bound, int) or max_bound < 3:
        raise DomainError(f"max_bound must be an integer >= 3, got {max_bound!r}")
    if sieve_report is None or sieve_report.max_bound < max_bound:
        sieve_report = sieve_primitives(max_bound, workers, progress=progress)
    say = progress if progress is not None else (lambda _msg: None)

    squarefree = []
    lcm_attained = []
    for rec in sieve_report.primitives:
        if rec.modulus > max_bound:
            continue
        entry = {
            "m": rec.modulus,
            "primes": list(rec.factors.primes),
            "exponents": list(rec.factors.exponents),
            "orders": list(rec.prime_orders),
        }
        if not rec.factors.is_squarefree():
            squarefree.append({**entry, "reason": "not square-free"})
        if math.lcm(*rec.prime_orders) not in rec.prime_orders:
            lcm_attained.append(
                {**entry, "reason": "lcm of orders attained at no single prime"}
            )
    say(f"checked {len(sieve_report.primitives)} primitives")

    _SPF = _prime_factor_table(max_bound)
    primitive_moduli = [
        rec.modulus for rec in sieve_report.primitives if rec.modulus <= max_bound
    ]
    coprime_complete = []
    scanned = 0
    for m in range(5, max_bound + 1, 2):
        if m % 3 == 0:
            continue
        pairs = _table_factor(m)
        if len(pairs) == 1 and pairs[0][1] == 1:
            continue
        combined = [p for p, _ in pairs] + [_prime_order(p) for p, _ in pairs]
        if math.lcm(*combined) != math.prod(combined):
            continue
        scanned += 1
        divisor = next((q for q in primitive_moduli if m % q == 0), None)
        if divisor is not None:
            coprime_complete.append({
                "m": m,
                "primes": [p for p, _ in pairs],
                "orders": combined[len(pairs):],
                "reason": f"incomplete: divisible by the primitive {divisor}",
            })
    say(f"checked {scanned} mutually-prime composites")

    return ConjectureReport(
        max_bound=max_bound,
        squarefree_violations=tuple(squarefree),
        lcm_violations=tuple(lcm_attained),
        coprime_complete_violations=tuple(coprime_complete),
    )
