"""Completeness and primitivity decisions for odd moduli.

A cascade of cheap sufficient conditions (membership of distinguished
residues in the group generated by 4, closed-form families, prime powers)
settles most moduli; everything else falls back to the exhaustive cycle
search.  Rules that only rule out primitivity are exposed with the same
FilterOutcome shape, as is a family of advisory rules that are never used
to settle a verdict but are cross-checked against the oracle in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np

from .cycles import ExtremeCycle, cycle_point_count_bound, find_cycles, validate_cycle
from .errors import DomainError, InconsistencyError
from .modmath import (
    FactoredInteger,
    _prime_order,
    _require_odd,
    factorize,
    is_prime,
    order_by_formula,
    order_of_4,
    simplicity_index,
    totient,
)

try:
    from numba import njit as _njit
except ImportError:  # pragma: no cover
    _njit = None

PROVES_COMPLETE = "proves-complete"
PROVES_NOT_PRIMITIVE = "proves-not-primitive"
INCONCLUSIVE = "inconclusive"

ADVISORY_RULES = (
    "root-bound",
    "totient-index",
    "subset-lcm",
    "mutually-prime-orders",
    "prime-list-reduction",
    "augmented-prime-power",
)

# 4*g must stay inside int64 for the compiled scan
_NATIVE_SCAN_LIMIT = 1 << 60


@dataclass(frozen=True)
class FilterOutcome:
    rule: str
    result: str
    detail: str

    def __bool__(self) -> bool:
        return self.result != INCONCLUSIVE


@dataclass(frozen=True)
class Classification:
    """Verdict for one odd modulus.

    complete means the frequency set built from the modulus is an
    orthonormal basis (no non-trivial cycle); witness carries a validated
    non-trivial cycle whenever complete is False.
    """

    modulus: int
    complete: bool
    primitive: bool
    decided_by: str
    witness: ExtremeCycle | None = None


@dataclass(frozen=True)
class PrimitiveCache:
    """Every primitive number up to bound, each with one validated cycle."""

    bound: int
    witnesses: dict[int, ExtremeCycle]

    def primitive_divisor(self, m: int) -> int | None:
        for d in sorted(self.witnesses):
            if d <= m and m % d == 0:
                return d
        return None


def _g_scan(m, targets):
    # Walk the powers of 4 mod m; report the first distinguished residue
    # reached, or 0 if the group closes without one.
    g = 1
    while True:
        g = (4 * g) % m
        for i in range(len(targets)):
            if g == targets[i]:
                return g
        if g == 1:
            return 0


if _njit is not None:
    _g_scan_fast = _njit(cache=True)(_g_scan)
else:  # pragma: no cover
    _g_scan_fast = None


def _doubling_steps(a: int) -> int:
    """Smallest n >= 0 with 3*4^n >= a, i.e. ceil(log2(sqrt(a/3))) for a >= 1."""
    n = 0
    power = 3
    while power < a:
        n += 1
        power <<= 2
    return n


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def gmembership_filter(m: int) -> FilterOutcome:
    """Completeness via a distinguished residue in the group generated by 4.

    Tests -1, -2, 2, 3 and, for m > 12, also 5..12.  Any hit proves m
    complete.  The scan reports the first hit in group order, which makes
    the evidence deterministic.
    """
    _require_odd(m, minimum=5)
    if m % 3 == 0:
        raise DomainError(f"residue test requires m not divisible by 3, got {m}")
    candidates = [m - 1, m - 2, 2, 3]
    if m > 12:
        candidates.extend(range(5, 13))
    targets = sorted(set(candidates))
    if _g_scan_fast is not None and m < _NATIVE_SCAN_LIMIT:
        hit = int(_g_scan_fast(m, np.array(targets, dtype=np.int64)))
    else:  # pragma: no cover - only huge moduli land here
        hit = _g_scan(m, targets)
    if hit == 0:
        return FilterOutcome(
            "gmembership", INCONCLUSIVE, "no distinguished residue is a power of 4"
        )
    if hit == m - 1:
        label = "-1"
    elif hit == m - 2:
        label = "-2"
    else:
        label = str(hit)
    return FilterOutcome(
        "gmembership", PROVES_COMPLETE, f"{label} (mod {m}) is a power of 4"
    )


_FAMILIES = (
    (1, 1, 1, "4^{n} + 1"),
    (1, -3, 1, "4^{n} - 3"),
    (2, -1, 1, "2*4^{n} - 1"),
    (2, 1, 1, "2*4^{n} + 1"),
    (1, -5, 3, "4^{n} - 5"),
    (1, -7, 3, "4^{n} - 7"),
    (1, -9, 3, "4^{n} - 9"),
    (1, -11, 3, "4^{n} - 11"),
    (2, -3, 3, "2*4^{n} - 3"),
    (2, -5, 3, "2*4^{n} - 5"),
)


def _exact_log4(q: int) -> int | None:
    n = (q.bit_length() - 1) // 2
    return n if q > 0 and 1 << (2 * n) == q else None


def family_filter(m: int) -> FilterOutcome:
    """Completeness for closed-form families a*4^n + c.

    Members divisible by 3 are excluded: the shapes 2*4^n + 1, 4^n - 7 and
    2*4^n - 5 consist entirely of multiples of 3, which are never complete,
    so a bare shape match proves nothing for them.
    """
    _require_odd(m)
    if m <= 3:
        return FilterOutcome("family", INCONCLUSIVE, "no family covers m <= 3")
    if m % 3 == 0:
        return FilterOutcome("family", INCONCLUSIVE, "m is divisible by 3")
    for coef, offset, n_min, shape in _FAMILIES:
        q, r = divmod(m - offset, coef)
        if r != 0 or q < 4:
            continue
        n = _exact_log4(q)
        if n is not None and n >= n_min:
            return FilterOutcome("family", PROVES_COMPLETE, shape.format(n=n))
    return FilterOutcome("family", INCONCLUSIVE, "m matches no covered family")


def family_members(limit: int) -> frozenset[int]:
    """Every modulus <= limit that family_filter proves complete.

    Used by the bulk sieve for O(1) matching; equivalence with
    family_filter over the range is a tested invariant.
    """
    out = set()
    for coef, offset, n_min, _ in _FAMILIES:
        n = n_min
        while coef * 4**n + offset <= limit:
            v = coef * 4**n + offset
            if v > 3 and v % 3 != 0:
                out.add(v)
            n += 1
    return frozenset(out)


def prime_power_filter(f: FactoredInteger) -> FilterOutcome:
    _require_odd(f.value)
    if f.value > 1 and f.is_prime_power():
        p, k = f.factors[0]
        if p > 3:
            return FilterOutcome("prime-power", PROVES_COMPLETE, f"{p}^{k}")
        return FilterOutcome("prime-power", INCONCLUSIVE, "powers of 3 are incomplete")
    return FilterOutcome("prime-power", INCONCLUSIVE, "not a prime power")


def order_bound_filter(m: int, *, order: int | None = None) -> FilterOutcome:
    """Non-primitivity when the order of 4 exceeds the cycle point bound."""
    _require_odd(m, minimum=5)
    if m % 3 == 0:
        raise DomainError(f"order bound requires m not divisible by 3, got {m}")
    if order is None:
        order = order_of_4(m).order
    bound = cycle_point_count_bound(m)
    if order > bound:
        return FilterOutcome(
            "order-bound",
            PROVES_NOT_PRIMITIVE,
            f"o4={order} exceeds the cycle point bound {bound}",
        )
    return FilterOutcome(
        "order-bound", INCONCLUSIVE, f"o4={order} within the cycle point bound {bound}"
    )


def product_lemma_filter(
    a: int, b: int, *, order_ab: int | None = None, order_b: int | None = None
) -> FilterOutcome:
    """Non-primitivity of a*b from order growth relative to the factor b.

    Fires when 12*o4(ab) >= (2a+15)*o4(b), or when o4(ab) > 2^n * o4(b)
    with n the smallest integer such that 3*4^n >= a.  Both comparisons are
    exact integer arithmetic.
    """
    for name, v in (("a", a), ("b", b)):
        if not isinstance(v, int) or v < 1 or v % 2 == 0:
            raise DomainError(f"{name} must be a positive odd integer, got {v!r}")
    m = a * b
    if order_ab is None:
        order_ab = order_of_4(m).order
    if order_b is None:
        order_b = order_of_4(b).order
    if 12 * order_ab >= (2 * a + 15) * order_b:
        return FilterOutcome(
            "product-lemma",
            PROVES_NOT_PRIMITIVE,
            f"12*o4({m}) = {12 * order_ab} >= (2*{a}+15)*o4({b}) = {(2 * a + 15) * order_b}",
        )
    n = _doubling_steps(a)
    if order_ab > (1 << n) * order_b:
        return FilterOutcome(
            "product-lemma",
            PROVES_NOT_PRIMITIVE,
            f"o4({m}) = {order_ab} > 2^{n}*o4({b}) = {(1 << n) * order_b}",
        )
    return FilterOutcome(
        "product-lemma", INCONCLUSIVE, f"o4({m}) = {order_ab} grows too slowly over o4({b}) = {order_b}"
    )


def _checked_primes(primes) -> list[int]:
    ps = sorted(primes)
    if len(set(ps)) != len(ps):
        raise DomainError(f"primes must be distinct, got {ps}")
    for p in ps:
        if p <= 3 or not is_prime(p):
            raise DomainError(f"expected a prime larger than 3, got {p}")
    return ps


def bounded_exponent_reduction(primes) -> int:
    """Checkpoint modulus for a fixed prime support.

    Returns M = prod p^(iota(p) + j_p) with j_p the exponent of p in the
    lcm of the per-prime orders of 4.  If M is complete then every product
    of powers of these primes is complete, so one classification settles
    the whole family.
    """
    ps = _checked_primes(primes)
    if not ps:
        raise DomainError("need at least one prime")
    big = math.lcm(*[_prime_order(p) for p in ps])
    out = 1
    for p in ps:
        out *= p ** (simplicity_index(p) + _valuation(big, p))
    return out


def root_bound_filter(m: int, *, order: int | None = None) -> FilterOutcome:
    """Advisory: o4(m) > 2^ceil(log2 sqrt(m/3)) rules out primitivity."""
    _require_odd(m)
    if order is None:
        order = order_of_4(m).order
    n = _doubling_steps(m)
    if order > (1 << n):
        return FilterOutcome(
            "root-bound", PROVES_NOT_PRIMITIVE, f"o4={order} > 2^{n} >= sqrt(4m/3)/2"
        )
    return FilterOutcome("root-bound", INCONCLUSIVE, f"o4={order} <= 2^{n}")


def totient_index_filter(f: FactoredInteger, *, order: int | None = None) -> FilterOutcome:
    """Advisory: a small index of <4> in the unit group rules out primitivity.

    The test phi(m)/sqrt(4m/3) > index is evaluated exactly as
    3*phi^2 > 4*m*index^2.
    """
    m = f.value
    _require_odd(m)
    if order is None:
        order = order_by_formula(f)
    phi = totient(f)
    index = phi // order
    if 3 * phi * phi > 4 * m * index * index:
        return FilterOutcome(
            "totient-index",
            PROVES_NOT_PRIMITIVE,
            f"phi={phi} with index {index} forces o4 past the root bound",
        )
    return FilterOutcome(
        "totient-index", INCONCLUSIVE, f"phi={phi}, index={index}: bound not reached"
    )


def subset_lcm_filter(primes) -> FilterOutcome:
    """Advisory: per-subset lcm growth proves a whole support complete.

    For distinct simple primes > 3 with no order divisible by a listed
    prime: if every subset S with |S| >= 2 satisfies 3*lcm(orders over S)^2
    > 4*prod(S), then every product of powers of these primes is complete.
    """
    ps = _checked_primes(primes)
    for p in ps:
        if simplicity_index(p) != 1:
            return FilterOutcome("subset-lcm", INCONCLUSIVE, f"{p} is not simple")
    orders = {p: _prime_order(p) for p in ps}
    for p in ps:
        for q in ps:
            if orders[p] % q == 0:
                return FilterOutcome(
                    "subset-lcm", INCONCLUSIVE, f"o4({p}) is divisible by {q}"
                )
    for size in range(2, len(ps) + 1):
        for sub in combinations(ps, size):
            big = math.lcm(*[orders[p] for p in sub])
            prod = math.prod(sub)
            if 3 * big * big <= 4 * prod:
                return FilterOutcome(
                    "subset-lcm",
                    INCONCLUSIVE,
                    f"subset {sub}: 3*lcm^2 = {3 * big * big} <= 4*prod = {4 * prod}",
                )
    return FilterOutcome(
        "subset-lcm", PROVES_COMPLETE, "every subset satisfies 3*lcm(o4)^2 > 4*prod"
    )


def mutually_prime_orders_filter(primes) -> FilterOutcome:
    """Advisory: mutually prime primes-and-orders prove a support complete.

    For distinct simple primes > 3: if the combined list of the primes and
    their orders of 4 is pairwise coprime and each order satisfies
    3*o4(p)^4 > 4*p^2, every product of powers of these primes is complete.
    """
    ps = _checked_primes(primes)
    for p in ps:
        if simplicity_index(p) != 1:
            return FilterOutcome(
                "mutually-prime-orders", INCONCLUSIVE, f"{p} is not simple"
            )
    orders = [_prime_order(p) for p in ps]
    combined = ps + orders
    for i in range(len(combined)):
        for j in range(i + 1, len(combined)):
            g = math.gcd(combined[i], combined[j])
            if g != 1:
                return FilterOutcome(
                    "mutually-prime-orders",
                    INCONCLUSIVE,
                    f"{combined[i]} and {combined[j]} share the factor {g}",
                )
    for p, o in zip(ps, orders):
        if 3 * o**4 <= 4 * p * p:
            return FilterOutcome(
                "mutually-prime-orders",
                INCONCLUSIVE,
                f"o4({p}) = {o} fails 3*o4^4 > 4*p^2",
            )
    return FilterOutcome(
        "mutually-prime-orders",
        PROVES_COMPLETE,
        "primes and orders are mutually prime with large per-prime orders",
    )


def prime_list_reduction_filter(primes, cache: PrimitiveCache) -> FilterOutcome:
    """Advisory: a verified primitive table certifies a prime support.

    If the checkpoint modulus fits under the table's verified bound and no
    tabulated primitive uses only the given primes, every product of their
    powers is complete.  Data-driven: strengthens automatically as the
    verified bound grows.
    """
    ps = _checked_primes(primes)
    checkpoint = bounded_exponent_reduction(ps)
    if checkpoint > cache.bound:
        return FilterOutcome(
            "prime-list-reduction",
            INCONCLUSIVE,
            f"checkpoint {checkpoint} exceeds the verified bound {cache.bound}",
        )
    support = set(ps)
    for q in sorted(cache.witnesses):
        if set(factorize(q).primes) <= support:
            return FilterOutcome(
                "prime-list-reduction",
                INCONCLUSIVE,
                f"primitive {q} uses only these primes",
            )
    return FilterOutcome(
        "prime-list-reduction",
        PROVES_COMPLETE,
        f"checkpoint {checkpoint} is under the verified bound {cache.bound} "
        "and no known primitive uses only these primes",
    )


def _oracle_complete(a: int) -> bool:
    return not find_cycles(a).cycles


def augmented_prime_power_filter(
    p: int, a: int, *, complete: Callable[[int], bool] | None = None
) -> FilterOutcome:
    """Advisory: attach any power of a large-order simple prime to a
    complete number.

    Requires p > 3 simple, p not dividing a, o4(p) coprime to o4(a) and
    o4(p) > 2^n with 3*4^n >= p.  The completeness of a is delegated to the
    supplied predicate (the cycle oracle by default).
    """
    if p <= 3 or not is_prime(p):
        raise DomainError(f"expected a prime larger than 3, got {p}")
    _require_odd(a)
    if a % p == 0:
        return FilterOutcome("augmented-prime-power", INCONCLUSIVE, f"{p} divides {a}")
    if simplicity_index(p) != 1:
        return FilterOutcome("augmented-prime-power", INCONCLUSIVE, f"{p} is not simple")
    op = _prime_order(p)
    n = _doubling_steps(p)
    if op <= (1 << n):
        return FilterOutcome(
            "augmented-prime-power", INCONCLUSIVE, f"o4({p}) = {op} <= 2^{n}"
        )
    oa = order_of_4(a).order
    g = math.gcd(op, oa)
    if g != 1:
        return FilterOutcome(
            "augmented-prime-power",
            INCONCLUSIVE,
            f"o4({p}) and o4({a}) share the factor {g}",
        )
    if complete is None:
        complete = _oracle_complete
    if not complete(a):
        return FilterOutcome(
            "augmented-prime-power", INCONCLUSIVE, f"{a} is not known to be complete"
        )
    return FilterOutcome(
        "augmented-prime-power",
        PROVES_COMPLETE,
        f"{p}^k * {a} is complete for every k >= 0",
    )


def advisory_report(
    f: FactoredInteger,
    *,
    cache: PrimitiveCache | None = None,
    complete: Callable[[int], bool] | None = None,
) -> dict[str, FilterOutcome]:
    """Evaluate every advisory rule applicable to f.value.

    Purely informational: classify never consults this.  Tests sweep the
    report against the oracle to confirm no advisory rule ever contradicts
    it.
    """
    m = f.value
    _require_odd(m, minimum=5)
    order = order_by_formula(f)
    report = {
        "root-bound": root_bound_filter(m, order=order),
        "totient-index": totient_index_filter(f, order=order),
    }
    skip = FilterOutcome
    if all(p > 3 for p in f.primes):
        report["subset-lcm"] = subset_lcm_filter(f.primes)
        report["mutually-prime-orders"] = mutually_prime_orders_filter(f.primes)
        if cache is not None:
            report["prime-list-reduction"] = prime_list_reduction_filter(f.primes, cache)
        else:
            report["prime-list-reduction"] = skip(
                "prime-list-reduction", INCONCLUSIVE, "no verified primitive table"
            )
        outcome = None
        for p, k in f.factors:
            outcome = augmented_prime_power_filter(p, m // p**k, complete=complete)
            if outcome:
                break
        report["augmented-prime-power"] = outcome
    else:
        why = "some prime factor is at most 3"
        for rule in ("subset-lcm", "mutually-prime-orders", "prime-list-reduction",
                     "augmented-prime-power"):
            report[rule] = skip(rule, INCONCLUSIVE, why)
    return report


def _divisor_complete(d: int, memo: dict[int, bool]) -> bool:
    if d in memo:
        return memo[d]
    if d == 1:
        verdict = True
    elif d % 3 == 0:
        # 3 carries the cycle {1} and every multiple scales it
        verdict = False
    else:
        fd = factorize(d)
        if fd.is_prime_power() and fd.primes[0] > 3:
            verdict = True
        elif d > 3 and (family_filter(d) or gmembership_filter(d)):
            verdict = True
        else:
            verdict = not find_cycles(d).cycles
    memo[d] = verdict
    return verdict


def _all_proper_divisors_complete(f: FactoredInteger) -> bool:
    memo: dict[int, bool] = {}
    for d in f.divisors():
        if d in (1, f.value):
            continue
        if not _divisor_complete(d, memo):
            return False
    return True


def _classify_inner(m: int, cache: PrimitiveCache | None) -> Classification:
    if m == 1:
        return Classification(1, complete=True, primitive=False, decided_by="unit")
    f = factorize(m)
    if m != 3 and f.is_prime_power() and f.primes[0] > 3:
        return Classification(m, True, False, "prime-power")
    if m > 3 and m % 3 == 0:
        witness = ExtremeCycle(m, (m // 3,), (m,))
        return Classification(m, False, False, "multiple-of-3", witness)
    if cache is not None:
        d = cache.primitive_divisor(m)
        if d is not None:
            witness = cache.witnesses[d].scaled(m // d)
            return Classification(m, False, d == m, "divisor-witness", witness)
    if m > 3:
        if family_filter(m):
            return Classification(m, True, False, "family")
        if gmembership_filter(m):
            return Classification(m, True, False, "gmembership")
    inventory = find_cycles(m)
    if not inventory.cycles:
        return Classification(m, True, False, "oracle")
    return Classification(
        m, False, _all_proper_divisors_complete(f), "oracle", inventory.cycles[0]
    )


def classify(
    m: int, *, cache: PrimitiveCache | None = None, cross_check: bool = False
) -> Classification:
    """Settle complete/incomplete/primitive for odd m >= 1.

    Pipeline: unit and prime powers, multiples of 3 via the m/3 fixed
    point, known primitive divisors with scaled witnesses, the family and
    residue filters, then the exhaustive cycle oracle.  Every witness is
    re-validated before being returned; cross_check=True additionally runs
    the oracle against rule-settled verdicts and raises on disagreement.
    """
    _require_odd(m)
    result = _classify_inner(m, cache)
    if (result.witness is not None) == result.complete:
        raise InconsistencyError(
            f"witness presence does not match the verdict for {m}"
        )
    if result.witness is not None:
        check = validate_cycle(result.witness)
        if not check:
            raise InconsistencyError(
                f"witness for {m} failed the {check.failure} check"
            )
    if cross_check and result.decided_by != "oracle":
        oracle_complete = not find_cycles(m).cycles
        if oracle_complete != result.complete:
            raise InconsistencyError(
                f"rule {result.decided_by} says complete={result.complete} "
                f"for {m} but the cycle oracle disagrees"
            )
    return result


def is_primitive(m: int, *, cache: PrimitiveCache | None = None) -> bool:
    """True iff m is incomplete while every proper divisor is complete."""
    _require_odd(m, minimum=3)
    return classify(m, cache=cache).primitive
