"""Modular arithmetic around the multiplicative group generated by 4.

For odd m the powers of 4 form a cyclic subgroup <4> of the units of Z_m.
This module provides prime factorization, the multiplicative order of 4
computed by independent routes, the power-lifting behaviour of that order
at a prime, Euler's totient, and cosets of <4> in the unit group.

The memo tables used here (``functools.lru_cache``) are per-process: reads
are safe under the GIL and worker processes each build their own copy.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm

from .errors import DomainError, InconsistencyError

try:
    from numba import njit as _njit
except ImportError:  # pragma: no cover - numba is an install requirement
    _njit = None

# Largest modulus for which the order is found by direct iteration.  Up to
# this size 4*g stays below 2**26, so the compiled loop never overflows.
DIRECT_ITERATION_LIMIT = 1 << 24


def _order_iteration(m):
    g = 4 % m
    a = 1
    while g != 1:
        g = (4 * g) % m
        a += 1
    return a


if _njit is not None:
    _order_iteration_fast = _njit(cache=True)(_order_iteration)
else:  # pragma: no cover
    _order_iteration_fast = _order_iteration


def _require_odd(m: int, minimum: int = 1) -> None:
    if not isinstance(m, int):
        raise DomainError(f"modulus must be an integer, got {m!r}")
    if m < minimum:
        raise DomainError(f"modulus must be >= {minimum}, got {m}")
    if m % 2 == 0:
        raise DomainError(f"modulus must be odd, got {m}")


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer with its prime factorization, primes ascending."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.value < 1:
            raise DomainError(f"value must be positive, got {self.value}")
        previous = 1
        product = 1
        for p, k in self.factors:
            if p <= previous:
                raise DomainError("prime factors must be strictly increasing")
            if k < 1:
                raise DomainError("exponents must be positive")
            previous = p
            product *= p**k
        if product != self.value:
            raise DomainError(
                f"factorization product {product} does not equal {self.value}"
            )

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(k for _, k in self.factors)

    def is_prime_power(self) -> bool:
        return len(self.factors) == 1

    def is_squarefree(self) -> bool:
        return all(k == 1 for _, k in self.factors)

    def divisors(self) -> tuple[int, ...]:
        """All positive divisors, ascending."""
        divs = [1]
        for p, k in self.factors:
            divs = [d * p**j for d in divs for j in range(k + 1)]
        return tuple(sorted(divs))


def factorize(n: int) -> FactoredInteger:
    """Factor n >= 1 by deterministic trial division.

    Intended for spot queries and moduli up to the sieve range; cost grows
    with sqrt(n / smallest factor).
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"factorize expects a positive integer, got {n!r}")
    pairs = []
    rest = n
    for p in (2, 3):
        if rest % p == 0:
            k = 0
            while rest % p == 0:
                rest //= p
                k += 1
            pairs.append((p, k))
    d = 5
    # trial divisors 5, 7, 11, 13, ... skipping multiples of 2 and 3
    bump = 2
    while d * d <= rest:
        if rest % d == 0:
            k = 0
            while rest % d == 0:
                rest //= d
                k += 1
            pairs.append((d, k))
        d += bump
        bump = 6 - bump
    if rest > 1:
        pairs.append((rest, 1))
    return FactoredInteger(n, tuple(pairs))


def is_prime(n: int) -> bool:
    if not isinstance(n, int) or n < 2:
        return False
    f = factorize(n)
    return f.is_prime_power() and f.exponents[0] == 1


@dataclass(frozen=True)
class OrderRecord:
    """The multiplicative order of 4 modulo an odd integer.

    group_size duplicates order: |<4>| in the units of Z_m is the order.
    """

    modulus: int
    order: int
    group_size: int


def order_of_4_direct(m: int) -> int:
    """Order of 4 mod m by plain iteration g -> 4g mod m."""
    _require_odd(m)
    if m == 1:
        return 1
    if m <= DIRECT_ITERATION_LIMIT:
        return int(_order_iteration_fast(m))
    return _order_iteration(m)


def order_of_4_by_refinement(m: int, factored: FactoredInteger | None = None) -> int:
    """Order of 4 mod m by divisor refinement of the Carmichael exponent.

    The exponent of the unit group (m odd) is lcm over p^k || m of
    p^(k-1)(p-1); its prime support is assembled from the factorizations of
    the p - 1, so the exponent itself is never trial-divided.
    """
    _require_odd(m)
    if m == 1:
        return 1
    f = factored if factored is not None else factorize(m)
    if f.value != m:
        raise DomainError("factored form does not match the modulus")
    exponent = 1
    support: set[int] = set()
    for p, k in f.factors:
        exponent = lcm(exponent, p ** (k - 1) * (p - 1))
        if k > 1:
            support.add(p)
        support.update(factorize(p - 1).primes)
    e = exponent
    for q in sorted(support):
        while e % q == 0 and pow(4, e // q, m) == 1:
            e //= q
    return e


def order_of_4(m: int, *, cross_check: bool = False) -> OrderRecord:
    """Order of 4 mod m (odd m >= 1); o4(1) = 1 by convention.

    Dispatches on size: direct iteration for m <= 2**24, Carmichael
    refinement above.  With cross_check=True both routes run and must
    agree, else InconsistencyError.
    """
    _require_odd(m)
    if m == 1:
        order = 1
    elif m <= DIRECT_ITERATION_LIMIT:
        order = order_of_4_direct(m)
        if cross_check:
            other = order_of_4_by_refinement(m)
            if other != order:
                raise InconsistencyError(
                    f"order routes disagree for {m}: direct {order}, refined {other}"
                )
    else:
        order = order_of_4_by_refinement(m)
        if cross_check:
            other = order_of_4_direct(m)
            if other != order:
                raise InconsistencyError(
                    f"order routes disagree for {m}: refined {order}, direct {other}"
                )
    return OrderRecord(modulus=m, order=order, group_size=order)


@lru_cache(maxsize=None)
def _prime_order(p: int) -> int:
    return order_of_4(p).order


@lru_cache(maxsize=None)
def simplicity_index(p: int) -> int:
    """Largest l such that the order of 4 mod p^l equals the order mod p.

    The order mod p^(l+1) is a p-power multiple of the order mod p, and they
    coincide exactly when 4^(order mod p) is 1 mod p^(l+1); the loop below
    tests that directly.  A prime with index 1 lifts its order by a factor
    of p at every further power.
    """
    if p % 2 == 0 or p < 3 or not is_prime(p):
        raise DomainError(f"simplicity_index expects an odd prime, got {p}")
    base = _prime_order(p)
    index = 1
    while pow(4, base, p ** (index + 1)) == 1:
        index += 1
    return index


def order_by_formula(f: FactoredInteger) -> int:
    """Order of 4 from per-prime data alone.

    For m = prod p_i^k_i (odd), with L = lcm of the per-prime orders and
    j_i the exponent of p_i inside L:

        order(m) = prod p_i^max(k_i - j_i - iota(p_i), 0) * L

    This is the closed-form route; order_of_4 is the independent check.
    """
    _require_odd(f.value)
    if f.value == 1:
        return 1
    orders = [_prime_order(p) for p in f.primes]
    big = lcm(*orders)
    lift = 1
    for p, k in f.factors:
        j = 0
        t = big
        while t % p == 0:
            t //= p
            j += 1
        lift *= p ** max(k - j - simplicity_index(p), 0)
    return lift * big


def totient(f: FactoredInteger) -> int:
    """Euler's totient from the factorization."""
    out = 1
    for p, k in f.factors:
        out *= (p - 1) * p ** (k - 1)
    return out


@dataclass(frozen=True)
class Coset:
    """A coset x<4> in the units of Z_m, elements sorted ascending.

    The representative is normalized to the smallest element.
    """

    modulus: int
    representative: int
    elements: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.elements:
            raise DomainError("a coset cannot be empty")
        if list(self.elements) != sorted(set(self.elements)):
            raise DomainError("coset elements must be sorted and distinct")
        if self.representative != self.elements[0]:
            raise DomainError("representative must be the smallest element")

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x % self.modulus in self.elements


def group_of_4(m: int) -> Coset:
    """The subgroup <4> of the units of Z_m, m odd >= 3."""
    _require_odd(m, minimum=3)
    elements = []
    g = 1
    while True:
        elements.append(g)
        g = (4 * g) % m
        if g == 1:
            break
    elements.sort()
    return Coset(modulus=m, representative=elements[0], elements=tuple(elements))


def coset_of(m: int, x: int) -> Coset:
    """The coset x<4> in the units of Z_m; x must be a unit."""
    _require_odd(m, minimum=3)
    x %= m
    if gcd(x, m) != 1:
        raise DomainError(f"{x} is not a unit modulo {m}")
    elements = []
    g = x
    while True:
        elements.append(g)
        g = (4 * g) % m
        if g == x:
            break
    elements.sort()
    return Coset(modulus=m, representative=elements[0], elements=tuple(elements))
