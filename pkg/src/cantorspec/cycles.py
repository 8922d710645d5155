"""Extreme cycles of the division maps x -> (x + l)/4 with digits l in {0, m}.

A cycle for odd m is a finite orbit of integers x with 0 <= x <= m/3 where
each step divides x + l by 4 for the unique digit l in {0, m} that makes the
quotient an integer (for odd m at most one digit works).  The orbit {0} is
the trivial cycle; m admits no other cycle exactly when every scaled
frequency set built from m gives an orthonormal Fourier family, so the
exhaustive search here is the ground-truth oracle against which every fast
classification rule is compared.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .modmath import Coset, _require_odd

try:
    from numba import njit as _njit
except ImportError:  # pragma: no cover
    _njit = None

# Walk states above this modulus are memoized in a hash map instead of flat
# arrays.  Below it, x + m stays under 2**26 so the compiled kernel is safe
# with 32-bit trajectory entries.
FLAT_MEMO_LIMIT = 1 << 25

# memo codes used by the walk resolver
_UNKNOWN, _ON_CYCLE, _LEADS_TO_CYCLE, _DEAD = 0, 1, 2, 3


def step(x: int, m: int) -> tuple[int, int] | None:
    """One walk step from x: (x + l)/4 and the digit l, or None if stuck."""
    _require_odd(m)
    if not isinstance(x, int) or x < 0:
        raise DomainError(f"walk point must be a non-negative integer, got {x!r}")
    if x % 4 == 0:
        return x >> 2, 0
    if (x + m) % 4 == 0:
        return (x + m) >> 2, m
    return None


@dataclass(frozen=True)
class ExtremeCycle:
    """A cycle (x_0, ..., x_{r-1}) with digits l_i: 4*x_{i+1} = x_i + l_i.

    Indices are cyclic; digits[i] is the digit consumed moving from
    points[i] to points[i+1].
    """

    modulus: int
    points: tuple[int, ...]
    digits: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.points)

    def is_trivial(self) -> bool:
        return self.points == (0,)

    def canonical(self) -> "ExtremeCycle":
        """Rotate so the smallest point comes first."""
        i = self.points.index(min(self.points))
        return ExtremeCycle(
            self.modulus,
            self.points[i:] + self.points[:i],
            self.digits[i:] + self.digits[:i],
        )

    def scaled(self, k: int) -> "ExtremeCycle":
        """The cycle for k*m obtained by multiplying everything by odd k."""
        if k < 1 or k % 2 == 0:
            raise DomainError(f"scale factor must be a positive odd integer, got {k}")
        return ExtremeCycle(
            self.modulus * k,
            tuple(x * k for x in self.points),
            tuple(l * k for l in self.digits),
        )


@dataclass(frozen=True)
class CycleValidation:
    ok: bool
    failure: str | None

    def __bool__(self) -> bool:
        return self.ok


def validate_cycle(c: ExtremeCycle) -> CycleValidation:
    """Check every cycle invariant; on failure name the first violated one."""
    m = c.modulus
    if not isinstance(m, int) or m < 1 or m % 2 == 0:
        return CycleValidation(False, "modulus-odd")
    r = len(c.points)
    if r == 0 or len(c.digits) != r:
        return CycleValidation(False, "shape")
    if not all(isinstance(v, int) for v in c.points + c.digits):
        return CycleValidation(False, "shape")
    if any(l not in (0, m) for l in c.digits):
        return CycleValidation(False, "digit-alphabet")
    for i in range(r):
        if 4 * c.points[(i + 1) % r] != c.points[i] + c.digits[i]:
            return CycleValidation(False, "recurrence")
    if any(x < 0 or 3 * x > m for x in c.points):
        return CycleValidation(False, "point-range")
    if len(set(c.points)) != r:
        return CycleValidation(False, "points-distinct")
    if any(x % 4 != 0 and (x + m) % 4 != 0 for x in c.points):
        return CycleValidation(False, "residue-mod-4")
    return CycleValidation(True, None)


@dataclass(frozen=True)
class CycleInventory:
    """All non-trivial cycles for a modulus, sorted by smallest point."""

    modulus: int
    cycles: tuple[ExtremeCycle, ...]
    point_count: int


def _resolve_walks(m, memo, stamp, idxbuf, traj):
    # Classify every start in [1, m//3] as on-cycle / leads-to-cycle / dead.
    # stamp/idxbuf mark membership and position in the current trajectory;
    # epoch increments avoid clearing them between starts.
    limit = memo.shape[0] - 1
    epoch = 0
    for k in range(1, limit + 1):
        if memo[k] != 0:
            continue
        epoch += 1
        x = k
        tlen = 0
        while True:
            s = memo[x]
            if s != 0:
                fill = _DEAD if s == _DEAD else _LEADS_TO_CYCLE
                for j in range(tlen):
                    memo[traj[j]] = fill
                break
            if stamp[x] == epoch:
                i = idxbuf[x]
                for j in range(i, tlen):
                    memo[traj[j]] = _ON_CYCLE
                for j in range(i):
                    memo[traj[j]] = _LEADS_TO_CYCLE
                break
            stamp[x] = epoch
            idxbuf[x] = tlen
            traj[tlen] = x
            tlen += 1
            if x % 4 == 0:
                x >>= 2
            elif (x + m) % 4 == 0:
                x = (x + m) >> 2
            else:
                for j in range(tlen):
                    memo[traj[j]] = _DEAD
                break


if _njit is not None:
    _resolve_walks_fast = _njit(cache=True)(_resolve_walks)
else:  # pragma: no cover
    _resolve_walks_fast = _resolve_walks


def _cycle_points_flat(m: int) -> list[int]:
    size = m // 3 + 1
    memo = np.zeros(size, dtype=np.int8)
    stamp = np.zeros(size, dtype=np.int32)
    idxbuf = np.empty(size, dtype=np.int32)
    traj = np.empty(size, dtype=np.int32)
    _resolve_walks_fast(m, memo, stamp, idxbuf, traj)
    return [int(v) for v in np.flatnonzero(memo == _ON_CYCLE)]


def _cycle_points_mapped(m: int) -> list[int]:
    # Same resolution as _resolve_walks but memoized in dicts, for moduli
    # too large for flat arrays.  Still O(m) work overall.
    memo: dict[int, int] = {}
    for k in range(1, m // 3 + 1):
        if k in memo:
            continue
        traj: list[int] = []
        pos: dict[int, int] = {}
        x = k
        while True:
            s = memo.get(x, _UNKNOWN)
            if s != _UNKNOWN:
                fill = _DEAD if s == _DEAD else _LEADS_TO_CYCLE
                for y in traj:
                    memo[y] = fill
                break
            if x in pos:
                i = pos[x]
                for y in traj[i:]:
                    memo[y] = _ON_CYCLE
                for y in traj[:i]:
                    memo[y] = _LEADS_TO_CYCLE
                break
            pos[x] = len(traj)
            traj.append(x)
            if x % 4 == 0:
                x >>= 2
            elif (x + m) % 4 == 0:
                x = (x + m) >> 2
            else:
                for y in traj:
                    memo[y] = _DEAD
                break
    return sorted(y for y, s in memo.items() if s == _ON_CYCLE)


def find_cycles(m: int) -> CycleInventory:
    """Exhaustively find every non-trivial cycle for odd m.

    Walks every start in [1, m//3] with memoized resolution, so each
    position is visited once.  Cycles are reported with the smallest point
    first and sorted by smallest point.  No classification shortcut is ever
    taken here; this is the oracle.
    """
    _require_odd(m)
    if m // 3 < 1:
        return CycleInventory(m, (), 0)
    if m <= FLAT_MEMO_LIMIT:
        on_cycle = _cycle_points_flat(m)
    else:
        on_cycle = _cycle_points_mapped(m)
    cycles = []
    seen: set[int] = set()
    for start in on_cycle:
        if start in seen:
            continue
        points = [start]
        digits = []
        x = start
        while True:
            nxt = step(x, m)
            if nxt is None:  # pragma: no cover - resolver guarantees a cycle
                raise DomainError(f"walk from cycle point {x} mod {m} is stuck")
            x, l = nxt
            digits.append(l)
            if x == start:
                break
            points.append(x)
        seen.update(points)
        cycles.append(ExtremeCycle(m, tuple(points), tuple(digits)))
    return CycleInventory(m, tuple(cycles), sum(c.length for c in cycles))


def coset_cycle_test(c: Coset) -> ExtremeCycle | None:
    """Try to realize a coset of <4> as a cycle.

    If every element is below m/2 the coset elements, ordered by the
    division-by-4 dynamics, should form a cycle; the walk is re-verified
    with digits in {0, m} rather than assumed, and None is returned when
    the elements are not all below m/2, the walk gets stuck, or it fails
    to traverse the coset exactly.
    """
    m = c.modulus
    _require_odd(m, minimum=5)
    if any(2 * x >= m for x in c.elements):
        return None
    start = c.elements[0]
    points = [start]
    digits = []
    x = start
    members = set(c.elements)
    for _ in range(len(c.elements)):
        nxt = step(x, m)
        if nxt is None:
            return None
        x, l = nxt
        digits.append(l)
        if x == start:
            break
        if x not in members:
            return None
        points.append(x)
    if x != start or set(points) != members:
        return None
    cycle = ExtremeCycle(m, tuple(points), tuple(digits))
    return cycle if validate_cycle(cycle) else None


def cycle_point_count_bound(m: int) -> int:
    """Strict upper bound for the number of non-trivial cycle points.

    Equals min over 0 <= n <= ceil(log4 m) of 2^n * ceil(m / (3 * 4^n)).
    Only valid for odd m >= 5 not divisible by 3.
    """
    _require_odd(m, minimum=5)
    if m % 3 == 0:
        raise DomainError(f"bound does not apply to multiples of 3, got {m}")
    best = None
    n = 0
    power = 1
    while True:
        value = (1 << n) * ((m + 3 * power - 1) // (3 * power))
        if best is None or value < best:
            best = value
        if power >= m:
            return best
        n += 1
        power <<= 2
