"""Floating-point cross-checks for the integer machinery.

mu_hat evaluates the truncated infinite-product transform of the measure.
For integer arguments the phase angles are computed with exact integer
arithmetic, so structural zeros (a factor whose angle is exactly 1/2)
come out as exact complex zeros instead of values on the order of the
truncation error.  Angles are reduced mod 1 before any trigonometric
call; raw frequency differences reach 4e6 * m and would lose precision
otherwise.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .modmath import _require_odd

DEFAULT_DEPTH = 40


def mu_hat(t: float | int, depth: int = DEFAULT_DEPTH) -> complex:
    """Partial product over k <= depth of (1 + exp(2 pi i 2t/4^k)) / 2.

    Integer t keeps the angles exact, so a vanishing factor returns
    exactly 0j.
    """
    if not isinstance(depth, int) or depth < 1:
        raise DomainError(f"depth must be a positive integer, got {depth!r}")
    if isinstance(t, (int, np.integer)) and not isinstance(t, (bool, np.bool_)):
        value = 1.0 + 0.0j
        doubled = 2 * int(t)
        for k in range(1, depth + 1):
            num = doubled % 4**k
            if num == 0:
                continue
            if 2 * num == 4**k:
                return 0j
            value *= (1.0 + cmath.exp(2j * math.pi * (num / 4**k))) / 2.0
        return value
    x = float(t)
    value = 1.0 + 0.0j
    for _ in range(depth):
        x /= 4.0
        angle = math.fmod(2.0 * x, 1.0)
        if abs(angle) == 0.5:
            return 0j
        value *= (1.0 + cmath.exp(2j * math.pi * angle)) / 2.0
    return value


def cycle_modulus(x: float | int) -> float:
    """|(1 + exp(2 pi i 2x)) / 2|, the modulus of a single product factor.

    Equals 1 exactly when x is an integer, which is what makes integer
    cycle points special.
    """
    if isinstance(x, (int, np.integer)) and not isinstance(x, (bool, np.bool_)):
        return 1.0
    angle = math.fmod(2.0 * float(x), 1.0)
    return abs(1.0 + cmath.exp(2j * math.pi * angle)) / 2.0


@dataclass(frozen=True)
class TruncatedTransform:
    """mu_hat at a fixed truncation depth, as a callable."""

    depth: int = DEFAULT_DEPTH

    def __post_init__(self) -> None:
        if not isinstance(self.depth, int) or self.depth < 1:
            raise DomainError(
                f"depth must be a positive integer, got {self.depth!r}"
            )

    def __call__(self, t: float | int) -> complex:
        return mu_hat(t, self.depth)


@dataclass(frozen=True)
class SpectrumTruncation:
    """The level-n truncation of the candidate spectrum for modulus m.

    Elements are all sums sum_{k < level} c_k 4^k with c_k in {0, m}:
    the raw integer frequencies.
    """

    modulus: int
    level: int

    def __post_init__(self) -> None:
        _require_odd(self.modulus)
        if not isinstance(self.level, int) or self.level < 0:
            raise DomainError(
                f"level must be a non-negative integer, got {self.level!r}"
            )

    @property
    def elements(self) -> tuple[int, ...]:
        out = [0]
        for k in range(self.level):
            shift = self.modulus * 4**k
            out = out + [e + shift for e in out]
        return tuple(sorted(out))

    def __len__(self) -> int:
        return 2**self.level


def gram_matrix(s: SpectrumTruncation, depth: int | None = None) -> np.ndarray:
    """Gram matrix of the exponentials indexed by s.

    Entry (i, j) is mu_hat(freq_i - freq_j, depth); the diagonal is
    exactly 1.  The depth must reach the vanishing factor of every
    pairwise difference: 4**depth > m * 4**(2*level), which is also the
    default.  The off-diagonal zeros are structural, not asymptotic, so
    the minimal depth already gives exact zeros.
    """
    m = s.modulus
    needed = 1
    while 4**needed <= m * 4 ** (2 * s.level):
        needed += 1
    if depth is None:
        depth = needed
    elif not isinstance(depth, int) or depth < needed:
        raise DomainError(
            f"depth {depth!r} cannot resolve level {s.level} at modulus {m}; "
            f"need at least {needed}"
        )
    freqs = s.elements
    n = len(freqs)
    out = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        out[i, i] = 1.0
        for j in range(i + 1, n):
            value = mu_hat(freqs[i] - freqs[j], depth)
            out[i, j] = value
            out[j, i] = value.conjugate()
    return out
