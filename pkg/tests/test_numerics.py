import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantorspec import (
    DomainError,
    SpectrumTruncation,
    TruncatedTransform,
    find_cycles,
    gram_matrix,
    mu_hat,
)
from cantorspec.numerics import cycle_modulus

finite_reals = st.floats(
    min_value=-1e8, max_value=1e8, allow_nan=False, allow_infinity=False
)


def test_mu_hat_trivial_points():
    for depth in (1, 5, 40):
        assert mu_hat(0, depth) == 1
    assert mu_hat(1, 1) == 0
    assert mu_hat(1, 40) == 0
    assert mu_hat(4, 2) == 0
    assert mu_hat(4, 40) == 0
    assert mu_hat(-4, 40) == 0
    with pytest.raises(DomainError):
        mu_hat(1, 0)


def test_mu_hat_integer_zeros_are_exact():
    for v in range(0, 8):
        for u in (1, 3, 5, 85, -3, -85):
            assert mu_hat(u * 4**v, 60) == 0
    for t in (2, 6, 10, 2 * 4**5):
        assert abs(mu_hat(t, 60)) > 1e-18


@given(finite_reals, st.integers(min_value=1, max_value=60))
@settings(max_examples=300, deadline=None)
def test_mu_hat_bounded_by_one(t, depth):
    assert abs(mu_hat(t, depth)) <= 1.0 + 1e-12


@given(finite_reals, st.integers(min_value=1, max_value=40))
@settings(max_examples=200, deadline=None)
def test_mu_hat_modulus_non_increasing_in_depth(t, depth):
    assert abs(mu_hat(t, depth + 1)) <= abs(mu_hat(t, depth)) + 1e-12


@given(
    st.floats(min_value=-50.0, max_value=50.0, allow_nan=False),
    st.integers(min_value=1, max_value=40),
)
@settings(max_examples=200, deadline=None)
def test_refinement_identity(t, depth):
    lhs = mu_hat(t, depth + 1)
    rhs = (1 + cmath.exp(1j * math.pi * t)) / 2 * mu_hat(t / 4, depth)
    assert abs(lhs - rhs) <= 1e-12


def test_truncated_transform_is_a_callable_view():
    f = TruncatedTransform(25)
    assert f(0) == 1
    assert f(4) == mu_hat(4, 25)
    with pytest.raises(DomainError):
        TruncatedTransform(0)


def test_cycle_modulus_values():
    assert cycle_modulus(3) == 1.0
    assert cycle_modulus(-17) == 1.0
    assert cycle_modulus(0.25) == pytest.approx(0.0, abs=1e-15)
    assert cycle_modulus(1 / 3) == pytest.approx(0.5, abs=1e-12)


def test_cycle_points_have_unit_modulus():
    for m in (3, 85, 341, 455):
        for cycle in find_cycles(m).cycles:
            for x in cycle.points:
                assert cycle_modulus(x) == 1.0


def test_spectrum_truncation_elements():
    s = SpectrumTruncation(3, 2)
    assert s.elements == (0, 3, 12, 15)
    assert len(s) == 4
    assert SpectrumTruncation(1, 0).elements == (0,)
    big = SpectrumTruncation(85, 4)
    assert len(set(big.elements)) == 16
    assert all(e >= 0 for e in big.elements)
    with pytest.raises(DomainError):
        SpectrumTruncation(4, 2)
    with pytest.raises(DomainError):
        SpectrumTruncation(3, -1)


def test_gram_matrix_is_the_identity_with_exact_zeros():
    for m, level in ((1, 2), (3, 2), (1, 0)):
        g = gram_matrix(SpectrumTruncation(m, level))
        n = 2**level
        assert g.shape == (n, n)
        assert np.array_equal(g, np.eye(n, dtype=np.complex128))


def test_gram_matrix_depth_control():
    s = SpectrumTruncation(3, 2)
    with pytest.raises(DomainError):
        gram_matrix(s, 4)
    g = gram_matrix(s, 12)
    assert np.array_equal(g, np.eye(4, dtype=np.complex128))


def test_gram_matrix_is_hermitian_by_construction():
    g = gram_matrix(SpectrumTruncation(85, 2))
    assert np.array_equal(g, g.conj().T)
