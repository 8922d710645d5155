import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantorspec import (
    DomainError,
    FactoredInteger,
    factorize,
    group_of_4,
    is_prime,
    order_by_formula,
    order_of_4,
    simplicity_index,
    totient,
)
from cantorspec.modmath import (
    coset_of,
    order_of_4_by_refinement,
    order_of_4_direct,
)

odd_moduli = st.integers(min_value=1, max_value=10**6).map(lambda n: 2 * n + 1)


def test_factorize_known_values():
    f = factorize(360)
    assert f.factors == ((2, 3), (3, 2), (5, 1))
    assert factorize(1).factors == ()
    assert factorize(97).is_prime_power()
    assert factorize(1093**2).factors == ((1093, 2),)


def test_factored_integer_rejects_malformed_input():
    with pytest.raises(DomainError):
        FactoredInteger(12, ((3, 1), (2, 2)))
    with pytest.raises(DomainError):
        FactoredInteger(12, ((2, 2), (3, 0)))
    with pytest.raises(DomainError):
        FactoredInteger(10, ((2, 1), (3, 1)))


def test_divisors_of_a_small_composite():
    assert factorize(45).divisors() == (1, 3, 5, 9, 15, 45)
    assert factorize(1).divisors() == (1,)


@given(st.integers(min_value=1, max_value=10**9))
def test_factorize_round_trips(n):
    f = factorize(n)
    assert math.prod(p**k for p, k in f.factors) == n
    assert f.value == n


@given(st.integers(min_value=2, max_value=10**6))
def test_is_prime_matches_factorization(n):
    assert is_prime(n) == (factorize(n).factors == ((n, 1),))


def test_order_of_4_small_values():
    assert order_of_4(1).order == 1
    assert order_of_4(3).order == 1
    assert order_of_4(5).order == 2
    assert order_of_4(7).order == 3
    assert order_of_4(17).order == 4
    assert order_of_4(1093).order == 182


def test_order_of_4_rejects_even_or_nonpositive():
    for bad in (0, -3, 4, 10):
        with pytest.raises(DomainError):
            order_of_4(bad)


@given(odd_moduli)
@settings(max_examples=200, deadline=None)
def test_order_routes_agree(m):
    direct = order_of_4_direct(m)
    refined = order_of_4_by_refinement(m)
    assert direct == refined
    assert pow(4, direct, m) == 1 % m
    for q in {direct // p for p in factorize(direct).primes}:
        assert pow(4, q, m) != 1 % m


@given(odd_moduli)
@settings(max_examples=200, deadline=None)
def test_order_formula_matches_iteration(m):
    assert order_by_formula(factorize(m)) == order_of_4(m).order


def test_order_of_4_cross_check_runs_both_routes():
    assert order_of_4(3**7 * 5, cross_check=True).order == order_of_4_direct(3**7 * 5)


def test_order_above_direct_limit_uses_refinement():
    m = 2**31 - 1
    record = order_of_4(m, cross_check=True)
    assert pow(4, record.order, m) == 1


def test_simplicity_index_values():
    assert simplicity_index(5) == 1
    assert simplicity_index(7) == 1
    assert simplicity_index(1093) == 2
    with pytest.raises(DomainError):
        simplicity_index(9)


@given(st.sampled_from([3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43]))
def test_simplicity_index_by_definition(p):
    index = simplicity_index(p)
    assert order_of_4(p**index).order == order_of_4(p).order
    assert order_of_4(p ** (index + 1)).order > order_of_4(p).order


@given(odd_moduli)
@settings(max_examples=100, deadline=None)
def test_totient_counts_units(m):
    f = factorize(m)
    assert totient(f) == math.prod((p - 1) * p ** (k - 1) for p, k in f.factors)


def test_group_of_4_is_the_cyclic_group_of_4():
    g = group_of_4(63)
    assert len(g) == order_of_4(63).order
    assert set(g.elements) == {pow(4, j, 63) for j in range(len(g))}
    assert 4 in g and 1 in g


def test_coset_of_translates_the_group():
    g = group_of_4(85)
    c = coset_of(85, 7)
    assert len(c) == len(g)
    assert set(c.elements) == {7 * e % 85 for e in g.elements}
    with pytest.raises(DomainError):
        coset_of(85, 0)


@given(st.integers(min_value=1, max_value=500).map(lambda n: 2 * n + 1))
@settings(max_examples=50, deadline=None)
def test_cosets_partition_units(m):
    g = group_of_4(m)
    seen = set()
    for x in range(1, m):
        if math.gcd(x, m) != 1 or x in seen:
            continue
        seen.update(coset_of(m, x).elements)
    assert len(seen) == totient(factorize(m))
