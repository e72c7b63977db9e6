import math

import pytest
from hypothesis import given, strategies as st

from walkval.numth import (
    check_prime,
    digit_sum,
    digits,
    factorial,
    from_digits,
    is_carry_free,
    multinomial,
    multinomial_valuation,
    nonzero_digit_count,
    nu,
    theta,
)

import oracles

primes = st.sampled_from([2, 3, 5, 7, 11])


@pytest.mark.parametrize("n,p,want", [(7, 2, 3), (12, 2, 2), (9, 3, 1), (0, 2, 0)])
def test_digit_sum(n, p, want):
    assert digit_sum(n, p) == want


@pytest.mark.parametrize("n,p,want", [(8, 2, 1), (5, 3, 2), (0, 5, 0)])
def test_nonzero_digit_count(n, p, want):
    assert nonzero_digit_count(n, p) == want


@pytest.mark.parametrize("n,p,want", [(48, 2, 4), (28, 2, 2), (1680, 3, 1)])
def test_nu(n, p, want):
    assert nu(n, p) == want


@pytest.mark.parametrize("n,p,want", [(48, 2, 3), (720, 2, 45), (7, 5, 7)])
def test_theta(n, p, want):
    assert theta(n, p) == want


@pytest.mark.parametrize("n,parts,want", [(4, [2, 2], 6), (3, [1, 1, 1], 6), (9, [3, 3, 3], 1680)])
def test_multinomial(n, parts, want):
    assert multinomial(n, parts) == want


@pytest.mark.parametrize("n,parts,p,want", [(4, [2, 2], 2, 1), (9, [3, 3, 3], 3, 1), (6, [3, 3], 2, 2)])
def test_multinomial_valuation(n, parts, p, want):
    assert multinomial_valuation(n, parts, p) == want


@pytest.mark.parametrize("n,parts,p,want", [(5, [4, 1], 2, True), (3, [1, 2], 2, True), (2, [1, 1], 2, False)])
def test_is_carry_free(n, parts, p, want):
    assert is_carry_free(n, parts, p) is want


def test_errors():
    with pytest.raises(ValueError):
        nu(0, 2)
    with pytest.raises(ValueError):
        check_prime(4)
    with pytest.raises(ValueError):
        digits(-1, 2)
    with pytest.raises(ValueError):
        multinomial(5, [2, 2])


def test_digits_roundtrip_zero():
    assert digits(0, 3) == [0]
    assert digits(13, 2) == [1, 1, 0, 1]
    assert from_digits([1, 2, 0], 3) == 15


@given(st.integers(0, 10**30), primes)
def test_digits_roundtrip(n, p):
    ds = digits(n, p)
    assert from_digits(ds, p) == n
    assert all(0 <= d < p for d in ds)
    assert sum(ds) == digit_sum(n, p) == oracles.digit_sum(n, p)


@given(st.integers(1, 10**40), primes)
def test_nu_theta_split(n, p):
    assert p ** nu(n, p) * theta(n, p) == n
    assert theta(n, p) % p
    assert nu(n, p) == oracles.valuation(n, p)


@given(st.integers(0, 300), primes)
def test_legendre(n, p):
    # nu_p(n!) = (n - s_p(n)) / (p - 1)
    assert nu(factorial(n), p) == (n - digit_sum(n, p)) // (p - 1)
    assert factorial(n) == math.factorial(n)


@given(st.lists(st.integers(0, 40), min_size=1, max_size=5), primes)
def test_kummer_against_factorisation(parts, p):
    n = sum(parts)
    m = multinomial(n, parts)
    assert m == oracles.multinomial(n, parts)
    assert multinomial_valuation(n, parts, p) == oracles.valuation(m, p)
    assert is_carry_free(n, parts, p) == (m % p != 0)
