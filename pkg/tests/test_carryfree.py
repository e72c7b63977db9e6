import pytest
from hypothesis import given, settings, strategies as st

from walkval.carryfree import carry_free_count, carry_free_sum_exact, carry_free_sums, max_precision
from walkval.numth import nu

import oracles


def _check_valuation(sums, n, exact):
    v = nu(exact, sums.p)
    if v < sums.precision:
        assert sums.valuation(n) == v
    else:
        assert sums.valuation(n) is None


@pytest.mark.parametrize("p,r", [(2, 2), (2, 4), (3, 3), (3, 6), (5, 5), (2, 3)])
def test_matches_brute_force(p, r):
    top = 40 if r <= 3 else 20
    sums = carry_free_sums(p, r, top)
    for n in range(top + 1):
        brute = oracles.non_divisible_multinomial_sum(n, r, p)
        assert carry_free_sum_exact(n, r, p) == brute
        assert sums.residue(n) == brute % p**sums.precision
        _check_valuation(sums, n, brute)


def test_odd_binomials():
    sums = carry_free_sums(2, 2, 300)
    for n in range(301):
        _check_valuation(sums, n, oracles.odd_binomial_sum(n))
    # 2**31 sits above the modulus, so only the lower bound is known
    assert sums.valuation(31) is None


def test_precision():
    assert 2 ** max_precision(2) < 2**31 <= 2 ** (max_precision(2) + 1)
    with pytest.raises(ValueError):
        carry_free_sums(2, 2, 10, precision=40)
    low = carry_free_sums(2, 2, 64, precision=2)
    # 3 = 11 in binary: odd binomials of row 3 sum to 8
    assert low.residue(3) == 0 and low.valuation(3) is None


def test_count():
    # each binary 1 goes to one of r parts
    assert carry_free_count(0b1011, 4, 2) == 4**3
    assert carry_free_count(5, 3, 3) == 3 * 6


@settings(deadline=None, max_examples=50)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(0, 200))
def test_exact_sum_coprime_parts_only(p, r, n):
    total = carry_free_sum_exact(n, r, p)
    assert total > 0
    assert carry_free_sums(p, r, 200).residue(n) == total % p ** max_precision(p)
