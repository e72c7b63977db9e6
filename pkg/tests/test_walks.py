import math

import pytest
from hypothesis import given, settings, strategies as st

from walkval.cache import SequenceCache
from walkval.numth import digit_sum, nu
from walkval.walks import (
    abelian_square_count,
    chan_zudilin_rhs,
    domb,
    gen_domb,
    grid_colorings,
    no_adjacent_ones,
    ones_before_zeros,
    split_identity_check,
    split_identity_rhs,
    theorem_bound,
    theorem_check,
    theorem_part,
    walk_count,
    walk_valuation,
)

import oracles


@pytest.mark.parametrize("d,n,want", [(1, 5, 1), (4, 1, 4), (4, 2, 28), (4, 3, 256)])
def test_abelian_square_count(d, n, want):
    assert abelian_square_count(d, n) == want


@pytest.mark.parametrize("d,n,want", [(2, 1, 4), (3, 1, 6), (4, 3, 5120)])
def test_walk_count(d, n, want):
    assert walk_count(d, n) == want


@pytest.mark.parametrize("d,n,want", [(4, 3, 10), (4, 23, 17), (3, 5, 2)])
def test_walk_valuation(d, n, want):
    assert walk_valuation(d, n).w == want


def test_walk_valuation_parts():
    v = walk_valuation(4, 3)
    assert (v.s, v.w_star, v.w) == (2, 8, 10)
    assert walk_valuation(4, 0) == type(v)(0, 0, 0)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_convolution_matches_brute_force(d):
    for n in range(0, 8):
        assert abelian_square_count(d, n) == oracles.wstar_direct(d, n)
        assert walk_count(d, n) == oracles.w_direct(d, n)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_half_dimension_sum(g):
    for n in range(0, 7):
        assert abelian_square_count(2 * g, n) == oracles.wstar_half_dimension_direct(g, n)


def test_walk_count_by_lattice_paths():
    # closed walks of Z^2 by stepping a distribution over positions
    def closed(d, steps):
        dist = {(0,) * d: 1}
        for _ in range(steps):
            nxt = {}
            for pos, c in dist.items():
                for j in range(d):
                    for s in (-1, 1):
                        q = list(pos)
                        q[j] += s
                        q = tuple(q)
                        nxt[q] = nxt.get(q, 0) + c
            dist = nxt
        return dist.get((0,) * d, 0)

    for d in (1, 2, 3):
        for n in range(5):
            assert walk_count(d, n) == closed(d, 2 * n)


@pytest.mark.parametrize("params,n,want", [((0, 0, 0), 5, 6), ((1, 0, 0), 5, 32), ((0, 1, 1), 3, 64)])
def test_gen_domb(params, n, want):
    assert gen_domb(params, n) == want


def test_domb_is_wstar4():
    for n in range(20):
        assert domb(n) == abelian_square_count(4, n)


@pytest.mark.parametrize("n,want", [(0, 1), (1, 4), (2, 28)])
def test_chan_zudilin(n, want):
    assert chan_zudilin_rhs(n) == want
    assert chan_zudilin_rhs(n) == sum(oracles.chan_zudilin_terms(n))


@pytest.mark.parametrize("a,b,n", [(4, 2, 3), (1, 3, 4), (2, 2, 0)])
def test_split_identity(a, b, n):
    assert split_identity_check(a, b, n)


def test_split_identity_rhs_brute():
    # b = 2 by direct double sum
    for a in (1, 2, 3):
        for n in range(6):
            direct = sum(math.comb(2 * n, 2 * x) * walk_count(a, x) * walk_count(a, n - x)
                         for x in range(n + 1))
            assert split_identity_rhs(a, 2, n) == direct


@pytest.mark.parametrize("k,l,n,want", [(1, 1, 1, 2), (2, 2, 2, 90)])
def test_grid_examples(k, l, n, want):
    assert grid_colorings(k, l, n) == want


@pytest.mark.parametrize("k,l", [(1, 0), (1, 1), (2, 1), (2, 2), (3, 0)])
def test_grid_brute_force(k, l):
    for n in range(0, 3):
        assert grid_colorings(k, l, n) == oracles.grid_colorings_brute(k, l, n)


def test_grid_bridge():
    for n in range(5):
        assert grid_colorings(1, 1, n) == grid_colorings(1, 0, n) == math.comb(2 * n, n)
        assert grid_colorings(2, 2, n) == walk_count(3, n)


def test_shape_predicates():
    assert no_adjacent_ones(5) and not no_adjacent_ones(6)
    assert ones_before_zeros(6) and ones_before_zeros(7) and not ones_before_zeros(5)


@pytest.mark.parametrize("d,n,bound,attained,predicted", [
    (4, 5, 6, True, True),
    (4, 3, 6, False, False),
    (8, 6, 7, True, True),
])
def test_theorem_check(d, n, bound, attained, predicted):
    t = theorem_check(d, n)
    assert (t.bound, t.attained, t.predicted) == (bound, attained, predicted)
    assert t.consistent


def test_theorem_part_and_bound():
    assert [theorem_part(d) for d in (3, 6, 12, 16)] == ["a", "b", "c", "d"]
    assert theorem_bound(16, 3) == 3 * 2 + 4 - 2
    with pytest.raises(ValueError):
        theorem_check(4, 0)


@settings(deadline=None, max_examples=40)
@given(st.integers(1, 40), st.integers(1, 60))
def test_bound_always_holds(d, n):
    assert walk_valuation(d, n).w >= theorem_bound(d, n)
    assert walk_valuation(d, n).w == digit_sum(n, 2) + nu(abelian_square_count(d, n), 2)


def test_cache_round_trip(tmp_path):
    cache = SequenceCache(tmp_path / "seq.tsv")
    cold = [abelian_square_count(5, n) for n in range(12)]
    assert abelian_square_count(5, 11, cache) == cold[11]
    assert cache.get("Wstar", "5", 11) == cold[11]
    again = SequenceCache(tmp_path / "seq.tsv")
    assert again.get("Wstar", "5", 7) == cold[7]
    assert walk_count(5, 11, again) == math.comb(22, 11) * cold[11]


@pytest.mark.parametrize("d", [1, 3, 4])
def test_walks_as_grid_colourings(d):
    for n in range(5):
        assert grid_colorings(1, d - 1, n) == walk_count(d, n)


def test_first_column_pair_up_to_eight():
    for n in range(9):
        assert grid_colorings(1, 0, n) == grid_colorings(1, 1, n) == math.comb(2 * n, n) == walk_count(1, n)
