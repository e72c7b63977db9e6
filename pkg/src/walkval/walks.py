"""Closed lattice walks, Abelian squares, Domb-type sums and grid colourings."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
import math
import operator
import threading
from typing import Sequence

from .cache import SequenceCache
from .errors import ResourceLimitError
from .numth import digit_sum, multinomial, nu

# ---------------------------------------------------------------------------
# W*_d(n): triangle of Abelian-square counts
# ---------------------------------------------------------------------------

# _TRIANGLE[a - 1][x] = W*_a(x); rows grow on demand, extended for every a at once
_TRIANGLE: list[list[int]] = []
_TRIANGLE_N = -1
_LOCK = threading.Lock()


def _binomial_squares(n: int) -> list[int]:
    row = [1] * (n + 1)
    for x in range(1, n + 1):
        row[x] = row[x - 1] * (n - x + 1) // x
    return [c * c for c in row]


def _extend_triangle(d: int, n: int) -> None:
    global _TRIANGLE_N
    with _LOCK:
        while len(_TRIANGLE) < d:
            a = len(_TRIANGLE) + 1
            if a == 1:
                _TRIANGLE.append([1] * (_TRIANGLE_N + 1))
            else:
                prev = _TRIANGLE[a - 2]
                _TRIANGLE.append([sum(map(operator.mul, _binomial_squares(m), prev[: m + 1]))
                                  for m in range(_TRIANGLE_N + 1)])
        for m in range(_TRIANGLE_N + 1, n + 1):
            sq = _binomial_squares(m)
            _TRIANGLE[0].append(1)
            for a in range(1, len(_TRIANGLE)):
                prev = _TRIANGLE[a - 1]
                _TRIANGLE[a].append(sum(map(operator.mul, sq, prev[: m + 1])))
        _TRIANGLE_N = max(_TRIANGLE_N, n)


def _check_dn(d: int, n: int) -> None:
    if d < 1:
        raise ValueError("dimension must be at least 1")
    if n < 0:
        raise ValueError("n must be nonnegative")


def abelian_square_count(d: int, n: int, cache: SequenceCache | None = None) -> int:
    """``W*_d(n)``: via ``W*_{a+1}(n) = sum_x C(n,x)**2 W*_a(x)``, ``W*_1 = 1``."""
    _check_dn(d, n)
    if cache is not None:
        hit = cache.get("Wstar", str(d), n)
        if hit is not None:
            return hit
    if len(_TRIANGLE) < d or _TRIANGLE_N < n:
        _extend_triangle(d, n)
    value = _TRIANGLE[d - 1][n]
    if cache is not None:
        cache.put_many(("Wstar", str(a), x, _TRIANGLE[a - 1][x])
                       for a in range(1, d + 1) for x in range(n + 1))
    return value


def walk_count(d: int, n: int, cache: SequenceCache | None = None) -> int:
    """``W_d(n)``: closed ``2n``-step walks on ``Z^d``."""
    value = math.comb(2 * n, n) * abelian_square_count(d, n, cache)
    if cache is not None:
        cache.put_many([("W", str(d), n, value)])
    return value


@dataclass(frozen=True)
class WalkValuation:
    w: int
    w_star: int
    s: int


def walk_valuation(d: int, n: int, cache: SequenceCache | None = None) -> WalkValuation:
    """2-adic valuations of ``W_d(n)`` and ``W*_d(n)``; ``(0, 0, 0)`` at ``n = 0``."""
    _check_dn(d, n)
    if n == 0:
        return WalkValuation(0, 0, 0)
    w_star = nu(abelian_square_count(d, n, cache), 2)
    s = digit_sum(n, 2)
    return WalkValuation(s + w_star, w_star, s)


# ---------------------------------------------------------------------------
# Domb numbers and relatives
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _central(x: int) -> int:
    return math.comb(2 * x, x)


def gen_domb(params: Sequence[int], n: int) -> int:
    """``D_{a,b,c}(n) = sum_{x+y=n} C(n,x)**a C(2x,x)**b C(2y,y)**c``."""
    a, b, c = params
    if min(a, b, c) < 0:
        raise ValueError("parameters must be nonnegative")
    if n < 0:
        raise ValueError("n must be nonnegative")
    return sum(math.comb(n, x) ** a * _central(x) ** b * _central(n - x) ** c
               for x in range(n + 1))


def domb(n: int) -> int:
    return gen_domb((2, 1, 1), n)


def chan_zudilin_rhs(n: int) -> int:
    """``sum_{x+y=n} (-1)**x C(2x,x) (3x+y)!/(x!**3 y!) 16**y``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    total = 0
    for x in range(n + 1):
        y = n - x
        term = _central(x) * multinomial(3 * x + y, [x, x, x, y]) * 16**y
        total += -term if x & 1 else term
    return total


def split_identity_rhs(a: int, b: int, n: int) -> int:
    """``sum_{x_1+...+x_b=n} (2n)!/prod (2x_i)! * prod W_a(x_i)``."""
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive")
    wa = [walk_count(a, x) for x in range(n + 1)]
    g = wa[:]
    for _ in range(b - 1):
        g = [sum(math.comb(2 * m, 2 * x) * wa[x] * g[m - x] for x in range(m + 1))
             for m in range(n + 1)]
    return g[n]


def split_identity_check(a: int, b: int, n: int) -> bool:
    return walk_count(a * b, n) == split_identity_rhs(a, b, n)


# ---------------------------------------------------------------------------
# balanced grid colourings
# ---------------------------------------------------------------------------

DEFAULT_GRID_STATE_LIMIT = 10**6


def grid_colorings(k: int, l: int, n: int, limit: int = DEFAULT_GRID_STATE_LIMIT) -> int:
    """``U_{k,l}(n)``: 2-colourings of a ``2n x (k+l)`` grid.

    Every row has ``k`` cells of one colour and ``l`` of the other, and
    every column has ``n`` cells of each colour.  Column counts are
    exchangeable, so the dynamic programme over rows keeps one entry per
    orbit of black-count vectors: the number of row sequences reaching
    any single vector of that orbit.
    """
    if k < 0 or l < 0 or k + l < 1:
        raise ValueError("need k, l >= 0 with k + l >= 1")
    if n < 0:
        raise ValueError("n must be nonnegative")
    m = k + l
    rows = [frozenset(c) for s in sorted({k, l}) for c in combinations(range(m), s)]
    counts = {(0,) * m: 1}
    for t in range(1, 2 * n + 1):
        # total over whole orbits, then divide by the target orbit size
        totals: dict[tuple, int] = {}
        for state, ways in counts.items():
            weight = ways * _orbit_size(state)
            for row in rows:
                new = [c + (j in row) for j, c in enumerate(state)]
                if any(c > n or t - c > n for c in new):
                    continue
                key = tuple(sorted(new))
                totals[key] = totals.get(key, 0) + weight
        counts = {key: v // _orbit_size(key) for key, v in totals.items()}
        if len(counts) > limit:
            raise ResourceLimitError("grid colouring states", limit, len(counts))
    return counts.get((n,) * m, 0)


def _orbit_size(vec: Sequence[int]) -> int:
    out = math.factorial(len(vec))
    for v in set(vec):
        out //= math.factorial(list(vec).count(v))
    return out


# ---------------------------------------------------------------------------
# the valuation theorem for W_d(n)
# ---------------------------------------------------------------------------


def no_adjacent_ones(n: int) -> bool:
    return n & (n >> 1) == 0


def ones_before_zeros(n: int) -> bool:
    """True when the binary expansion of ``n >= 1`` has the shape ``1...10...0``."""
    if n < 1:
        return False
    m = n >> nu(n, 2)
    return m & (m + 1) == 0


def theorem_bound(d: int, n: int) -> int:
    s = digit_sum(n, 2)
    v = nu(d, 2)
    if v <= 2:
        return (v + 1) * s
    return 3 * s + v - 2


def theorem_part(d: int) -> str:
    return "abcd"[min(nu(d, 2), 3)]


@dataclass(frozen=True)
class TheoremCheck:
    part: str
    w: int
    bound: int
    attained: bool
    predicted: bool

    @property
    def consistent(self) -> bool:
        return self.w >= self.bound and self.attained == self.predicted


def theorem_check(d: int, n: int, cache: SequenceCache | None = None) -> TheoremCheck:
    """Compare ``w_d(n)`` with its lower bound and the predicted equality cases."""
    if n < 1:
        raise ValueError("the bound is stated for n >= 1")
    if d < 1:
        raise ValueError("dimension must be at least 1")
    part = theorem_part(d)
    w = walk_valuation(d, n, cache).w
    bound = theorem_bound(d, n)
    if part in "ab":
        predicted = True
    elif part == "c":
        predicted = no_adjacent_ones(n)
    else:
        predicted = ones_before_zeros(n)
    return TheoremCheck(part, w, bound, w == bound, predicted)


__all__ = [
    "SequenceCache",
    "TheoremCheck",
    "WalkValuation",
    "abelian_square_count",
    "chan_zudilin_rhs",
    "domb",
    "gen_domb",
    "grid_colorings",
    "no_adjacent_ones",
    "ones_before_zeros",
    "split_identity_check",
    "split_identity_rhs",
    "theorem_bound",
    "theorem_check",
    "theorem_part",
    "walk_count",
    "walk_valuation",
]
