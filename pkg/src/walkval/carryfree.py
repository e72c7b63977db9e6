"""Sums of the multinomial coefficients ``n! / (x_1! ... x_r!)`` not divisible by ``p``.

By Kummer's theorem such a coefficient is prime to ``p`` exactly when the
parts add without carries, and it then equals
``Theta_p(n!) / prod Theta_p(x_j!)``.  So for every ``n < p**L`` at once,

    sum = Theta_p(n!) * [carry-free r-th power of g](n),   g(x) = Theta_p(x!)**-1,

with the power taken in the digitwise (no-carry) convolution algebra on
``[0, p)^L``.  Everything runs modulo ``p**K``, with ``K`` as large as the
int64 kernels allow.  A nonzero residue therefore certifies the exact
valuation, and a zero residue means "at least ``K``".
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import kernels
from .numth import check_prime, digits, multinomial, nu


def max_precision(p: int) -> int:
    """Largest ``K`` with ``p**K`` below the kernel modulus bound."""
    K = 0
    while p ** (K + 1) < kernels.MAX_MODULUS:
        K += 1
    return K


@dataclass(frozen=True)
class CarryFreeSums:
    p: int
    r: int
    precision: int
    residues: np.ndarray  # residues[n] = sum mod p**precision

    @property
    def n_max(self) -> int:
        return len(self.residues) - 1

    def residue(self, n: int) -> int:
        return int(self.residues[n])

    def valuation(self, n: int) -> int | None:
        """Exact ``nu_p`` of the sum at ``n``, or ``None`` if it is at least ``precision``."""
        v = int(self.residues[n])
        return nu(v, self.p) if v else None


@lru_cache(maxsize=32)
def carry_free_sums(p: int, r: int, n_max: int, precision: int | None = None) -> CarryFreeSums:
    check_prime(p)
    if r < 1:
        raise ValueError("need at least one part")
    K = max_precision(p) if precision is None else precision
    if not 1 <= K <= max_precision(p):
        raise ValueError(f"precision must lie in [1, {max_precision(p)}] for p={p}")
    mod = p**K
    L = len(digits(max(n_max, 1), p))
    size = p**L
    table = kernels.theta_factorial_table(p, size - 1, mod)
    g = np.array([pow(int(t), -1, mod) for t in table], dtype=np.int64)
    power = kernels.box_power(g, r, p, L, mod)
    res = (table[: n_max + 1] * power[: n_max + 1]) % mod
    res.setflags(write=False)
    return CarryFreeSums(p, r, K, res)


def carry_free_sum_exact(n: int, r: int, p: int) -> int:
    """The same sum by brute force over carry-free splittings, digit by digit."""
    check_prime(p)
    ds = digits(n, p)
    per_digit = [_compositions(d, r) for d in ds]
    total = 0
    for choice in product(*per_digit):
        parts = [0] * r
        for comp in choice:
            parts = [x * p + c for x, c in zip(parts, comp)]
        total += multinomial(n, parts)
    return total


def _compositions(d: int, r: int) -> list[tuple[int, ...]]:
    return list(_all_compositions(d, r))


def _all_compositions(n: int, r: int):
    if r == 1:
        yield (n,)
        return
    for x in range(n + 1):
        for rest in _all_compositions(n - x, r - 1):
            yield (x, *rest)


def carry_free_count(n: int, r: int, p: int) -> int:
    """Number of ordered carry-free splittings of ``n`` into ``r`` parts."""
    count = 1
    for d in digits(n, p):
        count *= len(_compositions(d, r))
    return count


__all__ = [
    "CarryFreeSums",
    "carry_free_count",
    "carry_free_sum_exact",
    "carry_free_sums",
    "max_precision",
]
