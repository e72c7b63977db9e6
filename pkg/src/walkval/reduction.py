"""One-letter reductions of sums over abaci, carried out modulo ``p**2``.

Write ``S(e, T, P)`` for the sum over all vectors of type ``T`` of
``P(x) * prod_i (psi_i(x_1) ... psi_i(x_r)) ** e_i`` with
``psi_i(x) = Theta_p((p**i x)!)``.  Peeling the rightmost letter ``I``
off ``T`` gives

    S(e, T I, P) = p**lam(I) * S(shift e, T, Q_I),
    Q_I(x) = p**-lam(I) * sum_{a in rho(I)} P(p x + a) * Psi^e_a(x),

where ``psi_i(p x + a) = psi_{i+1}(x) * Psi_{i,a}(x)``.  Modulo ``p**2``
every ``Psi_{i,a}`` is linear and depends on ``i`` only through a short
period, so ``Q_I mod p`` is a function of ``P mod p`` and a three-entry
fold of ``e``.  That finite amount of state is what the automata in
:mod:`walkval.automaton` run on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math
from typing import Callable, Sequence

from .abacus import AbacusAlphabet, AbacusType, Letter, _letter_stats
from .numth import check_prime, theta
from .poly import Poly


# ---------------------------------------------------------------------------
# Psi_{i,a} modulo p^2
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def psi_linear(i: int, a: int, p: int) -> tuple[int, int]:
    """``(u, v)`` with ``Psi_{i,a}(x) = u + v x  (mod p**2)``.

    Every factor ``p**(i+1-nu(j)) x + Theta(j)`` has a slope divisible by
    ``p``, so products of two slopes vanish and the product stays linear.
    """
    check_prime(p)
    if not 0 <= a < p:
        raise ValueError(f"digit {a} out of range for p={p}")
    if i < 0:
        raise ValueError("level must be nonnegative")
    i = _canonical_level(i, p)
    m = p * p
    u, v = 1, 0
    for j in range(1, a * p**i + 1):
        t = theta(j, p)
        slope = p ** (i + 1 - _nu_small(j, p))
        u, v = (u * t) % m, (v * t + u * slope) % m
    return u, v


def _canonical_level(i: int, p: int) -> int:
    # p = 2: Psi_i agrees mod 4 for all i >= 2.  Odd p: Psi_i == Psi_{i+2} for i >= 1.
    if p == 2:
        return min(i, 2)
    return i if i <= 2 else 2 - (i % 2)


def _nu_small(j: int, p: int) -> int:
    v = 0
    while j % p == 0:
        j //= p
        v += 1
    return v


def psi_poly(i: int, a: int, p: int) -> Poly:
    """``Psi_{i,a}`` modulo ``p**2`` as a univariate polynomial."""
    u, v = psi_linear(i, a, p)
    return Poly(1, {(0,): u, (1,): v}, p * p)


def psi_exact(i: int, a: int, p: int, x: int, mod: int | None = None) -> int:
    """Exact value of ``Psi_{i,a}(x)`` from its factorisation (reduced mod ``mod`` if given)."""
    out = 1
    for j in range(1, a * p**i + 1):
        out *= theta(p ** (i + 1) * x + j, p)
        if mod is not None:
            out %= mod
    return out


# ---------------------------------------------------------------------------
# folds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Fold:
    """Exponent data that survives reduction mod ``p**2``.

    ``p = 2``: ``(e_0, e_1, e_2 + e_3 + ...)`` modulo 2.
    Odd ``p``: ``(e_0, e_1 + e_3 + ..., e_2 + e_4 + ...)`` modulo ``p**2 - p``.
    """

    p: int
    components: tuple[int, int, int]

    def __post_init__(self):
        per = self.period
        object.__setattr__(self, "components", tuple(int(c) % per for c in self.components))
        if len(self.components) != 3:
            raise ValueError("a fold has three components")

    @property
    def period(self) -> int:
        return 2 if self.p == 2 else self.p * self.p - self.p

    @classmethod
    def from_exponents(cls, e: Sequence[int], p: int) -> "Fold":
        check_prime(p)
        e = list(e)
        e0 = e[0] if e else 0
        if p == 2:
            return cls(p, (e0, e[1] if len(e) > 1 else 0, sum(e[2:])))
        return cls(p, (e0, sum(e[1::2]), sum(e[2::2])))

    def shift(self) -> "Fold":
        """Fold of ``(0, e_0, e_1, ...)``, computed from this fold alone."""
        f0, f1, f2 = self.components
        if self.p == 2:
            return Fold(2, (0, f0, f1 + f2))
        return Fold(self.p, (0, f0 + f2, f1))

    def levels(self) -> tuple[tuple[int, int], ...]:
        """``(representative level, exponent)`` pairs that reproduce ``Psi^e`` mod ``p**2``."""
        return tuple(zip((0, 1, 2), self.components))

    def label(self) -> str:
        return "(" + ",".join(map(str, self.components)) + ")"


def shift_exponents(e: Sequence[int]) -> tuple[int, ...]:
    return (0, *e)


def _linear_power(u: int, v: int, k: int, m: int) -> tuple[int, int]:
    # (u + v x)**k with p | v, modulo m = p**2: binomial terms past the linear one vanish
    if k == 0:
        return 1 % m, 0
    return pow(u, k, m), (k * pow(u, k - 1, m) * v) % m


@lru_cache(maxsize=None)
def _digit_factor(fold: Fold, a: int) -> tuple[int, int]:
    """``prod_c Psi_{c,a}(x) ** f_c`` modulo ``p**2`` as ``(u, v)``."""
    p = fold.p
    m = p * p
    u, v = 1, 0
    for level, k in fold.levels():
        if not k:
            continue
        pu, pv = _linear_power(*psi_linear(level, a, p), k, m)
        u, v = (u * pu) % m, (u * pv + v * pu) % m
    return u, v


def psi_product_linear(fold: Fold, a: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """``Psi^e_a(x)`` modulo ``p**2`` as ``(constant, per-variable slopes)``."""
    m = fold.p ** 2
    factors = [_digit_factor(fold, d) for d in a]
    const = 1
    for u, _ in factors:
        const = const * u % m
    slopes = []
    for j, (_, v) in enumerate(factors):
        s = v
        for k, (u, _) in enumerate(factors):
            if k != j:
                s = s * u % m
        slopes.append(s)
    return const, tuple(slopes)


def psi_product(fold: Fold, a: Sequence[int]) -> Poly:
    """``Psi^e_a`` modulo ``p**2`` as a polynomial in ``len(a)`` variables."""
    r = len(a)
    const, slopes = psi_product_linear(fold, a)
    terms = {(0,) * r: const}
    for j, s in enumerate(slopes):
        terms[tuple(int(k == j) for k in range(r))] = s
    return Poly(r, terms, fold.p ** 2)


# ---------------------------------------------------------------------------
# the reduction step
# ---------------------------------------------------------------------------


def _value_and_gradient(P: Poly, a: Sequence[int], m: int) -> tuple[int, list[int]]:
    val = 0
    grad = [0] * P.r
    for exp, c in P.items():
        t = c
        for x, k in zip(a, exp):
            if k:
                t *= x**k
        val += t
        for j, k in enumerate(exp):
            if not k:
                continue
            g = c * k
            for jj, (x, kk) in enumerate(zip(a, exp)):
                kk = kk - 1 if jj == j else kk
                if kk:
                    g *= x**kk
            grad[j] += g
    return val % m, [g % m for g in grad]


def _mod_p(P: Poly, p: int) -> Poly:
    if P.modulus is not None and P.modulus % p:
        raise ValueError(f"polynomial known mod {P.modulus} has no reduction mod {p}")
    return P.reduce(p)


@dataclass(frozen=True)
class LetterReduction:
    q: Poly
    lam: int


def reduce_letter(P: Poly, fold: Fold, letter: Letter, alphabet: AbacusAlphabet) -> LetterReduction:
    """``Q_I mod p`` from ``P mod p`` and the fold, plus the power ``lam(I)`` split off."""
    if P.r != alphabet.r:
        raise ValueError("polynomial and alphabet disagree on r")
    if fold.p != alphabet.p:
        raise ValueError("fold and alphabet disagree on p")
    return _reduce_letter(_mod_p(P, alphabet.p), fold, letter, alphabet)


@lru_cache(maxsize=1 << 16)
def _reduce_letter(P: Poly, fold: Fold, letter: Letter, alphabet: AbacusAlphabet) -> LetterReduction:
    p, r = alphabet.p, alphabet.r
    m = p * p
    lam = _letter_stats(alphabet, letter).lam
    Plift = P.lift()
    const = 0
    slopes = [0] * r
    # P(p x + a) = P(a) + p * grad P(a) . x   (mod p^2)
    for a in alphabet.rho(letter):
        val, grad = _value_and_gradient(Plift, a, m)
        u, vs = psi_product_linear(fold, a)
        const = (const + val * u) % m
        for j in range(r):
            slopes[j] = (slopes[j] + val * vs[j] + p * grad[j] * u) % m
    terms = {(0,) * r: const}
    for j in range(r):
        terms[tuple(int(k == j) for k in range(r))] = slopes[j]
    S = Poly(r, terms, m)
    if lam:
        try:
            Q = S.divide_exact(p)
        except ArithmeticError as exc:  # pragma: no cover - would be a bug
            raise AssertionError(f"reduction by special letter {letter!r} is not divisible by p") from exc
    else:
        Q = S.reduce(p)
    assert Q.is_symmetric(), f"reduced polynomial {Q!r} is not symmetric"
    assert Q.degree() <= max(1, P.degree()), "degree bound violated"
    return LetterReduction(Q, lam)


# ---------------------------------------------------------------------------
# halting one letter early
# ---------------------------------------------------------------------------


def psi_mod_p(i: int, a: int, p: int) -> int:
    """``Theta_p((p**i a)!) mod p`` for a digit ``a``: ``(-1)**(a i) * a!``."""
    return ((-1) ** (a * i) * math.factorial(a)) % p


def _weight_mod_p(fold: Fold, a: Sequence[int]) -> int:
    p = fold.p
    out = 1
    for level, k in fold.levels():
        if not k:
            continue
        for d in a:
            out = out * pow(psi_mod_p(level, d, p), k, p) % p
    return out


@dataclass(frozen=True)
class HaltSummary:
    """What is known about ``S(f, I, R)`` for a single-letter type ``I``.

    ``p**valuation_floor`` divides the sum; ``leading`` is the sum divided
    by that power, modulo ``p``.
    """

    letter: Letter
    valuation_floor: int
    leading: int

    @property
    def exact(self) -> bool:
        return self.leading != 0


def halt_summary(R: Poly, fold: Fold, letter: Letter, alphabet: AbacusAlphabet) -> HaltSummary:
    """Summarise the last single-letter sum from ``R mod p`` and the fold.

    ``R`` is symmetric, hence constant on each permutation orbit inside
    ``rho(I)``.  Orbits whose size has the least ``p``-adic valuation
    ``v`` decide whether the sum is exactly divisible by ``p**v``.
    """
    p = alphabet.p
    Rm = _mod_p(R, p)
    stats = _letter_stats(alphabet, letter)
    v = stats.orbit_valuation
    total = 0
    for orbit in alphabet.orbits(letter):
        size = _orbit_size(orbit)
        if _nu_small(size, p) != v:
            continue
        unit = size // p**v
        total += unit * Rm.evaluate(orbit, p) * _weight_mod_p(fold, orbit)
    return HaltSummary(letter, v, total % p)


def _orbit_size(orbit: Sequence[int]) -> int:
    out = math.factorial(len(orbit))
    for d in set(orbit):
        out //= math.factorial(list(orbit).count(d))
    return out


def halt_accept(R: Poly, fold: Fold, letter: Letter, alphabet: AbacusAlphabet) -> bool:
    """True when a type whose leading letter is ``letter`` reaches its bound exactly.

    A zero letter cannot lead a canonical type and is never accepted.
    """
    if letter == alphabet.zero:
        return False
    return halt_summary(R, fold, letter, alphabet).exact


# ---------------------------------------------------------------------------
# whole words
# ---------------------------------------------------------------------------

HALT_EMPTY = "halt-empty"
HALT_SINGLE = "halt-single-letter"
HALT_MODES = (HALT_EMPTY, HALT_SINGLE)


@dataclass(frozen=True)
class WordReduction:
    """Outcome of reducing a type letter by letter from the right.

    ``residual`` is the remaining polynomial mod ``p`` and ``fold`` the
    remaining exponent data.  ``lam`` is the power of ``p`` split off
    along the way.  ``bound`` is the guaranteed valuation of the sum, and
    ``exact`` says whether the bound is attained.
    """

    mode: str
    residual: Poly
    fold: Fold
    lam: int
    bound: int
    exact: bool
    halt: HaltSummary | None = None


def reduce_word(P: Poly, e: Sequence[int], T: AbacusType, halt: str = HALT_EMPTY) -> WordReduction:
    A = T.alphabet
    if halt not in HALT_MODES:
        raise ValueError(f"unknown halting mode {halt!r}")
    word = T.word
    if halt == HALT_SINGLE:
        if not word:
            raise ValueError("early halting needs a nonempty type")
        if word[0] == A.zero:
            raise ValueError("early halting needs a nonzero leading letter")
        word = word[1:]
    fold = Fold.from_exponents(e, A.p)
    R = _mod_p(P, A.p)
    lam = 0
    for letter in reversed(word):
        step = reduce_letter(R, fold, letter, A)
        R, fold = step.q, fold.shift()
        lam += step.lam
    if halt == HALT_EMPTY:
        exact = R.constant_term() % A.p != 0
        return WordReduction(halt, R, fold, lam, lam, exact)
    summary = halt_summary(R, fold, T.word[0], A)
    return WordReduction(halt, R, fold, lam, lam + summary.valuation_floor, summary.exact, summary)


# ---------------------------------------------------------------------------
# pointwise exact Q_I, used to test the reduction identity numerically
# ---------------------------------------------------------------------------


def letter_polynomial_value(P: Poly | Callable[[tuple, int], int], e: Sequence[int], letter: Letter,
                            alphabet: AbacusAlphabet, x: Sequence[int], mod: int) -> int:
    """``Q_I(x) mod mod`` for the *exact* exponent vector ``e``.

    Negative exponents are handled by inverting the ``Psi`` values, which
    are prime to ``p``; the division by ``p**lam(I)`` is checked.
    """
    p = alphabet.p
    lam = _letter_stats(alphabet, letter).lam
    big = mod * p**lam
    total = 0
    for a in alphabet.rho(letter):
        pt = tuple(p * xi + ai for xi, ai in zip(x, a))
        t = P.evaluate(pt, big) if isinstance(P, Poly) else P(pt, big)
        for i, ei in enumerate(e):
            if not ei:
                continue
            for xj, aj in zip(x, a):
                t = t * pow(psi_exact(i, aj, p, xj, big), ei, big) % big
        total = (total + t) % big
    if total % p**lam:
        raise AssertionError("letter sum not divisible by p**lam(I)")
    return (total // p**lam) % mod


__all__ = [
    "Fold",
    "HALT_EMPTY",
    "HALT_SINGLE",
    "HaltSummary",
    "LetterReduction",
    "WordReduction",
    "halt_accept",
    "halt_summary",
    "letter_polynomial_value",
    "psi_exact",
    "psi_linear",
    "psi_mod_p",
    "psi_poly",
    "psi_product",
    "psi_product_linear",
    "reduce_letter",
    "reduce_word",
    "shift_exponents",
]
