"""Abaci: digit matrices of integer vectors, their types, and sums over a type.

An abacus for ``x = (x_1, ..., x_r)`` stacks the base-``p`` expansions of
the ``x_i`` as rows.  Its *type* is the left-to-right word of column
letters.  Two alphabets are supported:

``multiset``
    a letter is the multiset of the ``r`` digits in a column, stored as an
    ascending tuple;
``digit-sum``
    a letter is the sum of the digits in a column.  Several permutation
    orbits can share one letter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement
import math
import re
from typing import Callable, Iterator, Sequence, Union

import numpy as np

from . import kernels
from .errors import ResourceLimitError
from .numth import check_prime, digits, nu
from .poly import Poly, _distinct_permutations

MULTISET = "multiset"
DIGIT_SUM = "digit-sum"
MODES = (MULTISET, DIGIT_SUM)

DEFAULT_VECTOR_LIMIT = 10**6

Letter = Union[tuple, int]


@dataclass(frozen=True)
class AbacusAlphabet:
    p: int
    r: int
    mode: str = MULTISET
    letters: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        check_prime(self.p)
        if self.r < 1:
            raise ValueError("an abacus needs at least one row")
        if self.mode not in MODES:
            raise ValueError(f"unknown alphabet mode {self.mode!r}")
        if self.mode == MULTISET:
            letters = tuple(combinations_with_replacement(range(self.p), self.r))
        else:
            letters = tuple(range(self.r * (self.p - 1) + 1))
        object.__setattr__(self, "letters", letters)

    # -- letters -----------------------------------------------------------

    def __contains__(self, letter) -> bool:
        if self.mode == MULTISET:
            return (isinstance(letter, tuple) and len(letter) == self.r
                    and all(0 <= d < self.p for d in letter)
                    and list(letter) == sorted(letter))
        return isinstance(letter, int) and 0 <= letter <= self.r * (self.p - 1)

    def check(self, letter) -> Letter:
        if letter not in self:
            raise ValueError(f"{letter!r} is not a letter of {self}")
        return letter

    @property
    def zero(self) -> Letter:
        return (0,) * self.r if self.mode == MULTISET else 0

    def column_letter(self, column: Sequence[int]) -> Letter:
        if self.mode == MULTISET:
            return tuple(sorted(column))
        return int(sum(column))

    def column_sum(self, letter: Letter) -> int:
        return sum(letter) if self.mode == MULTISET else letter

    def digit_letter(self, d: int) -> Letter:
        """The letter of a carry-free column holding the single digit ``d``."""
        if not 0 <= d < self.p:
            raise ValueError("digit out of range")
        if self.mode == DIGIT_SUM:
            return d
        if self.p != 2:
            raise ValueError("carry-free columns are single letters only for p = 2 "
                             "in multiset mode; use the digit-sum alphabet")
        return (0,) * (self.r - d) + (1,) * d

    def orbits(self, letter: Letter) -> tuple[tuple[int, ...], ...]:
        """Digit multisets (ascending tuples) whose permutations make up the letter."""
        self.check(letter)
        if self.mode == MULTISET:
            return (letter,)
        return _digit_sum_orbits(self.p, self.r, letter)

    def rho(self, letter: Letter, limit: int = DEFAULT_VECTOR_LIMIT) -> tuple[tuple[int, ...], ...]:
        """All digit vectors carried by a column with this letter, lexicographically."""
        size = self.orbit_size(letter)
        if size > limit:
            raise ResourceLimitError(f"column vectors of letter {self.render_letter(letter)}",
                                     limit, size)
        return _rho(self, letter)

    def orbit_size(self, letter: Letter) -> int:
        return sum(_multiset_count(o) for o in self.orbits(letter))

    # -- rendering ---------------------------------------------------------

    @property
    def single_char(self) -> bool:
        return self.mode == MULTISET and self.p == 2 and self.r == 2

    def render_letter(self, letter: Letter) -> str:
        self.check(letter)
        if self.mode == DIGIT_SUM:
            return str(letter)
        if self.p == 2:
            ones = sum(letter)
            if self.r == 2:
                return "ZMO"[ones]
            return f"M{ones}"
        return "{" + ",".join(map(str, letter)) + "}"

    def parse_letter(self, text: str) -> Letter:
        text = text.strip().translate(_SUBSCRIPTS)
        if self.mode == DIGIT_SUM:
            if not text.isdigit():
                raise ValueError(f"bad digit-sum letter {text!r}")
            return self.check(int(text))
        if self.p == 2:
            if self.r == 2 and text in ("Z", "M", "O"):
                return self.digit_count_letter("ZMO".index(text))
            m = re.fullmatch(r"M_?(\d+)", text)
            if m:
                return self.digit_count_letter(int(m.group(1)))
        m = re.fullmatch(r"\{([\d,\s]*)\}", text)
        if m:
            ds = tuple(sorted(int(t) for t in m.group(1).split(",") if t.strip()))
            return self.check(ds)
        raise ValueError(f"bad letter {text!r} for {self}")

    def digit_count_letter(self, ones: int) -> Letter:
        if self.mode != MULTISET or self.p != 2 or not 0 <= ones <= self.r:
            raise ValueError("M_i letters exist only for p = 2 multiset alphabets")
        return (0,) * (self.r - ones) + (1,) * ones


_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")


def _multiset_count(ms: Sequence[int]) -> int:
    out = math.factorial(len(ms))
    for v in set(ms):
        out //= math.factorial(ms.count(v))
    return out


@lru_cache(maxsize=None)
def _digit_sum_orbits(p: int, r: int, c: int) -> tuple[tuple[int, ...], ...]:
    out = []

    def rec(prefix, left, slots, lo):
        if slots == 0:
            if left == 0:
                out.append(tuple(prefix))
            return
        for d in range(lo, p):
            if d * slots > left:
                break
            # remaining slots take digits >= d, capped at p - 1
            if left - d > (p - 1) * (slots - 1):
                continue
            prefix.append(d)
            rec(prefix, left - d, slots - 1, d)
            prefix.pop()

    rec([], c, r, 0)
    return tuple(out)


@lru_cache(maxsize=4096)
def _rho(alphabet: AbacusAlphabet, letter: Letter) -> tuple[tuple[int, ...], ...]:
    vecs = []
    for orbit in alphabet.orbits(letter):
        vecs.extend(_distinct_permutations(orbit))
    return tuple(sorted(vecs))


@dataclass(frozen=True)
class LetterStats:
    letter: Letter
    orbit_size: int
    special: bool
    lam: int
    orbit_valuation: int


def letter_stats(letter: Letter, alphabet: AbacusAlphabet) -> LetterStats:
    """Orbit bookkeeping for one letter.

    ``orbit_size`` is the number of column vectors carrying the letter.  A
    letter is special when ``p`` divides the size of *every* permutation
    orbit it contains; in multiset mode there is a single orbit, so this
    is just ``p | orbit_size``.  ``orbit_valuation`` is the least
    ``p``-adic valuation among those orbit sizes.
    """
    return _letter_stats(alphabet, letter)


@lru_cache(maxsize=None)
def _letter_stats(alphabet: AbacusAlphabet, letter: Letter) -> LetterStats:
    p = alphabet.p
    sizes = [_multiset_count(o) for o in alphabet.orbits(letter)]
    val = min(nu(s, p) for s in sizes)
    special = val >= 1
    return LetterStats(letter, sum(sizes), special, int(special), val)


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbacusType:
    alphabet: AbacusAlphabet
    word: tuple = ()

    def __post_init__(self):
        word = tuple(self.word)
        for letter in word:
            self.alphabet.check(letter)
        object.__setattr__(self, "word", word)

    def __len__(self):
        return len(self.word)

    def __iter__(self):
        return iter(self.word)

    @property
    def is_canonical(self) -> bool:
        return not self.word or self.word[0] != self.alphabet.zero

    @property
    def head(self) -> Letter:
        if not self.word:
            raise ValueError("empty type has no leading letter")
        return self.word[0]

    @property
    def tail(self) -> "AbacusType":
        """Everything except the leftmost letter."""
        return AbacusType(self.alphabet, self.word[1:])

    def prefix(self) -> "AbacusType":
        """Everything except the rightmost letter."""
        return AbacusType(self.alphabet, self.word[:-1])

    def sigma(self) -> int:
        return sigma(self)

    def lam(self) -> int:
        return sum(_letter_stats(self.alphabet, letter).lam for letter in self.word)

    def alpha(self, letter: Letter) -> int:
        return self.word.count(letter)

    def render(self) -> str:
        if not self.word:
            return "ε"
        parts = [self.alphabet.render_letter(letter) for letter in self.word]
        return "".join(parts) if self.alphabet.single_char else " ".join(parts)

    @classmethod
    def parse(cls, text: str, alphabet: AbacusAlphabet) -> "AbacusType":
        text = text.strip()
        if text in ("", "ε", "eps"):
            return cls(alphabet, ())
        if any(ch.isspace() for ch in text):
            tokens = text.split()
        elif alphabet.single_char:
            tokens = list(text)
        else:
            tokens = [text]
        return cls(alphabet, tuple(alphabet.parse_letter(t) for t in tokens))

    def __str__(self):
        return self.render()


def type_of(x: Sequence[int], alphabet: AbacusAlphabet) -> AbacusType:
    """Type of the abacus of ``x`` (its rows padded with leading zeros)."""
    if len(x) != alphabet.r:
        raise ValueError(f"vector has {len(x)} components, alphabet has r={alphabet.r}")
    if any(v < 0 for v in x):
        raise ValueError("components must be nonnegative")
    p = alphabet.p
    rows = [digits(v, p) if v else [] for v in x]
    width = max(len(row) for row in rows)
    rows = [[0] * (width - len(row)) + row for row in rows]
    word = tuple(alphabet.column_letter(col) for col in zip(*rows)) if width else ()
    return AbacusType(alphabet, word)


def cf_type(n: int, alphabet: AbacusAlphabet) -> AbacusType:
    """The carry-free type of ``n``: one single-digit column per digit of ``n``.

    Defined for ``p = 2`` in multiset mode and for every ``p`` in digit-sum
    mode, where a carry-free column is exactly a column whose sum is a digit.
    """
    if alphabet.mode == MULTISET and alphabet.p != 2:
        raise ValueError("cf(n) is only defined for p = 2 in multiset mode")
    if n == 0:
        return AbacusType(alphabet, ())
    return AbacusType(alphabet, tuple(alphabet.digit_letter(d) for d in digits(n, alphabet.p)))


def sigma(T: AbacusType) -> int:
    """``x_1 + ... + x_r``, common to every abacus of type ``T``."""
    total = 0
    A = T.alphabet
    for letter in T.word:
        total = total * A.p + A.column_sum(letter)
    return total


def vector_count(T: AbacusType) -> int:
    return math.prod(T.alphabet.orbit_size(letter) for letter in T.word)


def _check_count(T: AbacusType, limit: int) -> int:
    count = vector_count(T)
    if count > limit:
        raise ResourceLimitError(f"vectors of type {T.render()}", limit, count)
    return count


def enumerate_vectors(T: AbacusType, limit: int = DEFAULT_VECTOR_LIMIT) -> Iterator[tuple[int, ...]]:
    """Every vector whose abacus has type ``T``, each exactly once."""
    for row in vectors_array(T, limit):
        yield tuple(int(v) for v in row)


def vectors_array(T: AbacusType, limit: int = DEFAULT_VECTOR_LIMIT) -> np.ndarray:
    """The vectors of type ``T`` as an ``(N, r)`` int64 array, lexicographic in
    the column-major reading of the digit matrix."""
    _check_count(T, limit)
    A = T.alphabet
    X = np.zeros((1, A.r), dtype=np.int64)
    for letter in T.word:
        R = np.array(A.rho(letter, limit), dtype=np.int64).reshape(-1, A.r)
        X = (X[:, None, :] * A.p + R[None, :, :]).reshape(-1, A.r)
    return X


def enumerate_types(n: int, alphabet: AbacusAlphabet, max_digits: int = 64) -> Iterator[AbacusType]:
    """Every canonical type ``T`` with ``sigma(T) == n``, each once."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n and len(digits(n, alphabet.p)) > max_digits:
        raise ResourceLimitError("digit length of n", max_digits, len(digits(n, alphabet.p)))
    by_sum: dict[int, list] = {}
    for letter in alphabet.letters:
        by_sum.setdefault(alphabet.column_sum(letter), []).append(letter)
    p = alphabet.p

    def rec(m):
        # types for m, as tuples; the rightmost column absorbs m mod p
        if m == 0:
            yield ()
            return
        for c in sorted(by_sum):
            if c > m:
                break
            if (m - c) % p:
                continue
            for rest in rec((m - c) // p):
                for letter in by_sum[c]:
                    if not rest and letter == alphabet.zero:
                        continue
                    yield rest + (letter,)

    for word in rec(n):
        yield AbacusType(alphabet, word)


# ---------------------------------------------------------------------------
# direct summation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DirectSum:
    """A sum known modulo ``p**precision``."""

    p: int
    precision: int
    residue: int

    @property
    def modulus(self) -> int:
        return self.p ** self.precision

    @property
    def determined(self) -> bool:
        return self.residue != 0

    @property
    def valuation(self) -> int | None:
        """Exact ``nu_p`` of the sum, or ``None`` when it is at least ``precision``."""
        return nu(self.residue, self.p) if self.residue else None

    @property
    def status(self) -> str:
        return "exact" if self.determined else "undetermined"

    def valuation_at_least(self, k: int) -> bool:
        if k > self.precision:
            raise ValueError(f"precision {self.precision} cannot certify valuation >= {k}")
        return self.residue % self.p**k == 0


PolyLike = Union[Poly, int, Callable[[tuple, int], int]]


def _factorial_weights(p: int, e: Sequence[int], x_max: int, mod: int) -> np.ndarray:
    """``w[x] = prod_i Theta_p((p**i x)!) ** e_i  (mod mod)`` for ``x <= x_max``."""
    w = np.full(x_max + 1, 1 % mod, dtype=np.int64 if mod < kernels.MAX_MODULUS else object)
    if not e or mod == 1:
        return w
    top = p ** (len(e) - 1) * x_max
    table = kernels.theta_factorial_table(p, top, mod) if mod < kernels.MAX_MODULUS \
        else _theta_table_python(p, top, mod)
    for i, ei in enumerate(e):
        if ei == 0:
            continue
        for x in range(x_max + 1):
            w[x] = (int(w[x]) * pow(int(table[p**i * x]), ei, mod)) % mod
    return w


def _theta_table_python(p, m_max, mod):
    out = [1 % mod]
    acc = 1
    for j in range(1, m_max + 1):
        while j % p == 0:
            j //= p
        acc = acc * j % mod
        out.append(acc)
    return out


def _poly_values(P: Poly, X: np.ndarray, mod: int) -> np.ndarray:
    vals = np.zeros(X.shape[0], dtype=object if mod >= kernels.MAX_MODULUS else np.int64)
    Xm = X % mod
    for exp, c in P.items():
        t = np.full(X.shape[0], c % mod, dtype=vals.dtype)
        for j, k in enumerate(exp):
            for _ in range(k):
                t = (t * Xm[:, j]) % mod
        vals = (vals + t) % mod
    return vals


def abacus_sum_direct(e: Sequence[int], T: AbacusType, P: PolyLike = 1, precision: int = 8,
                      limit: int = DEFAULT_VECTOR_LIMIT) -> DirectSum:
    """Brute-force ``sum_T P(x) prod_i (psi_i(x_1) ... psi_i(x_r))**e_i`` mod ``p**precision``.

    Here ``psi_i(x) = Theta_p((p**i x)!)``.  Negative exponents are inverted
    modulo ``p**precision``, which is legitimate because every ``psi`` value
    is prime to ``p``.  ``P`` may be an integer, a :class:`Poly`, or a
    callable ``P(x, modulus) -> int``.
    """
    if precision < 1:
        raise ValueError("precision must be at least 1")
    A = T.alphabet
    p = A.p
    mod = p**precision
    X = vectors_array(T, limit)
    x_max = int(X.max()) if X.size else 0
    w = _factorial_weights(p, list(e), x_max, mod)

    if isinstance(P, int):
        pvals = np.full(X.shape[0], P % mod, dtype=np.int64 if mod < kernels.MAX_MODULUS else object)
    elif isinstance(P, Poly):
        if P.r != A.r:
            raise ValueError("polynomial and alphabet disagree on r")
        if P.modulus is not None and P.modulus % mod:
            raise ValueError(f"polynomial known mod {P.modulus} cannot be summed mod {mod}")
        pvals = _poly_values(P, X, mod)
    else:
        pvals = np.array([int(P(tuple(int(v) for v in row), mod)) % mod for row in X],
                         dtype=np.int64 if mod < kernels.MAX_MODULUS else object)

    if mod < kernels.MAX_MODULUS:
        residue = kernels.weighted_vector_sum(X, w, pvals.astype(np.int64), mod)
    else:
        residue = 0
        wl = [int(v) for v in w]
        for row, pv in zip(X, pvals):
            t = int(pv)
            for v in row:
                t = t * wl[int(v)] % mod
            residue = (residue + t) % mod
    return DirectSum(p, precision, int(residue))
