"""Sparse multivariate polynomials over the integers or over Z/mZ.

Polynomials are immutable and hashable, so they can label automaton
states directly.  Terms are keyed by exponent tuples of length ``r``.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping, Sequence

ExpTuple = tuple[int, ...]


def _distinct_permutations(seq: Sequence[int]) -> Iterable[tuple[int, ...]]:
    counts: dict[int, int] = {}
    for v in seq:
        counts[v] = counts.get(v, 0) + 1
    keys = sorted(counts)
    n = len(seq)
    out: list[int] = []

    def rec():
        if len(out) == n:
            yield tuple(out)
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                out.append(k)
                yield from rec()
                out.pop()
                counts[k] += 1

    yield from rec()


class Poly:
    __slots__ = ("r", "modulus", "_terms", "_hash")

    def __init__(self, r: int, terms: Mapping[ExpTuple, int] | None = None,
                 modulus: int | None = None):
        if r < 1:
            raise ValueError("a polynomial needs at least one variable")
        self.r = r
        self.modulus = modulus
        clean: dict[ExpTuple, int] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(k) for k in exp)
            if len(exp) != r or any(k < 0 for k in exp):
                raise ValueError(f"bad exponent tuple {exp} for r={r}")
            clean[exp] = clean.get(exp, 0) + int(c)
        if modulus is not None:
            clean = {e: c % modulus for e, c in clean.items()}
        clean = {e: c for e, c in clean.items() if c}
        self._terms = tuple(sorted(clean.items()))
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, r: int, c: int, modulus: int | None = None):
        return cls(r, {(0,) * r: c}, modulus)

    @classmethod
    def variable(cls, r: int, j: int, modulus: int | None = None):
        exp = [0] * r
        exp[j] = 1
        return Poly(r, {tuple(exp): 1}, modulus)

    @classmethod
    def from_orbits(cls, r: int, orbits: Mapping[Sequence[int], int],
                    modulus: int | None = None):
        """Symmetric polynomial from orbit-monomial coefficients.

        ``orbits`` maps an exponent pattern (any order, padded with zeros to
        length ``r``) to the coefficient of every monomial in its orbit.
        """
        terms: dict[ExpTuple, int] = {}
        for pattern, c in orbits.items():
            pattern = list(pattern) + [0] * (r - len(pattern))
            if len(pattern) != r:
                raise ValueError("orbit pattern longer than r")
            for exp in _distinct_permutations(sorted(pattern)):
                terms[exp] = terms.get(exp, 0) + c
        return cls(r, terms, modulus)

    @classmethod
    def elementary(cls, r: int, k: int, modulus: int | None = None):
        if k > r:
            return cls(r, {}, modulus)
        return cls.from_orbits(r, {(1,) * k: 1}, modulus)

    @classmethod
    def power_sum(cls, r: int, k: int, modulus: int | None = None):
        return cls.from_orbits(r, {(k,): 1}, modulus)

    # -- basic protocol ----------------------------------------------------

    @property
    def terms(self) -> dict[ExpTuple, int]:
        return dict(self._terms)

    def items(self):
        return self._terms

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return (self.r, self.modulus, self._terms) == (other.r, other.modulus, other._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.r, self.modulus, self._terms))
        return self._hash

    def __repr__(self):
        mod = "" if self.modulus is None else f" mod {self.modulus}"
        return f"<{type(self).__name__} {self.label()}{mod}>"

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        return max((sum(e) for e, _ in self._terms), default=-1)

    def constant_term(self) -> int:
        return dict(self._terms).get((0,) * self.r, 0)

    # -- arithmetic --------------------------------------------------------

    def _merge_mod(self, other: "Poly") -> int | None:
        if self.r != other.r:
            raise ValueError("variable counts differ")
        if self.modulus is None:
            return other.modulus
        if other.modulus is None or other.modulus == self.modulus:
            return self.modulus
        raise ValueError("moduli differ")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly.constant(self.r, other, self.modulus)
        raise TypeError(f"cannot combine polynomial with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        mod = self._merge_mod(other)
        terms = dict(self._terms)
        for e, c in other._terms:
            terms[e] = terms.get(e, 0) + c
        return Poly(self.r, terms, mod)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.r, {e: -c for e, c in self._terms}, self.modulus)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return Poly(self.r, {e: c * other for e, c in self._terms}, self.modulus)
        other = self._coerce(other)
        mod = self._merge_mod(other)
        terms: dict[ExpTuple, int] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                v = terms.get(e, 0) + c1 * c2
                terms[e] = v % mod if mod is not None else v
        return Poly(self.r, terms, mod)

    __rmul__ = __mul__

    def reduce(self, modulus: int) -> "Poly":
        """Coefficients reduced modulo ``modulus`` (must divide the current one)."""
        if self.modulus is not None and self.modulus % modulus:
            raise ValueError(f"cannot reduce mod {self.modulus} to mod {modulus}")
        return type(self)(self.r, dict(self._terms), modulus)

    def lift(self) -> "Poly":
        """Same coefficients, viewed as an integer polynomial."""
        return type(self)(self.r, dict(self._terms), None)

    def with_modulus(self, modulus: int | None) -> "Poly":
        return type(self)(self.r, dict(self._terms), modulus)

    def divide_exact(self, c: int) -> "Poly":
        """Divide every coefficient by ``c``; raises if any is not divisible.

        For a polynomial mod ``m`` the result lives mod ``m // c``.
        """
        if self.modulus is not None and self.modulus % c:
            raise ValueError("divisor must divide the modulus")
        for _, v in self._terms:
            if v % c:
                raise ArithmeticError(f"coefficient {v} not divisible by {c}")
        mod = None if self.modulus is None else self.modulus // c
        return Poly(self.r, {e: v // c for e, v in self._terms}, mod)

    def evaluate(self, point: Sequence[int], modulus: int | None = None) -> int:
        if len(point) != self.r:
            raise ValueError("point has the wrong dimension")
        m = modulus if modulus is not None else self.modulus
        total = 0
        for e, c in self._terms:
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= pow(x, k, m) if m is not None else x**k
            total += t
        return total % m if m is not None else total

    def permute(self, perm: Sequence[int]) -> "Poly":
        """Rename variable ``j`` to ``perm[j]``."""
        terms = {}
        for e, c in self._terms:
            new = [0] * self.r
            for j, k in enumerate(e):
                new[perm[j]] = k
            terms[tuple(new)] = c
        return Poly(self.r, terms, self.modulus)

    def is_symmetric(self) -> bool:
        if self.r == 1:
            return True
        swap = list(range(self.r))
        swap[0], swap[1] = 1, 0
        cycle = list(range(1, self.r)) + [0]
        # a transposition and an r-cycle generate the symmetric group
        return self.permute(swap) == self and self.permute(cycle) == self

    def substitute_affine(self, scale: int, shift: Sequence[int]) -> "Poly":
        """``P(scale * x + shift)``, expanded."""
        if len(shift) != self.r:
            raise ValueError("shift has the wrong dimension")
        m = self.modulus
        out: dict[ExpTuple, int] = {}
        for e, c in self._terms:
            partial: dict[ExpTuple, int] = {(0,) * self.r: c}
            for j, k in enumerate(e):
                if not k:
                    continue
                a = shift[j]
                factor = [(t, math.comb(k, t) * scale**t * a ** (k - t)) for t in range(k + 1)]
                nxt: dict[ExpTuple, int] = {}
                for pe, pc in partial.items():
                    for t, fc in factor:
                        if not fc:
                            continue
                        ne = list(pe)
                        ne[j] += t
                        ne = tuple(ne)
                        v = nxt.get(ne, 0) + pc * fc
                        nxt[ne] = v % m if m is not None else v
                partial = nxt
            for pe, pc in partial.items():
                out[pe] = out.get(pe, 0) + pc
        return Poly(self.r, out, m)

    # -- rendering ---------------------------------------------------------

    def orbit_coefficients(self) -> dict[ExpTuple, int]:
        """Coefficient per orbit, keyed by the descending exponent pattern.

        Only meaningful for symmetric polynomials.
        """
        out: dict[ExpTuple, int] = {}
        for e, c in self._terms:
            key = tuple(sorted(e, reverse=True))
            out.setdefault(key, c)
        return out

    def label(self) -> str:
        if not self._terms:
            return "0"
        if self.is_symmetric():
            return _symmetric_label(self)
        return _plain_label(self)


def _coef_prefix(c: int, body: str, grouped: bool) -> str:
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{c}({body})" if grouped else f"{c}{body}"


def _monomial(exp: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for name, k in zip(names, exp):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "".join(parts)


def _symmetric_label(P: Poly) -> str:
    orbits = P.orbit_coefficients()
    keys = sorted(orbits, key=lambda k: (-sum(k), tuple(-v for v in k)))
    pieces = []
    for pattern in keys:
        c = orbits[pattern]
        if sum(pattern) == 0:
            pieces.append(str(c))
            continue
        nz = [k for k in pattern if k]
        if P.r <= 2:
            names = ["x", "y"][: P.r] if P.r == 2 else ["x"]
            perms = sorted(_distinct_permutations(sorted(pattern)), reverse=True)
            monos = [_monomial(e, names) for e in perms]
            body = "+".join(monos)
            pieces.append(_coef_prefix(c, body, len(monos) > 1))
        else:
            idx = "ijklmnopq"
            body = "Σ" + "".join(
                f"x_{idx[t]}" + (f"^{k}" if k > 1 else "") for t, k in enumerate(nz)
            )
            pieces.append(_coef_prefix(c, body, False))
    return "+".join(pieces).replace("+-", "-")


def _plain_label(P: Poly) -> str:
    names = [f"x{j + 1}" for j in range(P.r)]
    pieces = []
    for e, c in sorted(P.items(), key=lambda t: (-sum(t[0]), t[0])):
        body = _monomial(e, names)
        if not body:
            pieces.append(str(c))
        else:
            pieces.append(_coef_prefix(c, body, False))
    return "+".join(pieces).replace("+-", "-")


class SymPoly(Poly):
    """A :class:`Poly` that is checked to be invariant under permuting variables."""

    __slots__ = ()

    def __init__(self, r, terms=None, modulus=None):
        super().__init__(r, terms, modulus)
        if not self.is_symmetric():
            raise ValueError(f"polynomial {_plain_label(self)} is not symmetric")

    @classmethod
    def coerce(cls, P: Poly) -> "SymPoly":
        if isinstance(P, SymPoly):
            return P
        return cls(P.r, P.terms, P.modulus)


def parse_symmetric(spec: str, r: int, modulus: int | None = None) -> SymPoly:
    """Parse a sum of symmetric building blocks.

    Terms are separated by ``+`` and are integers, optionally prefixed by an
    integer coefficient and ``*``: ``e1`` (sum of variables), ``e2``
    (sum of distinct pairwise products), ``p2`` (sum of squares).  The
    aliases ``sum`` and ``Σx_i`` stand for ``e1``.
    """
    total = SymPoly.constant(r, 0, modulus)
    text = spec.replace(" ", "")
    if not text:
        raise ValueError("empty polynomial")
    for raw in text.replace("-", "+-").split("+"):
        if not raw:
            continue
        sign = -1 if raw.startswith("-") else 1
        body = raw.lstrip("-")
        coef = 1
        if "*" in body:
            c, body = body.split("*", 1)
            coef = int(c)
        if body.isdigit():
            total = total + sign * coef * int(body)
            continue
        block = body.lower()
        if block in ("e1", "sum", "σx_i", "σx", "x+y"):
            term = Poly.elementary(r, 1, modulus)
        elif block == "e2":
            term = Poly.elementary(r, 2, modulus)
        elif block == "p2":
            term = Poly.power_sum(r, 2, modulus)
        else:
            raise ValueError(f"unknown polynomial term {raw!r}")
        total = total + term * (sign * coef)
    return SymPoly.coerce(total)


def symmetric_group_check(P: Poly, trials: int = 20, seed: int = 0, bound: int = 50) -> bool:
    """Evaluation-based symmetry check at random integer points."""
    import random

    rng = random.Random(seed)
    idx = list(range(P.r))
    for _ in range(trials):
        pt = [rng.randrange(bound) for _ in idx]
        perm = idx[:]
        rng.shuffle(perm)
        if P.evaluate(pt) != P.evaluate([pt[j] for j in perm]):
            return False
    return True


__all__ = ["Poly", "SymPoly", "parse_symmetric", "symmetric_group_check"]
