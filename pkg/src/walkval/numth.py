"""Base-p digits, p-adic valuations and exact multinomial coefficients."""

from __future__ import annotations

from functools import lru_cache
import math
from typing import Iterable, Sequence

__all__ = [
    "check_prime",
    "digits",
    "from_digits",
    "digit_sum",
    "nonzero_digit_count",
    "nu",
    "theta",
    "factorial",
    "multinomial",
    "multinomial_valuation",
    "is_carry_free",
]

# primes are trusted input; trial division only catches typos
_PRIME_CHECK_BOUND = 10**6


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    """Return ``p`` unchanged if it is prime, otherwise raise ``ValueError``."""
    if not isinstance(p, int) or p < 2:
        raise ValueError(f"expected a prime, got {p!r}")
    if p > _PRIME_CHECK_BOUND:
        return p
    for q in range(2, math.isqrt(p) + 1):
        if p % q == 0:
            raise ValueError(f"{p} is not prime")
    return p


def _check_nat(n: int, name: str = "n") -> None:
    if n < 0:
        raise ValueError(f"{name} must be nonnegative, got {n}")


def digits(n: int, p: int) -> list[int]:
    """Base-``p`` digits of ``n``, most significant first; ``digits(0) == [0]``."""
    _check_nat(n)
    if p < 2:
        raise ValueError("base must be at least 2")
    if n == 0:
        return [0]
    out = []
    while n:
        n, d = divmod(n, p)
        out.append(d)
    out.reverse()
    return out


def from_digits(ds: Iterable[int], p: int) -> int:
    n = 0
    for d in ds:
        if not 0 <= d < p:
            raise ValueError(f"digit {d} out of range for base {p}")
        n = n * p + d
    return n


def digit_sum(n: int, p: int) -> int:
    """Sum ``s_p(n)`` of the base-``p`` digits of ``n``."""
    check_prime(p)
    _check_nat(n)
    if p == 2:
        return n.bit_count()
    s = 0
    while n:
        n, d = divmod(n, p)
        s += d
    return s


def nonzero_digit_count(n: int, p: int) -> int:
    check_prime(p)
    _check_nat(n)
    c = 0
    while n:
        n, d = divmod(n, p)
        c += d != 0
    return c


def nu(n: int, p: int) -> int:
    """Exponent of ``p`` in ``n``.

    Raises ``ValueError`` for ``n == 0``, whose valuation is infinite.
    Negative ``n`` is accepted and treated as ``|n|``.
    """
    check_prime(p)
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    if p == 2:
        return (n & -n).bit_length() - 1
    v = 0
    # strip p**(2**k) blocks first so huge valuations stay cheap
    while n % p == 0:
        q = p
        e = 1
        while n % (q * q) == 0:
            q *= q
            e *= 2
        n //= q
        v += e
    return v


def theta(n: int, p: int) -> int:
    """The p-free part ``n / p**nu(n, p)``."""
    return abs(n) // p ** nu(n, p)


@lru_cache(maxsize=4096)
def factorial(n: int) -> int:
    # math.factorial already uses a binary-splitting product
    return math.factorial(n)


def _check_parts(n: int, parts: Sequence[int]) -> None:
    if any(x < 0 for x in parts):
        raise ValueError("parts must be nonnegative")
    if sum(parts) != n:
        raise ValueError(f"parts sum to {sum(parts)}, expected {n}")


def multinomial(n: int, parts: Sequence[int]) -> int:
    """Exact ``n! / prod(x! for x in parts)``."""
    _check_parts(n, parts)
    out = 1
    left = n
    # product of binomials keeps intermediates small
    for x in parts:
        out *= math.comb(left, x)
        left -= x
    return out


def multinomial_valuation(n: int, parts: Sequence[int], p: int) -> int:
    """Exponent of ``p`` in the multinomial coefficient, via Kummer/Legendre.

    Equals ``(sum(s_p(x)) - s_p(n)) / (p - 1)``, the number of carries when
    the parts are added in base ``p``.
    """
    _check_parts(n, parts)
    excess = sum(digit_sum(x, p) for x in parts) - digit_sum(n, p)
    q, rem = divmod(excess, p - 1)
    assert rem == 0 and q >= 0
    return q


def is_carry_free(n: int, parts: Sequence[int], p: int) -> bool:
    """True when adding ``parts`` in base ``p`` produces no carry."""
    return multinomial_valuation(n, parts, p) == 0
