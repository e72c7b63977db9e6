"""Modular inner loops.

Every kernel exists twice: a numba ``@njit`` version and a numpy version
with the same signature.  The public names dispatch to numba when it is
available and not disabled through ``WALKVAL_DISABLE_JIT``.

All arithmetic is in ``int64`` modulo ``mod``.  Callers must keep
``mod < 2**31`` so that a product of two residues fits in a signed 64-bit
word; :data:`MAX_MODULUS` is the exclusive upper bound.
"""

import numpy as np

from ._jit import NUMBA_AVAILABLE, njit

MAX_MODULUS = 2**31


def _check_mod(mod):
    if not 2 <= mod < MAX_MODULUS:
        raise ValueError(f"modulus {mod} outside [2, 2**31)")


# ---------------------------------------------------------------------------
# p-free factorials:  table[m] = Theta_p(m!) mod `mod`
# ---------------------------------------------------------------------------


def _theta_factorial_table_numpy(p, m_max, mod):
    j = np.arange(1, m_max + 1, dtype=np.int64)
    mask = j % p == 0
    while mask.any():
        j[mask] //= p
        mask = j % p == 0
    out = np.empty(m_max + 1, dtype=np.int64)
    out[0] = 1 % mod
    out[1:] = j % mod
    # Hillis-Steele prefix product, O(m log m) but fully vectorised.
    step = 1
    while step <= m_max:
        out[step:] = (out[step:] * out[:-step]) % mod
        step *= 2
    return out


@njit(cache=True)
def _theta_factorial_table_numba(p, m_max, mod):
    out = np.empty(m_max + 1, dtype=np.int64)
    acc = 1 % mod
    out[0] = acc
    for j in range(1, m_max + 1):
        q = j
        while q % p == 0:
            q //= p
        acc = (acc * (q % mod)) % mod
        out[j] = acc
    return out


# ---------------------------------------------------------------------------
# sum_i poly[i] * prod_j weights[X[i, j]]  (mod `mod`)
# ---------------------------------------------------------------------------


def _weighted_vector_sum_numpy(X, weights, pvals, mod):
    acc = pvals % mod
    for j in range(X.shape[1]):
        acc = (acc * weights[X[:, j]]) % mod
    return int(acc.sum() % mod)


@njit(cache=True)
def _weighted_vector_sum_numba(X, weights, pvals, mod):
    total = 0
    for i in range(X.shape[0]):
        t = pvals[i] % mod
        for j in range(X.shape[1]):
            t = (t * weights[X[i, j]]) % mod
        total = (total + t) % mod
    return total


# ---------------------------------------------------------------------------
# Carry-free ("digitwise") convolution on the box [0, p)^L.
#
# An index i encodes the digit vector of i in base p.  The product keeps
# only pairs whose digitwise sums stay below p, i.e. additions without carry.
# ---------------------------------------------------------------------------


def _box_mul_numpy(a, b, p, L, mod):
    shape = (p,) * L
    A = a.reshape(shape)
    B = b.reshape(shape)
    out = np.zeros(shape, dtype=np.int64)
    for idx in zip(*np.nonzero(A)):
        va = int(A[idx])
        dst = tuple(slice(d, None) for d in idx)
        src = tuple(slice(0, p - d) for d in idx)
        out[dst] = (out[dst] + va * B[src]) % mod
    return out.reshape(-1)


@njit(cache=True)
def _box_mul_numba(a, b, p, L, mod):
    size = a.shape[0]
    out = np.zeros(size, dtype=np.int64)
    da = np.zeros(L, dtype=np.int64)
    db = np.zeros(L, dtype=np.int64)
    pw = np.ones(L, dtype=np.int64)
    for k in range(1, L):
        pw[k] = pw[k - 1] * p
    for ia in range(size):
        va = a[ia]
        if va == 0:
            continue
        q = ia
        # numpy reshape is C-ordered: the last axis carries the lowest digit.
        for k in range(L - 1, -1, -1):
            da[k] = q % p
            q //= p
        for k in range(L):
            db[k] = 0
        ib = 0
        while True:
            out[ia + ib] = (out[ia + ib] + va * b[ib]) % mod
            k = L - 1
            while k >= 0:
                if db[k] + 1 < p - da[k]:
                    db[k] += 1
                    ib += pw[L - 1 - k]
                    break
                ib -= db[k] * pw[L - 1 - k]
                db[k] = 0
                k -= 1
            if k < 0:
                break
    return out


if NUMBA_AVAILABLE:
    _theta_factorial_table_impl = _theta_factorial_table_numba
    _weighted_vector_sum_impl = _weighted_vector_sum_numba
    _box_mul_impl = _box_mul_numba
else:
    _theta_factorial_table_impl = _theta_factorial_table_numpy
    _weighted_vector_sum_impl = _weighted_vector_sum_numpy
    _box_mul_impl = _box_mul_numpy


def theta_factorial_table(p: int, m_max: int, mod: int) -> np.ndarray:
    """Residues of the p-free part of ``m!`` for ``m = 0 .. m_max``."""
    _check_mod(mod)
    return _theta_factorial_table_impl(int(p), int(m_max), int(mod))


def weighted_vector_sum(X, weights, pvals, mod: int) -> int:
    """Sum over the rows ``x`` of ``X`` of ``pvals[row] * prod(weights[x])``."""
    _check_mod(mod)
    X = np.ascontiguousarray(X, dtype=np.int64)
    if X.shape[0] == 0:
        return 0
    weights = np.ascontiguousarray(weights, dtype=np.int64) % mod
    pvals = np.ascontiguousarray(pvals, dtype=np.int64) % mod
    return int(_weighted_vector_sum_impl(X, weights, pvals, int(mod)))


def box_mul(a, b, p: int, L: int, mod: int) -> np.ndarray:
    _check_mod(mod)
    a = np.ascontiguousarray(a, dtype=np.int64) % mod
    b = np.ascontiguousarray(b, dtype=np.int64) % mod
    if a.shape != (p**L,) or b.shape != (p**L,):
        raise ValueError("box operands must have length p**L")
    return _box_mul_impl(a, b, int(p), int(L), int(mod))


def box_power(g, r: int, p: int, L: int, mod: int) -> np.ndarray:
    """``r``-fold carry-free self-convolution of ``g`` on the box ``[0, p)^L``.

    Entry ``n`` of the result is the sum over ordered ``r``-tuples
    ``(x_1, ..., x_r)``, added without any base-``p`` carry and with sum
    ``n``, of ``g[x_1] * ... * g[x_r]``.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    result = np.zeros(p**L, dtype=np.int64)
    result[0] = 1 % mod
    base = np.ascontiguousarray(g, dtype=np.int64) % mod
    while r:
        if r & 1:
            result = box_mul(result, base, p, L, mod)
        r >>= 1
        if r:
            base = box_mul(base, base, p, L, mod)
    return result
