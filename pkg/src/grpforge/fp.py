"""Arithmetic over F_p and the small number theory the constructions need.

Vectors and matrices over F_p are plain numpy ``int64`` arrays whose entries
are kept reduced into ``[0, p)``.  All moduli here are below 2**16, so a
product of two residues plus a handful of accumulations never overflows.
"""

from __future__ import annotations

from functools import lru_cache
from math import isqrt

import numpy as np

from grpforge.errors import SearchBoundExceeded


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than ``n``."""
    m = n + 1
    while not is_prime(m):
        m += 1
    return m


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division, as ``{prime: exponent}``."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def mobius(d: int) -> int:
    if d < 1:
        raise ValueError("mobius is defined for d >= 1")
    mu = 1
    for e in factorize(d).values():
        if e > 1:
            return 0
        mu = -mu
    return mu


def witt_dim(n: int, k: int) -> int:
    """Dimension of the degree-``k`` part of the free Lie algebra of rank ``n``.

    Necklace formula ``(1/k) sum_{d | k} mu(d) n^(k/d)``.  The division is
    checked to be exact.
    """
    if n < 1 or k < 1:
        raise ValueError("witt_dim needs n >= 1 and k >= 1")
    total = sum(mobius(d) * n ** (k // d) for d in divisors(k))
    q, r = divmod(total, k)
    if r:
        raise ArithmeticError(f"non-integral Witt number for n={n}, k={k}")
    return q


def witt_total(n: int, c: int) -> int:
    return sum(witt_dim(n, k) for k in range(1, c + 1))


def mult_order(u: int, m: int) -> int:
    """Multiplicative order of ``u`` modulo ``m`` (``u`` must be a unit)."""
    u %= m
    if m == 1:
        return 1
    x, k = u, 1
    while x != 1:
        x = x * u % m
        k += 1
        if k > m:
            raise ValueError(f"{u} is not a unit modulo {m}")
    return k


def primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group of F_p."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        return 1
    for z in range(2, p):
        if mult_order(z, p) == p - 1:
            return z
    raise AssertionError("unreachable for prime p")


def find_prime_q(p: int, cap: int = 1 << 16) -> int:
    """Smallest prime ``q > p`` with ``q = 1 (mod p)``."""
    q = p + 1
    while q <= cap:
        if q % p == 1 and is_prime(q):
            return q
        q += 1
    raise SearchBoundExceeded(f"no prime q = 1 mod {p} below {cap}")


def unit_of_order(k: int, m: int) -> int:
    """Smallest unit modulo ``m`` whose multiplicative order is exactly ``k``."""
    for u in range(1, m):
        if np.gcd(u, m) == 1 and mult_order(u, m) == k:
            return u
    raise ValueError(f"no unit of order {k} modulo {m}")


def inv_mod(a: int, p: int) -> int:
    return pow(int(a) % p, -1, p)


# -- dense linear algebra -------------------------------------------------


def rref(mat, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p.

    Pivots are the leftmost nonzero column of each row and are scaled to 1,
    so two matrices have the same row space iff their reduced forms agree.
    Zero rows are dropped.  Returns ``(R, pivot_columns)``.
    """
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for col in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, col])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * inv_mod(a[r, col], p) % p
        others = np.nonzero(a[:, col])[0]
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, col], a[r])) % p
        pivots.append(col)
        r += 1
    return a[:r], pivots


def rank(mat, p: int) -> int:
    a = np.asarray(mat)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def same_row_space(a, b, p: int) -> bool:
    ra, _ = rref(np.atleast_2d(a), p) if np.size(a) else (np.zeros((0, 0)), [])
    rb, _ = rref(np.atleast_2d(b), p) if np.size(b) else (np.zeros((0, 0)), [])
    if ra.shape[0] == 0 or rb.shape[0] == 0:
        return ra.shape[0] == rb.shape[0]
    return ra.shape == rb.shape and bool(np.array_equal(ra, rb))


def reduce_mod_rows(vec, reduced: np.ndarray, pivots: list[int], p: int) -> np.ndarray:
    """Canonical representative of ``vec`` modulo the row space of ``reduced``.

    ``reduced``/``pivots`` must come from :func:`rref`.
    """
    v = np.array(vec, dtype=np.int64) % p
    for row, col in zip(reduced, pivots):
        if v[col]:
            v = (v - v[col] * row) % p
    return v


def solve_left(rows, target, p: int) -> np.ndarray | None:
    """Find ``y`` with ``y @ rows == target`` over F_p, or ``None``.

    ``rows`` must have linearly independent rows for the answer to be unique;
    otherwise some solution is returned.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=np.int64))
    m = rows.shape[0]
    # Row-reduce [rows | I] to track the combination producing each pivot row.
    aug = np.concatenate([rows % p, np.eye(m, dtype=np.int64)], axis=1)
    red, pivots = rref(aug, p)
    ncols = rows.shape[1]
    v = np.array(target, dtype=np.int64) % p
    y = np.zeros(m, dtype=np.int64)
    for row, col in zip(red, pivots):
        if col >= ncols:
            break
        c = v[col]
        if c:
            v = (v - c * row[:ncols]) % p
            y = (y + c * row[ncols:]) % p
    if v.any():
        return None
    return y


def left_nullspace(mat, p: int) -> np.ndarray:
    """Basis (rows, reduced) of ``{y : y @ mat == 0}`` over F_p."""
    a = np.atleast_2d(np.asarray(mat, dtype=np.int64)) % p
    m = a.shape[0]
    aug = np.concatenate([a, np.eye(m, dtype=np.int64)], axis=1)
    red, pivots = rref(aug, p)
    ncols = a.shape[1]
    kernel = [row[ncols:] for row, col in zip(red, pivots) if col >= ncols]
    if not kernel:
        return np.zeros((0, m), dtype=np.int64)
    return rref(np.array(kernel), p)[0]
