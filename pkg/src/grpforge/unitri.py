"""Upper unitriangular matrices over F_p and the matrix witnesses for the
commutator congruence ``[x_1, .., x_{n-1}, x_1] = [x_pi(1), .., x_pi(n-1), x_pi(1)]^a``.

Indices in the public functions are 1-based, as in matrix notation.
"""

from __future__ import annotations

import itertools
import random
from typing import Sequence

import numpy as np

from grpforge import fp
from grpforge.errors import GrpforgeError


class UnitriMatrix:
    __slots__ = ("a", "p")

    def __init__(self, a: np.ndarray, p: int):
        a = np.asarray(a, dtype=np.int64) % p
        m = a.shape[0]
        if a.shape != (m, m) or not np.all(np.diag(a) == 1) or np.tril(a, -1).any():
            raise GrpforgeError("not an upper unitriangular matrix")
        self.a = a
        self.p = p

    @classmethod
    def identity(cls, m: int, p: int) -> "UnitriMatrix":
        return cls(np.eye(m, dtype=np.int64), p)

    @property
    def size(self) -> int:
        return self.a.shape[0]

    def __mul__(self, other: "UnitriMatrix") -> "UnitriMatrix":
        return UnitriMatrix(self.a @ other.a % self.p, self.p)

    def inv(self) -> "UnitriMatrix":
        # (1 + N)^-1 = sum (-N)^k, N nilpotent of index <= m.
        m = self.size
        N = (self.a - np.eye(m, dtype=np.int64)) % self.p
        out = np.eye(m, dtype=np.int64)
        term = np.eye(m, dtype=np.int64)
        for _ in range(m - 1):
            term = -term @ N % self.p
            out = (out + term) % self.p
        return UnitriMatrix(out, self.p)

    def __pow__(self, k: int) -> "UnitriMatrix":
        base = self if k >= 0 else self.inv()
        k = abs(k)
        out = UnitriMatrix.identity(self.size, self.p)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, UnitriMatrix) and np.array_equal(self.a, other.a)

    def __hash__(self):
        return hash(self.a.tobytes())

    def __repr__(self):
        return f"UnitriMatrix({self.a.tolist()}, p={self.p})"

    def is_identity(self) -> bool:
        return np.array_equal(self.a, np.eye(self.size, dtype=np.int64))


def e_matrix(m: int, i: int, j: int, p: int) -> UnitriMatrix:
    """``E_ij``: identity plus a 1 in position ``(i, j)``, ``1 <= i < j <= m``."""
    if not (1 <= i < j <= m):
        raise GrpforgeError(f"need 1 <= i < j <= m, got i={i}, j={j}, m={m}")
    a = np.eye(m, dtype=np.int64)
    a[i - 1, j - 1] = 1
    return UnitriMatrix(a, p)


def ut_commutator(x: UnitriMatrix, y: UnitriMatrix) -> UnitriMatrix:
    if x.size != y.size:
        raise GrpforgeError("matrices of different size")
    return x * y * x.inv() * y.inv()


def ut_left_normed(elements: Sequence[UnitriMatrix]) -> UnitriMatrix:
    out = elements[-1]
    for g in reversed(elements[:-1]):
        out = ut_commutator(g, out)
    return out


def product(ms: Sequence[UnitriMatrix]) -> UnitriMatrix:
    out = ms[0]
    for x in ms[1:]:
        out = out * x
    return out


def _congruence_sides(xs: list[UnitriMatrix], pi: Sequence[int], a: int):
    """Left side ``[x_1..x_{n-1}, x_1]`` and right side ``[x_pi..]^a``."""
    lhs = ut_left_normed(xs + [xs[0]])
    perm = [xs[i - 1] for i in pi]
    rhs = ut_left_normed(perm + [perm[0]]) ** a
    return lhs, rhs


def lemLie_assignments(n: int, p: int) -> tuple[list[UnitriMatrix], list[UnitriMatrix]]:
    """The two generator assignments in ``UT(n+1, p)``.

    First: ``x_1 = E_12 E_{n,n+1}``, ``x_i = E_{i,i+1}`` (``2 <= i <= n-1``).
    Second: ``x_i = E_12 E_23 ... E_{n-1,n}`` for ``i <= n-2`` and
    ``x_{n-1} = E_{n,n+1}``.
    """
    m = n + 1
    first = [e_matrix(m, 1, 2, p) * e_matrix(m, n, n + 1, p)]
    first += [e_matrix(m, i, i + 1, p) for i in range(2, n)]
    chain = product([e_matrix(m, i, i + 1, p) for i in range(1, n)])
    second = [chain] * (n - 2) + [e_matrix(m, n, n + 1, p)]
    return first, second


def lemLie_matrix_witness(n: int, p: int, pi: Sequence[int], a: int) -> tuple[bool, bool]:
    """Is each assignment consistent with the congruence for ``(pi, a)``?

    ``pi`` is a permutation of ``1..n-1`` in one-line notation.  The matrix
    group has class ``n``, so the congruence modulo the ``(n+1)``-th lower
    central term becomes plain equality of matrices.
    """
    if n < 3 or not fp.is_prime(p) or p <= n:
        raise GrpforgeError("need n >= 3 and a prime p > n")
    if sorted(pi) != list(range(1, n)):
        raise GrpforgeError("pi must be a permutation of 1..n-1")
    if not 0 <= a < p:
        raise GrpforgeError("need 0 <= a < p")
    out = []
    for xs in lemLie_assignments(n, p):
        lhs, rhs = _congruence_sides(xs, pi, a)
        out.append(lhs == rhs)
    return out[0], out[1]


def lcs_generators_ut(m: int, p: int, k: int) -> list[UnitriMatrix]:
    """``E_ij`` with ``j - i >= k``: the claimed generators of ``UT(m,p)^[k]``."""
    if k < 1:
        raise GrpforgeError("k must be >= 1")
    return [e_matrix(m, i, j, p) for i in range(1, m + 1) for j in range(i + k, m + 1)]


def closure(seeds: Sequence[UnitriMatrix], m: int, p: int, limit: int = 10**6) -> set:
    ident = UnitriMatrix.identity(m, p)
    seen = {ident}
    frontier = [ident]
    seeds = [s for s in seeds if not s.is_identity()]
    while frontier:
        nxt = []
        for x in frontier:
            for s in seeds:
                y = x * s
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > limit:
                        raise GrpforgeError("closure too large")
        frontier = nxt
    return seen


def normal_closure(seeds: Sequence[UnitriMatrix], conj_by: Sequence[UnitriMatrix], m: int, p: int) -> set:
    current = closure(seeds, m, p)
    conj_inv = [(g, g.inv()) for g in conj_by]
    while True:
        extra = {g * x * gi for x in current for g, gi in conj_inv} - current
        if not extra:
            return current
        current = closure(list(current | extra), m, p)


def lcs_by_commutators(m: int, p: int, depth: int) -> list[set]:
    """Lower central series of ``UT(m, p)`` by iterated commutator closure.

    ``G^[k+1]`` is the normal closure of the commutators of generators of
    ``G`` with generators of ``G^[k]``.  ``G^[1]`` itself is never enumerated;
    only its superdiagonal generators are used.
    """
    gens = [e_matrix(m, i, i + 1, p) for i in range(1, m)]
    series: list[set] = []
    layer_gens = gens
    for _ in range(1, depth):
        seeds = [ut_commutator(g, h) for g in gens for h in layer_gens]
        layer = normal_closure(seeds, gens, m, p)
        series.append(layer)
        layer_gens = _generating_subset(layer, m, p)
    return series


def _generating_subset(elements: set, m: int, p: int) -> list[UnitriMatrix]:
    chosen: list[UnitriMatrix] = []
    have = {UnitriMatrix.identity(m, p)}
    for x in sorted(elements, key=lambda u: u.a.tobytes()):
        if len(have) == len(elements):
            break
        if x not in have:
            chosen.append(x)
            have = closure(chosen, m, p)
    return chosen


class UnitriangularGroup:
    """``UT(m, p)`` with the interface used by the multilinearity check."""

    def __init__(self, m: int, p: int):
        self.m, self.p = m, p

    def identity(self) -> UnitriMatrix:
        return UnitriMatrix.identity(self.m, self.p)

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        return x.inv()

    def random_element(self, rng: random.Random) -> UnitriMatrix:
        a = np.eye(self.m, dtype=np.int64)
        for i, j in itertools.combinations(range(self.m), 2):
            a[i, j] = rng.randrange(self.p)
        return UnitriMatrix(a, self.p)

    def random_derived(self, rng: random.Random) -> UnitriMatrix:
        return ut_commutator(self.random_element(rng), self.random_element(rng)) * ut_commutator(
            self.random_element(rng), self.random_element(rng)
        )

    def in_lcs(self, x: UnitriMatrix, k: int) -> bool:
        """Membership in ``UT^[k]``: zero on the first ``k-1`` superdiagonals."""
        for d in range(1, min(k, self.m)):
            if np.diagonal(x.a, d).any():
                return False
        return True
