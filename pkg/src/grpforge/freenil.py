"""Free nilpotent groups of exponent p inside the truncated tensor algebra.

For ``p > c`` the free group of rank ``n``, exponent ``p`` and class ``c`` is
the group generated by ``exp(X_1), ..., exp(X_n)`` in the free associative
algebra over F_p truncated above degree ``c``.  Elements are stored as dense
coefficient vectors indexed by words of length ``0..c``; a word
``i_1 ... i_k`` sits at offset ``off[k] + sum_t i_t n^(k-1-t)``, so that the
coefficients of a product of homogeneous parts are an ``np.outer`` away.

Letters are 0-based internally.  Group commutators are ``[x, y] = x y x^-1 y^-1``
and ``[x_1, ..., x_k] = [x_1, [x_2, ..., x_k]]``.
"""

from __future__ import annotations

import random
from functools import cached_property
from typing import Sequence

import numpy as np

from grpforge import fp
from grpforge.errors import GrpforgeError, SearchBoundExceeded

DEFAULT_MAX_COORDS = 341  # n = 4, c = 4


class Series:
    __slots__ = ("space", "coef")

    def __init__(self, space: "FreeNilpotentGroup", coef: np.ndarray):
        self.space = space
        self.coef = coef

    def degree(self, k: int) -> np.ndarray:
        s = self.space
        return self.coef[s.offsets[k]:s.offsets[k + 1]]

    def __mul__(self, other):
        if isinstance(other, Series):
            return self.space.mul(self, other)
        return Series(self.space, self.coef * int(other) % self.space.p)

    __rmul__ = __mul__

    def __add__(self, other):
        return Series(self.space, (self.coef + other.coef) % self.space.p)

    def __sub__(self, other):
        return Series(self.space, (self.coef - other.coef) % self.space.p)

    def __neg__(self):
        return Series(self.space, (-self.coef) % self.space.p)

    def __eq__(self, other):
        return isinstance(other, Series) and np.array_equal(self.coef, other.coef)

    def __hash__(self):
        return hash(self.coef.tobytes())

    def __repr__(self):
        nz = np.nonzero(self.coef)[0]
        terms = [f"{self.coef[i]}*{self.space.word_label(i)}" for i in nz[:8]]
        more = " + ..." if len(nz) > 8 else ""
        return "Series(" + " + ".join(terms) + more + ")"

    def is_identity(self) -> bool:
        return self.coef[0] == 1 and not self.coef[1:].any()


class FreeNilpotentGroup:
    def __init__(self, n: int, c: int, p: int, max_coords: int = DEFAULT_MAX_COORDS):
        if n < 1 or c < 1:
            raise ValueError("need n >= 1 and c >= 1")
        if not fp.is_prime(p) or p <= c:
            raise ValueError(f"need a prime p > c; got p={p}, c={c}")
        self.n, self.c, self.p = n, c, p
        self.dims = [n**k for k in range(c + 1)]
        self.offsets = np.concatenate([[0], np.cumsum(self.dims)]).astype(int).tolist()
        self.size = self.offsets[-1]
        if self.size > max_coords:
            raise SearchBoundExceeded(
                f"F(n={n}, c={c}) needs {self.size} coordinates (cap {max_coords})"
            )
        self._inv = [0] + [fp.inv_mod(k, p) for k in range(1, c + 1)]

    def __repr__(self):
        return f"FreeNilpotentGroup(n={self.n}, c={self.c}, p={self.p})"

    # -- series arithmetic -------------------------------------------------

    def series(self, coef) -> Series:
        coef = np.asarray(coef, dtype=np.int64) % self.p
        if coef.shape != (self.size,):
            raise GrpforgeError("coefficient vector has the wrong shape")
        return Series(self, coef)

    def zero(self) -> Series:
        return Series(self, np.zeros(self.size, dtype=np.int64))

    def one(self) -> Series:
        z = np.zeros(self.size, dtype=np.int64)
        z[0] = 1
        return Series(self, z)

    identity = one

    def letter(self, i: int) -> Series:
        z = np.zeros(self.size, dtype=np.int64)
        z[1 + i] = 1
        return Series(self, z)

    def homogeneous(self, k: int, vec) -> Series:
        z = np.zeros(self.size, dtype=np.int64)
        z[self.offsets[k]:self.offsets[k + 1]] = np.asarray(vec) % self.p
        return Series(self, z)

    def word_index(self, word: Sequence[int]) -> int:
        idx = 0
        for i in word:
            idx = idx * self.n + i
        return self.offsets[len(word)] + idx

    def word_label(self, flat: int) -> str:
        k = int(np.searchsorted(self.offsets, flat, side="right")) - 1
        idx = flat - self.offsets[k]
        letters = []
        for _ in range(k):
            idx, r = divmod(idx, self.n)
            letters.append(str(r + 1))
        return "".join(reversed(letters)) or "1"

    def mul(self, a: Series, b: Series) -> Series:
        p, off = self.p, self.offsets
        ac, bc = a.coef, b.coef
        out = np.zeros(self.size, dtype=np.int64)
        parts_a = [ac[off[k]:off[k + 1]] for k in range(self.c + 1)]
        parts_b = [bc[off[k]:off[k + 1]] for k in range(self.c + 1)]
        nz_a = [k for k in range(self.c + 1) if parts_a[k].any()]
        nz_b = [k for k in range(self.c + 1) if parts_b[k].any()]
        for i in nz_a:
            for j in nz_b:
                k = i + j
                if k > self.c:
                    break
                out[off[k]:off[k + 1]] += np.outer(parts_a[i], parts_b[j]).ravel()
        return Series(self, out % p)

    def exp(self, lie: Series) -> Series:
        if lie.coef[0]:
            raise GrpforgeError("exp needs a series without constant term")
        result = self.one()
        term = self.one()
        for k in range(1, self.c + 1):
            term = self.mul(term, lie) * self._inv[k]
            result = result + term
        return result

    def log(self, g: Series) -> Series:
        if g.coef[0] != 1:
            raise GrpforgeError("log needs constant term 1")
        u = g - self.one()
        result = self.zero()
        power = self.one()
        for k in range(1, self.c + 1):
            power = self.mul(power, u)
            sign = 1 if k % 2 else -1
            result = result + power * (sign * self._inv[k])
        return result

    # -- group operations --------------------------------------------------

    def generator(self, i: int) -> Series:
        return self.exp(self.letter(i))

    @cached_property
    def generators(self) -> list[Series]:
        return [self.generator(i) for i in range(self.n)]

    @cached_property
    def generator_inverses(self) -> list[Series]:
        return [self.exp(-self.letter(i)) for i in range(self.n)]

    def element(self, word: Sequence[int]) -> Series:
        """Product of generators; letter ``+i``/``-i`` means ``x_i^{+-1}`` (1-based)."""
        out = self.one()
        for s in word:
            if s == 0 or abs(s) > self.n:
                raise GrpforgeError(f"letter {s} out of range")
            g = self.generators[s - 1] if s > 0 else self.generator_inverses[-s - 1]
            out = self.mul(out, g)
        return out

    def inv(self, g: Series) -> Series:
        u = g - self.one()
        neg = -u
        result = self.one()
        term = self.one()
        for _ in range(self.c):
            term = self.mul(term, neg)
            result = result + term
        return result

    def power(self, g: Series, m: int) -> Series:
        if m < 0:
            g, m = self.inv(g), -m
        result, base = self.one(), g
        while m:
            if m & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            m >>= 1
        return result

    def commutator(self, g: Series, h: Series) -> Series:
        return self.mul(self.mul(self.mul(g, h), self.inv(g)), self.inv(h))

    def left_normed_commutator(self, elements: Sequence[Series]) -> Series:
        if len(elements) < 2:
            raise GrpforgeError("a commutator needs at least two entries")
        out = elements[-1]
        for g in reversed(elements[:-1]):
            out = self.commutator(g, out)
        return out

    def in_lcs(self, g: Series, k: int) -> bool:
        """Is ``g`` in the ``k``-th term of the lower central series?"""
        lg = self.log(g)
        return not lg.coef[1:self.offsets[min(k, self.c + 1)]].any()

    # -- Hall basis and coordinates ---------------------------------------

    @cached_property
    def hall(self) -> "HallBasis":
        return hall_basis(self.n, self.c, self.p)

    def is_lie(self, ell: Series) -> bool:
        if ell.coef[0]:
            return False
        return all(self.hall.coordinates(ell.degree(k), k) is not None for k in range(1, self.c + 1))

    def is_group_like(self, g: Series) -> bool:
        return g.coef[0] == 1 and self.is_lie(self.log(g))

    def lcs_component(self, g: Series, k: int) -> np.ndarray:
        """Hall coordinates of the image of ``g`` in ``F^[k] / F^[k+1]``."""
        lg = self.log(g)
        if lg.coef[1:self.offsets[k]].any():
            raise GrpforgeError(f"element is not in the {k}-th lower central term")
        coords = self.hall.coordinates(lg.degree(k), k)
        if coords is None:
            raise GrpforgeError("degree component is not a Lie element")
        return coords

    def top_component(self, g: Series, k: int) -> np.ndarray:
        """Word coordinates of the degree-``k`` part of ``log g`` (``g`` in ``F^[k]``)."""
        lg = self.log(g)
        if lg.coef[1:self.offsets[k]].any():
            raise GrpforgeError(f"element is not in the {k}-th lower central term")
        return lg.degree(k).copy()

    # -- sampling (for property checks) -----------------------------------

    def random_element(self, rng: random.Random, length: int | None = None) -> Series:
        length = length or 2 * self.c + 2
        word = [rng.choice([1, -1]) * rng.randint(1, self.n) for _ in range(length)]
        return self.element(word)

    def random_derived(self, rng: random.Random) -> Series:
        out = self.one()
        for _ in range(2):
            out = self.mul(out, self.commutator(self.random_element(rng), self.random_element(rng)))
        return out

    def as_concrete(self, bound: int = 10**5):
        from grpforge.groups import ConcreteGroup

        return ConcreteGroup.from_generators(
            list(self.generators), self.mul, self.one(), f"F(n={self.n}, c={self.c}, p={self.p})", bound
        )


# -- Lyndon words and the Hall basis -----------------------------------------


def lyndon_words(n: int, c: int) -> list[tuple[int, ...]]:
    """All Lyndon words of length 1..c over ``0..n-1``, by length then lex order."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < c:
            w.append(w[len(w) - m])
        while w and w[-1] == n - 1:
            w.pop()
    return sorted(out, key=lambda t: (len(t), t))


def standard_bracketing(word: tuple[int, ...], lyndon: set):
    """Tree of a Lyndon word: ``w = u v`` with ``v`` its longest proper Lyndon suffix."""
    if len(word) == 1:
        return word[0]
    for i in range(1, len(word)):
        if word[i:] in lyndon:
            return (standard_bracketing(word[:i], lyndon), standard_bracketing(word[i:], lyndon))
    raise AssertionError("not a Lyndon word")


def tree_degree(tree) -> int:
    return 1 if isinstance(tree, int) else tree_degree(tree[0]) + tree_degree(tree[1])


def tree_label(tree) -> str:
    if isinstance(tree, int):
        return f"x{tree + 1}"
    return f"[{tree_label(tree[0])},{tree_label(tree[1])}]"


def expand_tree(tree, n: int, p: int) -> np.ndarray:
    """Word-basis expansion of a bracket tree (``[u, v] = uv - vu``)."""
    if isinstance(tree, int):
        v = np.zeros(n, dtype=np.int64)
        v[tree] = 1
        return v
    u = expand_tree(tree[0], n, p)
    w = expand_tree(tree[1], n, p)
    return (np.outer(u, w).ravel() - np.outer(w, u).ravel()) % p


class SpanSolver:
    """Coordinates with respect to a fixed set of independent rows over F_p."""

    def __init__(self, rows: np.ndarray, p: int):
        self.p = p
        self.rows = rows
        m, ncols = rows.shape
        aug = np.concatenate([rows % p, np.eye(m, dtype=np.int64)], axis=1)
        red, piv = fp.rref(aug, p)
        self.ncols = ncols
        keep = [i for i, c in enumerate(piv) if c < ncols]
        self.red = red[keep]
        self.piv = [piv[i] for i in keep]
        self.rank = len(keep)

    def solve(self, target) -> np.ndarray | None:
        p = self.p
        v = np.asarray(target, dtype=np.int64) % p
        y = np.zeros(self.rows.shape[0], dtype=np.int64)
        for row, col in zip(self.red, self.piv):
            c = v[col]
            if c:
                v = (v - c * row[:self.ncols]) % p
                y = (y + c * row[self.ncols:]) % p
        if v.any():
            return None
        return y


class HallBasis:
    def __init__(self, n: int, c: int, p: int):
        self.n, self.c, self.p = n, c, p
        words = lyndon_words(n, c)
        lset = set(words)
        self.words = words
        self.trees = [standard_bracketing(w, lset) for w in words]
        self.by_degree: dict[int, list[int]] = {k: [] for k in range(1, c + 1)}
        for i, w in enumerate(words):
            self.by_degree[len(w)].append(i)
        self._matrices: dict[int, np.ndarray] = {}
        self._solvers: dict[int, SpanSolver] = {}

    def count(self, k: int) -> int:
        return len(self.by_degree[k])

    def counts(self) -> list[int]:
        return [self.count(k) for k in range(1, self.c + 1)]

    def labels(self, k: int) -> list[str]:
        return [tree_label(self.trees[i]) for i in self.by_degree[k]]

    def matrix(self, k: int) -> np.ndarray:
        """Rows are the word expansions of the degree-``k`` basis elements."""
        if k not in self._matrices:
            rows = [expand_tree(self.trees[i], self.n, self.p) for i in self.by_degree[k]]
            self._matrices[k] = (
                np.array(rows, dtype=np.int64) if rows else np.zeros((0, self.n**k), dtype=np.int64)
            )
        return self._matrices[k]

    def solver(self, k: int) -> SpanSolver:
        if k not in self._solvers:
            self._solvers[k] = SpanSolver(self.matrix(k), self.p)
        return self._solvers[k]

    def coordinates(self, vec, k: int) -> np.ndarray | None:
        if self.count(k) == 0:
            return np.zeros(0, dtype=np.int64) if not np.asarray(vec).any() else None
        return self.solver(k).solve(vec)

    def is_independent(self) -> bool:
        return all(self.count(k) == 0 or self.solver(k).rank == self.count(k) for k in range(1, self.c + 1))


_HALL_CACHE: dict = {}


def hall_basis(n: int, c: int, p: int = 0) -> HallBasis:
    """Lyndon-bracket Hall basis up to degree ``c``.

    ``p`` only matters for the word expansions; ``p = 0`` picks a large prime.
    """
    key = (n, c, p or 1_000_003)
    if key not in _HALL_CACHE:
        _HALL_CACHE[key] = HallBasis(n, c, key[2])
    return _HALL_CACHE[key]


# -- central ideals, quotients, substitutions --------------------------------


class CentralIdeal:
    """Subspace of the top-degree Lie component, kept row reduced."""

    def __init__(self, space: FreeNilpotentGroup, rows):
        self.space = space
        self.degree = space.c
        rows = np.atleast_2d(np.asarray(rows, dtype=np.int64)) if np.size(rows) else np.zeros(
            (0, space.dims[space.c]), dtype=np.int64
        )
        if rows.shape[1] != space.dims[space.c]:
            raise GrpforgeError("ideal rows must live in the top degree")
        if rows.shape[0]:
            self.basis, self.pivots = fp.rref(rows, space.p)
        else:
            self.basis, self.pivots = rows, []
        self.generators = rows

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce_vector(self, vec) -> np.ndarray:
        return fp.reduce_mod_rows(vec, self.basis, self.pivots, self.space.p)

    def contains(self, vec) -> bool:
        return not self.reduce_vector(vec).any()

    def is_lie(self) -> bool:
        hb = self.space.hall
        return all(hb.coordinates(row, self.degree) is not None for row in self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, CentralIdeal)
            and self.rank == other.rank
            and np.array_equal(self.basis, other.basis)
        )


def quotient_reduce(g: Series, ideal: CentralIdeal) -> Series:
    space = g.space
    if ideal.space.n != space.n or ideal.space.c != space.c or ideal.space.p != space.p:
        raise GrpforgeError("ideal and element live in different groups")
    coef = g.coef.copy()
    lo, hi = space.offsets[space.c], space.offsets[space.c + 1]
    coef[lo:hi] = ideal.reduce_vector(coef[lo:hi])
    return Series(space, coef)


class Substitution:
    """Algebra endomorphism ``X_i -> scalars[i] * X_{sigma[i]}``.

    A zero scalar kills the letter.  On group elements this sends
    ``exp(X_i)`` to ``exp(scalars[i] X_{sigma[i]})``, i.e. ``x_i`` to
    ``x_{sigma(i)}^{scalars[i]}``.
    """

    def __init__(self, space: FreeNilpotentGroup, scalars: Sequence[int], sigma: Sequence[int] | None = None):
        self.space = space
        n = space.n
        self.scalars = [int(s) % space.p for s in scalars]
        self.sigma = list(range(n)) if sigma is None else [int(s) for s in sigma]
        if len(self.scalars) != n or len(self.sigma) != n:
            raise GrpforgeError("substitution needs one entry per letter")
        self._maps: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def degree_map(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        if k not in self._maps:
            n, p = self.space.n, self.space.p
            idx = np.arange(n**k)
            target = np.zeros(n**k, dtype=np.int64)
            scale = np.ones(n**k, dtype=np.int64)
            sig = np.array(self.sigma)
            sc = np.array(self.scalars)
            rest = idx.copy()
            place = 1
            for _ in range(k):
                rest, digit = np.divmod(rest, n)
                target += sig[digit] * place
                scale = scale * sc[digit] % p
                place *= n
            self._maps[k] = (target, scale)
        return self._maps[k]

    def apply_degree(self, vecs: np.ndarray, k: int) -> np.ndarray:
        """Apply to homogeneous degree-``k`` word vectors (rows)."""
        vecs = np.atleast_2d(vecs)
        target, scale = self.degree_map(k)
        out = np.zeros_like(vecs)
        for r in range(vecs.shape[0]):
            np.add.at(out[r], target, vecs[r] * scale)
        return out % self.space.p

    def __call__(self, g: Series) -> Series:
        space = self.space
        out = np.zeros(space.size, dtype=np.int64)
        out[0] = g.coef[0]
        for k in range(1, space.c + 1):
            part = g.degree(k)
            if part.any():
                target, scale = self.degree_map(k)
                np.add.at(out[space.offsets[k]:space.offsets[k + 1]], target, part * scale)
        return Series(space, out % space.p)

    def preserves(self, ideal: CentralIdeal) -> bool:
        if ideal.rank == 0:
            return True
        imgs = self.apply_degree(ideal.basis, ideal.degree)
        return all(ideal.contains(row) for row in imgs)


def substitution_endomorphism(space, scalars, sigma=None) -> Substitution:
    return Substitution(space, scalars, sigma)


def fixed_subgroup(endo: Substitution, ideal: CentralIdeal | None = None) -> dict[int, np.ndarray]:
    """Per degree, a reduced Hall-coordinate basis of ``{l : endo(l) = l mod ideal}``.

    The top degree result is taken modulo the ideal, i.e. it contains the
    Hall coordinates of the ideal itself.
    """
    space = endo.space
    hb = space.hall
    p = space.p
    if ideal is not None and not endo.preserves(ideal):
        raise GrpforgeError("endomorphism does not preserve the ideal")
    out = {}
    for k in range(1, space.c + 1):
        B = hb.matrix(k)
        m = B.shape[0]
        if m == 0:
            out[k] = np.zeros((0, 0), dtype=np.int64)
            continue
        D = (endo.apply_degree(B, k) - B) % p
        if k == space.c and ideal is not None and ideal.rank:
            stacked = np.concatenate([D, ideal.basis], axis=0)
        else:
            stacked = D
        ker = fp.left_nullspace(stacked, p)
        ys = ker[:, :m] if ker.size else np.zeros((0, m), dtype=np.int64)
        ys = ys[ys.any(axis=1)] if ys.size else ys
        out[k] = fp.rref(ys, p)[0] if ys.shape[0] else np.zeros((0, m), dtype=np.int64)
    return out


def group_order_exponent(n: int, c: int, p: int, ideal: CentralIdeal | None = None) -> int:
    """Exponent ``e`` with ``|F(n, c, p) / ideal| = p^e``."""
    if p <= c:
        raise ValueError("need p > c")
    return fp.witt_total(n, c) - (ideal.rank if ideal is not None else 0)


def multilinearity_check(group, k: int, samples: int, rng: random.Random):
    """Randomised check of commutator multilinearity modulo ``G^[k+1]``.

    ``group`` supplies ``mul``, ``inv``, ``identity()``, ``random_element``,
    ``random_derived`` and ``in_lcs``.  For random ``g_1..g_k``, ``h`` and
    ``h'`` in ``G'`` it tests

        [g_1, .., g_i h h', .., g_k] = [g_1, .., g_k] [g_1, .., h, .., g_k]

    modulo ``G^[k+1]``.  Returns ``(True, None)`` or ``(False, witness)``.
    """
    if k < 2:
        raise ValueError("k must be >= 2")

    def comm(args):
        out = args[-1]
        for g in reversed(args[:-1]):
            out = group.mul(group.mul(group.mul(g, out), group.inv(g)), group.inv(out))
        return out

    for trial in range(samples):
        gs = [group.random_element(rng) for _ in range(k)]
        i = rng.randrange(k)
        h = group.random_element(rng)
        hp = group.random_derived(rng)
        left = list(gs)
        left[i] = group.mul(group.mul(gs[i], h), hp)
        swapped = list(gs)
        swapped[i] = h
        lhs = comm(left)
        rhs = group.mul(comm(gs), comm(swapped))
        if not group.in_lcs(group.mul(lhs, group.inv(rhs)), k + 1):
            return False, {"trial": trial, "position": i, "g": gs, "h": h, "h_prime": hp}
    return True, None


def lie_congruence_holds(F: FreeNilpotentGroup, pi: Sequence[int], a: int) -> bool:
    """Does ``[x_1..x_{n-1}, x_1] = [x_pi(1)..x_pi(n-1), x_pi(1)]^a`` modulo ``F^[n+1]``?

    ``F`` has rank ``n`` and class ``>= n``; ``pi`` permutes ``1..n-1`` (one-line).
    Both sides lie in ``F^[n]``, where the power is a scalar multiple.
    """
    n = F.n
    if sorted(pi) != list(range(1, n)):
        raise GrpforgeError("pi must be a permutation of 1..n-1")
    if F.c < n:
        raise GrpforgeError("need class >= n")
    gens = F.generators
    xs = [gens[i] for i in range(n - 1)]
    ys = [gens[i - 1] for i in pi]
    lhs = F.lcs_component(F.left_normed_commutator(xs + [xs[0]]), n)
    rhs = F.lcs_component(F.left_normed_commutator(ys + [ys[0]]), n)
    return np.array_equal(lhs % F.p, a * rhs % F.p)


def lie_congruence_solutions(n: int, p: int) -> list[tuple[tuple[int, ...], int]]:
    """All ``(pi, a)`` with ``a`` in ``0..p-1`` for which the congruence holds in ``F(n, n, p)``."""
    import itertools

    F = FreeNilpotentGroup(n, n, p)
    out = []
    for pi in itertools.permutations(range(1, n)):
        for a in range(p):
            if lie_congruence_holds(F, pi, a):
                out.append((pi, a))
    return out
