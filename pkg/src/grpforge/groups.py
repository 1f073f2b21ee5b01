"""Enumerated finite groups.

A :class:`ConcreteGroup` is built by closing a list of generators under an
element-level multiplication.  Elements are hashable Python values and are
also numbered ``0..N-1`` in breadth-first discovery order, so index 0 is
always the identity.  Most bulk work is done on index arrays:

* ``R[x, s]`` is the index of ``x * gens[s]`` (right Cayley graph);
* the BFS tree (``parent``, ``pgen``) gives every element a word in the
  generators, which turns right/left multiplication by any element into a
  short chain of gathers.

The full multiplication table is only materialised for small groups.
"""

from __future__ import annotations

import hashlib
import itertools
import random
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from grpforge.errors import InvalidAction, SearchBoundExceeded
from grpforge.fp import factorize

DEFAULT_BOUND = 10**6
TABLE_LIMIT = 6000


class ConcreteGroup:
    def __init__(self, elements, index, mul, R, parent, pgen, gens, name=""):
        self.elements: list = elements
        self.index: dict = index
        self._mul = mul
        self.R: np.ndarray = R
        self.parent = parent
        self.pgen = pgen
        self.gens: list[int] = gens
        self.name = name

    @classmethod
    def from_generators(
        cls,
        gens: Sequence[Hashable],
        mul: Callable,
        identity: Hashable,
        name: str = "",
        bound: int = DEFAULT_BOUND,
    ) -> "ConcreteGroup":
        elements = [identity]
        index = {identity: 0}
        parent = [-1]
        pgen = [-1]
        rows = []
        i = 0
        while i < len(elements):
            x = elements[i]
            row = []
            for si, s in enumerate(gens):
                y = mul(x, s)
                j = index.get(y)
                if j is None:
                    j = len(elements)
                    if j >= bound:
                        raise SearchBoundExceeded(
                            f"{name or 'group'} has more than {bound} elements"
                        )
                    elements.append(y)
                    index[y] = j
                    parent.append(i)
                    pgen.append(si)
                row.append(j)
            rows.append(row)
            i += 1
        R = np.array(rows, dtype=np.int64).reshape(len(elements), len(gens))
        gen_idx = [index[s] for s in gens]
        return cls(elements, index, mul, R, np.array(parent), np.array(pgen), gen_idx, name)

    # -- basics ------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"<ConcreteGroup {self.name or '?'} of order {self.order}>"

    identity = 0

    def mul(self, i: int, j: int) -> int:
        if self.has_table:
            return int(self.table[i, j])
        return self.index[self._mul(self.elements[i], self.elements[j])]

    def mul_elements(self, x, y):
        return self._mul(x, y)

    @property
    def has_table(self) -> bool:
        return "table" in self.__dict__ or self.order <= TABLE_LIMIT

    @cached_property
    def depth(self) -> np.ndarray:
        d = np.zeros(self.order, dtype=np.int64)
        for j in range(1, self.order):
            d[j] = d[self.parent[j]] + 1
        return d

    def word(self, j: int) -> list[int]:
        """Generator positions ``w`` with ``element j == gens[w0] * gens[w1] * ...``."""
        out = []
        while j:
            out.append(int(self.pgen[j]))
            j = int(self.parent[j])
        return out[::-1]

    @cached_property
    def L(self) -> np.ndarray:
        """``L[x, s]`` is the index of ``gens[s] * x``."""
        gens = [self.elements[g] for g in self.gens]
        out = np.empty_like(self.R)
        for x, ex in enumerate(self.elements):
            for si, s in enumerate(gens):
                out[x, si] = self.index[self._mul(s, ex)]
        return out

    def right_col(self, j: int) -> np.ndarray:
        """Array ``c`` with ``c[x] == x * j``."""
        if "table" in self.__dict__:
            return self.table[:, j]
        col = np.arange(self.order)
        for s in self.word(j):
            col = self.R[col, s]
        return col

    def left_col(self, j: int) -> np.ndarray:
        """Array ``c`` with ``c[x] == j * x``."""
        if "table" in self.__dict__:
            return self.table[j, :]
        col = np.arange(self.order)
        for s in reversed(self.word(j)):
            col = self.L[col, s]
        return col

    @cached_property
    def table(self) -> np.ndarray:
        n = self.order
        if n > 4 * TABLE_LIMIT:
            raise SearchBoundExceeded(f"multiplication table of order {n} too large")
        T = np.empty((n, n), dtype=np.int64)
        T[:, 0] = np.arange(n)
        for j in range(1, n):
            T[:, j] = self.R[T[:, self.parent[j]], self.pgen[j]]
        return T

    @cached_property
    def inverse(self) -> np.ndarray:
        if self.has_table:
            rows, cols = np.nonzero(self.table == 0)
            inv = np.empty(self.order, dtype=np.int64)
            inv[rows] = cols
            return inv
        return np.array([self.inv(j) for j in range(self.order)])

    def inv(self, j: int) -> int:
        if "inverse" in self.__dict__:
            return int(self.__dict__["inverse"][j])
        k = self.element_order(j)
        return self.power(j, k - 1)

    def power(self, j: int, m: int) -> int:
        if m < 0:
            j, m = self.inv(j), -m
        result, base = 0, j
        while m:
            if m & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            m >>= 1
        return result

    def element_order(self, j: int) -> int:
        if "orders" in self.__dict__:
            return int(self.__dict__["orders"][j])
        k, x = 1, j
        while x != 0:
            x = self.mul(x, j)
            k += 1
        return k

    @cached_property
    def orders(self) -> np.ndarray:
        n = self.order
        T = self.table
        ar = np.arange(n)
        out = np.zeros(n, dtype=np.int64)
        out[0] = 1
        cur = ar.copy()
        k = 1
        while (out == 0).any():
            cur = T[cur, ar]
            k += 1
            out[(cur == 0) & (out == 0)] = k
        return out

    def commutator(self, i: int, j: int) -> int:
        """``[i, j] = i j i^-1 j^-1``."""
        return self.mul(self.mul(self.mul(i, j), self.inv(i)), self.inv(j))

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.mul(self.mul(g, x), self.inv(g))

    def conj_map(self, g: int) -> np.ndarray:
        """Array ``c`` with ``c[x] == g x g^-1``."""
        return self.right_col(self.inv(g))[self.left_col(g)]

    @cached_property
    def gen_conj_maps(self) -> list[np.ndarray]:
        out = []
        for si, g in enumerate(self.gens):
            out.append(self.right_col(self.inv(g))[self.L[:, si]])
        return out

    # -- subgroups ---------------------------------------------------------

    def closure(self, seeds: Iterable[int]) -> np.ndarray:
        """Sorted indices of the subgroup generated by ``seeds``."""
        seeds = sorted({int(s) for s in seeds} - {0})
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        if not seeds:
            return np.array([0])
        cols = [self.right_col(s) for s in seeds]
        frontier = np.array([0])
        while frontier.size:
            new = np.unique(np.concatenate([c[frontier] for c in cols]))
            new = new[~mask[new]]
            mask[new] = True
            frontier = new
        return np.nonzero(mask)[0]

    def normal_closure(self, seeds: Iterable[int]) -> np.ndarray:
        current = self.closure(seeds)
        while True:
            mask = np.zeros(self.order, dtype=bool)
            mask[current] = True
            extra = set()
            for c in self.gen_conj_maps:
                img = c[current]
                extra.update(img[~mask[img]].tolist())
            if not extra:
                return current
            current = self.closure(set(current.tolist()) | extra)

    def generating_subset(self, members: np.ndarray) -> list[int]:
        """Greedy generating set of the subgroup with the given elements."""
        target = len(members)
        chosen: list[int] = []
        have = np.array([0])
        mask = np.zeros(self.order, dtype=bool)
        mask[0] = True
        for x in members:
            if len(have) == target:
                break
            if not mask[x]:
                chosen.append(int(x))
                have = self.closure(chosen)
                mask[have] = True
        return chosen

    def commutator_subgroup(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """``[A, B]`` for normal subgroups given by element arrays."""
        ga = self.generating_subset(a) or [0]
        gb = self.generating_subset(b) or [0]
        seeds = {self.commutator(x, y) for x in ga for y in gb}
        return self.normal_closure(seeds)

    @cached_property
    def derived_subgroup(self) -> np.ndarray:
        seeds = {self.commutator(x, y) for x in self.gens for y in self.gens}
        return self.normal_closure(seeds)

    def lower_central_series(self, depth: int | None = None) -> list[np.ndarray]:
        """``[G^[1], G^[2], ...]`` until it stabilises (or ``depth`` terms)."""
        series = [np.arange(self.order)]
        while depth is None or len(series) < depth:
            nxt = self.commutator_subgroup(series[0], series[-1])
            if len(nxt) == len(series[-1]):
                break
            series.append(nxt)
        return series

    @cached_property
    def center(self) -> np.ndarray:
        mask = np.ones(self.order, dtype=bool)
        for si in range(len(self.gens)):
            mask &= self.L[:, si] == self.R[:, si]
        return np.nonzero(mask)[0]

    def is_abelian(self) -> bool:
        return len(self.center) == self.order

    @cached_property
    def class_labels(self) -> np.ndarray:
        """Label of each element's conjugacy class (smallest member index)."""
        n = self.order
        labels = np.full(n, -1, dtype=np.int64)
        maps = self.gen_conj_maps
        for x in range(n):
            if labels[x] >= 0:
                continue
            labels[x] = x
            stack = [x]
            while stack:
                y = stack.pop()
                for c in maps:
                    z = c[y]
                    if labels[z] < 0:
                        labels[z] = x
                        stack.append(z)
        return labels

    def conjugacy_classes(self) -> list[np.ndarray]:
        labels = self.class_labels
        return [np.nonzero(labels == r)[0] for r in np.unique(labels)]

    @cached_property
    def class_sizes(self) -> np.ndarray:
        """Size of the conjugacy class of each element."""
        labels = self.class_labels
        counts = np.bincount(labels, minlength=self.order)
        return counts[labels]

    def centralizer_order(self, x: int) -> int:
        return int(np.count_nonzero(self.left_col(x) == self.right_col(x)))

    def pi_subgroup(self, primes: Iterable[int]) -> np.ndarray | None:
        """The normal Hall pi-subgroup, if the pi-elements form one."""
        primes = set(primes)
        fac = factorize(self.order)
        target = 1
        for r, e in fac.items():
            if r in primes:
                target *= r**e
        orders = self.orders
        ok = np.array([set(factorize(int(o))) <= primes for o in range(1, orders.max() + 1)])
        members = np.nonzero(ok[orders - 1])[0]
        if len(members) != target:
            return None
        return members

    # -- checks and identity ----------------------------------------------

    def check_axioms(self, samples: int = 10_000, rng: random.Random | None = None) -> bool:
        n = self.order
        inv = self.inverse
        for x in range(n):
            if self.mul(x, int(inv[x])) != 0 or self.mul(int(inv[x]), x) != 0:
                return False
            if self.mul(0, x) != x or self.mul(x, 0) != x:
                return False
        if n**3 <= 10**6:
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = rng or random.Random(0)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(samples))
        for a, b, c in triples:
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                return False
        return True

    def fingerprint(self) -> str:
        """Hash of the element enumeration order."""
        h = hashlib.sha256()
        for e in self.elements:
            h.update(repr(e).encode())
            h.update(b"\0")
        return h.hexdigest()[:16]

    def table_hash(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.table, dtype=np.int64).tobytes()).hexdigest()[:24]


# -- named groups -----------------------------------------------------------


def cyclic(m: int, bound: int = DEFAULT_BOUND) -> ConcreteGroup:
    if m < 1:
        raise ValueError("cyclic group order must be >= 1")
    gens = [1 % m] if m > 1 else []
    return ConcreteGroup.from_generators(gens, lambda a, b: (a + b) % m, 0, f"C{m}", bound)


def perm_mul(a: tuple, b: tuple) -> tuple:
    """Composition ``(a*b)(x) = a(b(x))``."""
    return tuple(a[i] for i in b)


def perm_from_cycles(cycles: Sequence[Sequence[int]], points: Sequence[int]) -> tuple:
    pos = {pt: i for i, pt in enumerate(points)}
    img = list(range(len(points)))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[pos[a]] = pos[b]
    return tuple(img)


def permutation_group(perms: Sequence[tuple], name: str = "", bound: int = DEFAULT_BOUND) -> ConcreteGroup:
    degree = len(perms[0]) if perms else 0
    ident = tuple(range(degree))
    return ConcreteGroup.from_generators(list(perms), perm_mul, ident, name, bound)


def symmetric(m: int, bound: int = DEFAULT_BOUND) -> ConcreteGroup:
    if m < 1:
        raise ValueError("symmetric degree must be >= 1")
    ident = tuple(range(m))
    if m == 1:
        return ConcreteGroup.from_generators([], perm_mul, ident, "S1", bound)
    swap = (1, 0) + tuple(range(2, m))
    cycle = tuple(range(1, m)) + (0,)
    gens = [swap] if m == 2 else [swap, cycle]
    return ConcreteGroup.from_generators(gens, perm_mul, ident, f"S{m}", bound)


def dihedral(order: int, bound: int = DEFAULT_BOUND) -> ConcreteGroup:
    """Dihedral group with ``order`` elements, as pairs ``(k, f) = r^k s^f``."""
    if order < 2 or order % 2:
        raise ValueError("dihedral order must be even and >= 2")
    m = order // 2

    def mul(a, b):
        return ((a[0] + (b[0] if a[1] == 0 else -b[0])) % m, a[1] ^ b[1])

    gens = [(1 % m, 0), (0, 1)] if m > 1 else [(0, 1)]
    return ConcreteGroup.from_generators(gens, mul, (0, 0), f"D{order}", bound)


def _quat_mul(x, y):
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def quaternion8() -> ConcreteGroup:
    return ConcreteGroup.from_generators([(0, 1, 0, 0), (0, 0, 1, 0)], _quat_mul, (1, 0, 0, 0), "Q8")


def unit_group(m: int, units: Sequence[int]) -> ConcreteGroup:
    """Subgroup of ``(Z/m)^x`` generated by ``units``."""
    gens = [u % m for u in units]
    return ConcreteGroup.from_generators(gens, lambda a, b: a * b % m, 1 % m, f"U({m})", DEFAULT_BOUND)


def direct_product(groups: Sequence[ConcreteGroup], name: str = "", bound: int = DEFAULT_BOUND) -> ConcreteGroup:
    k = len(groups)
    ident = (0,) * k
    gens = []
    for i, G in enumerate(groups):
        for g in G.gens:
            e = [0] * k
            e[i] = g
            gens.append(tuple(e))

    def mul(a, b):
        return tuple(G.mul(x, y) for G, x, y in zip(groups, a, b))

    name = name or " x ".join(G.name or "?" for G in groups)
    return ConcreteGroup.from_generators(gens, mul, ident, name, bound)


class ActionMap:
    """Homomorphism ``acting -> Aut(target)`` given on the acting generators.

    ``gen_images[s]`` is an index permutation of ``target`` (``perm[x]`` is the
    image of element ``x``).  The images of all acting elements are obtained by
    walking the acting group's Cayley tree and the homomorphism property is
    checked on every Cayley edge.
    """

    def __init__(self, acting: ConcreteGroup, target: ConcreteGroup, gen_images: Sequence[np.ndarray]):
        self.acting = acting
        self.target = target
        self.gen_images = [np.asarray(p, dtype=np.int64) for p in gen_images]
        if len(self.gen_images) != len(acting.gens):
            raise InvalidAction("need one image per acting generator")
        self.validate()

    @classmethod
    def from_functions(cls, acting, target, funcs: Sequence[Callable]) -> "ActionMap":
        perms = []
        for f in funcs:
            perms.append(np.array([target.index[f(e)] for e in target.elements]))
        return cls(acting, target, perms)

    @classmethod
    def trivial(cls, acting, target) -> "ActionMap":
        ident = np.arange(target.order)
        return cls(acting, target, [ident] * len(acting.gens))

    def validate(self) -> None:
        T = self.target
        for perm in self.gen_images:
            if sorted(perm.tolist()) != list(range(T.order)):
                raise InvalidAction("generator image is not a bijection")
            if not is_homomorphism_map(T, T, perm):
                raise InvalidAction("generator image is not an automorphism of the target")
        A = self.acting
        maps = self.maps
        ident = np.arange(T.order)
        if not np.array_equal(maps[0], ident):
            raise InvalidAction("identity does not act trivially")
        for a in range(A.order):
            for si in range(len(A.gens)):
                if not np.array_equal(maps[A.R[a, si]], maps[a][self.gen_images[si]]):
                    raise InvalidAction("action is not a homomorphism")

    @cached_property
    def maps(self) -> list[np.ndarray]:
        A = self.acting
        out: list = [None] * A.order
        out[0] = np.arange(self.target.order)
        for j in range(1, A.order):
            out[j] = out[A.parent[j]][self.gen_images[A.pgen[j]]]
        return out

    def __call__(self, a: int) -> np.ndarray:
        return self.maps[a]


def is_homomorphism_map(A: ConcreteGroup, B: ConcreteGroup, f: np.ndarray) -> bool:
    """Does the index map ``f: A -> B`` respect multiplication?

    Checking ``f(x s) == f(x) f(s)`` for every element ``x`` and generator
    ``s`` of ``A`` is sufficient since the generators generate.
    """
    if f[0] != 0:
        return False
    for si, s in enumerate(A.gens):
        if not np.array_equal(f[A.R[:, si]], B.right_col(int(f[s]))[f]):
            return False
    return True


def semidirect(normal: ConcreteGroup, acting: ConcreteGroup, action: ActionMap, name: str = "",
               bound: int = DEFAULT_BOUND) -> ConcreteGroup:
    """``normal ⋊ acting`` on pairs ``(n, a)`` with ``(n,a)(n',a') = (n a(n'), a a')``."""
    if action.acting is not acting or action.target is not normal:
        raise InvalidAction("action does not match the factors")
    maps = action.maps

    def mul(x, y):
        n1, a1 = x
        n2, a2 = y
        return (normal.mul(n1, int(maps[a1][n2])), acting.mul(a1, a2))

    gens = [(g, 0) for g in normal.gens] + [(0, g) for g in acting.gens]
    name = name or f"{normal.name} ⋊ {acting.name}"
    return ConcreteGroup.from_generators(gens, mul, (0, 0), name, bound)


def extend_map(A: ConcreteGroup, images: Sequence, mul_b: Callable, identity_b) -> tuple[list, bool]:
    """Extend generator images to all of ``A`` along the Cayley tree.

    Returns ``(values, consistent)``; ``consistent`` is True iff the values
    define a homomorphism (every Cayley edge agrees).
    """
    vals: list = [None] * A.order
    vals[0] = identity_b
    for j in range(1, A.order):
        vals[j] = mul_b(vals[A.parent[j]], images[A.pgen[j]])
    for x in range(A.order):
        for si in range(len(A.gens)):
            if vals[A.R[x, si]] != mul_b(vals[x], images[si]):
                return vals, False
    return vals, True

