"""Collected normal forms for class-2 groups of exponent dividing p^2.

A presentation is given by a rank ``n``, an odd prime ``p`` and, for each
generator ``x_i``, a central word ``c_i`` written over the commutator basis
``[x_j, x_k]`` (``j < k``).  The group is

    < x_1..x_n | [x_i, x_j, x_k] = 1,  x_i^p = c_i >

and every element has the unique form
``x_1^a_1 ... x_n^a_n * prod_{j<k} [x_j, x_k]^b_jk`` with ``0 <= a, b < p``.
Commutators are ``[x, y] = x y x^-1 y^-1``, so pushing ``x_k`` to the right
past ``x_j`` (``j < k``) costs a factor ``[x_j, x_k]^-1``.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple, Sequence

import numpy as np

from grpforge import groups as gr
from grpforge.errors import GrpforgeError
from grpforge.fp import is_prime


class Class2Element(NamedTuple):
    a: tuple
    b: tuple


class Class2Presentation:
    def __init__(self, n: int, p: int, c_words):
        if n < 1:
            raise ValueError("rank must be >= 1")
        if not is_prime(p) or p == 2:
            raise ValueError("class-2 collection needs an odd prime")
        self.n = n
        self.p = p
        self.pairs = list(itertools.combinations(range(n), 2))
        self.pair_index = {pr: i for i, pr in enumerate(self.pairs)}
        c = np.zeros((n, len(self.pairs)), dtype=np.int64)
        if c_words is not None:
            c_words = np.asarray(c_words, dtype=np.int64).reshape(n, len(self.pairs))
            c[:] = c_words % p
        self.c = c
        self._c_rows = [tuple(int(v) for v in row) for row in c]

    def __eq__(self, other):
        return (
            isinstance(other, Class2Presentation)
            and (self.n, self.p) == (other.n, other.p)
            and np.array_equal(self.c, other.c)
        )

    __hash__ = None

    @property
    def order(self) -> int:
        return self.p ** (self.n * (self.n + 1) // 2)

    def identity(self) -> Class2Element:
        return Class2Element((0,) * self.n, (0,) * len(self.pairs))

    def gen(self, i: int) -> Class2Element:
        a = [0] * self.n
        a[i] = 1
        return Class2Element(tuple(a), (0,) * len(self.pairs))

    def comm_basis(self, j: int, k: int) -> Class2Element:
        """``[x_j, x_k]`` as an element (any order of ``j, k``)."""
        b = [0] * len(self.pairs)
        if j < k:
            b[self.pair_index[(j, k)]] = 1
        elif j > k:
            b[self.pair_index[(k, j)]] = self.p - 1
        return Class2Element((0,) * self.n, tuple(b))

    def _check(self, *xs):
        for x in xs:
            if len(x.a) != self.n or len(x.b) != len(self.pairs):
                raise GrpforgeError("element does not belong to this presentation")

    def multiply(self, x: Class2Element, y: Class2Element) -> Class2Element:
        p = self.p
        xa, ya = x.a, y.a
        b = [u + v for u, v in zip(x.b, y.b)]
        for idx, (j, k) in enumerate(self.pairs):
            b[idx] -= xa[k] * ya[j]
        a = []
        for i in range(self.n):
            s = xa[i] + ya[i]
            if s >= p:
                row = self._c_rows[i]
                for idx in range(len(b)):
                    b[idx] += row[idx]
                s -= p
            a.append(s)
        return Class2Element(tuple(a), tuple(v % p for v in b))

    def inverse(self, x: Class2Element) -> Class2Element:
        p = self.p
        na = tuple((-v) % p for v in x.a)
        # x * (na, 0) = (0, b + beta); the inverse cancels that b-part.
        t = self.multiply(Class2Element(x.a, (0,) * len(self.pairs)), Class2Element(na, (0,) * len(self.pairs)))
        nb = tuple((-u - v) % p for u, v in zip(x.b, t.b))
        return Class2Element(na, nb)

    def commutator(self, x: Class2Element, y: Class2Element) -> Class2Element:
        p = self.p
        b = []
        for j, k in self.pairs:
            b.append((x.a[j] * y.a[k] - x.a[k] * y.a[j]) % p)
        return Class2Element((0,) * self.n, tuple(b))

    def power(self, x: Class2Element, m: int) -> Class2Element:
        if m < 0:
            x, m = self.inverse(x), -m
        result, base = self.identity(), x
        while m:
            if m & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            m >>= 1
        return result

    def element_order(self, x: Class2Element) -> int:
        e = self.identity()
        k, y = 1, x
        while y != e:
            y = self.multiply(y, x)
            k += 1
        return k

    def evaluate(self, x: Class2Element, images: Sequence, mul, power, commutator, identity):
        """Image of ``x`` under the homomorphism sending ``x_i`` to ``images[i]``.

        The caller guarantees that the assignment respects the relations.
        """
        out = identity
        for i, e in enumerate(x.a):
            if e:
                out = mul(out, power(images[i], e))
        for (j, k), e in zip(self.pairs, x.b):
            if e:
                out = mul(out, power(commutator(images[j], images[k]), e))
        return out

    def substitute(self, x: Class2Element, images: Sequence[Class2Element]) -> Class2Element:
        """Endomorphism image, with generator images in this same presentation."""
        return self.evaluate(x, images, self.multiply, self.power, self.commutator, self.identity())

    def enumerate(self, bound: int = gr.DEFAULT_BOUND, name: str = "") -> gr.ConcreteGroup:
        gens = [self.gen(i) for i in range(self.n)]
        G = gr.ConcreteGroup.from_generators(gens, self.multiply, self.identity(), name or "P", bound)
        G.presentation = self
        return G


def c2_multiply(pres: Class2Presentation, x, y):
    pres._check(x, y)
    return pres.multiply(x, y)


def c2_commutator(pres: Class2Presentation, x, y):
    pres._check(x, y)
    return pres.commutator(x, y)


def c2_power(pres: Class2Presentation, x, m: int):
    pres._check(x)
    return pres.power(x, m)


def build_lemgenrel(n: int, p: int, c_words=None, bound: int = gr.DEFAULT_BOUND) -> gr.ConcreteGroup:
    """Enumerated group ``<x_1..x_n | class 2, x_i^p = c_i>``."""
    pres = Class2Presentation(n, p, c_words)
    return pres.enumerate(bound, f"genrel(n={n}, p={p})")


P3_TYPES = ("D8", "Q8", "extraspecial-exponent-p", "C_{p^2}⋊C_p")


def p3_type(p: int, a: int, b: int) -> str:
    """Isomorphism type of ``<x, y | class 2, x^p = [x,y]^a, y^p = [x,y]^b>``."""
    if p == 2:
        return "Q8" if (a * b) % 2 else "D8"
    if a % p == 0 and b % p == 0:
        return "extraspecial-exponent-p"
    return "C_{p^2}⋊C_p"


def build_p3(p: int, a: int, b: int) -> tuple[gr.ConcreteGroup, str]:
    """The order-p^3 group with the given power relations, plus its type tag.

    For ``p = 2`` the group is realised inside the known order-8 group by
    searching for generators that satisfy the relations.  The returned group
    has designated generators ``(x, y)``.
    """
    tag = p3_type(p, a, b)
    if p != 2:
        pres = Class2Presentation(2, p, [[a], [b]])
        G = pres.enumerate(name=f"P3(p={p}, a={a}, b={b})")
        G.p3_relations = (a, b)
        return G, tag
    from grpforge.groupspec import realize

    K = realize("Q8" if tag == "Q8" else "D8")
    for x, y in itertools.product(range(1, 8), repeat=2):
        c = K.commutator(x, y)
        if c == 0:
            continue
        if K.power(x, 2) != K.power(c, a % 2) or K.power(y, 2) != K.power(c, b % 2):
            continue
        if len(K.closure([x, y])) != 8:
            continue
        ex, ey = K.elements[x], K.elements[y]
        G = gr.ConcreteGroup.from_generators([ex, ey], K.mul_elements, K.elements[0], f"P3(p=2, a={a}, b={b})")
        G.p3_relations = (a, b)
        return G, tag
    raise GrpforgeError(f"no generators of {tag} satisfy the relations for a={a}, b={b}")


def thmext_relations(G: gr.ConcreteGroup, p: int, gens: Sequence[int]) -> np.ndarray:
    """Central words ``c_{v_g} = prod_i [v_g, v_{g x_i}]^i`` over the pair basis."""
    n = G.order
    pairs = list(itertools.combinations(range(n), 2))
    pair_index = {pr: i for i, pr in enumerate(pairs)}
    c = np.zeros((n, len(pairs)), dtype=np.int64)
    for g in range(n):
        for i, x in enumerate(gens, start=1):
            h = G.mul(g, x)
            if g < h:
                c[g, pair_index[(g, h)]] += i
            else:
                c[g, pair_index[(h, g)]] -= i
    return c % p


def build_thmext_P(G: gr.ConcreteGroup, p: int, gens: Sequence[int], enumerate: bool = True):
    """The class-2 p-group on generators ``v_g`` (``g`` in ``G``).

    ``v_g`` is generator number ``g`` (the index of ``g`` in ``G``).  Returns
    the enumerated group when ``enumerate`` is set, else the presentation.
    """
    if not is_prime(p) or p <= G.order:
        raise ValueError(f"need a prime p > |G| = {G.order}, got {p}")
    gens = [int(g) for g in gens]
    if 0 in gens:
        raise ValueError("the generating set must not contain the identity")
    if len(set(gens)) != len(gens):
        raise ValueError("generators must be distinct")
    if len(G.closure(gens)) != G.order:
        raise ValueError("the given elements do not generate G")
    pres = Class2Presentation(G.order, p, thmext_relations(G, p, gens))
    if not enumerate:
        return pres
    return pres.enumerate(name=f"P(|G|={G.order}, p={p})")


def compare_with_free(n: int, p: int, bound: int = gr.DEFAULT_BOUND) -> dict:
    """Check the collected class-2 group against the series model.

    With every ``c_i`` trivial the presentation is the free class-2 group of
    exponent ``p``; so is the group generated by ``exp(X_i)`` in the
    algebra truncated above degree 2.  The generator correspondence is
    extended along the Cayley tree and checked on every edge.
    """
    from grpforge.freenil import FreeNilpotentGroup

    A = Class2Presentation(n, p, None).enumerate(bound, f"class2(n={n}, p={p})")
    B = FreeNilpotentGroup(n, 2, p).as_concrete(bound)
    images = [B.gens[i] for i in range(n)]
    vals, consistent = gr.extend_map(A, images, B.mul, 0)
    bijective = len(set(vals)) == A.order == B.order
    return {"orders": (A.order, B.order), "homomorphism": consistent, "bijective": bijective,
            "isomorphic": consistent and bijective}
