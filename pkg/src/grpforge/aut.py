"""Automorphism groups, isomorphisms and quotient actions by backtrack search.

Search outline.  A generating set ``s_1..s_k`` of the source group is chosen
greedily so that the earliest generators have the fewest admissible images.
An element is admissible as an image of ``s_j`` only if it shares the
``s_j``'s invariant signature (order, class size, power-map class sizes,
membership in center / derived subgroup / normal Hall subgroups).  After each
assignment the partial map is extended along the Cayley tree of
``<s_1..s_j>`` and rejected unless it is an injective homomorphism there.
Every reported map has been checked on the whole group.

For automorphism groups the image of ``s_1`` is restricted to one element per
conjugacy class; the full group is the set of all ``inn_x o beta`` (the
``beta`` found this way are kept, the rest are produced on demand).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

import numpy as np

from grpforge.errors import NotNormalized, SearchBoundExceeded, SearchTimeout
from grpforge.groups import ConcreteGroup, permutation_group

DEFAULT_SEARCH_BOUND = 5000
DEFAULT_TIMEOUT = 15 * 60.0


def _require_table(G: ConcreteGroup, bound: int) -> np.ndarray:
    if G.order > bound:
        raise SearchBoundExceeded(f"group of order {G.order} exceeds search bound {bound}")
    return G.table


def power_maps(G: ConcreteGroup) -> list[np.ndarray]:
    """``pw[d][x] = x^d`` for ``d = 0..exponent``."""
    T = G.table
    ar = np.arange(G.order)
    out = [np.zeros(G.order, dtype=np.int64), ar]
    for _ in range(int(G.orders.max()) - 1):
        out.append(T[out[-1], ar])
    return out


def characteristic_keys(G: ConcreteGroup) -> list[tuple[str, np.ndarray]]:
    from grpforge.fp import factorize
    import itertools

    keyed = []
    for key, sub in (("Z", G.center), ("D", G.derived_subgroup)):
        m = np.zeros(G.order, dtype=bool)
        m[sub] = True
        keyed.append((key, m))
    primes = sorted(factorize(G.order))
    for k in range(1, len(primes)):
        for pi in itertools.combinations(primes, k):
            sub = G.pi_subgroup(pi)
            if sub is not None:
                m = np.zeros(G.order, dtype=bool)
                m[sub] = True
                keyed.append((f"hall{pi}", m))
    return keyed


def signatures(G: ConcreteGroup) -> list[tuple]:
    """Automorphism-invariant label of each element."""
    cache = G.__dict__.get("_signatures")
    if cache is not None:
        return cache
    orders = G.orders
    sizes = G.class_sizes
    pw = power_maps(G)
    keyed = characteristic_keys(G)
    sigs = []
    for x in range(G.order):
        o = int(orders[x])
        profile = tuple(int(sizes[pw[d][x]]) for d in range(2, o) if o % d == 0)
        member = tuple(k for k, m in keyed if m[x])
        sigs.append((o, int(sizes[x]), profile, member))
    G.__dict__["_signatures"] = sigs
    return sigs


class _Prefix:
    """Cayley tree of ``<s_1..s_k>`` inside the source group."""

    def __init__(self, G: ConcreteGroup, gens: list[int]):
        cols = [G.table[:, s] for s in gens]
        self.cols = cols
        seen = np.zeros(G.order, dtype=bool)
        seen[0] = True
        levels = []  # (elements, parents, gen positions)
        frontier = np.array([0])
        members = [frontier]
        while frontier.size:
            els, pars, gps = [], [], []
            for gi, c in enumerate(cols):
                img = c[frontier]
                fresh = ~seen[img]
                img, par = img[fresh], frontier[fresh]
                img, first = np.unique(img, return_index=True)
                par = par[first]
                seen[img] = True
                els.append(img)
                pars.append(par)
                gps.append(np.full(img.size, gi))
            e = np.concatenate(els) if els else np.zeros(0, dtype=np.int64)
            if e.size:
                levels.append((e, np.concatenate(pars), np.concatenate(gps)))
                members.append(e)
            frontier = e
        self.levels = levels
        self.members = np.concatenate(members)
        self.size = self.members.size

    def extend(self, TB: np.ndarray, images: list[int], out: np.ndarray) -> bool:
        """Fill ``out`` on the prefix subgroup; True iff injective homomorphism."""
        out[0] = 0
        imgs = np.asarray(images)
        for e, par, gp in self.levels:
            out[e] = TB[out[par], imgs[gp]]
        f = out[self.members]
        for gi, c in enumerate(self.cols):
            if not np.array_equal(out[c[self.members]], TB[f, imgs[gi]]):
                return False
        return np.unique(f).size == self.size


def _choose_generators(A: ConcreteGroup, cand_count: np.ndarray) -> list[int]:
    order = sorted(range(1, A.order), key=lambda x: (cand_count[x], -int(A.orders[x]), x))
    chosen: list[int] = []
    mask = np.zeros(A.order, dtype=bool)
    mask[0] = True
    covered = 1
    for x in order:
        if covered == A.order:
            break
        if not mask[x]:
            chosen.append(x)
            sub = A.closure(chosen)
            mask[sub] = True
            covered = sub.size
    return chosen


class _Backtrack:
    def __init__(self, A: ConcreteGroup, B: ConcreteGroup, timeout: float, first_choices=None):
        self.A, self.B = A, B
        sa, sb = signatures(A), signatures(B)
        by_sig: dict = {}
        for y, s in enumerate(sb):
            by_sig.setdefault(s, []).append(y)
        self.cands_by_sig = {k: np.array(v) for k, v in by_sig.items()}
        cand_count = np.array([len(by_sig.get(s, ())) for s in sa])
        self.gens = _choose_generators(A, cand_count)
        self.cands = [self.cands_by_sig.get(sa[s], np.zeros(0, dtype=np.int64)) for s in self.gens]
        if first_choices is not None and self.gens:
            keep = np.isin(self.cands[0], first_choices)
            self.cands[0] = self.cands[0][keep]
        self.prefixes = [_Prefix(A, self.gens[: k + 1]) for k in range(len(self.gens))]
        self.TB = B.table
        self.deadline = time.monotonic() + timeout
        self.nodes = 0

    def run(self, limit: int | None = None) -> Iterator[tuple[list[int], np.ndarray]]:
        """Yield ``(generator images, full map)`` for every isomorphism found."""
        A, B = self.A, self.B
        k = len(self.gens)
        if k == 0:
            yield [], np.zeros(1, dtype=np.int64)
            return
        images: list[int] = []
        bufs = [np.zeros(A.order, dtype=np.int64) for _ in range(k)]
        # image subgroup mask per depth, for the "new generator must leave the
        # previous image" cut
        found = 0
        stack = [iter(self.cands[0])]
        while stack:
            depth = len(stack) - 1
            try:
                y = int(next(stack[-1]))
            except StopIteration:
                stack.pop()
                if images:
                    images.pop()
                continue
            self.nodes += 1
            if self.nodes % 256 == 0 and time.monotonic() > self.deadline:
                raise SearchTimeout("automorphism search exceeded its time budget")
            if depth > 0:
                prev = self.prefixes[depth - 1]
                if np.isin(y, bufs[depth - 1][prev.members]):
                    continue
            trial = images + [y]
            if not self.prefixes[depth].extend(self.TB, trial, bufs[depth]):
                continue
            if depth + 1 == k:
                if self.prefixes[depth].size == A.order:
                    yield list(trial), bufs[depth].copy()
                    found += 1
                    if limit is not None and found >= limit:
                        return
                continue
            images.append(y)
            stack.append(iter(self.cands[depth + 1]))


@dataclass
class Automorphism:
    """A bijective endomorphism, stored as a full index map."""

    group: ConcreteGroup
    images: np.ndarray

    @property
    def gen_images(self) -> list[int]:
        return [int(self.images[g]) for g in self.group.gens]

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self o other``."""
        return Automorphism(self.group, self.images[other.images])

    def inverse(self) -> "Automorphism":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.images.size)
        return Automorphism(self.group, inv)

    def is_valid(self) -> bool:
        from grpforge.groups import is_homomorphism_map

        G = self.group
        return np.unique(self.images).size == G.order and is_homomorphism_map(G, G, self.images)

    def __eq__(self, other):
        return isinstance(other, Automorphism) and np.array_equal(self.images, other.images)

    __hash__ = None


@dataclass
class AutGroupResult:
    group: ConcreteGroup
    search_gens: list[int]
    # class representative r of the image of search_gens[0] -> full maps beta
    # with beta(search_gens[0]) == r
    reps: dict[int, list[np.ndarray]]
    conjugators: dict[int, dict[int, int]]
    nodes: int = 0
    seconds: float = 0.0
    _materialized: list | None = field(default=None, repr=False)

    @property
    def aut_order(self) -> int:
        G = self.group
        return sum(int(G.class_sizes[r]) * len(bs) for r, bs in self.reps.items())

    @property
    def inn_order(self) -> int:
        return self.group.order // len(self.group.center)

    @property
    def out_order(self) -> int:
        return self.aut_order // self.inn_order

    def iter_maps(self) -> Iterator[np.ndarray]:
        G = self.group
        for r, betas in self.reps.items():
            for y, x in self.conjugators[r].items():
                cm = G.conj_map(x)
                for b in betas:
                    yield cm[b]

    def automorphisms(self, limit: int = 200_000) -> list[Automorphism]:
        if self._materialized is None:
            if self.aut_order > limit:
                raise SearchBoundExceeded(f"|Aut| = {self.aut_order} too large to list")
            self._materialized = [Automorphism(self.group, f) for f in self.iter_maps()]
        return self._materialized

    def coset_key(self, images: np.ndarray) -> tuple:
        """Canonical label of the coset ``alpha Inn(G)``."""
        S = self.search_gens
        rows = self._conj_table[:, images[S]]
        best = np.lexsort(rows.T[::-1])[0]
        return tuple(int(v) for v in rows[best])

    @cached_property
    def _conj_table(self) -> np.ndarray:
        # C[x, y] = x y x^-1
        G = self.group
        return np.stack([G.conj_map(x) for x in range(G.order)])

    def out_group(self) -> ConcreteGroup:
        """``Aut(G)/Inn(G)`` as an enumerated group of cosets."""
        G = self.group
        reps: dict[tuple, np.ndarray] = {}
        for a in self.automorphisms():
            key = self.coset_key(a.images)
            reps.setdefault(key, a.images)
        ident = self.coset_key(np.arange(G.order))

        def mul(k1, k2):
            return self.coset_key(reps[k1][reps[k2]])

        keys = sorted(reps)
        Out = ConcreteGroup.from_generators(keys, mul, ident, f"Out({G.name})")
        Out.coset_reps = reps
        return Out


def automorphism_group(G: ConcreteGroup, bound: int = DEFAULT_SEARCH_BOUND,
                       timeout: float = DEFAULT_TIMEOUT) -> AutGroupResult:
    start = time.monotonic()
    _require_table(G, bound)
    labels = G.class_labels
    class_reps = np.nonzero(labels == np.arange(G.order))[0]
    bt = _Backtrack(G, G, timeout, first_choices=class_reps)
    reps: dict[int, list[np.ndarray]] = {}
    for imgs, full in bt.run():
        reps.setdefault(imgs[0] if imgs else 0, []).append(full)
    conjugators = {r: _conjugators(G, r) for r in reps}
    return AutGroupResult(G, bt.gens, reps, conjugators, bt.nodes, time.monotonic() - start)


def _conjugators(G: ConcreteGroup, r: int) -> dict[int, int]:
    """For each ``y`` conjugate to ``r`` some ``x`` with ``x r x^-1 = y``."""
    out = {r: 0}
    stack = [r]
    while stack:
        y = stack.pop()
        for si, c in enumerate(G.gen_conj_maps):
            z = int(c[y])
            if z not in out:
                out[z] = G.mul(G.gens[si], out[y])
                stack.append(z)
    return out


def inner_automorphisms(G: ConcreteGroup) -> list[Automorphism]:
    seen = set()
    out = []
    for x in range(G.order):
        cm = G.conj_map(x)
        key = cm.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(Automorphism(G, cm))
    return out


def coset_labels(G: ConcreteGroup, members: np.ndarray) -> np.ndarray:
    """Label ``x`` by the smallest index in ``x N``."""
    return G.table[:, members].min(axis=1)


@dataclass
class InducedMap:
    labels: np.ndarray  # coset label of every element
    mapping: dict[int, int]  # coset label -> coset label
    is_inner: bool

    @property
    def is_identity(self) -> bool:
        return all(k == v for k, v in self.mapping.items())


def induced_on_quotient(alpha: Automorphism, members: np.ndarray, labels: np.ndarray | None = None) -> InducedMap:
    G = alpha.group
    mask = np.zeros(G.order, dtype=bool)
    mask[members] = True
    if not mask[alpha.images[members]].all():
        raise NotNormalized("automorphism does not map the subgroup onto itself")
    if labels is None:
        labels = coset_labels(G, members)
    mapping = {}
    img_labels = labels[alpha.images]
    for x in np.unique(labels):
        mapping[int(x)] = int(img_labels[x])
    is_inner = False
    for g in np.unique(labels):
        cm = G.conj_map(int(g))
        if np.array_equal(labels[cm], img_labels):
            is_inner = True
            break
    return InducedMap(labels, mapping, is_inner)


def normalizes(alpha: Automorphism, members: np.ndarray) -> bool:
    mask = np.zeros(alpha.group.order, dtype=bool)
    mask[members] = True
    return bool(mask[alpha.images[members]].all())


def isomorphic(A: ConcreteGroup, B: ConcreteGroup, bound: int = DEFAULT_SEARCH_BOUND,
               timeout: float = DEFAULT_TIMEOUT) -> np.ndarray | None:
    """An explicit isomorphism ``A -> B`` as an index map, or ``None``."""
    if A.order != B.order:
        return None
    _require_table(A, bound)
    _require_table(B, bound)
    if sorted(signatures(A)) != sorted(signatures(B)):
        return None
    bt = _Backtrack(A, B, timeout)
    for _, full in bt.run(limit=1):
        return full
    return None


def verify_lemma_aut(m: int, units: list[int], bound: int = DEFAULT_SEARCH_BOUND,
                     timeout: float = DEFAULT_TIMEOUT) -> dict:
    """Automorphisms of ``C_m ⋊ A`` that normalize ``C_m`` centralize the quotient.

    ``A`` is the subgroup of ``(Z/m)^x`` generated by ``units`` acting by
    multiplication.
    """
    from grpforge import groups as gr

    N = gr.cyclic(m)
    A = gr.unit_group(m, units)
    funcs = [lambda x, u=A.elements[g]: x * u % m for g in A.gens]
    act = gr.ActionMap.from_functions(A, N, funcs)
    ident = np.arange(N.order)
    faithful = all(not np.array_equal(act(a), ident) for a in range(1, A.order))
    if not faithful:
        raise ValueError("the acting group is not faithful")
    Ghat = gr.semidirect(N, A, act, f"C{m} ⋊ A")
    res = automorphism_group(Ghat, bound, timeout)
    members = np.array([i for i, e in enumerate(Ghat.elements) if e[1] == 0])
    labels = coset_labels(Ghat, members)
    checked = normalizing = 0
    witness = None
    for f in res.iter_maps():
        checked += 1
        a = Automorphism(Ghat, f)
        if not normalizes(a, members):
            continue
        normalizing += 1
        if not induced_on_quotient(a, members, labels).is_identity:
            witness = a.gen_images
            break
    return {
        "m": m,
        "acting_order": A.order,
        "order": Ghat.order,
        "aut_order": res.aut_order,
        "checked": checked,
        "normalizing": normalizing,
        "passed": witness is None,
        "witness": witness,
    }


def color_preserving_group(G: ConcreteGroup, gens: list[int]) -> ConcreteGroup:
    """Vertex permutations of the Cayley color graph that keep every colour.

    Exhaustive over all permutations of the vertex set.
    """
    import itertools

    from grpforge.errors import GrpforgeError

    if G.order < 2:
        raise GrpforgeError("the Cayley color graph needs a nontrivial group")
    if G.order > 9:
        raise SearchBoundExceeded("exhaustive permutation filter limited to 9 vertices")
    if len(G.closure(gens)) != G.order:
        raise GrpforgeError("the colours do not generate the group")
    arrows = [G.table[:, x] for x in gens]  # colour i: v_g -> v_{g x_i}
    found = []
    n = G.order
    for perm in itertools.permutations(range(n)):
        pa = np.array(perm)
        if all(np.array_equal(pa[a], a[pa]) for a in arrows):
            found.append(tuple(perm))
    return permutation_group(found, f"ColAut({G.name})")
