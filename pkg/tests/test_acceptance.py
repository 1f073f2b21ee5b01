"""Acceptance checks, one test per criterion; each records a PASS/FAIL line."""

import itertools
import math
import random
import time

import pytest

from grpforge import aut, cli, fp
from grpforge.class2 import build_lemgenrel, build_p3, compare_with_free
from grpforge.constructions import (
    centralizer_of_qj,
    compare_with_holomorph,
    cornulier_construct,
    cayley_color_autos,
    holomorph_power,
    pettet_construct,
    verify_alpha_outer,
    verify_pettet_full,
)
from grpforge.freenil import FreeNilpotentGroup, lie_congruence_solutions, multilinearity_check
from grpforge.groups import symmetric
from grpforge.groupspec import realize
from grpforge.unitri import UnitriangularGroup, lemLie_matrix_witness


def test_witt_and_cornulier_sizes(acceptance):
    start = time.monotonic()
    code, rep = cli.run(["witt", "3", "3"])
    witt_ok = code == 0 and rep.data["total"] == 14 and rep.data["degrees"] == [3, 3, 8]
    code, rep = cli.run(["construct", "cornulier", "C3"])
    orders = {k: v["factors"] for k, v in rep.orders.items()}
    sizes_ok = (
        code == 0
        and orders["F"] == {"5": 14}
        and orders["P"] == {"5": 11}
        and orders["H"] == {"2": 6, "5": 11}
    )
    elapsed = time.monotonic() - start
    ok = witt_ok and sizes_ok and elapsed < 30
    acceptance(1, "witt 3 3 total 14; |F|=5^14, |P|=5^11, |H|=2^6*5^11", ok)
    assert witt_ok and sizes_ok
    assert elapsed < 30


def test_lie_congruence_exhaustive(acceptance):
    start = time.monotonic()
    ok = True
    for n, p in ((3, 5), (4, 5)):
        ident = tuple(range(1, n))
        ok &= lie_congruence_solutions(n, p) == [(ident, 1)]
        for pi in itertools.permutations(range(1, n)):
            for a in range(p):
                m1, m2 = lemLie_matrix_witness(n, p, pi, a)
                if (pi, a) == (ident, 1):
                    ok &= m1 and m2
                else:
                    ok &= not (m1 and m2)
    elapsed = time.monotonic() - start
    acceptance(2, "only (id, 1) satisfies the congruence; matrices reject the rest", ok and elapsed < 120)
    assert ok
    assert elapsed < 120


def test_out_of_holomorph_powers(acceptance):
    ok = True
    slow = 0.0
    for p, n in ((3, 1), (5, 1), (3, 2), (5, 2)):
        start = time.monotonic()
        H = holomorph_power(p, n)
        res = aut.automorphism_group(H)
        Out = res.out_group()
        ok &= res.out_order == math.factorial(n)
        ok &= aut.isomorphic(Out, symmetric(n)) is not None
        slow = max(slow, time.monotonic() - start)
    acceptance(3, "Out((C_p ⋊ C_{p-1})^n) ≅ S_n for (3,1),(5,1),(3,2),(5,2)", ok and slow < 300)
    assert ok
    assert slow < 300


@pytest.mark.slow
def test_pettet_full_c2(acceptance):
    start = time.monotonic()
    T = pettet_construct(realize("C2"))
    r = verify_pettet_full(T, timeout=15 * 60)
    elapsed = time.monotonic() - start
    ok = (
        (T.p, T.q) == (3, 7)
        and r["order"] == 2646
        and r["checked"] == r["aut_order"]
        and r["normalize_Q"] == r["checked"]
        and r["normalize_N"] == r["checked"]
        and r["identity_on_quotient"] == r["checked"]
        and r["passed"]
    )
    print(f"|Aut(Ghat)| = {r['aut_order']}, |Out(Ghat)| = {r['out_order']}, {elapsed:.1f}s")
    acceptance(4, "every automorphism of the C2 tower (order 2646) normalizes Q, N and fixes Ghat/N", ok and elapsed < 900)
    assert ok
    assert elapsed < 900


def test_p3_classification(acceptance):
    start = time.monotonic()
    ok = True
    D8, Q8 = realize("D8"), realize("Q8")
    for a, b in itertools.product(range(2), repeat=2):
        G, tag = build_p3(2, a, b)
        want = "Q8" if a * b % 2 else "D8"
        ok &= tag == want and aut.isomorphic(G, Q8 if want == "Q8" else D8) is not None
    for p in (3, 5):
        extraspecial = build_p3(p, 0, 0)[0]
        metacyclic = realize(f"C{p * p} |x[pow{p + 1}] C{p}")
        ok &= aut.isomorphic(extraspecial, metacyclic) is None
        for a, b in itertools.product(range(p), repeat=2):
            G, tag = build_p3(p, a, b)
            ok &= G.order == p**3 and not G.is_abelian()
            ref = extraspecial if (a, b) == (0, 0) else metacyclic
            want = "extraspecial-exponent-p" if (a, b) == (0, 0) else "C_{p^2}⋊C_p"
            ok &= tag == want and aut.isomorphic(G, ref) is not None
    elapsed = time.monotonic() - start
    acceptance(5, "order-p^3 presentations classified and certified by isomorphism", ok and elapsed < 60)
    assert ok
    assert elapsed < 60


def test_genrel_structure(acceptance):
    start = time.monotonic()
    rng = random.Random(2024)
    ok = True
    for n, p in ((2, 3), (2, 5), (3, 3)):
        npairs = n * (n - 1) // 2
        for _ in range(5):
            c = [[rng.randrange(p) for _ in range(npairs)] for _ in range(n)]
            G = build_lemgenrel(n, p, c)
            ok &= G.order == p ** (n * (n + 1) // 2)
            D = G.derived_subgroup
            comms = [G.commutator(G.gens[j], G.gens[k]) for j, k in itertools.combinations(range(n), 2)]
            ok &= len(D) == p**npairs
            ok &= len(G.closure(comms)) == p**npairs
            ok &= all(int(G.orders[d]) in (1, p) for d in D)
            ok &= all(G.mul(int(x), int(y)) == G.mul(int(y), int(x)) for x in D for y in D)
    elapsed = time.monotonic() - start
    acceptance(6, "order p^(n(n+1)/2), derived subgroup elementary abelian on independent commutators", ok and elapsed < 60)
    assert ok
    assert elapsed < 60


def test_multilinearity(acceptance):
    start = time.monotonic()
    ok = True
    for grp in (FreeNilpotentGroup(3, 3, 5), UnitriangularGroup(4, 5)):
        for k in (2, 3):
            passed, witness = multilinearity_check(grp, k, 200, random.Random(7 + k))
            ok &= passed
    elapsed = time.monotonic() - start
    acceptance(7, "commutators multilinear mod the next lower central term in F(3,3,5) and UT(4,5)", ok and elapsed < 60)
    assert ok
    assert elapsed < 60


def _cornulier_core(cg):
    return (
        cg.ideal.rank == cg.n
        and cg.ideal_q_invariant()
        and cg.ideal_alpha_invariant()
        and verify_alpha_outer(cg)["passed"]
    )


def test_cornulier_structure_c3(acceptance):
    start = time.monotonic()
    cg = cornulier_construct(realize("C3"))
    ok = cg.p == 5 and _cornulier_core(cg)
    ok &= cg.relations_vanish()
    ok &= not cg.check_alpha(200, random.Random(3))
    ok &= all(centralizer_of_qj(cg, j)["passed"] for j in range(cg.n))
    ok &= compare_with_holomorph(cg)["passed"]
    elapsed = time.monotonic() - start
    acceptance(8, "Cornulier structural suite, G = C3", ok and elapsed < 120)
    assert ok
    assert elapsed < 120


@pytest.mark.big
def test_cornulier_structure_s3(acceptance):
    start = time.monotonic()
    cg = cornulier_construct(realize("S3"), max_coords=60_000)
    ok = cg.p == 7 and cg.F.size == 55_987 and _cornulier_core(cg)
    elapsed = time.monotonic() - start
    acceptance(8, "Cornulier rank and ideal checks, G = S3 (--big)", ok and elapsed < 1800)
    assert ok
    assert elapsed < 1800


def test_class2_against_series(acceptance):
    start = time.monotonic()
    ok = all(compare_with_free(2, p)["isomorphic"] for p in (3, 5))
    elapsed = time.monotonic() - start
    acceptance(9, "collection engine and series engine agree for n=2, p in {3,5}", ok and elapsed < 60)
    assert ok
    assert elapsed < 60


def test_lemma_aut_instances(acceptance):
    start = time.monotonic()
    results = [aut.verify_lemma_aut(m, units) for m, units in ((7, [2]), (5, [2]), (9, [4]))]
    ok = all(r["passed"] for r in results) and results[0]["checked"] == 42
    ok &= [r["acting_order"] for r in results] == [3, 4, 3]
    elapsed = time.monotonic() - start
    acceptance(10, "normalizing automorphisms centralize the quotient for C7⋊C3, C5⋊C4, C9⋊C3", ok and elapsed < 60)
    assert ok
    assert elapsed < 60


def _other_generating_set(G):
    size = len(G.gens)
    for combo in reversed(list(itertools.combinations(range(1, G.order), size))):
        if set(combo) != set(G.gens) and len(G.closure(combo)) == G.order:
            return list(combo)
    raise AssertionError("no second generating set")


def test_cayley_color_graph(acceptance):
    start = time.monotonic()
    ok = True
    for name in ("C3", "C4", "S3", "D8"):
        G = realize(name)
        for gens in (list(G.gens), _other_generating_set(G)):
            C, is_left = cayley_color_autos(G, gens)
            ok &= C.order == G.order and is_left and aut.isomorphic(C, G) is not None
    elapsed = time.monotonic() - start
    acceptance(11, "colour-preserving automorphisms are the left translations (C3, C4, S3, D8)", ok and elapsed < 10)
    assert ok
    assert elapsed < 10
