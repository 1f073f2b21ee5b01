import numpy as np
import pytest

from grpforge import aut
from grpforge import groups as gr
from grpforge.class2 import build_p3
from grpforge.constructions import holomorph_power
from grpforge.errors import GrpforgeError, NotNormalized, SearchBoundExceeded, SearchTimeout
from grpforge.groupspec import realize


@pytest.mark.parametrize(
    "spec, a, i, o",
    [("C3", 2, 1, 2), ("S3", 6, 6, 1), ("Q8", 24, 4, 6), ("D8", 8, 4, 2), ("C2xC2", 6, 1, 6),
     ("S4", 24, 24, 1), ("C5xC5", 480, 1, 480), ("C7|xC3", 42, 21, 2), ("C1", 1, 1, 1), ("C8", 4, 1, 4)],
)
def test_orders(spec, a, i, o):
    res = aut.automorphism_group(realize(spec))
    assert (res.aut_order, res.inn_order, res.out_order) == (a, i, o)
    maps = res.automorphisms()
    assert len(maps) == a
    assert len({m.images.tobytes() for m in maps}) == a
    assert all(m.is_valid() for m in maps)


def test_holomorph_out():
    assert aut.automorphism_group(holomorph_power(3, 2)).out_order == 2


def test_relabelling_invariance():
    S4 = gr.symmetric(4)
    elems = S4.elements
    other = gr.permutation_group([elems[5], elems[17], elems[9]])
    assert other.order == 24 and other.fingerprint() != S4.fingerprint()
    assert aut.automorphism_group(other).aut_order == 24
    Q = realize("Q8")
    Q2 = gr.ConcreteGroup.from_generators([Q.elements[3], Q.elements[5], Q.elements[2]], Q.mul_elements,
                                          Q.elements[0])
    assert aut.automorphism_group(Q2).aut_order == 24


def test_inn_is_normal():
    for spec in ("S3", "D8", "Q8"):
        G = realize(spec)
        res = aut.automorphism_group(G)
        inner = {a.images.tobytes() for a in aut.inner_automorphisms(G)}
        for a in res.automorphisms():
            ai = a.inverse()
            for x in range(G.order):
                c = aut.Automorphism(G, G.conj_map(x))
                assert a.compose(c).compose(ai).images.tobytes() in inner


def test_inner_automorphisms():
    assert len(aut.inner_automorphisms(gr.cyclic(6))) == 1
    assert len(aut.inner_automorphisms(gr.symmetric(3))) == 6
    assert len(aut.inner_automorphisms(realize("Q8"))) == 4


def test_automorphism_algebra():
    G = realize("Q8")
    maps = aut.automorphism_group(G).automorphisms()
    a, b = maps[3], maps[10]
    assert a.compose(a.inverse()).images.tolist() == list(range(8))
    assert a.compose(b).is_valid()
    assert a.gen_images == [a(g) for g in G.gens]


def test_out_group():
    res = aut.automorphism_group(realize("Q8"))
    Out = res.out_group()
    assert Out.order == 6
    assert aut.isomorphic(Out, gr.symmetric(3)) is not None
    Out2 = aut.automorphism_group(holomorph_power(5, 2)).out_group()
    assert aut.isomorphic(Out2, gr.symmetric(2)) is not None


def test_isomorphic():
    Q8 = realize("Q8")
    f = aut.isomorphic(build_p3(2, 1, 1)[0], Q8)
    assert f is not None
    assert aut.isomorphic(build_p3(2, 0, 0)[0], Q8) is None
    assert aut.isomorphic(gr.cyclic(6), gr.symmetric(3)) is None
    assert aut.isomorphic(gr.cyclic(4), gr.cyclic(5)) is None
    A, B = realize("C2xC3"), gr.cyclic(6)
    f = aut.isomorphic(A, B)
    assert gr.is_homomorphism_map(A, B, f) and len(set(f.tolist())) == 6


def test_induced_on_quotient():
    G = realize("S3")
    A3 = G.derived_subgroup
    for a in aut.automorphism_group(G).automorphisms():
        ind = aut.induced_on_quotient(a, A3)
        assert ind.is_inner and ind.is_identity
    V = realize("C2xC2")
    N = V.closure([V.gens[0]])
    movers = [a for a in aut.automorphism_group(V).automorphisms() if not aut.normalizes(a, N)]
    assert movers
    with pytest.raises(NotNormalized):
        aut.induced_on_quotient(movers[0], N)


def test_outer_action_on_quotient_detected():
    G = realize("C3xC3")
    N = G.closure([G.gens[0]])
    found_nontrivial = False
    for a in aut.automorphism_group(G).automorphisms():
        if aut.normalizes(a, N):
            ind = aut.induced_on_quotient(a, N)
            assert ind.is_inner == ind.is_identity  # abelian quotient
            found_nontrivial |= not ind.is_identity
    assert found_nontrivial


def test_lemma_aut():
    r = aut.verify_lemma_aut(7, [2])
    assert r["passed"] and r["checked"] == 42
    assert aut.verify_lemma_aut(5, [2])["passed"]
    assert aut.verify_lemma_aut(9, [4])["passed"]
    r = aut.verify_lemma_aut(5, [])
    assert r["passed"] and r["acting_order"] == 1


def test_limits():
    with pytest.raises(SearchBoundExceeded):
        aut.automorphism_group(gr.symmetric(4), bound=10)
    with pytest.raises(SearchTimeout):
        aut.automorphism_group(realize("C5xC5"), timeout=0.0)


def test_color_preserving_group_limits():
    with pytest.raises(GrpforgeError):
        aut.color_preserving_group(gr.cyclic(1), [])
    with pytest.raises(GrpforgeError):
        aut.color_preserving_group(gr.cyclic(4), [2])


def test_signatures_are_invariant():
    G = realize("D8")
    sigs = aut.signatures(G)
    for a in aut.automorphism_group(G).automorphisms():
        assert all(sigs[x] == sigs[a(x)] for x in range(G.order))
