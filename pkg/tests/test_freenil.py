import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grpforge import fp
from grpforge.constructions import cornulier_ideal
from grpforge.errors import GrpforgeError, SearchBoundExceeded
from grpforge.freenil import (
    CentralIdeal,
    FreeNilpotentGroup,
    fixed_subgroup,
    group_order_exponent,
    hall_basis,
    lie_congruence_holds,
    lyndon_words,
    multilinearity_check,
    quotient_reduce,
    substitution_endomorphism,
)
from grpforge.groupspec import realize


@pytest.fixture(scope="module")
def F335():
    return FreeNilpotentGroup(3, 3, 5)


def test_exp_coefficients():
    F = FreeNilpotentGroup(1, 3, 5)
    g = F.exp(F.letter(0))
    assert [int(g.coef[F.word_index([0] * k)]) for k in range(4)] == [1, 1, 3, 1]
    assert F.exp(F.zero()) == F.one()


def test_bch_degree_two(F335):
    lg = F335.log(F335.mul(F335.generators[0], F335.generators[1]))
    coords = F335.hall.coordinates(lg.degree(2), 2)
    assert F335.hall.labels(2)[0] == "[x1,x2]"
    assert coords[0] == 3


def test_elements(F335):
    assert F335.element([]) == F335.one()
    assert F335.power(F335.generators[0], 5) == F335.one()
    c = F335.element([1, 2, -1, -2])
    assert not F335.log(c).degree(1).any()
    with pytest.raises(GrpforgeError):
        F335.element([4])


@pytest.mark.parametrize("n, c, counts", [(2, 2, [2, 1]), (3, 3, [3, 3, 8]), (1, 3, [1, 0, 0]),
                                          (2, 3, [2, 1, 2]), (4, 4, [4, 6, 20, 60])])
def test_hall_counts(n, c, counts):
    hb = hall_basis(n, c, 5)
    assert hb.counts() == counts == [fp.witt_dim(n, k) for k in range(1, c + 1)]
    assert hb.is_independent()


def test_hall_basis_labels():
    assert hall_basis(2, 2, 3).labels(2) == ["[x1,x2]"]
    assert lyndon_words(2, 3) == [(0,), (1,), (0, 1), (0, 0, 1), (0, 1, 1)]


def test_commutators(F335):
    x1, x2, x3 = F335.generators
    assert F335.commutator(x1, x1) == F335.one()
    c = F335.left_normed_commutator([x1, x2, x1])
    assert c != F335.one()
    assert not F335.log(c).coef[1:F335.offsets[3]].any()
    comp = F335.lcs_component(c, 3)
    assert np.count_nonzero(comp) == 1 and comp[np.nonzero(comp)[0][0]] in (1, 4)
    assert F335.left_normed_commutator([x1, F335.one(), x3]) == F335.one()
    assert F335.lcs_component(x1, 1).tolist() == [1, 0, 0]
    assert F335.lcs_component(F335.commutator(x1, x2), 2).tolist() == [1, 0, 0]
    with pytest.raises(GrpforgeError):
        F335.lcs_component(x1, 2)


def test_exponent_and_class(F335):
    rng = random.Random(0)
    for _ in range(100):
        g = F335.random_element(rng)
        assert F335.power(g, 5) == F335.one()
    for _ in range(20):
        gs = [F335.random_element(rng) for _ in range(4)]
        assert F335.left_normed_commutator(gs) == F335.one()
    x1, x2, _ = F335.generators
    assert F335.left_normed_commutator([x2, x2, x1]) != F335.one()


def test_exp_log_and_lie(F335):
    rng = random.Random(1)
    for _ in range(30):
        g = F335.random_element(rng)
        assert F335.exp(F335.log(g)) == g
        assert F335.is_group_like(g)
        a, b, c = (F335.random_element(rng) for _ in range(3))
        assert F335.mul(F335.mul(a, b), c) == F335.mul(a, F335.mul(b, c))
        assert F335.mul(a, F335.inv(a)) == F335.one()


def test_truncation_guard():
    with pytest.raises(ValueError):
        FreeNilpotentGroup(2, 3, 3)
    with pytest.raises(SearchBoundExceeded):
        FreeNilpotentGroup(5, 4, 7)


def test_group_order_exponents():
    assert group_order_exponent(3, 3, 5) == 14
    assert group_order_exponent(2, 2, 3) == 3
    F = FreeNilpotentGroup(3, 3, 5)
    ideal = cornulier_ideal(realize("C3"), 5, F)
    assert group_order_exponent(3, 3, 5, ideal) == 11
    assert FreeNilpotentGroup(2, 2, 3).as_concrete().order == 27


def test_quotient_reduce(F335):
    ideal = cornulier_ideal(realize("C3"), 5, F335)
    assert ideal.is_lie() and ideal.rank == 3
    x1, x2, x3 = F335.generators
    assert quotient_reduce(F335.one(), ideal) == F335.one()
    assert quotient_reduce(F335.left_normed_commutator([x1, x2, x1]), ideal) == F335.one()
    outside = F335.left_normed_commutator([x2, x2, x1])
    assert quotient_reduce(outside, ideal) != F335.one()
    rng = random.Random(2)
    for _ in range(20):
        g, h = F335.random_element(rng), F335.random_element(rng)
        rg = quotient_reduce(g, ideal)
        assert quotient_reduce(rg, ideal) == rg
        lhs = quotient_reduce(F335.mul(g, h), ideal)
        assert lhs == quotient_reduce(F335.mul(rg, quotient_reduce(h, ideal)), ideal)
        assert F335.is_group_like(rg)


def test_ideal_shape_checks(F335):
    with pytest.raises(GrpforgeError):
        CentralIdeal(F335, np.zeros((1, 9), dtype=np.int64))
    empty = CentralIdeal(F335, [])
    assert empty.rank == 0 and empty.contains(np.zeros(27, dtype=np.int64))


def test_substitutions(F335):
    x1, x2, x3 = F335.generators
    ident = substitution_endomorphism(F335, [1, 1, 1])
    assert ident(x1) == x1
    q1 = substitution_endomorphism(F335, [2, 1, 1])
    assert q1(x1) == F335.power(x1, 2)
    assert q1(x2) == x2
    kill = substitution_endomorphism(F335, [0, 1, 1])
    assert kill(x1) == F335.one()
    rng = random.Random(3)
    for _ in range(10):
        g, h = F335.random_element(rng), F335.random_element(rng)
        assert q1(F335.mul(g, h)) == F335.mul(q1(g), q1(h))
    G = realize("C3")
    ideal = cornulier_ideal(G, 5, F335)
    for h in range(3):
        sigma = [G.mul(h, j) for j in range(3)]
        assert substitution_endomorphism(F335, [1, 1, 1], sigma).preserves(ideal)
    swap = substitution_endomorphism(F335, [1, 1, 1], [1, 0, 2])
    assert not swap.preserves(ideal)


def test_fixed_subgroup(F335):
    ideal = cornulier_ideal(realize("C3"), 5, F335)
    ident = substitution_endomorphism(F335, [1, 1, 1])
    full = fixed_subgroup(ident, ideal)
    assert [full[k].shape[0] for k in (1, 2, 3)] == [3, 3, 8]
    q1 = substitution_endomorphism(F335, [2, 1, 1])
    fixed = fixed_subgroup(q1, ideal)
    assert fixed[1].tolist() == [[0, 1, 0], [0, 0, 1]]
    hb = F335.hall
    for k in (1, 2):
        # a Hall element is fixed iff letter 1 is absent
        expected = [r for r, wi in enumerate(hb.by_degree[k]) if 0 not in hb.words[wi]]
        assert fixed[k].shape[0] == len(expected)
        for row in fixed[k]:
            assert all(row[r] == 0 for r in range(len(row)) if r not in expected)


def test_lie_congruence():
    F = FreeNilpotentGroup(3, 3, 5)
    assert lie_congruence_holds(F, (1, 2), 1)
    assert not lie_congruence_holds(F, (2, 1), 1)
    assert not lie_congruence_holds(F, (1, 2), 2)
    with pytest.raises(GrpforgeError):
        lie_congruence_holds(F, (1, 1), 1)


def test_multilinearity():
    F = FreeNilpotentGroup(3, 3, 5)
    for k in (2, 3):
        ok, wit = multilinearity_check(F, k, 50, random.Random(k))
        assert ok, wit


class _Broken:
    """Abelian-looking group whose commutator is not multilinear."""

    def __init__(self):
        self.F = FreeNilpotentGroup(2, 3, 5)

    def __getattr__(self, name):
        return getattr(self.F, name)

    def in_lcs(self, g, k):
        return self.F.in_lcs(g, k + 1)


def test_multilinearity_reports_witness():
    ok, wit = multilinearity_check(_Broken(), 2, 50, random.Random(0))
    assert not ok and set(wit) >= {"trial", "position", "g", "h", "h_prime"}


def test_identity_inputs_to_multilinearity(F335):
    one = F335.one()
    assert F335.left_normed_commutator([one, one, one]) == one
