import itertools
import random

import numpy as np
import pytest

from grpforge.errors import GrpforgeError
from grpforge.freenil import multilinearity_check
from grpforge.unitri import (
    UnitriMatrix,
    UnitriangularGroup,
    closure,
    e_matrix,
    lcs_by_commutators,
    lcs_generators_ut,
    lemLie_assignments,
    lemLie_matrix_witness,
    ut_commutator,
    ut_left_normed,
)


def test_commutator_rules():
    p = 5
    E = lambda i, j: e_matrix(4, i, j, p)
    assert ut_commutator(E(1, 2), E(2, 3)) == E(1, 3)
    assert ut_commutator(E(1, 2), E(3, 4)).is_identity()
    assert ut_commutator(E(1, 2) * E(3, 4), E(2, 4)) == E(1, 4)
    assert ut_left_normed([E(1, 2), E(2, 3), E(3, 4)]) == E(1, 4)


def test_matrix_arithmetic():
    rng = random.Random(0)
    G = UnitriangularGroup(4, 7)
    for _ in range(20):
        x = G.random_element(rng)
        assert (x * x.inv()).is_identity()
        assert x**7 == G.identity()
        assert x ** -2 == (x.inv() * x.inv())
    with pytest.raises(GrpforgeError):
        UnitriMatrix(np.array([[1, 0], [1, 1]]), 5)
    with pytest.raises(GrpforgeError):
        e_matrix(3, 2, 2, 5)


@pytest.mark.parametrize("n", [3, 4])
def test_lemLie_witnesses(n):
    p = 5
    ident = tuple(range(1, n))
    for pi in itertools.permutations(range(1, n)):
        for a in range(p):
            m1, m2 = lemLie_matrix_witness(n, p, pi, a)
            if (pi, a) == (ident, 1):
                assert m1 and m2
            else:
                assert not (m1 and m2)


def test_lemLie_assignment_shapes():
    first, second = lemLie_assignments(4, 5)
    assert len(first) == len(second) == 3
    assert first[0] == e_matrix(5, 1, 2, 5) * e_matrix(5, 4, 5, 5)
    assert second[-1] == e_matrix(5, 4, 5, 5)


def test_lemLie_preconditions():
    with pytest.raises(GrpforgeError):
        lemLie_matrix_witness(3, 3, (1, 2), 1)
    with pytest.raises(GrpforgeError):
        lemLie_matrix_witness(3, 5, (1, 1), 1)
    with pytest.raises(GrpforgeError):
        lemLie_matrix_witness(3, 5, (1, 2), 5)


def test_lower_central_series_generated_by_higher_diagonals():
    m, p = 4, 3
    series = lcs_by_commutators(m, p, 4)
    assert [len(s) for s in series] == [p**3, p, 1]
    for k, layer in zip((2, 3), series):
        assert closure(lcs_generators_ut(m, p, k), m, p) == layer
    G = UnitriangularGroup(m, p)
    for k, layer in zip((2, 3), series):
        assert all(G.in_lcs(x, k) for x in layer)


def test_multilinearity_in_ut():
    G = UnitriangularGroup(4, 5)
    for k in (2, 3):
        ok, wit = multilinearity_check(G, k, 50, random.Random(k))
        assert ok, wit
