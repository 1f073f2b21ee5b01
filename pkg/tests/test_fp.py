import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grpforge import fp
from grpforge.errors import SearchBoundExceeded


@pytest.mark.parametrize("d, mu", [(1, 1), (4, 0), (6, 1), (2, -1), (30, -1), (12, 0)])
def test_mobius_values(d, mu):
    assert fp.mobius(d) == mu


def test_mobius_sum_vanishes():
    for k in range(2, 65):
        assert sum(fp.mobius(d) for d in fp.divisors(k)) == 0


def test_witt_dims():
    assert [fp.witt_dim(3, k) for k in (1, 2, 3)] == [3, 3, 8]
    assert fp.witt_total(3, 3) == 14
    assert fp.witt_dim(1, 2) == 0
    assert fp.witt_dim(2, 2) == 1
    assert [fp.witt_dim(4, k) for k in range(1, 5)] == [4, 6, 20, 60]


def test_witt_integrality():
    for n in range(1, 7):
        for k in range(1, 9):
            s = sum(fp.mobius(d) * n ** (k // d) for d in fp.divisors(k))
            assert s == k * fp.witt_dim(n, k)


@pytest.mark.parametrize("p, root", [(5, 2), (3, 2), (7, 3), (11, 2), (13, 2), (23, 5)])
def test_primitive_root(p, root):
    assert fp.primitive_root(p) == root
    assert pow(root, p - 1, p) == 1
    assert all(pow(root, m, p) != 1 for m in range(1, p - 1))


@pytest.mark.parametrize("p, q", [(3, 7), (5, 11), (2, 3), (7, 29), (11, 23)])
def test_find_prime_q(p, q):
    got = fp.find_prime_q(p)
    assert got == q
    assert got % p == 1 or p == 2
    assert all(got % d for d in range(2, int(got**0.5) + 1))


def test_find_prime_q_cap():
    with pytest.raises(SearchBoundExceeded):
        fp.find_prime_q(101, cap=150)


def test_factorize_and_primes():
    assert fp.factorize(2646) == {2: 1, 3: 3, 7: 2}
    assert fp.next_prime(6) == 7 and fp.next_prime(2) == 3
    assert [n for n in range(20) if fp.is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_unit_of_order():
    assert fp.unit_of_order(3, 7) == 2
    assert fp.mult_order(fp.unit_of_order(4, 5), 5) == 4
    with pytest.raises(ValueError):
        fp.unit_of_order(3, 5)


def test_rref_canonical():
    R, piv = fp.rref([[2, 4, 1], [1, 2, 4], [0, 0, 0]], 5)
    assert piv == [0, 2]
    assert R.tolist() == [[1, 2, 0], [0, 0, 1]]
    assert fp.rank([[1, 1], [2, 2]], 3) == 1


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rref_properties(rows):
    p = 7
    A = np.array(rows) % p
    R, piv = fp.rref(A, p)
    assert fp.same_row_space(A, R, p)
    for i, c in enumerate(piv):
        assert R[i, c] == 1
        assert not np.delete(R[:, c], i).any()
    assert fp.rref(R, p)[0].tolist() == R.tolist()
    N = fp.left_nullspace(A, p)
    if N.size:
        assert not (N @ A % p).any()
    assert N.shape[0] == A.shape[0] - len(piv)


@settings(max_examples=40, deadline=None)
@given(matrices, st.lists(st.integers(0, 6), min_size=4, max_size=4))
def test_solve_left_roundtrip(rows, coeffs):
    p = 7
    A = np.array(rows) % p
    y = np.array(coeffs[: A.shape[0]] + [0] * max(0, A.shape[0] - 4))[: A.shape[0]]
    target = y @ A % p
    sol = fp.solve_left(A, target, p)
    assert sol is not None
    assert np.array_equal(sol @ A % p, target)
    R, piv = fp.rref(A, p)
    assert not fp.reduce_mod_rows(target, R, piv, p).any()
