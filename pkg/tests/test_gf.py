import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from faithlab import gf
from faithlab.errors import DivisionByZero, NotPrime, NotPrimePower, ReducibleModulus

SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def test_gf9_uses_x2_minus_x_minus_1():
    k = gf.field_make(3, 2, (-1, -1, 1))
    assert k.q == 9 and k.modulus == (2, 2, 1)
    assert gf.gf(9) == k
    x = k.x
    assert k.mul(x, x) == k.add(x, k.one)


def test_small_field_examples():
    assert gf.field_make(2).q == 2
    k4 = gf.field_make(2, 2, (1, 1, 1))
    assert k4.mul(k4.x, k4.x) == k4.add(k4.x, 1)
    assert gf.gf(5).inv(3) == 2
    assert len(list(gf.gf(8).elements())) == 8
    assert gf.gf(8).modulus == (1, 1, 0, 1)


def test_bad_inputs():
    with pytest.raises(NotPrime):
        gf.field_make(6)
    with pytest.raises(ReducibleModulus):
        gf.field_make(2, 2, (1, 0, 1))  # (x+1)^2
    with pytest.raises(ReducibleModulus):
        gf.field_make(3, 2, (0, 1, 2))  # not monic
    with pytest.raises(NotPrimePower):
        gf.gf(12)
    with pytest.raises(DivisionByZero):
        gf.gf(7).inv(0)


def test_default_modulus_is_first_irreducible():
    k = gf.gf(25)
    # monic quadratics x^2 + c1 x + c0, lexicographic in (c1, c0)
    for c1, c0 in itertools.product(range(5), repeat=2):
        cand = (c0, c1, 1)
        if gf.is_irreducible(cand, 5):
            assert k.modulus == cand
            break


@pytest.mark.parametrize("q", SMALL_Q)
def test_field_axioms_exhaustive(q):
    k = gf.gf(q)
    A, M, N = k.add_table, k.mul_table, k.neg_table
    el = np.arange(q)
    assert (A[el, 0] == el).all() and (M[el, 1] == el).all()
    assert (A == A.T).all() and (M == M.T).all()
    assert (A[el, N] == 0).all()
    for a in range(1, q):
        assert k.mul(a, k.inv(a)) == 1
    # associativity and distributivity over all triples
    assert (A[A[:, :, None], el[None, None, :]] == A[el[:, None, None], A[None, :, :]]).all()
    assert (M[M[:, :, None], el[None, None, :]] == M[el[:, None, None], M[None, :, :]]).all()
    assert (M[el[:, None, None], A[None, :, :]] == A[M[:, :, None], M[:, None, :]]).all()


@pytest.mark.parametrize("q", SMALL_Q)
def test_multiplicative_group_is_cyclic(q):
    k = gf.gf(q)
    g = k.primitive_element
    assert sorted(k.pow(g, i) for i in range(q - 1)) == list(range(1, q))


def test_mul_matrix_matches_multiplication():
    k = gf.gf(9)
    for a in range(9):
        Ma = k.mul_matrix(a)
        for b in range(9):
            col = np.array(k.coeffs(b))
            assert tuple(Ma @ col % 3) == k.coeffs(k.mul(a, b))


def test_solve_linear_examples():
    s = gf.solve_linear(np.eye(3, dtype=int), [1, 2, 0], 3)
    assert s.consistent and s.rank == 3 and tuple(s.particular) == (1, 2, 0) and len(s.kernel) == 0
    s = gf.solve_linear(np.zeros((2, 2), dtype=int), [0, 0], 2)
    assert s.consistent and s.rank == 0 and gf.rank(s.kernel, 2) == 2
    s = gf.solve_linear([[1, 1], [1, 1]], [0, 0], 2)
    assert s.rank == 1 and s.kernel.tolist() == [[1, 1]]
    s = gf.solve_linear([[1, 1], [1, 1]], [1, 0], 2)
    assert not s.consistent and s.particular is None


@settings(max_examples=60, deadline=None)
@given(p=st.sampled_from([2, 3]), data=st.data())
def test_solve_linear_matches_enumeration(p, data):
    A = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=16, max_size=16))).reshape(4, 4)
    b = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=4, max_size=4)))
    s = gf.solve_linear(A, b, p)
    X = gf.all_vectors(p, 4)
    sols = X[((X @ A.T) % p == b).all(axis=1)]
    assert s.consistent == (len(sols) > 0)
    if s.consistent:
        assert len(sols) == p ** (4 - s.rank)
        assert ((A @ s.particular) % p == b).all()
        homog = X[((X @ A.T) % p == 0).all(axis=1)]
        span = {gf.pack(v, p) for v in homog}
        assert {gf.pack(v, p) for v in gf.row_space(s.kernel, p)} <= span if len(s.kernel) else True
        assert len(s.kernel) == 4 - s.rank


@settings(max_examples=60, deadline=None)
@given(p=st.sampled_from([2, 3, 5]), rows=st.integers(1, 5), cols=st.integers(1, 5), data=st.data())
def test_rref_properties(p, rows, cols, data):
    A = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols)))
    A = A.reshape(rows, cols)
    R, piv = gf.rref(A, p)
    r = len(piv)
    assert r == gf.rank(A, p) == gf.rank(A.T, p)
    for i, c in enumerate(piv):
        assert R[i, c] == 1 and (R[:, c] == np.eye(len(R), dtype=int)[:, i][: len(R)]).all()
    N = gf.nullspace(A, p)
    assert len(N) == cols - r
    if len(N):
        assert ((A @ N.T) % p == 0).all()


@given(st.integers(0, 3**6 - 1))
def test_pack_roundtrip(code):
    v = gf.unpack(code, 3, 6)
    assert gf.pack(v, 3) == code
    assert (gf.all_vectors(3, 6)[code] == v).all()


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (4, 2), (5, 3)])
def test_projective_points_count(p, n):
    pts = gf.projective_points(p, n)
    assert len(pts) == (p**n - 1) // (p - 1)


def test_prime_power_helpers():
    assert gf.prime_power(81) == (3, 4)
    assert [q for q in range(2, 30) if gf.is_prime_power(q)] == [
        2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]
    assert gf.primes_up_to(20).tolist() == [2, 3, 5, 7, 11, 13, 17, 19]
