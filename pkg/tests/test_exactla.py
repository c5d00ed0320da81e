import itertools
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lenrep.exactla import (
    FieldMatrix,
    annihilator_rows,
    check_prime,
    complement_basis,
    hermite_rows,
    in_span,
    int_det,
    int_matmul,
    integer_kernel,
    intersect_spaces,
    inverse_mod,
    kernel_basis,
    lattice_equal,
    matmul_mod,
    nullspace_mod,
    rank_mod,
    rref,
    rref_mod,
    smith_normal_form,
    solve_integer,
    solve_mod,
)

primes = st.sampled_from([2, 3, 5, 7])


@st.composite
def mod_matrices(draw, max_rows=5, max_cols=5):
    p = draw(primes)
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    data = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(data, dtype=np.int64).reshape(r, c), p


@st.composite
def int_matrices(draw, max_rows=4, max_cols=4, bound=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [draw(st.lists(st.integers(-bound, bound), min_size=c, max_size=c)) for _ in range(r)]


def test_check_prime_rejects():
    for bad in (0, 1, 4, 9, 2**31 + 11):
        with pytest.raises(ValueError):
            check_prime(bad)
    assert check_prime(2_147_483_647) == 2_147_483_647


@given(mod_matrices())
@settings(max_examples=60, deadline=None)
def test_rref_idempotent_and_kernel(mp):
    a, p = mp
    r, red, piv = rref_mod(a, p)
    r2, red2, _ = rref_mod(red, p)
    assert r == r2 and np.array_equal(red, red2)
    N = nullspace_mod(a, p)
    assert N.shape[1] == a.shape[1] - r
    assert not matmul_mod(a, N, p).any()
    assert rank_mod(N, p) == N.shape[1]


@given(mod_matrices())
@settings(max_examples=60, deadline=None)
def test_solve_mod_consistent(mp):
    a, p = mp
    x = np.arange(a.shape[1]) % p
    b = matmul_mod(a, x.reshape(-1, 1), p).ravel()
    y = solve_mod(a, b, p)
    assert y is not None
    assert np.array_equal(matmul_mod(a, y.reshape(-1, 1), p).ravel(), b)


def test_solve_mod_inconsistent():
    a = np.array([[1, 0], [1, 0]])
    assert solve_mod(a, np.array([0, 1]), 5) is None


@given(mod_matrices(4, 4))
@settings(max_examples=40, deadline=None)
def test_inverse_when_full_rank(mp):
    a, p = mp
    if a.shape[0] != a.shape[1] or rank_mod(a, p) < a.shape[0]:
        return
    inv = inverse_mod(a, p)
    assert np.array_equal(matmul_mod(a, inv, p), np.eye(a.shape[0], dtype=np.int64))


@given(mod_matrices(5, 3))
@settings(max_examples=40, deadline=None)
def test_complement_and_annihilator(mp):
    sub, p = mp
    n = sub.shape[0]
    C = complement_basis(sub, n, p)
    assert rank_mod(np.concatenate([sub, C], axis=1), p) == n
    A = annihilator_rows(sub, n, p)
    assert not matmul_mod(A, sub, p).any()
    assert A.shape[0] == n - rank_mod(sub, p)


def test_intersection_and_span():
    p = 3
    a = np.array([[1, 0], [0, 1], [0, 0]])
    b = np.array([[1, 0], [0, 0], [0, 1]])
    I = intersect_spaces(a, b, p)
    assert I.shape[1] == 1 and in_span(I, np.array([1, 0, 0]), p)
    assert not in_span(a, np.array([0, 0, 1]), p)


def test_field_matrix_ops():
    m = FieldMatrix(np.array([[1, 2], [2, 4]]), 5)
    r, red, piv = rref(m)
    assert r == 1 and piv == [0]
    ker = kernel_basis(m)
    assert len(ker) == 1
    assert not ((m.data @ ker[0]) % 5).any()
    assert (m @ m) == FieldMatrix((m.data @ m.data) % 5, 5)


def _minors_gcd(m, k):
    rows, cols = len(m), len(m[0])
    g = 0
    for ri in itertools.combinations(range(rows), k):
        for ci in itertools.combinations(range(cols), k):
            g = gcd(g, int_det([[m[i][j] for j in ci] for i in ri]))
    return g


@given(int_matrices())
@settings(max_examples=60, deadline=None)
def test_smith_form_against_determinantal_divisors(m):
    snf = smith_normal_form(m)
    assert int_matmul(int_matmul(snf.U, m), snf.V) == snf.D
    assert abs(int_det(snf.U)) == 1 and abs(int_det(snf.V)) == 1
    d = snf.diagonal
    nz = [x for x in d if x]
    for i in range(len(nz) - 1):
        assert nz[i + 1] % nz[i] == 0
    # product of the first k invariant factors = gcd of k x k minors
    prod = 1
    for k in range(1, min(len(m), len(m[0])) + 1):
        prod *= d[k - 1]
        assert abs(prod) == _minors_gcd(m, k)


@given(int_matrices(3, 4, 4), st.data())
@settings(max_examples=60, deadline=None)
def test_lattice_equal_under_unimodular_change(gens, data):
    n = len(gens[0])
    k = len(gens)
    # random elementary operations keep the lattice
    g2 = [list(r) for r in gens]
    for _ in range(data.draw(st.integers(0, 5))):
        i, j = data.draw(st.integers(0, k - 1)), data.draw(st.integers(0, k - 1))
        q = data.draw(st.integers(-3, 3))
        if i != j:
            g2[i] = [x + q * y for x, y in zip(g2[i], g2[j])]
    assert lattice_equal(gens, g2, n)
    assert lattice_equal(gens, gens + [[0] * n], n)
    doubled = [[2 * x for x in r] for r in gens]
    assert lattice_equal(gens, doubled, n) == (not any(any(r) for r in gens))


@given(int_matrices(3, 3, 4), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
@settings(max_examples=80, deadline=None)
def test_membership_two_routes(gens, x):
    n = len(gens[0])
    x = x[:n] + [0] * (n - len(x))
    snf_route = solve_integer(gens, x) is not None
    hnf_route = hermite_rows(gens + [x], n) == hermite_rows(gens, n)
    assert snf_route == hnf_route
    c = solve_integer(gens, x)
    if c is not None:
        assert [sum(c[j] * gens[j][i] for j in range(len(gens))) for i in range(n)] == x
    # brute-force enumeration finds only members
    for coeffs in itertools.product(range(-2, 3), repeat=len(gens)):
        v = [sum(coeffs[j] * gens[j][i] for j in range(len(gens))) for i in range(n)]
        if v == x:
            assert snf_route
            break


@given(int_matrices(3, 4, 3))
@settings(max_examples=60, deadline=None)
def test_integer_kernel_saturated(m):
    n = len(m[0])
    K = integer_kernel(m, n)
    for v in K:
        assert all(sum(r[i] * v[i] for i in range(n)) == 0 for r in m)
    # every small kernel vector is an integer combination of the basis
    for x in itertools.product(range(-2, 3), repeat=n):
        if all(sum(r[i] * x[i] for i in range(n)) == 0 for r in m):
            assert solve_integer(K, list(x)) is not None


def test_smith_known_example():
    snf = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert snf.diagonal == [2, 6, 12]
