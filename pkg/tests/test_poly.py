from math import comb

import numpy as np
import pytest
from conftest import gf, rand_form

from modinv import linalg
from modinv.linalg import MatrixGF, QuotientBasis
from modinv.poly import PolyRing, Polynomial, RingMismatchError, monomial_basis, multiplication_matrix


def naive_product(f, g):
    """Term-by-term product with explicit field arithmetic."""
    F = f.field
    out = {}
    for e1, c1 in f.terms.items():
        for e2, c2 in g.terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = (F.element(out.get(e, 0)) + F.element(c1) * F.element(c2)).code
    return {e: c for e, c in out.items() if c}


def test_multiply_examples():
    R = PolyRing(gf(2), 2)
    x, y = R.gens()
    assert (x + y) * (x + y) == x**2 + y**2
    f = x**3 + x * y + 1
    assert f * R.one == f
    S = PolyRing(gf(3), 1)
    (z,) = S.gens()
    assert (z + 1) * (z + 2) == z**2 + 2


def test_monomial_basis_examples():
    assert monomial_basis(2, 2) == ((2, 0), (1, 1), (0, 2))
    assert monomial_basis(1, 5) == ((5,),)
    assert len(monomial_basis(3, 2)) == 6
    for d in range(1, 5):
        for n in range(7):
            basis = monomial_basis(d, n)
            assert len(basis) == comb(n + d - 1, d - 1) == len(set(basis))


def test_grevlex_order():
    # among degree-3 monomials in 3 variables, grevlex puts x^3 first and z^3 last,
    # and x*z^2 below y^3 (the smallest last exponent wins)
    b = monomial_basis(3, 3)
    assert b[0] == (3, 0, 0) and b[-1] == (0, 0, 3)
    assert b.index((0, 3, 0)) < b.index((1, 0, 2))


@pytest.mark.parametrize("q,d", [(2, 2), (3, 2), (2, 3), (4, 2), (5, 1)])
def test_ring_axioms(q, d, rng):
    R = PolyRing(gf(q), d)
    for _ in range(100):
        f, g, h = (rand_form(R, int(rng.integers(0, 4)), rng) for _ in range(3))
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f * g == g * f
        assert (f * g).terms == naive_product(f, g)
        assert f - f == R.zero


def test_domain(rng):
    for q, d in [(2, 3), (3, 2), (4, 2)]:
        R = PolyRing(gf(q), d)
        for _ in range(60):
            f = rand_form(R, int(rng.integers(0, 4)), rng)
            g = rand_form(R, int(rng.integers(0, 4)), rng)
            if f and g:
                assert f * g
                assert (f * g).homogeneous_degree() == f.homogeneous_degree() + g.homogeneous_degree()


def test_divide_exact(rng):
    R = PolyRing(gf(3), 2)
    for _ in range(50):
        f = rand_form(R, 3, rng)
        g = rand_form(R, 2, rng)
        if not g:
            continue
        assert (f * g).divide_exact(g) == f
    x, y = R.gens()
    assert (x**2 + y).divide_exact(x) is None


def test_homogeneity():
    R = PolyRing(gf(2), 2)
    x, y = R.gens()
    assert R.zero.homogeneous_degree() == 0
    assert (x * y + y**2).homogeneous_degree() == 2
    assert (x + y**2).homogeneous_degree() is None
    comps = (x + y**2 + x * y).homogeneous_components()
    assert comps[1] == x and comps[2] == y**2 + x * y


def test_ring_mismatch():
    a = PolyRing(gf(2), 2).var(0)
    b = PolyRing(gf(3), 2).var(0)
    with pytest.raises(RingMismatchError):
        a * b


def test_vector_roundtrip(rng):
    R = PolyRing(gf(4), 3)
    for n in range(5):
        f = rand_form(R, n, rng)
        assert R.from_vector(n, f.to_vector(n)) == f


def test_multiplication_matrix(rng):
    R = PolyRing(gf(3), 2)
    f = rand_form(R, 2, rng, density=1.0)
    m = 3
    M = multiplication_matrix(f, m)
    for k, e in enumerate(monomial_basis(2, m)):
        assert R.from_vector(m + 2, M[k]) == f * R.monomial(e)


def test_kernel_examples():
    F2 = gf(2)
    assert linalg.kernel(F2, np.eye(3, dtype=np.int64)).shape[0] == 0
    assert linalg.kernel(F2, np.zeros((2, 3), dtype=np.int64)).shape[0] == 3
    k = linalg.kernel(F2, np.array([[1, 1]]))
    assert k.tolist() == [[1, 1]]
    assert MatrixGF(F2, [[1, 1]]).kernel()[0].tolist() == [1, 1]


@pytest.mark.parametrize("q", [2, 3, 4, 9])
def test_rank_nullity(q, rng):
    F = gf(q)
    for _ in range(40):
        r, c = (int(x) for x in rng.integers(1, 8, 2))
        m = rng.integers(0, q, (r, c)) * (rng.random((r, c)) < 0.6)
        rk = linalg.rank(F, m)
        ker = linalg.kernel(F, m)
        assert rk + ker.shape[0] == c
        assert rk <= min(r, c)
        if ker.shape[0]:
            assert not F.matmul(m, ker.T).any()
        red, piv = linalg.rref(F, m)
        assert np.array_equal(linalg.rref(F, red)[0], red)


def test_solve_and_quotient(rng):
    F = gf(5)
    basis = linalg.row_basis(F, rng.integers(0, 5, (3, 6)))
    c = rng.integers(0, 5, basis.shape[0])
    v = F.matmul(c.reshape(1, -1), basis)[0]
    assert np.array_equal(linalg.solve_rows(F, basis, v), c)
    outside = np.zeros(6, dtype=np.int64)
    outside[linalg.kernel(F, basis)[0].nonzero()[0][0]] = 1
    if linalg.rank(F, np.vstack([basis, outside])) > basis.shape[0]:
        assert linalg.solve_rows(F, basis, outside) is None
    sub = basis[:1]
    qb = QuotientBasis(F, sub, basis)
    assert qb.dim == basis.shape[0] - 1
    assert not qb.coords(sub[0]).any()


def test_matrix_det():
    F = gf(3)
    assert MatrixGF(F, [[1, 1], [2, 1]]).det() == 2
    assert MatrixGF(F, [[1, 2], [2, 1]]).det() == 0
    assert MatrixGF(F, [[0, 1], [1, 0]]).det() == 2
    with pytest.raises(ValueError):
        MatrixGF(F, [[3]])


def test_polynomial_json_roundtrip(rng):
    from modinv.jsonio import polynomial_from_json

    R = PolyRing(gf(9), 2)
    for n in range(4):
        f = rand_form(R, n, rng)
        doc = f.to_json()
        g = polynomial_from_json(doc)
        assert g == f and g.to_json() == doc
