import numpy as np
import pytest
from conftest import gf, rand_form

from modinv import linalg
from modinv.dickson import dickson_by_roots
from modinv.group_action import (
    Group,
    GroupElement,
    GroupTooLargeError,
    close,
    cyclic_transvection_group,
    general_linear_group,
    gl_order,
    invariant_basis,
    trivial_group,
)
from modinv.poly import PolyRing


def test_close_examples():
    F2, F3 = gf(2), gf(3)
    assert close([GroupElement([[1, 0], [0, 1]], F2)]).order == 1
    g = close([GroupElement([[1, 1], [0, 1]], F2), GroupElement([[0, 1], [1, 0]], F2)])
    assert g.order == 6 == gl_order(2, 2)
    assert close([GroupElement([[2]], F3)]).order == 2


def test_non_invertible_rejected():
    with pytest.raises(ValueError):
        GroupElement([[1, 1], [1, 1]], gf(2))


def test_closure_cap():
    with pytest.raises(GroupTooLargeError):
        close(general_linear_group(gf(3), 2).generators, cap=10)


@pytest.mark.parametrize("q,d", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1), (4, 2), (5, 2)])
def test_gl_order(q, d):
    G = general_linear_group(gf(q), d)
    assert G.order == gl_order(d, q)


def test_group_axioms():
    G = general_linear_group(gf(3), 2)
    elems = set(G.elements)
    ident = GroupElement(np.eye(2, dtype=np.int64).tolist(), gf(3))
    assert ident in elems
    for a in G.elements[:12]:
        for b in G.elements[:12]:
            assert a * b in elems
    for k in (cyclic_transvection_group(gf(3), 2), trivial_group(gf(3), 2)):
        assert gl_order(2, 3) % k.order == 0


def test_act_examples():
    F = gf(2)
    R = PolyRing(F, 2)
    x, y = R.gens()
    ident = GroupElement([[1, 0], [0, 1]], F)
    swap = GroupElement([[0, 1], [1, 0]], F)
    f = x**3 + x * y
    assert ident.act(f) == f
    assert swap.act(x) == y
    # y -> y + x: column 1 of the matrix holds the image of y
    tv = GroupElement([[1, 1], [0, 1]], F)
    assert tv.act(y) == y + x and tv.act(x) == x
    assert tv.act(x**2 + x * y + y**2) == x**2 + x * y + y**2


def test_act_is_a_homomorphism(rng):
    F = gf(3)
    R = PolyRing(F, 2)
    G = general_linear_group(F, 2)
    for k in range(40):
        g = G.elements[int(rng.integers(G.order))]
        h = G.elements[int(rng.integers(G.order))]
        f = rand_form(R, int(rng.integers(0, 4)), rng)
        u = rand_form(R, int(rng.integers(0, 4)), rng)
        assert g.act(f * u) == g.act(f) * g.act(u)
        assert g.act(f + u) == g.act(f) + g.act(u)
        assert (g * h).act(f) == g.act(h.act(f))


def test_piece_matrix_matches_substitution(rng):
    F = gf(4)
    R = PolyRing(F, 2)
    G = general_linear_group(F, 2)
    for g in G.elements[:10]:
        for n in range(4):
            f = rand_form(R, n, rng)
            img = F.matmul(f.to_vector(n).reshape(1, -1), g.piece_matrix(n))[0]
            assert R.from_vector(n, img) == g.act(f)


def test_invariant_basis_examples(gl22):
    F = gf(2)
    assert len(invariant_basis(trivial_group(F, 2), 2)) == 3
    assert invariant_basis(gl22, 1) == []
    (b,) = invariant_basis(gl22, 2)
    x, y = gl22.ring.gens()
    assert b == x**2 + x * y + y**2
    (c,) = invariant_basis(gl22, 3)
    assert c == x**2 * y + x * y**2


def test_full_element_list_gives_same_dimension():
    for F, d in [(gf(2), 2), (gf(3), 2), (gf(2), 3)]:
        G = general_linear_group(F, d)
        H = Group(G.elements, G.elements, F, d)
        for n in range(0, 9):
            assert G.invariant_dim(n) == H.invariant_dim(n)


def test_invariants_really_invariant(gl32):
    for n in (6, 8, 12):
        for f in invariant_basis(gl32, n):
            assert all(g.act(f) == f for g in gl32.elements)


@pytest.mark.parametrize("q,d", [(2, 2), (2, 3), (3, 2), (4, 2)])
def test_dickson_lies_in_invariants(q, d):
    F = gf(q)
    G = general_linear_group(F, d)
    alg = dickson_by_roots(d, F, ring=G.ring)
    for g in alg.gens:
        n = g.homogeneous_degree()
        basis = G.invariant_matrix(n)
        assert linalg.solve_rows(F, basis, g.to_vector(n)) is not None


def test_group_json_roundtrip(gl32):
    from modinv.jsonio import group_from_json

    doc = gl32.to_json()
    back = group_from_json(doc)
    assert back.order == gl32.order
    assert back.to_json() == doc
