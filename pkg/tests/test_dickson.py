import pytest
from conftest import gf

from modinv.dickson import (
    DicksonCapError,
    dickson_by_moore,
    dickson_by_roots,
    dickson_degrees,
    generators_independent,
    pstar_prime_chain,
)
from modinv.group_action import gl_generators
from modinv.poly import PolyRing

PAIRS = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1), (4, 2)]


@pytest.mark.parametrize("q,d", PAIRS)
def test_roots_equal_moore(q, d):
    F = gf(q)
    a, b = dickson_by_roots(d, F), dickson_by_moore(d, F)
    assert a.gens == b.gens
    assert a.degrees() == dickson_degrees(d, q) == [q**d - q**i for i in range(d)]


@pytest.mark.parametrize("q,d", PAIRS)
def test_gl_invariance(q, d):
    F = gf(q)
    alg = dickson_by_roots(d, F)
    for g in gl_generators(F, d):
        for f in alg.gens:
            assert g.act(f) == f


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_rank_one(q):
    F = gf(q)
    alg = dickson_by_roots(1, F)
    (x,) = alg.ring.gens()
    assert alg.gens == (x ** (q - 1),)


def test_q2_d2_explicit():
    alg = dickson_by_roots(2, gf(2))
    x, y = alg.ring.gens()
    assert alg.gens[1] == x**2 + x * y + y**2
    assert alg.gens[0] == x**2 * y + x * y**2
    assert dickson_by_roots(3, gf(2)).degrees() == [7, 6, 4]
    assert dickson_by_moore(2, gf(3)).degrees() == [8, 6]


def test_q3_signs_by_hand():
    # prod over the 9 linear forms of GF(3)^2 has d_{2,0} with a sign that
    # only shows in odd characteristic; d_{2,0} is the product of the four
    # projectively distinct forms, squared
    F = gf(3)
    R = PolyRing(F, 2)
    x, y = R.gens()
    forms = [x, y, x + y, x + y * 2]
    prod = R.one
    for f in forms:
        prod = prod * f
    alg = dickson_by_roots(2, F, ring=R)
    assert alg.gens[0] == prod**2


def test_chain():
    alg = dickson_by_roots(3, gf(2))
    c0 = pstar_prime_chain(alg, 0)
    c2 = pstar_prime_chain(alg, 2)
    assert c0.generators == (alg.gens[0],)
    assert c2.generators == alg.gens
    assert c2.contains(c0) and not c0.contains(c2)
    x, y = dickson_by_roots(2, gf(2)).ring.gens()
    assert pstar_prime_chain(dickson_by_roots(2, gf(2)), 0).generators == (x**2 * y + x * y**2,)
    with pytest.raises(IndexError):
        pstar_prime_chain(alg, 3)


@pytest.mark.parametrize("q,d,top", [(2, 2, 16), (2, 3, 16), (3, 2, 24)])
def test_algebraic_independence(q, d, top):
    assert generators_independent(dickson_by_roots(d, gf(q)), top)


def test_dependent_generators_detected():
    from modinv.dickson import DicksonAlgebra

    alg = dickson_by_roots(2, gf(2))
    fake = DicksonAlgebra(alg.ring, (alg.gens[1], alg.gens[1] ** 2))
    assert not generators_independent(fake, 4)


def test_cap():
    with pytest.raises(DicksonCapError):
        dickson_by_roots(3, gf(3), cap=20)
