from math import comb

import pytest
from conftest import gf

from modinv.cartan_frac import CartanEvaluator, Fraction, map_to, q_r, verify_cartan_axiom
from modinv.group_action import general_linear_group, random_invariant, trivial_group
from modinv.poly import PolyRing
from modinv.steenrod import p as P, total

R_MAX = 4


class Sampler:
    """Nonzero invariant fractions for a group, seeded."""

    def __init__(self, group, rng, top=4):
        self.group, self.rng = group, rng
        self.degrees = [n for n in range(0, 40) if group.invariant_dim(n)]
        self.pos = [n for n in self.degrees if n > 0]
        self.top = max(top, self.pos[0])

    def inv(self, degrees):
        while True:
            f = random_invariant(self.group, int(self.rng.choice(degrees)), self.rng)
            if f:
                return f

    def base(self):
        return self.inv(self.pos[:2])

    def num(self):
        return self.inv([n for n in self.degrees if n <= self.top])

    def frac(self, x=None):
        x = x if x is not None else self.base()
        return Fraction(self.num(), x, int(self.rng.integers(0, 3)), normalize=False)

    def same_degree(self, u):
        """A second fraction over u.base of the same degree as u."""
        dx = u.base.homogeneous_degree()
        e = int(self.rng.integers(0, 3))
        while u.degree() + e * dx < 0:
            e += 1
        return Fraction(random_invariant(self.group, u.degree() + e * dx, self.rng), u.base, e, normalize=False)


def groups():
    for q in (2, 3):
        F = gf(q)
        yield f"trivial-{q}", trivial_group(F, 2)
        yield f"gl-{q}", general_linear_group(F, 2)


GROUPS = dict(groups())


def test_fraction_basics():
    R = PolyRing(gf(3), 2)
    x, y = R.gens()
    u = Fraction(x**2 * y, x, 3)
    assert u.exp == 1 and u.num == y
    assert u == Fraction(x * y, x, 2, normalize=False)
    assert hash(u) == hash(Fraction(x * y, x, 2, normalize=False))
    assert u.degree() == 0
    assert Fraction(R.zero, x, 4).exp == 0
    with pytest.raises(ZeroDivisionError):
        Fraction(x, R.zero, 1)
    with pytest.raises(ValueError):
        Fraction(x + y**2, x, 1)


def test_fraction_rejects_non_invariant(gl22):
    x, y = gl22.ring.gens()
    with pytest.raises(ValueError):
        Fraction(x, x**2 + x * y + y**2, 1, group=gl22)


def test_q_examples():
    for q in (2, 3, 4):
        R = PolyRing(gf(q), 2)
        x, y = R.gens()
        u = Fraction(y**2, x, 2)
        assert q_r(0, u) == u
        s = x**2 * y + y**3
        for r in range(4):
            assert q_r(r, Fraction(s, x, 0)) == Fraction(P(r, s), x, 0)
        inv_x = Fraction(R.one, x, 1)
        assert q_r(1, inv_x) == Fraction(-P(1, x), x, 2)


def test_map_to_examples():
    R = PolyRing(gf(2), 2)
    x, y = R.gens()
    s = x * y + y**2
    assert map_to(Fraction(s, x, 0), y) == Fraction(s, x * y, 0)
    img = map_to(Fraction(R.one, x, 1), x)
    assert img.base == x**2 and img.exp == 1 and img == Fraction(x, x**2, 1)


def test_axiom_examples():
    R = PolyRing(gf(3), 2)
    x, y = R.gens()
    u = Fraction(y, x, 2)
    assert verify_cartan_axiom(R.one, u, 5).ok
    inv_x = Fraction(R.one, x, 1)
    assert verify_cartan_axiom(x, inv_x, 5).ok
    one = Fraction(R.one, x, 0)
    assert all(q_r(r, inv_x * x) == (one if r == 0 else Fraction(R.zero, x, 0)) for r in range(5))


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_representation_independence(name, rng):
    G = GROUPS[name]
    smp = Sampler(G, rng)
    for _ in range(100):
        u = smp.frac()
        c = int(rng.integers(1, 4))
        v = Fraction(u.with_exp(u.exp + c), u.base, u.exp + c, normalize=False)
        eu, ev = CartanEvaluator(u), CartanEvaluator(v)
        assert all(eu(r) == ev(r) for r in range(R_MAX + 1))


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_cartan_axiom(name, rng):
    G = GROUPS[name]
    smp = Sampler(G, rng)
    for _ in range(100):
        u, s = smp.frac(), smp.num()
        rep = verify_cartan_axiom(s, u, R_MAX)
        assert rep.ok, rep.to_json()


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_linearity(name, rng):
    G = GROUPS[name]
    F = G.field
    R = G.ring
    smp = Sampler(G, rng)
    for _ in range(100):
        u = smp.frac()
        v = smp.same_degree(u)
        c = R.constant(F.element(int(rng.integers(0, F.q))))
        eu, ev, es = CartanEvaluator(u), CartanEvaluator(v), CartanEvaluator(u + v * c)
        for r in range(R_MAX + 1):
            assert es(r) == eu(r) + ev(r) * c
            assert CartanEvaluator(u * c)(r) == eu(r) * c


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_map_to_commutes(name, rng):
    G = GROUPS[name]
    smp = Sampler(G, rng)
    for _ in range(100):
        u, y = smp.frac(), smp.base()
        eu, em = CartanEvaluator(u), CartanEvaluator(map_to(u, y))
        for r in range(R_MAX + 1):
            assert em(r) == map_to(eu(r), y)


def series_oracle(u, r_max):
    """Q(xi)(a / x^m) as P(xi)(a) * P(xi)(x)^(-m), with the inverse as a power series.

    P(xi)(x) = x (1 + e) where e = sum_{i>=1} P^i(x)/x xi^i; (1+e)^(-1) is
    the geometric series, then raised to the m-th power and multiplied out.
    """
    x, m, a = u.base, u.exp, u.num
    R = a.ring
    zero = Fraction(R.zero, x, 0)
    px = total(x)
    e = [zero] + [Fraction(px.get(i, R), x, 1) for i in range(1, r_max + 1)]

    def mul(s, t):
        return [sum((s[i] * t[k - i] for i in range(k + 1)), zero) for k in range(r_max + 1)]

    inv = [Fraction(R.one, x, 0)] + [zero] * r_max
    power = [Fraction(R.one, x, 0)] + [zero] * r_max
    neg_e = [Fraction(-f.num, x, f.exp) for f in e]
    for _ in range(r_max):
        power = mul(power, neg_e)
        inv = [s + t for s, t in zip(inv, power)]
    inv_m = [Fraction(R.one, x, m)] + [zero] * r_max
    for _ in range(m):
        inv_m = mul(inv_m, inv)
    pa = total(a)
    pa_series = [Fraction(pa.get(i, R), x, 0) for i in range(r_max + 1)]
    return mul(pa_series, inv_m)


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_uniqueness_against_series_oracle(name, rng):
    G = GROUPS[name]
    smp = Sampler(G, rng)
    for _ in range(25):
        u = smp.frac()
        ev = CartanEvaluator(u)
        oracle = series_oracle(u, R_MAX)
        assert all(ev(r) == oracle[r] for r in range(R_MAX + 1))


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_degree_bookkeeping(name, rng):
    G = GROUPS[name]
    q = G.field.q
    smp = Sampler(G, rng)
    for _ in range(40):
        u = smp.frac()
        ev = CartanEvaluator(u)
        for r in range(R_MAX + 1):
            out = ev(r)
            if not out.is_zero():
                assert out.degree() == u.degree() + r * (q - 1)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_rank_one_closed_form(q):
    F = gf(q)
    R = PolyRing(F, 1)
    (x,) = R.gens()
    for m in range(1, 6):
        ev = CartanEvaluator(Fraction(R.one, x, m))
        for k in range(0, 7):
            coeff = (-1) ** k * comb(m + k - 1, k)
            deg = k * (q - 1) - m
            expect = Fraction(R.constant(coeff) * x ** max(deg, 0), x, max(-deg, 0))
            assert ev(k) == expect


def test_fraction_json_roundtrip():
    from modinv.jsonio import fraction_from_json

    R = PolyRing(gf(3), 2)
    x, y = R.gens()
    u = Fraction(x * y**2 + y**3, x**2, 3, normalize=False)
    back = fraction_from_json(u.to_json())
    assert back == u and back.to_json() == u.to_json()
