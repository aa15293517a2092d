"""Localizations S_x as Cartan S-modules.

A :class:`Fraction` ``a / x^m`` lives in ``S_x``.  The operators ``Q^r`` on
``S_x`` are determined recursively from the Steenrod powers on ``S`` by
expanding ``a = x^m * u`` with the Cartan formula and solving for the top
term::

    Q^r(u) = ( P^r(a) - sum_{i=1..r} P^i(x^m) Q^(r-i)(u) ) / x^m

The division is formal: it raises the denominator exponent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .group_action import Group
from .poly import Polynomial
from .steenrod import p as steenrod_p, total

__all__ = [
    "Fraction",
    "CartanEvaluator",
    "CartanAxiomReport",
    "q_r",
    "map_to",
    "verify_cartan_axiom",
]


class Fraction:
    """``num / base^exp`` with homogeneous ``num`` and ``base``.

    Normalized on construction (``base`` divided out of ``num`` while
    possible) unless ``normalize=False``, which keeps a deliberately
    non-minimal representative.  Equality is cross-multiplication in R.
    """

    __slots__ = ("num", "base", "exp")

    def __init__(
        self,
        num: Polynomial,
        base: Polynomial,
        exp: int = 0,
        *,
        group: Group | None = None,
        normalize: bool = True,
    ):
        if base.is_zero():
            raise ZeroDivisionError("localizing at zero")
        if exp < 0:
            raise ValueError("denominator exponent must be nonnegative")
        if num.ring != base.ring:
            raise ValueError("numerator and base live in different rings")
        if not num.is_homogeneous() or not base.is_homogeneous():
            raise ValueError("fractions need homogeneous numerator and base")
        if group is not None:
            for f, what in ((num, "numerator"), (base, "base")):
                if not group.is_invariant(f):
                    raise ValueError(f"{what} {f} is not invariant")
        if num.is_zero():
            exp = 0
        elif normalize:
            while exp > 0:
                quot = num.divide_exact(base)
                if quot is None:
                    break
                num, exp = quot, exp - 1
        self.num = num
        self.base = base
        self.exp = exp

    @classmethod
    def from_poly(cls, s: Polynomial, base: Polynomial) -> "Fraction":
        return cls(s, base, 0)

    @property
    def ring(self):
        return self.num.ring

    def degree(self) -> int | None:
        if self.num.is_zero():
            return None
        return self.num.homogeneous_degree() - self.exp * self.base.homogeneous_degree()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def normalized(self) -> "Fraction":
        return Fraction(self.num, self.base, self.exp)

    def with_exp(self, exp: int) -> Polynomial:
        """Numerator of the representative with denominator ``base^exp`` (exp >= self.exp)."""
        if exp < self.exp:
            raise ValueError(f"cannot write {self} over base^{exp}")
        return self.num * self.base ** (exp - self.exp)

    def _same_base(self, other: "Fraction") -> None:
        if self.base != other.base:
            raise ValueError("fractions over different localizations")

    def __add__(self, other: "Fraction") -> "Fraction":
        self._same_base(other)
        m = max(self.exp, other.exp)
        return Fraction(self.with_exp(m) + other.with_exp(m), self.base, m)

    def __neg__(self) -> "Fraction":
        return Fraction(-self.num, self.base, self.exp, normalize=False)

    def __sub__(self, other: "Fraction") -> "Fraction":
        return self + (-other)

    def __mul__(self, s) -> "Fraction":
        """Module action by a polynomial (or field scalar)."""
        if isinstance(s, Fraction):
            self._same_base(s)
            return Fraction(self.num * s.num, self.base, self.exp + s.exp)
        return Fraction(self.num * s, self.base, self.exp)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Fraction):
            return NotImplemented
        lhs = self.num * other.base ** other.exp
        rhs = other.num * self.base ** self.exp
        return lhs == rhs

    def __hash__(self) -> int:
        n = self.normalized()
        return hash((n.num, n.base, n.exp))

    def __repr__(self) -> str:
        if self.exp == 0:
            return f"Fraction({self.num})"
        return f"Fraction(({self.num}) / ({self.base})^{self.exp})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "base": self.base.to_json(), "exp": self.exp}


class CartanEvaluator:
    """Evaluates Q^0..Q^r on one fixed representative, caching lower Q^j.

    One evaluator per fraction; instances are never shared across threads.
    """

    def __init__(self, u: Fraction):
        self.u = u
        self.a = u.num
        self.m = u.exp
        self.xm = u.base ** u.exp
        self._powers_of_xm = total(self.xm)
        self._cache: list[Fraction] = [u]

    def __call__(self, r: int) -> Fraction:
        if r < 0:
            raise ValueError("Q^r needs r >= 0")
        base = self.u.base
        ring = self.a.ring
        while len(self._cache) <= r:
            k = len(self._cache)
            acc = Fraction(steenrod_p(k, self.a), base, 0, normalize=False)
            for i in range(1, k + 1):
                pxm = self._powers_of_xm.get(i, ring)
                if pxm.is_zero():
                    continue
                acc = acc - self._cache[k - i] * pxm
            self._cache.append(Fraction(acc.num, base, acc.exp + self.m))
        return self._cache[r]


def q_r(r: int, u: Fraction) -> Fraction:
    """Q^r(u) computed on the representative ``u`` carries."""
    return CartanEvaluator(u)(r)


def map_to(u: Fraction, y: Polynomial) -> Fraction:
    """Image of ``u`` under the natural map S_x -> S_{xy}."""
    if y.is_zero() or not y.is_homogeneous():
        raise ValueError("y must be nonzero and homogeneous")
    return Fraction(u.num * y**u.exp, u.base * y, u.exp)


@dataclass
class CartanAxiomReport:
    ok: bool
    r_max: int
    violation: int | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None

    def to_json(self) -> dict:
        out = {"ok": self.ok, "r_max": self.r_max}
        if self.violation is not None:
            out["violation_r"] = self.violation
            out["lhs"] = self.lhs.to_json()
            out["rhs"] = self.rhs.to_json()
        return out


def verify_cartan_axiom(s: Polynomial, u: Fraction, r_max: int) -> CartanAxiomReport:
    """Check Q^r(s u) == sum_{i+j=r} P^i(s) Q^j(u) for r <= r_max."""
    su = CartanEvaluator(u * s)
    qu = CartanEvaluator(u)
    ps = total(s)
    ring = s.ring
    for r in range(r_max + 1):
        lhs = su(r)
        rhs = Fraction(ring.zero, u.base, 0)
        for i in range(r + 1):
            pi = ps.get(i, ring)
            if not pi.is_zero():
                rhs = rhs + qu(r - i) * pi
        if lhs != rhs:
            return CartanAxiomReport(False, r_max, r, lhs, rhs)
    return CartanAxiomReport(True, r_max)
