"""Dickson invariants of GL(d, q), built two independent ways.

``dickson_by_roots`` expands the product of ``X - v`` over every linear form
``v`` and reads the Dickson polynomials off the coefficients of ``X^(q^i)``::

    prod_v (X - v) = X^(q^d) + sum_i (-1)^(d-i) d_{d,i} X^(q^i)

``dickson_by_moore`` uses Moore determinants instead: with ``M`` the matrix of
rows ``(x_1^(q^k), ..., x_d^(q^k))``, ``d_{d,i}`` is the ratio of the
determinant with row ``q^i`` deleted (row ``q^d`` appended last) over the
determinant of rows ``q^0..q^(d-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Sequence

import numpy as np

from . import linalg
from .gf import FieldSpec
from .poly import PolyRing, Polynomial

__all__ = [
    "DicksonAlgebra",
    "PStarPrimeChain",
    "DicksonCapError",
    "dickson_by_roots",
    "dickson_by_moore",
    "dickson_degrees",
    "pstar_prime_chain",
    "generators_independent",
    "DEFAULT_DICKSON_CAP",
]

DEFAULT_DICKSON_CAP = 4096


class DicksonCapError(ValueError):
    pass


def dickson_degrees(d: int, q: int) -> list[int]:
    return [q**d - q**i for i in range(d)]


@dataclass(frozen=True)
class DicksonAlgebra:
    ring: PolyRing
    gens: tuple[Polynomial, ...]

    @property
    def d(self) -> int:
        return self.ring.nvars

    @property
    def q(self) -> int:
        return self.ring.field.q

    def degrees(self) -> list[int]:
        return [g.homogeneous_degree() for g in self.gens]

    def __getitem__(self, i: int) -> Polynomial:
        return self.gens[i]


@dataclass(frozen=True)
class PStarPrimeChain:
    """The ideal (d_{d,0}, ..., d_{d,i}) of the Dickson algebra."""

    index: int
    generators: tuple[Polynomial, ...]

    def contains(self, other: "PStarPrimeChain") -> bool:
        return other.index <= self.index


def _check_cap(d: int, field: FieldSpec, cap: int) -> None:
    if field.q**d > cap:
        raise DicksonCapError(f"q^d = {field.q ** d} exceeds the cap {cap}")


def _ring(d: int, field: FieldSpec, ring: PolyRing | None) -> PolyRing:
    if ring is None:
        return PolyRing(field, d)
    if ring.nvars != d or ring.field != field:
        raise ValueError("ring does not match (d, field)")
    return ring


def dickson_by_roots(
    d: int, field: FieldSpec, cap: int = DEFAULT_DICKSON_CAP, ring: PolyRing | None = None
) -> DicksonAlgebra:
    _check_cap(d, field, cap)
    ring = _ring(d, field, ring)
    q = field.q
    big = PolyRing(field, d + 1, tuple(ring.names) + ("X",))
    X = big.var(d)
    poly = big.one
    for coeffs in product(range(q), repeat=d):
        v = big.linear_form(list(coeffs) + [0])
        poly = poly * (X - v)
    by_x: dict[int, dict] = {}
    for e, c in poly.terms.items():
        by_x.setdefault(e[d], {})[e[:d]] = c
    allowed = {q**i for i in range(d + 1)}
    stray = set(by_x) - allowed
    assert not stray, f"unexpected X-exponents {sorted(stray)}"
    assert by_x[q**d] == {(0,) * d: 1}, "product is not monic in X"
    gens = []
    for i in range(d):
        coeff = Polynomial(ring, by_x.get(q**i, {}))
        gens.append(coeff if (d - i) % 2 == 0 else -coeff)
    return DicksonAlgebra(ring, tuple(gens))


def _det(rows: Sequence[Sequence[Polynomial]], ring: PolyRing) -> Polynomial:
    """Leibniz expansion; desk-scale d only."""
    n = len(rows)
    out = ring.zero
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for a in range(n):
            for b in range(a + 1, n):
                if seen[a] > seen[b]:
                    sign = -sign
        term = ring.one
        for r, c in enumerate(perm):
            term = term * rows[r][c]
        out = out + term if sign > 0 else out - term
    return out


def dickson_by_moore(
    d: int, field: FieldSpec, cap: int = DEFAULT_DICKSON_CAP, ring: PolyRing | None = None
) -> DicksonAlgebra:
    _check_cap(d, field, cap)
    ring = _ring(d, field, ring)
    q = field.q
    xs = ring.gens()
    frob = [[x ** (q**k) for x in xs] for k in range(d + 1)]
    delta = _det(frob[:d], ring)
    gens = []
    for i in range(d):
        rows = [frob[k] for k in range(d + 1) if k != i]
        num = _det(rows, ring)
        quot = num.divide_exact(delta)
        assert quot is not None, f"Moore quotient for i={i} is not exact"
        gens.append(quot)
    return DicksonAlgebra(ring, tuple(gens))


def pstar_prime_chain(algebra: DicksonAlgebra, i: int) -> PStarPrimeChain:
    if not 0 <= i < algebra.d:
        raise IndexError(f"chain index {i} outside [0, {algebra.d - 1}]")
    return PStarPrimeChain(i, tuple(algebra.gens[: i + 1]))


def generators_independent(algebra: DicksonAlgebra, max_degree: int) -> bool:
    """Monomials in the Dickson generators of each degree <= max_degree are linearly independent in R."""
    degs = algebra.degrees()
    field = algebra.ring.field
    for n in range(1, max_degree + 1):
        vecs = []
        for exps in _exponent_vectors(degs, n):
            m = algebra.ring.one
            for g, k in zip(algebra.gens, exps):
                if k:
                    m = m * g**k
            vecs.append(m.to_vector(n))
        if len(vecs) > 1 and linalg.rank(field, np.array(vecs)) != len(vecs):
            return False
    return True


def _exponent_vectors(degs: Sequence[int], n: int):
    if not degs:
        if n == 0:
            yield ()
        return
    for k in range(n // degs[0] + 1):
        for rest in _exponent_vectors(degs[1:], n - k * degs[0]):
            yield (k,) + rest
