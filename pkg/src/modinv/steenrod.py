"""Steenrod reduced power operations on GF(q)[x_1..x_d].

The total operation is the degree-preserving ring homomorphism determined by
``x -> x + x^q * xi`` on linear forms, with ``xi`` of degree ``1 - q``.  On a
monomial it expands, variable by variable, into binomial sums; ``P^i(f)`` is
the coefficient of ``xi^i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from . import linalg
from .group_action import Group, ideal_piece
from .poly import Exponent, Polynomial

__all__ = [
    "TotalSteenrodResult",
    "PStarResult",
    "total",
    "p",
    "steenrod_power",
    "is_pstar_invariant",
]


def _binom_mod(n: int, k: int, prime: int) -> int:
    """C(n, k) mod prime via Lucas' theorem."""
    out = 1
    while n or k:
        a, b = n % prime, k % prime
        if b > a:
            return 0
        out = out * comb(a, b) % prime
        n //= prime
        k //= prime
    return out


@lru_cache(maxsize=65536)
def _monomial_total(exp: Exponent, prime: int, q: int) -> dict[int, tuple[tuple[Exponent, int], ...]]:
    """xi-coefficients of P(xi)(x^exp) as (exponent, integer coefficient mod p) lists."""
    # one factor (x_i + x_i^q xi)^{e_i} per variable
    acc: dict[int, dict[Exponent, int]] = {0: {(): 1}}
    for e in exp:
        choices = [(k, c) for k in range(e + 1) if (c := _binom_mod(e, k, prime))]
        nxt: dict[int, dict[Exponent, int]] = {}
        for i, terms in acc.items():
            for k, c in choices:
                bucket = nxt.setdefault(i + k, {})
                for ex, v in terms.items():
                    key = ex + (e + k * (q - 1),)
                    bucket[key] = (bucket.get(key, 0) + v * c) % prime
        acc = nxt
    return {
        i: tuple((ex, v) for ex, v in terms.items() if v)
        for i, terms in acc.items()
        if any(terms.values())
    }


@dataclass(frozen=True)
class TotalSteenrodResult:
    """The xi-expansion of P(xi)(f): ``coefficients[i] == P^i(f)``."""

    coefficients: dict[int, Polynomial]
    degree: int | None = None

    def __getitem__(self, i: int) -> Polynomial:
        return self.coefficients[i]

    def get(self, i: int, ring=None) -> Polynomial:
        c = self.coefficients.get(i)
        if c is None:
            return ring.zero if ring is not None else self.coefficients[0].ring.zero
        return c

    @property
    def top(self) -> int:
        return max(self.coefficients, default=0)


def total(f: Polynomial) -> TotalSteenrodResult:
    ring = f.ring
    fld = ring.field
    buckets: dict[int, dict[Exponent, int]] = {}
    for e, c in f.terms.items():
        for i, terms in _monomial_total(e, fld.p, fld.q).items():
            b = buckets.setdefault(i, {})
            row = fld.mull[c]
            for ex, v in terms:
                b[ex] = fld.addl[b.get(ex, 0)][row[v]]
    coeffs = {i: Polynomial(ring, b) for i, b in sorted(buckets.items())}
    coeffs = {i: g for i, g in coeffs.items() if g}
    coeffs.setdefault(0, ring.zero)
    return TotalSteenrodResult(coeffs, f.homogeneous_degree())


def p(i: int, f: Polynomial) -> Polynomial:
    """P^i(f)."""
    if i < 0:
        raise ValueError("Steenrod index must be nonnegative")
    if i == 0:
        return f
    ring = f.ring
    fld = ring.field
    out: dict[Exponent, int] = {}
    for e, c in f.terms.items():
        terms = _monomial_total(e, fld.p, fld.q).get(i)
        if not terms:
            continue
        row = fld.mull[c]
        for ex, v in terms:
            out[ex] = fld.addl[out.get(ex, 0)][row[v]]
    return Polynomial(ring, out)


steenrod_power = p


@dataclass
class PStarResult:
    """Outcome of a P*-invariance test.

    ``status`` is one of ``"invariant"``, ``"not_invariant"``, ``"inconclusive"``.
    """

    status: str
    witness: tuple[int, Polynomial] | None = None
    reason: str | None = None
    checked: list[tuple[int, int]] = field(default_factory=list)

    @property
    def invariant(self) -> bool | None:
        return {"invariant": True, "not_invariant": False}.get(self.status)

    def to_json(self) -> dict:
        out: dict = {"status": self.status, "checked": [list(c) for c in self.checked]}
        if self.witness is not None:
            out["witness"] = {"i": self.witness[0], "f": self.witness[1].to_json()}
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def is_pstar_invariant(generators: Sequence[Polynomial], group: Group, degree_cap: int) -> PStarResult:
    """Decide P^i(I) ⊆ I for the ideal I of S generated by ``generators``.

    P^i(f) for a generator f of degree n is tested for i = 1..n (P^i vanishes
    beyond n) by a linear solve in the graded piece of I.  Any piece above
    ``degree_cap`` makes the answer inconclusive unless a violation turns up.
    """
    gens = [g for g in generators if not g.is_zero()]
    fld = group.field
    q = fld.q
    checked: list[tuple[int, int]] = []
    skipped: list[tuple[int, int]] = []
    for j, f in enumerate(gens):
        n = f.homogeneous_degree()
        if n is None:
            raise ValueError("generators must be homogeneous")
        if not group.is_invariant(f):
            raise ValueError(f"generator {f} is not invariant")
        for i in range(1, n + 1):
            target = n + i * (q - 1)
            if target > degree_cap:
                skipped.append((i, j))
                continue
            img = p(i, f)
            checked.append((i, j))
            if img.is_zero():
                continue
            piece = ideal_piece(gens, group, target)
            if linalg.solve_rows(fld, piece, img.to_vector(target)) is None:
                return PStarResult("not_invariant", witness=(i, f), checked=checked)
    if skipped:
        i, j = skipped[0]
        return PStarResult(
            "inconclusive",
            reason=f"degree_cap {degree_cap} below deg P^{i}(generator {j})",
            checked=checked,
        )
    return PStarResult("invariant", checked=checked)
