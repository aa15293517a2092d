"""Multivariate polynomials over GF(q) and their graded pieces.

A :class:`Polynomial` maps exponent tuples to nonzero coefficient codes of its
ring's field.  Graded pieces ``R_n`` are identified with ``GF(q)^N`` through
:func:`monomial_basis`, which lists the degree-``n`` monomials in descending
graded reverse lexicographic order; that ordering is used everywhere a basis
or matrix is built.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .gf import FieldElement, FieldSpec

__all__ = [
    "PolyRing",
    "Polynomial",
    "RingMismatchError",
    "monomial_basis",
    "monomial_index",
    "grevlex_key",
    "multiplication_matrix",
    "piece_dim",
    "random_homogeneous",
]

Exponent = tuple[int, ...]


class RingMismatchError(ValueError):
    pass


def grevlex_key(e: Exponent) -> tuple:
    """Sort key; larger key means larger in grevlex."""
    return (sum(e), tuple(-x for x in reversed(e)))


def _compositions(n: int, d: int) -> Iterator[Exponent]:
    if d == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, d - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def monomial_basis(d: int, n: int) -> tuple[Exponent, ...]:
    """Exponent vectors of total degree ``n`` in ``d`` variables, grevlex descending."""
    if n < 0:
        return ()
    return tuple(sorted(_compositions(n, d), key=grevlex_key, reverse=True))


@lru_cache(maxsize=None)
def monomial_index(d: int, n: int) -> dict[Exponent, int]:
    return {e: k for k, e in enumerate(monomial_basis(d, n))}


def piece_dim(d: int, n: int) -> int:
    return comb(n + d - 1, d - 1) if n >= 0 else 0


@lru_cache(maxsize=None)
def _up_map(d: int, n: int, j: int) -> np.ndarray:
    """Index in R_{n+1} of x_j * m for each monomial m of R_n."""
    idx = monomial_index(d, n + 1)
    out = []
    for e in monomial_basis(d, n):
        f = list(e)
        f[j] += 1
        out.append(idx[tuple(f)])
    return np.array(out, dtype=np.int64)


@lru_cache(maxsize=None)
def _first_var_parent(d: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """For monomials of degree n >= 1: first variable present and index of m / x_i in R_{n-1}."""
    idx = monomial_index(d, n - 1)
    first, parent = [], []
    for e in monomial_basis(d, n):
        i = next(k for k, x in enumerate(e) if x)
        f = list(e)
        f[i] -= 1
        first.append(i)
        parent.append(idx[tuple(f)])
    return np.array(first, dtype=np.int64), np.array(parent, dtype=np.int64)


class PolyRing:
    """GF(q)[x_1, ..., x_d]."""

    def __init__(self, field: FieldSpec, nvars: int, names: Sequence[str] | None = None):
        if nvars < 1:
            raise ValueError("a polynomial ring needs at least one variable")
        if names is None:
            names = ("x", "y", "z", "w")[:nvars] if nvars <= 4 else [f"x{i + 1}" for i in range(nvars)]
        if len(names) != nvars:
            raise ValueError("one name per variable")
        self.field = field
        self.nvars = nvars
        self.names = tuple(names)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PolyRing)
            and self.field == other.field
            and self.nvars == other.nvars
            and self.names == other.names
        )

    def __hash__(self) -> int:
        return hash((self.field, self.nvars, self.names))

    def __repr__(self) -> str:
        return f"PolyRing({self.field!r}, {list(self.names)})"

    @property
    def d(self) -> int:
        return self.nvars

    @property
    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    @property
    def one(self) -> Polynomial:
        return Polynomial(self, {(0,) * self.nvars: 1})

    def constant(self, c: int | FieldElement) -> Polynomial:
        code = c.code if isinstance(c, FieldElement) else self.field.int_code(c)
        return Polynomial(self, {(0,) * self.nvars: code})

    def var(self, i: int) -> Polynomial:
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list[Polynomial]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exp: Sequence[int], coeff: int | FieldElement = 1) -> Polynomial:
        code = coeff.code if isinstance(coeff, FieldElement) else self.field.int_code(coeff)
        return Polynomial(self, {tuple(exp): code})

    def linear_form(self, coeffs: Sequence[int]) -> Polynomial:
        """sum_i c_i x_i with field codes c_i."""
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * self.nvars
                e[i] = 1
                terms[tuple(e)] = int(c)
        return Polynomial(self, terms)

    def monomial_basis(self, n: int) -> tuple[Exponent, ...]:
        return monomial_basis(self.nvars, n)

    def piece_dim(self, n: int) -> int:
        return piece_dim(self.nvars, n)

    def from_vector(self, n: int, vec: Iterable[int]) -> Polynomial:
        basis = monomial_basis(self.nvars, n)
        return Polynomial(self, {e: int(c) for e, c in zip(basis, vec) if c})

    def to_json(self) -> dict:
        f = self.field
        return {
            "field": {"p": f.p, "s": f.s, "modulus": list(f.modulus)},
            "nvars": self.nvars,
            "names": list(self.names),
        }


class Polynomial:
    """Immutable polynomial; ``terms`` maps exponent tuples to nonzero field codes."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Exponent, int]):
        self.ring = ring
        self.terms = {tuple(e): int(c) for e, c in terms.items() if c}
        self._hash = None

    # --- basic queries ---------------------------------------------------

    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coeff(self, exp: Sequence[int]) -> FieldElement:
        return FieldElement(self.field, self.terms.get(tuple(exp), 0))

    def items(self) -> Iterator[tuple[Exponent, FieldElement]]:
        for e, c in self.terms.items():
            yield e, FieldElement(self.field, c)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_degree(self) -> int | None:
        """The common total degree of all terms, or None if the terms disagree.

        The zero polynomial is homogeneous of every degree; this returns 0 for it.
        """
        degs = {sum(e) for e in self.terms}
        if not degs:
            return 0
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous(self, n: int | None = None) -> bool:
        if not self.terms:
            return True
        h = self.homogeneous_degree()
        return h is not None and (n is None or h == n)

    def homogeneous_components(self) -> dict[int, Polynomial]:
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {n: Polynomial(self.ring, t) for n, t in sorted(parts.items())}

    def leading_term(self) -> tuple[Exponent, int]:
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    # --- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, FieldElement):
            if other.spec != self.field:
                raise RingMismatchError("coefficient from a different field")
            return self.ring.constant(other)
        if isinstance(other, (int, np.integer)):
            return self.ring.constant(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        addl = self.field.addl
        out = dict(self.terms)
        for e, c in o.terms.items():
            v = addl[out.get(e, 0)][c]
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        negl = self.field.negl
        return Polynomial(self.ring, {e: negl[c] for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.terms or not o.terms:
            return self.ring.zero
        mull, addl = self.field.mull, self.field.addl
        out: dict[Exponent, int] = {}
        get = out.get
        for e1, c1 in self.terms.items():
            row = mull[c1]
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = addl[get(e, 0)][row[c2]]
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def scale(self, c: int | FieldElement) -> Polynomial:
        code = c.code if isinstance(c, FieldElement) else self.field.int_code(c)
        if code == 0:
            return self.ring.zero
        row = self.field.mull[code]
        return Polynomial(self.ring, {e: row[v] for e, v in self.terms.items()})

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius_power(self) -> Polynomial:
        """f^q computed termwise: coefficients go to c^q = c, exponents scale by q."""
        q = self.field.q
        return Polynomial(self.ring, {tuple(q * x for x in e): c for e, c in self.terms.items()})

    def divide_exact(self, divisor: Polynomial) -> Polynomial | None:
        """The quotient if ``divisor`` divides ``self`` in R, else None."""
        o = self._coerce(divisor)
        if not o.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        f = self.field
        lt_e, lt_c = o.leading_term()
        lt_inv = f.invl[lt_c]
        rem = dict(self.terms)
        quot: dict[Exponent, int] = {}
        while rem:
            e = max(rem, key=grevlex_key)
            diff = tuple(a - b for a, b in zip(e, lt_e))
            if min(diff) < 0:
                return None
            c = f.mull[rem[e]][lt_inv]
            quot[diff] = c
            row = f.mull[c]
            for e2, c2 in o.terms.items():
                k = tuple(a + b for a, b in zip(diff, e2))
                v = f.subl[rem.get(k, 0)][row[c2]]
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return Polynomial(self.ring, quot)

    def substitute(self, images: Sequence[Polynomial]) -> Polynomial:
        """Ring homomorphism x_i -> images[i]."""
        if len(images) != self.ring.nvars:
            raise ValueError("one image per variable")
        target = images[0].ring
        cache: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        out = target.zero
        for e, c in self.terms.items():
            term = target.constant(FieldElement(target.field, c))
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    # --- graded-piece coordinates -----------------------------------------

    def to_vector(self, n: int | None = None) -> np.ndarray:
        """Coordinates in R_n (``n`` defaults to the homogeneous degree)."""
        if n is None:
            n = self.homogeneous_degree()
            if n is None:
                raise ValueError("to_vector needs a homogeneous polynomial")
        d = self.ring.nvars
        idx = monomial_index(d, n)
        v = np.zeros(piece_dim(d, n), dtype=np.int64)
        for e, c in self.terms.items():
            if sum(e) != n:
                raise ValueError(f"term {e} is not of degree {n}")
            v[idx[e]] = c
        return v

    # --- identity / display ------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, np.integer, FieldElement)):
            other = self._coerce(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[Exponent, int]]:
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring.names, e) if k
            )
            cs = str(FieldElement(self.field, c))
            if self.field.s > 1 and c >= self.field.p:
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "terms": [
                {"exp": list(e), "coeff": self.field.coeffs(c)} for e, c in self.sorted_terms()
            ],
        }


def multiply(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


@lru_cache(maxsize=4096)
def multiplication_matrix(f: Polynomial, m: int) -> np.ndarray:
    """Matrix of g -> f*g from R_m to R_{m+e} (rows indexed by R_m), f homogeneous of degree e."""
    e = f.homogeneous_degree()
    if e is None:
        raise ValueError("multiplication_matrix needs a homogeneous polynomial")
    d = f.ring.nvars
    src = monomial_basis(d, m)
    out = np.zeros((len(src), piece_dim(d, m + e)), dtype=np.int64)
    if not f.terms or not src:
        return out
    tgt = monomial_index(d, m + e)
    rows = np.arange(len(src))
    for fe, c in f.terms.items():
        cols = np.fromiter((tgt[tuple(a + b for a, b in zip(x, fe))] for x in src), dtype=np.int64, count=len(src))
        out[rows, cols] = f.field.vadd(out[rows, cols], c)
    out.setflags(write=False)
    return out


def random_homogeneous(ring: PolyRing, n: int, rng, density: float = 1.0) -> Polynomial:
    """A random degree-n form; each monomial is kept with probability ``density``.

    ``rng`` is a ``numpy.random.Generator``; the result depends only on its state.
    """
    basis = monomial_basis(ring.nvars, n)
    codes = rng.integers(0, ring.field.q, size=len(basis))
    if density < 1.0:
        codes = codes * (rng.random(len(basis)) < density)
    return Polynomial(ring, {e: int(c) for e, c in zip(basis, codes) if c})
