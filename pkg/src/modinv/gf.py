"""Finite fields GF(p^s) in a fixed irreducible-polynomial representation.

Elements are stored internally as integer codes ``c0 + c1*p + ... + c_{s-1}*p^(s-1)``
where ``c0 + c1*t + ...`` is the residue modulo the field's modulus.  With this
encoding the prime subfield GF(p) is exactly the codes ``0..p-1``, and the
natural code order enumerates ``0, 1, t, t+1, ...``.

Arithmetic on codes goes through precomputed tables (q <= 4096), which is what
the polynomial and matrix layers use.  :class:`FieldElement` is a thin
immutable wrapper for callers who want operator syntax.
"""

from __future__ import annotations

from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "FieldSpec",
    "FieldElement",
    "FieldMismatchError",
    "DEFAULT_MODULI",
    "add",
    "mul",
    "inv",
    "enumerate_field",
    "is_prime",
]

# Conway polynomials, low-degree-first coefficient lists.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
    (7, 2): (3, 6, 1),
}

MAX_TABLE_ORDER = 4096


class FieldMismatchError(ValueError):
    """Raised when combining elements of different fields."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# --- arithmetic on GF(p)[t] coefficient lists (low degree first) ---------


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _polymod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    m = _trim(list(m))
    lead_inv = pow(m[-1], p - 2, p) if p > 2 else 1
    while len(a) >= len(m):
        f = (a[-1] * lead_inv) % p
        shift = len(a) - len(m)
        for k, mk in enumerate(m):
            a[shift + k] = (a[shift + k] - f * mk) % p
        _trim(a)
    return a


def _polymul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..s//2."""
    s = len(modulus) - 1
    for k in range(1, s // 2 + 1):
        for low in product(range(p), repeat=k):
            if not _polymod(modulus, list(low) + [1], p):
                return False
    return True


def _find_irreducible(p: int, s: int) -> tuple[int, ...]:
    for low in product(range(p), repeat=s):
        cand = tuple(reversed(low)) + (1,)
        if cand[0] != 0 and _is_irreducible(cand, p):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {s} over GF({p})")  # pragma: no cover


class FieldSpec:
    """The field GF(p^s) = GF(p)[t]/(modulus).

    ``modulus`` is a monic coefficient list, low degree first.  When omitted the
    Conway polynomial from :data:`DEFAULT_MODULI` is used (or, outside the table,
    the first irreducible polynomial in lexicographic order).
    """

    def __init__(self, p: int, s: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if s < 1:
            raise ValueError("s must be >= 1")
        if p**s > MAX_TABLE_ORDER:
            raise ValueError(f"GF({p}^{s}) exceeds the supported order {MAX_TABLE_ORDER}")
        if modulus is None:
            if s == 1:
                modulus = (0, 1)
            else:
                modulus = DEFAULT_MODULI.get((p, s)) or _find_irreducible(p, s)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != s + 1 or modulus[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {s}: {list(modulus)}")
        if not _is_irreducible(modulus, p):
            raise ValueError(f"modulus {list(modulus)} is reducible over GF({p})")
        self.p = p
        self.s = s
        self.q = p**s
        self.modulus = modulus
        self._build_tables()

    def _build_tables(self) -> None:
        p, q = self.p, self.q
        codes = np.arange(q)
        digits = np.stack([(codes // p**k) % p for k in range(self.s)], axis=1)
        self.digits = digits  # q x s, coefficient vectors of each code
        weights = p ** np.arange(self.s)
        add = (digits[:, None, :] + digits[None, :, :]) % p
        self.add_table = (add * weights).sum(axis=2)
        self.neg_table = ((-digits) % p * weights).sum(axis=1)
        if self.s == 1:
            self.mul_table = np.outer(codes, codes) % p
        else:
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(a, q):
                    r = _polymod(_polymul(digits[a].tolist(), digits[b].tolist(), p), self.modulus, p)
                    c = self._encode(r)
                    mul[a, b] = mul[b, a] = c
            self.mul_table = mul
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(self.mul_table[a] == 1)[0][0])
        self.inv_table = inv
        self.sub_table = self.add_table[:, self.neg_table]
        # python-level tables are faster than numpy scalars in dict-heavy loops
        self.addl = self.add_table.tolist()
        self.subl = self.sub_table.tolist()
        self.mull = self.mul_table.tolist()
        self.negl = self.neg_table.tolist()
        self.invl = inv.tolist()

    def _encode(self, coeffs: Sequence[int]) -> int:
        c = 0
        for k, x in enumerate(coeffs):
            c += (int(x) % self.p) * self.p**k
        return c

    # --- identity ------------------------------------------------------

    @property
    def is_prime_field(self) -> bool:
        return self.s == 1

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.s == other.s
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.s, self.modulus))

    def __repr__(self) -> str:
        if self.s == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.s}, modulus={list(self.modulus)})"

    # --- elements ------------------------------------------------------

    def __call__(self, value: int | Sequence[int]) -> FieldElement:
        """Build an element from an integer (reduced into GF(p)) or a coefficient list."""
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, int(value) % self.p)
        coeffs = list(value)
        if len(coeffs) > self.s:
            raise ValueError(f"element of GF({self.q}) needs at most {self.s} coefficients")
        return FieldElement(self, self._encode(coeffs))

    def element(self, code: int) -> FieldElement:
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for GF({self.q})")
        return FieldElement(self, code)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, c) for c in range(self.q)]

    def coeffs(self, code: int) -> list[int]:
        return [int(x) for x in self.digits[code]]

    @cached_property
    def primitive_code(self) -> int:
        """Smallest code generating the multiplicative group."""
        order = self.q - 1
        for c in range(1, self.q):
            x, k = c, 1
            while x != 1:
                x = self.mull[x][c]
                k += 1
            if k == order:
                return c
        raise AssertionError("multiplicative group is cyclic")  # pragma: no cover

    def code_pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.invl[a], -e
        r = 1
        while e:
            if e & 1:
                r = self.mull[r][a]
            a = self.mull[a][a]
            e >>= 1
        return r

    def int_code(self, n: int) -> int:
        """Code of the image of an integer in the prime subfield."""
        return n % self.p

    # --- vectorised arithmetic on code arrays ---------------------------

    def vadd(self, a, b):
        if self.s == 1:
            return (a + b) % self.p
        return self.add_table[a, b]

    def vsub(self, a, b):
        if self.s == 1:
            return (a - b) % self.p
        return self.sub_table[a, b]

    def vmul(self, a, b):
        if self.s == 1:
            return (a * b) % self.p
        return self.mul_table[a, b]

    def vneg(self, a):
        if self.s == 1:
            return (-a) % self.p
        return self.neg_table[a]

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product of code arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        p = self.p
        if self.s == 1:
            return (a @ b) % p
        # split into GF(p)-digit planes, multiply plane-wise, then reduce t^k
        ad = self.digits[a]
        bd = self.digits[b]
        s = self.s
        acc = [None] * (2 * s - 1)
        for i in range(s):
            for j in range(s):
                prod = ad[..., i] @ bd[..., j]
                acc[i + j] = prod if acc[i + j] is None else acc[i + j] + prod
        acc = [x % p for x in acc]
        # t^k for k >= s rewritten via the modulus, highest first
        for k in range(2 * s - 2, s - 1, -1):
            top = acc[k]
            for m in range(s):
                if self.modulus[m]:
                    acc[k - s + m] = (acc[k - s + m] - top * self.modulus[m]) % p
        out = np.zeros(acc[0].shape, dtype=np.int64)
        for k in range(s):
            out += acc[k] * p**k
        return out


class FieldElement:
    """An immutable element of a :class:`FieldSpec`."""

    __slots__ = ("spec", "code")

    def __init__(self, spec: FieldSpec, code: int):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "code", int(code))

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self) -> list[int]:
        return self.spec.coeffs(self.code)

    def _check(self, other: object) -> FieldElement:
        if isinstance(other, (int, np.integer)):
            return self.spec(int(other))
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.spec != self.spec:
            raise FieldMismatchError(f"{self.spec} vs {other.spec}")
        return other

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.spec, self.spec.addl[self.code][o.code])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.spec, self.spec.subl[self.code][o.code])

    def __rsub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return FieldElement(self.spec, self.spec.negl[self.code])

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.spec, self.spec.mull[self.code][o.code])

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.code == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(self.spec, self.spec.invl[self.code])

    def __truediv__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __pow__(self, e: int) -> FieldElement:
        if self.code == 0:
            if e < 0:
                raise ZeroDivisionError("zero has no inverse")
            return FieldElement(self.spec, 1 if e == 0 else 0)
        return FieldElement(self.spec, self.spec.code_pow(self.code, e))

    def frobenius(self) -> FieldElement:
        return self ** self.spec.p

    def is_zero(self) -> bool:
        return self.code == 0

    def __bool__(self) -> bool:
        return self.code != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, np.integer)):
            return self.code == int(other) % self.spec.p and self.code < self.spec.p
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.spec == other.spec and self.code == other.code

    def __hash__(self) -> int:
        return hash((self.spec, self.code))

    def __repr__(self) -> str:
        return f"FieldElement({self.spec!r}, {self.coeffs})"

    def __str__(self) -> str:
        if self.spec.s == 1:
            return str(self.code)
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(parts) if parts else "0"

    def to_json(self) -> list[int]:
        return self.coeffs


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def enumerate_field(spec: FieldSpec) -> list[FieldElement]:
    """All q elements, zero first, one second, in code order."""
    return spec.elements()


def iter_field(spec: FieldSpec) -> Iterator[FieldElement]:
    for c in range(spec.q):
        yield FieldElement(spec, c)
