"""Dense linear algebra over GF(q) on integer code arrays.

All routines copy their inputs; nothing here mutates a caller's array.
Vectors are rows: a matrix ``M`` acts by ``v @ M``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import FieldSpec

__all__ = [
    "MatrixGF",
    "rref",
    "rank",
    "kernel",
    "row_basis",
    "solve_rows",
    "solve_rows_many",
    "left_kernel",
    "intersection_dim",
    "QuotientBasis",
]


def rref(field: FieldSpec, m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = np.array(m, dtype=np.int64, copy=True)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r] = field.vmul(field.invl[lead], a[r])
        col = a[:, c].copy()
        col[r] = 0
        others = np.nonzero(col)[0]
        if others.size:
            factors = col[others]
            a[others] = field.vsub(a[others], field.vmul(factors[:, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    return a, pivots


def rank(field: FieldSpec, m: np.ndarray) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(field, m)[1])


def row_basis(field: FieldSpec, m: np.ndarray) -> np.ndarray:
    """Canonical (RREF) basis of the row space."""
    m = np.asarray(m, dtype=np.int64)
    if m.shape[0] == 0:
        return m.reshape(0, m.shape[1])
    r, piv = rref(field, m)
    return r[: len(piv)]


def kernel(field: FieldSpec, m: np.ndarray) -> np.ndarray:
    """Basis (as rows) of the right null space {v : M v = 0}.

    Returned in the canonical form obtained from the RREF of ``M``: one vector
    per free column with a 1 in that column.
    """
    m = np.asarray(m, dtype=np.int64)
    rows, cols = m.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    r, piv = rref(field, m)
    pivset = set(piv)
    free = [c for c in range(cols) if c not in pivset]
    out = np.zeros((len(free), cols), dtype=np.int64)
    if free:
        out[np.arange(len(free)), free] = 1
        if piv:
            out[:, piv] = field.vneg(r[: len(piv)][:, free].T)
    return out


def left_kernel(field: FieldSpec, m: np.ndarray) -> np.ndarray:
    """Basis of {v : v M = 0}."""
    m = np.asarray(m, dtype=np.int64)
    return kernel(field, m.T)


def solve_rows(field: FieldSpec, basis: np.ndarray, v: np.ndarray) -> np.ndarray | None:
    """Coefficients ``c`` with ``c @ basis == v``, or None when ``v`` is outside the span.

    ``basis`` must have independent rows.
    """
    basis = np.asarray(basis, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    k = basis.shape[0]
    if k == 0:
        return np.zeros(0, dtype=np.int64) if not v.any() else None
    aug = np.concatenate([basis.T, v.reshape(-1, 1)], axis=1)
    r, piv = rref(field, aug)
    if k in piv:
        return None
    if len(piv) != k:
        raise ValueError("basis rows are linearly dependent")
    return r[:k, k].copy()


def intersection_dim(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> int:
    """dim(rowspace(a) ∩ rowspace(b))."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return 0
    return rank(field, a) + rank(field, b) - rank(field, np.concatenate([a, b]))


class QuotientBasis:
    """A basis of span(ambient) / span(sub) with coordinate extraction.

    ``sub`` must lie inside ``ambient``; both are row matrices in one ambient
    coordinate system.  ``classes`` holds chosen representatives.
    """

    def __init__(self, field: FieldSpec, sub: np.ndarray, ambient: np.ndarray):
        self.field = field
        ncols = ambient.shape[1]
        sub = row_basis(field, sub) if sub.shape[0] else np.zeros((0, ncols), dtype=np.int64)
        self.sub = sub
        if ambient.shape[0] == 0:
            self.classes = np.zeros((0, ncols), dtype=np.int64)
        else:
            stacked = np.concatenate([sub, ambient])
            _, piv = rref(field, stacked.T)
            chosen = [c - sub.shape[0] for c in piv if c >= sub.shape[0]]
            self.classes = ambient[chosen]
        self._full = np.concatenate([self.sub, self.classes])

    @property
    def dim(self) -> int:
        return self.classes.shape[0]

    def coords(self, v: np.ndarray) -> np.ndarray | None:
        """Class coordinates of ``v``, or None when ``v`` is outside the ambient span."""
        c = solve_rows(self.field, self._full, v)
        if c is None:
            return None
        return c[self.sub.shape[0]:]


@dataclass(frozen=True)
class MatrixGF:
    """A dense matrix over GF(q) holding integer codes."""

    field: FieldSpec
    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.int64, copy=True)
        if e.ndim != 2:
            raise ValueError("MatrixGF needs a 2-d array")
        if e.size and (e.min() < 0 or e.max() >= self.field.q):
            raise ValueError("entries must be codes in [0, q)")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @classmethod
    def from_elements(cls, field: FieldSpec, rows) -> "MatrixGF":
        return cls(field, [[x.code for x in row] for row in rows])

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "MatrixGF":
        return cls(field, np.eye(n, dtype=np.int64))

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def rref(self) -> tuple["MatrixGF", list[int]]:
        r, piv = rref(self.field, self.entries)
        return MatrixGF(self.field, r), piv

    def rank(self) -> int:
        return rank(self.field, self.entries)

    def kernel(self) -> list[np.ndarray]:
        return list(kernel(self.field, self.entries))

    def __matmul__(self, other: "MatrixGF") -> "MatrixGF":
        if self.field != other.field:
            raise ValueError("field mismatch")
        return MatrixGF(self.field, self.field.matmul(self.entries, other.entries))

    def apply(self, v) -> np.ndarray:
        """M v for a column vector v."""
        return self.field.matmul(self.entries, np.asarray(v, dtype=np.int64).reshape(-1, 1)).ravel()

    def det(self) -> int:
        """Determinant as a field code."""
        n, m = self.shape
        if n != m:
            raise ValueError("determinant of a non-square matrix")
        f = self.field
        a = np.array(self.entries, copy=True)
        d = 1
        for c in range(n):
            nz = np.nonzero(a[c:, c])[0]
            if nz.size == 0:
                return 0
            k = c + int(nz[0])
            if k != c:
                a[[c, k]] = a[[k, c]]
                d = f.negl[d]
            lead = int(a[c, c])
            d = f.mull[d][lead]
            inv = f.invl[lead]
            below = a[c + 1:, c]
            idx = np.nonzero(below)[0] + c + 1
            if idx.size:
                fac = f.vmul(a[idx, c], inv)
                a[idx] = f.vsub(a[idx], f.vmul(fac[:, None], a[c][None, :]))
        return d

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MatrixGF)
            and self.field == other.field
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self) -> int:
        return hash((self.field, self.entries.tobytes(), self.entries.shape))

    def to_json(self) -> list[list[list[int]]]:
        return [[self.field.coeffs(int(x)) for x in row] for row in self.entries]


def solve_rows_many(field: FieldSpec, basis: np.ndarray, vs: np.ndarray) -> np.ndarray | None:
    """Coefficient rows ``C`` with ``C @ basis == vs``; None if any row of ``vs`` is outside the span."""
    basis = np.asarray(basis, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    k = basis.shape[0]
    if vs.shape[0] == 0:
        return np.zeros((0, k), dtype=np.int64)
    if k == 0:
        return np.zeros((vs.shape[0], 0), dtype=np.int64) if not vs.any() else None
    aug = np.concatenate([basis.T, vs.T], axis=1)
    r, piv = rref(field, aug)
    if any(c >= k for c in piv):
        return None
    if len(piv) != k:
        raise ValueError("basis rows are linearly dependent")
    return r[:k, k:].T.copy()
