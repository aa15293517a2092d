"""Finite matrix groups acting on polynomial rings, and graded invariant spaces.

Convention: a matrix ``g`` acts on R by the algebra homomorphism sending the
variable ``x_j`` to ``sum_i g[i, j] * x_i`` (column ``j`` of ``g`` read against
the variables).  With this choice ``act(g @ h, f) == act(g, act(h, f))``.
Using the inverse transpose instead gives the contragredient action; both
produce isomorphic invariant rings.
"""

from __future__ import annotations

from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .gf import FieldSpec
from .linalg import MatrixGF
from .poly import (
    PolyRing,
    Polynomial,
    RingMismatchError,
    _first_var_parent,
    _up_map,
    multiplication_matrix,
    piece_dim,
)

__all__ = [
    "GroupElement",
    "Group",
    "GroupTooLargeError",
    "close",
    "act",
    "invariant_basis",
    "trivial_group",
    "general_linear_group",
    "cyclic_transvection_group",
    "gl_order",
    "gl_generators",
    "ideal_piece",
    "random_invariant",
    "DEFAULT_CLOSURE_CAP",
]

DEFAULT_CLOSURE_CAP = 10**6


class GroupTooLargeError(RuntimeError):
    pass


def gl_order(d: int, q: int) -> int:
    out = 1
    for i in range(d):
        out *= q**d - q**i
    return out


class GroupElement:
    """An invertible d x d matrix over GF(q)."""

    def __init__(self, matrix: MatrixGF | Sequence[Sequence[int]], field: FieldSpec | None = None):
        if not isinstance(matrix, MatrixGF):
            if field is None:
                raise ValueError("a field is needed to build a GroupElement from codes")
            matrix = MatrixGF(field, matrix)
        if matrix.rows != matrix.cols:
            raise ValueError("group elements are square matrices")
        if matrix.det() == 0:
            raise ValueError("matrix is not invertible")
        self.matrix = matrix
        self._pieces: dict[int, np.ndarray] = {}

    @property
    def field(self) -> FieldSpec:
        return self.matrix.field

    @property
    def d(self) -> int:
        return self.matrix.rows

    @cached_property
    def key(self) -> bytes:
        return self.matrix.entries.tobytes()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupElement) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __mul__(self, other: GroupElement) -> GroupElement:
        return GroupElement(self.matrix @ other.matrix)

    def __repr__(self) -> str:
        return f"GroupElement({self.matrix.entries.tolist()})"

    def is_identity(self) -> bool:
        return np.array_equal(self.matrix.entries, np.eye(self.d, dtype=np.int64))

    def images(self, ring: PolyRing) -> list[Polynomial]:
        """Images of the variables under the action."""
        if ring.nvars != self.d:
            raise RingMismatchError(f"matrix of size {self.d} acting on {ring.nvars} variables")
        if ring.field != self.field:
            raise RingMismatchError("matrix and ring over different fields")
        g = self.matrix.entries
        return [ring.linear_form(g[:, j].tolist()) for j in range(self.d)]

    def act(self, f: Polynomial) -> Polynomial:
        return f.substitute(self.images(f.ring))

    def piece_matrix(self, n: int) -> np.ndarray:
        """Matrix of the action on R_n; row k is the image of the k-th basis monomial."""
        if n in self._pieces:
            return self._pieces[n]
        d, f = self.d, self.field
        if n == 0:
            out = np.ones((1, 1), dtype=np.int64)
        else:
            prev = self.piece_matrix(n - 1)
            first, parent = _first_var_parent(d, n)
            rows = prev[parent]  # image of m / x_first, for each m
            g = self.matrix.entries
            out = np.zeros((len(first), piece_dim(d, n)), dtype=np.int64)
            for j in range(d):
                coef = g[j, first]
                if not coef.any():
                    continue
                up = _up_map(d, n - 1, j)
                out[:, up] = f.vadd(out[:, up], f.vmul(coef[:, None], rows))
        out.setflags(write=False)
        self._pieces[n] = out
        return out


def act(g: GroupElement, f: Polynomial) -> Polynomial:
    return g.act(f)


class Group:
    """A finite subgroup of GL(d, q) given by generators, with its element list."""

    def __init__(self, generators: Sequence[GroupElement], elements: Sequence[GroupElement], field: FieldSpec, d: int):
        self.generators = list(generators)
        self.elements = list(elements)
        self.field = field
        self.d = d
        self._invariants: dict[int, np.ndarray] = {}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"Group(d={self.d}, {self.field!r}, order={self.order})"

    @cached_property
    def ring(self) -> PolyRing:
        return PolyRing(self.field, self.d)

    @property
    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.generators)

    def is_invariant(self, f: Polynomial) -> bool:
        return all(g.act(f) == f for g in self.generators)

    def invariant_matrix(self, n: int) -> np.ndarray:
        """Rows form the canonical (RREF) basis of S_n inside R_n coordinates."""
        if n in self._invariants:
            return self._invariants[n]
        d = self.d
        if n < 0:
            out = np.zeros((0, 0), dtype=np.int64)
        else:
            gens = [g for g in self.generators if not g.is_identity()]
            size = piece_dim(d, n)
            if not gens:
                out = np.eye(size, dtype=np.int64)
            else:
                eye = np.eye(size, dtype=np.int64)
                blocks = [self.field.vsub(g.piece_matrix(n), eye) for g in gens]
                # v (A - I) = 0 for every generator
                out = linalg.kernel(self.field, np.concatenate(blocks, axis=1).T)
                out = linalg.row_basis(self.field, out)
        out.setflags(write=False)
        self._invariants[n] = out
        return out

    def invariant_dim(self, n: int) -> int:
        return self.invariant_matrix(n).shape[0]

    def invariant_basis(self, n: int, ring: PolyRing | None = None) -> list[Polynomial]:
        ring = ring or self.ring
        return [ring.from_vector(n, row) for row in self.invariant_matrix(n)]

    def to_json(self) -> dict:
        f = self.field
        return {
            "q": {"p": f.p, "s": f.s, "modulus": list(f.modulus)},
            "d": self.d,
            "generators": [g.matrix.to_json() for g in self.generators],
        }


def close(generators: Iterable[GroupElement], cap: int = DEFAULT_CLOSURE_CAP) -> Group:
    """Breadth-first closure of a set of invertible matrices."""
    gens = list(generators)
    if not gens:
        raise ValueError("at least one generator is required (use the identity for the trivial group)")
    field, d = gens[0].field, gens[0].d
    for g in gens:
        if g.field != field or g.d != d:
            raise ValueError("generators must share field and dimension")
    identity = GroupElement(MatrixGF.identity(field, d))
    seen = {identity.key: identity}
    queue = deque([identity])
    while queue:
        h = queue.popleft()
        for g in gens:
            k = g * h
            if k.key not in seen:
                seen[k.key] = k
                if len(seen) > cap:
                    raise GroupTooLargeError(f"closure exceeds {cap} elements")
                queue.append(k)
    # a finite monoid of invertible matrices is a group: inverses come for free
    return Group(gens, list(seen.values()), field, d)


def invariant_basis(group: Group, n: int) -> list[Polynomial]:
    return group.invariant_basis(n)


# --- presets ---------------------------------------------------------------


def _elementary(field: FieldSpec, d: int, i: int, j: int, code: int) -> GroupElement:
    m = np.eye(d, dtype=np.int64)
    m[i, j] = code
    return GroupElement(MatrixGF(field, m))


def trivial_group(field: FieldSpec, d: int) -> Group:
    return close([GroupElement(MatrixGF.identity(field, d))])


def gl_generators(field: FieldSpec, d: int) -> list[GroupElement]:
    """A small generating set of GL(d, q).

    Transvections ``I + a E_01`` for ``a`` running over a GF(p)-basis of GF(q),
    a transposition and a d-cycle (which conjugate E_01 to every E_ij) generate
    SL(d, q); a diagonal matrix with a primitive entry completes GL.
    """
    gens: list[GroupElement] = []
    if d >= 2:
        p = field.p
        for k in range(field.s):
            gens.append(_elementary(field, d, 0, 1, p**k))
        swap = np.eye(d, dtype=np.int64)
        swap[[0, 1]] = swap[[1, 0]]
        gens.append(GroupElement(MatrixGF(field, swap)))
        if d >= 3:
            cyc = np.roll(np.eye(d, dtype=np.int64), 1, axis=0)
            gens.append(GroupElement(MatrixGF(field, cyc)))
    if field.q > 2:
        diag = np.eye(d, dtype=np.int64)
        diag[0, 0] = field.primitive_code
        gens.append(GroupElement(MatrixGF(field, diag)))
    if not gens:
        gens.append(GroupElement(MatrixGF.identity(field, d)))
    return gens


def general_linear_group(field: FieldSpec, d: int, cap: int = DEFAULT_CLOSURE_CAP) -> Group:
    return close(gl_generators(field, d), cap)


def cyclic_transvection_group(field: FieldSpec, d: int) -> Group:
    """The order-p group generated by the transvection x_2 -> x_2 + x_1."""
    if d < 2:
        return trivial_group(field, d)
    return close([_elementary(field, d, 0, 1, 1)])


def ideal_piece(generators: Sequence[Polynomial], group: Group, m: int) -> np.ndarray:
    """Row basis (R_m coordinates) of the degree-m piece of the ideal of S generated by ``generators``.

    The piece is spanned by h * f_j with h running over a basis of S_{m - deg f_j}.
    """
    blocks = []
    for f in generators:
        if f.is_zero():
            continue
        e = f.homogeneous_degree()
        if e is None:
            raise ValueError("ideal generators must be homogeneous")
        if e > m:
            continue
        basis = group.invariant_matrix(m - e)
        if basis.shape[0]:
            blocks.append(group.field.matmul(basis, multiplication_matrix(f, m - e)))
    if not blocks:
        return np.zeros((0, piece_dim(group.d, m)), dtype=np.int64)
    return linalg.row_basis(group.field, np.concatenate(blocks))


def random_invariant(group: Group, n: int, rng) -> Polynomial:
    """A uniformly random element of S_n (zero when S_n = 0)."""
    basis = group.invariant_matrix(n)
    ring = group.ring
    if not basis.shape[0]:
        return ring.zero
    coeffs = rng.integers(0, group.field.q, size=basis.shape[0]).reshape(1, -1)
    return ring.from_vector(n, group.field.matmul(coeffs, basis)[0])
