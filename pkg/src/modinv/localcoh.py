"""Graded local cohomology of invariant rings over a finite degree window.

``H^i_I(S)`` is computed as the colimit over ``t`` of the cohomology of the
cochain complex ``K(t)`` whose degree-``i`` term is a sum over ``i``-subsets
``J`` of the generators, the ``J`` summand holding numerators ``s`` of Čech
fractions ``s / x_J^t`` (``x_J`` the product of the generators in ``J``).
The transition ``K(t) -> K(t+1)`` multiplies the ``J`` numerator by ``x_J``.
In a fixed internal degree every term is a finite-dimensional piece of S, so
each cell ``(i, t, n)`` is plain linear algebra over GF(q).

Numerators are carried in R-coordinates of the relevant graded pieces;
cocycles are found inside the invariant subspaces, so everything computed is
a statement about S.  Results hold at *window precision*: a degree counts as
stabilized after two consecutive transition maps are isomorphisms, which is
checked at runtime but not proved.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .cartan_frac import CartanEvaluator, Fraction
from .dickson import DicksonAlgebra
from .group_action import Group, ideal_piece
from .poly import Polynomial, multiplication_matrix, piece_dim
from .steenrod import p as steenrod_p

__all__ = [
    "IdealSpec",
    "DegreeCapError",
    "Inconclusive",
    "CechComplex",
    "KoszulCell",
    "CohomologyClass",
    "GradedCohomologyWindow",
    "WindowAnnihilator",
    "koszul_cohomology",
    "colimit_window",
    "induced_q",
    "window_annihilator",
    "pstar_closure_check",
    "dickson_containment_probe",
    "depth_probe",
    "compare_generator_choices",
    "laurent_count",
    "default_threads",
    "DEFAULT_DEGREE_CAP",
    "DEFAULT_POWER_BOUND",
]

DEFAULT_DEGREE_CAP = 120
DEFAULT_POWER_BOUND = 4


class DegreeCapError(RuntimeError):
    """A computation needs a graded piece above the configured degree cap."""


class Inconclusive(RuntimeError):
    """The window does not contain enough information to answer."""


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("MODINV_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class IdealSpec:
    """Homogeneous invariant generators x_1..x_m of an ideal of S."""

    generators: tuple[Polynomial, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ValueError("an ideal needs at least one generator")
        ring = gens[0].ring
        for g in gens:
            if g.ring != ring:
                raise ValueError("generators live in different rings")
            if g.is_zero():
                raise ValueError("generators must be nonzero")
            if g.homogeneous_degree() is None:
                raise ValueError(f"generator {g} is not homogeneous")

    @property
    def ring(self):
        return self.generators[0].ring

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(g.homogeneous_degree() for g in self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def check_invariant(self, group: Group) -> None:
        for g in self.generators:
            if not group.is_invariant(g):
                raise ValueError(f"ideal generator {g} is not invariant under the group")

    def to_json(self) -> dict:
        return {"generators": [g.to_json() for g in self.generators]}


# --------------------------------------------------------------------------
# single cells


class KoszulCell:
    """Cohomology of K(t) at cohomological index i and internal degree n.

    Coordinates of the ``i``-th term are the concatenated R-coordinates of
    the numerator pieces, one block per ``i``-subset ``J`` in lexicographic
    order.  ``quotient.classes`` are cocycle representatives of a basis.
    """

    def __init__(self, cx: "CechComplex", i: int, t: int, n: int):
        self.cx, self.i, self.t, self.n = cx, i, t, n
        m = len(cx.ideal)
        field = cx.group.field
        self.subsets = [tuple(J) for J in combinations(range(m), i)]
        self.degrees = [cx.numerator_degree(J, t, n) for J in self.subsets]
        for deg in (cx.term_degrees(i - 1, t, n) + self.degrees + cx.term_degrees(i + 1, t, n)):
            if deg > cx.degree_cap:
                raise DegreeCapError(
                    f"cell (i={i}, t={t}, n={n}) needs degree {deg} > cap {cx.degree_cap}"
                )
        self.offsets = _offsets(cx.group.d, self.degrees)
        self.width = self.offsets[-1]

        # cocycles: invariant numerators killed by the outgoing differential
        s_basis = cx.invariant_block(self.degrees)
        d_out = cx.differential(i, t, n)
        if s_basis.shape[0] and d_out.shape[1]:
            image = field.matmul(s_basis, d_out)
            coeffs = linalg.left_kernel(field, image)
            cocycles = field.matmul(coeffs, s_basis) if coeffs.shape[0] else coeffs.reshape(0, self.width)
        else:
            cocycles = s_basis
        self.cocycles = linalg.row_basis(field, cocycles) if cocycles.shape[0] else cocycles.reshape(0, self.width)

        # coboundaries: image of invariant numerators one step down
        if i > 0:
            prev_degrees = cx.term_degrees(i - 1, t, n)
            prev_basis = cx.invariant_block(prev_degrees)
            d_in = cx.differential(i - 1, t, n)
            bound = field.matmul(prev_basis, d_in) if prev_basis.shape[0] else np.zeros((0, self.width), dtype=np.int64)
        else:
            bound = np.zeros((0, self.width), dtype=np.int64)
        self.d_out = d_out
        self.quotient = linalg.QuotientBasis(field, bound, self.cocycles)

    @property
    def dim(self) -> int:
        return self.quotient.dim

    @property
    def classes(self) -> np.ndarray:
        return self.quotient.classes

    def is_cocycle(self, v: np.ndarray) -> bool:
        if self.d_out.shape[1] == 0:
            return True
        return not self.cx.group.field.matmul(v.reshape(1, -1), self.d_out).any()

    def block(self, v: np.ndarray, k: int) -> np.ndarray:
        return v[self.offsets[k]: self.offsets[k + 1]]

    def fractions(self, v: np.ndarray) -> tuple[Fraction, ...]:
        """The Čech cochain ``(s_J / x_J^t)_J`` with numerators read from ``v``."""
        ring = self.cx.ring
        out = []
        for k, J in enumerate(self.subsets):
            num = ring.from_vector(self.degrees[k], self.block(v, k)) if self.degrees[k] >= 0 else ring.zero
            out.append(Fraction(num, self.cx.base(J), self.t, normalize=False))
        return tuple(out)

    def vector_from_fractions(self, fracs: Sequence[Fraction]) -> np.ndarray:
        """Numerator coordinates after rewriting each fraction over x_J^t."""
        v = np.zeros(self.width, dtype=np.int64)
        for k, (J, fr) in enumerate(zip(self.subsets, fracs)):
            if fr.is_zero():
                continue
            if fr.base != self.cx.base(J):
                raise ValueError("fraction localized at the wrong element")
            num = fr.with_exp(self.t)
            v[self.offsets[k]: self.offsets[k + 1]] = num.to_vector(self.degrees[k])
        return v


def _offsets(d: int, degrees: Sequence[int]) -> list[int]:
    out = [0]
    for deg in degrees:
        out.append(out[-1] + piece_dim(d, deg))
    return out


class CechComplex:
    """Shared, memoized machinery for one (group, ideal) pair."""

    def __init__(self, ideal: IdealSpec, group: Group, degree_cap: int = DEFAULT_DEGREE_CAP):
        if ideal.ring.nvars != group.d or ideal.ring.field != group.field:
            raise ValueError("ideal and group disagree on the polynomial ring")
        ideal.check_invariant(group)
        self.ideal = ideal
        self.group = group
        self.degree_cap = degree_cap
        self.ring = ideal.ring
        self._cells: dict[tuple[int, int, int], KoszulCell] = {}
        self._lock = threading.Lock()

    def base(self, J: Sequence[int]) -> Polynomial:
        out = self.ring.one
        for j in J:
            out = out * self.ideal.generators[j]
        return out

    def numerator_degree(self, J: Sequence[int], t: int, n: int) -> int:
        return n + t * sum(self.ideal.degrees[j] for j in J)

    def term_degrees(self, i: int, t: int, n: int) -> list[int]:
        m = len(self.ideal)
        if i < 0 or i > m:
            return []
        return [self.numerator_degree(J, t, n) for J in combinations(range(m), i)]

    def invariant_block(self, degrees: Sequence[int]) -> np.ndarray:
        """Block-diagonal basis of the invariant numerators (rows) in R-coordinates."""
        d = self.group.d
        offsets = _offsets(d, degrees)
        blocks = []
        for k, deg in enumerate(degrees):
            if deg < 0:
                continue
            b = self.group.invariant_matrix(deg)
            if b.shape[0]:
                row = np.zeros((b.shape[0], offsets[-1]), dtype=np.int64)
                row[:, offsets[k]: offsets[k + 1]] = b
                blocks.append(row)
        if not blocks:
            return np.zeros((0, offsets[-1]), dtype=np.int64)
        return np.concatenate(blocks)

    def differential(self, i: int, t: int, n: int) -> np.ndarray:
        """Matrix (rows: R-coords of term i, cols: R-coords of term i+1)."""
        m = len(self.ideal)
        src = [tuple(J) for J in combinations(range(m), i)] if 0 <= i <= m else []
        dst = [tuple(J) for J in combinations(range(m), i + 1)] if 0 <= i + 1 <= m else []
        d = self.group.d
        src_deg = [self.numerator_degree(J, t, n) for J in src]
        dst_deg = [self.numerator_degree(J, t, n) for J in dst]
        so, do = _offsets(d, src_deg), _offsets(d, dst_deg)
        out = np.zeros((so[-1], do[-1]), dtype=np.int64)
        field = self.group.field
        dst_index = {J: k for k, J in enumerate(dst)}
        for a, J in enumerate(src):
            if src_deg[a] < 0:
                continue
            for k in range(m):
                if k in J:
                    continue
                Jp = tuple(sorted(J + (k,)))
                b = dst_index[Jp]
                pos = Jp.index(k)
                mult = multiplication_matrix(self.ideal.generators[k] ** t, src_deg[a])
                if pos % 2:
                    mult = field.vneg(mult)
                out[so[a]: so[a + 1], do[b]: do[b + 1]] = mult
        return out

    def transition(self, i: int, t: int, n: int, steps: int = 1) -> np.ndarray:
        """Map K(t) -> K(t + steps) on term i: the J numerator is multiplied by x_J^steps."""
        m = len(self.ideal)
        subsets = [tuple(J) for J in combinations(range(m), i)]
        d = self.group.d
        src = [self.numerator_degree(J, t, n) for J in subsets]
        dst = [self.numerator_degree(J, t + steps, n) for J in subsets]
        so, do = _offsets(d, src), _offsets(d, dst)
        out = np.zeros((so[-1], do[-1]), dtype=np.int64)
        for k, J in enumerate(subsets):
            if src[k] < 0:
                continue
            out[so[k]: so[k + 1], do[k]: do[k + 1]] = multiplication_matrix(self.base(J) ** steps, src[k])
        return out

    def cell(self, i: int, t: int, n: int) -> KoszulCell:
        key = (i, t, n)
        with self._lock:
            cached = self._cells.get(key)
        if cached is not None:
            return cached
        c = KoszulCell(self, i, t, n)
        with self._lock:
            return self._cells.setdefault(key, c)

    def transition_rank(self, i: int, t: int, n: int) -> int:
        """Rank of the induced map H(K(t)) -> H(K(t+1)) in degree n."""
        a, b = self.cell(i, t, n), self.cell(i, t + 1, n)
        if a.dim == 0 or b.dim == 0:
            return 0
        field = self.group.field
        img = field.matmul(a.classes, self.transition(i, t, n))
        sub = b.quotient.sub
        stacked = np.concatenate([sub, img]) if sub.shape[0] else img
        return linalg.rank(field, stacked) - sub.shape[0]


def koszul_cohomology(
    ideal: IdealSpec, group: Group, i: int, t: int, n: int, degree_cap: int = DEFAULT_DEGREE_CAP
) -> KoszulCell:
    return CechComplex(ideal, group, degree_cap).cell(i, t, n)


# --------------------------------------------------------------------------
# windows


@dataclass(frozen=True)
class CohomologyClass:
    """A class in one graded piece of a window, as coordinates in its basis."""

    window: "GradedCohomologyWindow"
    degree: int
    coords: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        if other.window is not self.window or other.degree != self.degree:
            raise ValueError("adding classes from different pieces")
        f = self.window.field
        return CohomologyClass(self.window, self.degree, tuple(f.addl[a][b] for a, b in zip(self.coords, other.coords)))

    def scale(self, c: int) -> "CohomologyClass":
        row = self.window.field.mull[c]
        return CohomologyClass(self.window, self.degree, tuple(row[a] for a in self.coords))

    def vector(self) -> np.ndarray:
        """Cocycle representative (numerator coordinates at the window's truncation)."""
        cell = self.window.cells[self.degree]
        c = np.array(self.coords, dtype=np.int64).reshape(1, -1)
        if cell.dim == 0:
            return np.zeros(cell.width, dtype=np.int64)
        return self.window.field.matmul(c, cell.classes)[0]

    def fractions(self) -> tuple[Fraction, ...]:
        return self.window.cells[self.degree].fractions(self.vector())


@dataclass
class GradedCohomologyWindow:
    """H^i_I(S) over the internal degrees lo..hi."""

    complex: CechComplex
    i: int
    lo: int
    hi: int
    t_max: int
    dims: dict[int, int] = field(default_factory=dict)
    stabilized: dict[int, bool] = field(default_factory=dict)
    truncation: dict[int, int] = field(default_factory=dict)
    cells: dict[int, KoszulCell] = field(default_factory=dict)
    notes: dict[int, str] = field(default_factory=dict)

    @property
    def field(self):
        return self.complex.group.field

    @property
    def group(self) -> Group:
        return self.complex.group

    @property
    def ideal(self) -> IdealSpec:
        return self.complex.ideal

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def in_window(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def is_zero(self) -> bool:
        return all(self.stabilized[n] and self.dims[n] == 0 for n in self.degrees)

    def fully_stabilized(self) -> bool:
        return all(self.stabilized[n] for n in self.degrees)

    def basis(self, n: int) -> list[CohomologyClass]:
        k = self.dims[n]
        return [CohomologyClass(self, n, tuple(int(a == b) for b in range(k))) for a in range(k)]

    def zero_class(self, n: int) -> CohomologyClass:
        return CohomologyClass(self, n, (0,) * self.dims[n])

    def class_of(self, n: int, fracs: Sequence[Fraction] | None = None, *, vector=None, t: int | None = None) -> CohomologyClass:
        """Classify a cocycle given as Čech fractions or as numerators at truncation ``t``."""
        coords = self.classify_many(n, [fracs] if fracs is not None else None, vectors=None if vector is None else np.asarray(vector).reshape(1, -1), t=t)
        return CohomologyClass(self, n, tuple(int(x) for x in coords[0]))

    def classify_many(self, n: int, fracs_list=None, *, vectors=None, t: int | None = None) -> np.ndarray:
        if not self.in_window(n):
            raise Inconclusive(f"degree {n} lies outside the window [{self.lo}, {self.hi}]")
        if not self.stabilized[n]:
            raise Inconclusive(f"degree {n} is not stabilized")
        cx = self.complex
        t_n = self.truncation[n]
        if fracs_list is not None:
            need = max([t_n] + [fr.exp for fracs in fracs_list for fr in fracs])
            target = cx.cell(self.i, need, n)
            vectors = np.array([target.vector_from_fractions(fr) for fr in fracs_list], dtype=np.int64).reshape(len(fracs_list), target.width)
            t = need
        if t is None:
            raise ValueError("numerator vectors need their truncation t")
        top = max(t, t_n)
        field = self.field
        if top > t:
            vectors = field.matmul(vectors, cx.transition(self.i, t, n, top - t))
        cell_top = cx.cell(self.i, top, n)
        for v in vectors:
            if not cell_top.is_cocycle(v):
                raise RuntimeError(f"not a cocycle in degree {n}; the differential and operators disagree")
        classes = self.cells[n].classes
        if top > t_n:
            classes = field.matmul(classes, cx.transition(self.i, t_n, n, top - t_n))
        full = np.concatenate([cell_top.quotient.sub, classes])
        sol = linalg.solve_rows_many(field, full, vectors)
        if sol is None:
            raise Inconclusive(f"degree {n}: representative escapes the stabilized classes")
        return sol[:, cell_top.quotient.sub.shape[0]:]

    def report(self) -> dict:
        return {
            str(n): {
                "dim": self.dims[n],
                "stabilized": self.stabilized[n],
                "truncation": self.truncation[n],
                **({"note": self.notes[n]} if n in self.notes else {}),
            }
            for n in self.degrees
        }


def _first_truncation(cx: CechComplex, i: int, n: int) -> int:
    """Smallest t putting every summand of term i in nonnegative degree.

    Below it the summands are zero for degree reasons alone, and the
    transition maps between zero spaces would fake stabilization.
    """
    t0 = 1
    if n < 0:
        for J in combinations(range(len(cx.ideal)), i):
            w = sum(cx.ideal.degrees[j] for j in J)
            if w:
                t0 = max(t0, -(n // w))
    return t0


def _stabilize(cx: CechComplex, i: int, n: int, t_max: int):
    """First t with H(t) -> H(t+1) -> H(t+2) both isomorphisms in degree n."""
    last = None
    start = _first_truncation(cx, i, n)
    if start > t_max - 2:
        return start, None, False, f"t_max={t_max} too small for degree {n} (needs t >= {start + 2})"
    try:
        for t in range(start, t_max - 1):
            a, b, c = cx.cell(i, t, n), cx.cell(i, t + 1, n), cx.cell(i, t + 2, n)
            last = (t, a)
            if a.dim == b.dim == c.dim and cx.transition_rank(i, t, n) == a.dim and cx.transition_rank(i, t + 1, n) == b.dim:
                return t, a, True, None
        reason = f"no stabilization up to t_max={t_max}"
    except DegreeCapError as exc:
        reason = str(exc)
    if last is None:
        try:
            last = (start, cx.cell(i, start, n))
        except DegreeCapError as exc:
            return 0, None, False, str(exc)
    return last[0], last[1], False, reason


def colimit_window(
    ideal: IdealSpec | CechComplex,
    group: Group | None,
    i: int,
    window: tuple[int, int],
    t_max: int = 8,
    *,
    degree_cap: int = DEFAULT_DEGREE_CAP,
    threads: int | None = None,
) -> GradedCohomologyWindow:
    """Per-degree dimensions of H^i_I(S) on ``window`` with stabilization flags."""
    cx = ideal if isinstance(ideal, CechComplex) else CechComplex(ideal, group, degree_cap)
    lo, hi = window
    if lo > hi:
        raise ValueError("empty window")
    if t_max < 3:
        raise ValueError("t_max must be at least 3 to observe two transitions")
    w = GradedCohomologyWindow(cx, i, lo, hi, t_max)
    if i < 0 or i > len(cx.ideal):
        for n in w.degrees:
            w.dims[n], w.stabilized[n], w.truncation[n] = 0, True, 1
            w.cells[n] = None
        w.notes.update({n: "cohomological index outside the Čech range" for n in w.degrees})
        return w
    threads = threads or default_threads()
    degrees = list(w.degrees)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda n: _stabilize(cx, i, n, t_max), degrees))
    else:
        results = [_stabilize(cx, i, n, t_max) for n in degrees]
    for n, (t, cell, ok, reason) in zip(degrees, results):
        w.truncation[n] = t
        w.cells[n] = cell
        w.dims[n] = cell.dim if cell is not None else 0
        w.stabilized[n] = ok
        if reason:
            w.notes[n] = reason
    return w


# --------------------------------------------------------------------------
# operators on classes


def _apply_componentwise_q(r: int, fracs: Sequence[Fraction]) -> list[Fraction]:
    return [CartanEvaluator(fr)(r) for fr in fracs]


def induced_q(r: int, cls: CohomologyClass) -> CohomologyClass:
    """Q^r on a cohomology class, via componentwise Q^r on a Čech representative."""
    w = cls.window
    q = w.field.q
    target = cls.degree + r * (q - 1)
    if not w.in_window(target) or not w.stabilized.get(target, False):
        raise Inconclusive(f"Q^{r} lands in degree {target}, outside the stabilized window")
    if r == 0:
        return cls
    if cls.is_zero():
        return w.zero_class(target)
    images = _apply_componentwise_q(r, cls.fractions())
    return w.class_of(target, images)


def induced_q_matrix(w: GradedCohomologyWindow, r: int, n: int) -> np.ndarray:
    """Matrix of Q^r from degree n to n + r(q-1); rows are images of basis classes."""
    target = n + r * (w.field.q - 1)
    if not w.in_window(target) or not w.stabilized.get(target, False):
        raise Inconclusive(f"Q^{r} lands in degree {target}, outside the stabilized window")
    rows = [induced_q(r, c).coords for c in w.basis(n)]
    return np.array(rows, dtype=np.int64).reshape(len(rows), w.dims[target])


def multiply_class(s: Polynomial, cls: CohomologyClass, degree: int | None = None) -> CohomologyClass:
    """s * cls; ``degree`` (the degree of s) is required when s is zero."""
    w = cls.window
    if s.is_zero():
        if degree is None:
            raise ValueError("the zero multiplier has no degree; pass degree=")
        e = degree
    else:
        e = s.homogeneous_degree()
    if e is None:
        raise ValueError("multiplier must be homogeneous")
    target = cls.degree + e
    if cls.is_zero() or s.is_zero():
        if not w.in_window(target):
            raise Inconclusive(f"degree {target} lies outside the window")
        return w.zero_class(target)
    fracs = [fr * s for fr in cls.fractions()]
    return w.class_of(target, fracs)


def _multiply_all(w: GradedCohomologyWindow, fs: np.ndarray, e: int, n: int) -> np.ndarray:
    """Class coordinates of f * c for rows f of ``fs`` (R_e coordinates) and every basis class c of degree n.

    Returns an array of shape (len(fs), dims[n] * dims[n+e]).
    """
    cx = w.complex
    field = w.field
    cell = w.cells[n]
    t = w.truncation[n]
    k = cell.dim
    out_cols = []
    ring = cx.ring
    for f_vec in fs:
        f = ring.from_vector(e, f_vec)
        vecs = np.zeros((k, cx.cell(w.i, t, n + e).width), dtype=np.int64)
        tgt = cx.cell(w.i, t, n + e)
        for b, (J, deg) in enumerate(zip(cell.subsets, cell.degrees)):
            if deg < 0:
                continue
            blk = cell.classes[:, cell.offsets[b]: cell.offsets[b + 1]]
            vecs[:, tgt.offsets[b]: tgt.offsets[b + 1]] = field.matmul(blk, multiplication_matrix(f, deg))
        coords = w.classify_many(n + e, vectors=vecs, t=t)
        out_cols.append(coords.reshape(-1))
    return np.array(out_cols, dtype=np.int64).reshape(len(fs), -1)


@dataclass
class WindowAnnihilator:
    """Invariants (per degree, up to a cap) killing every window class they can be tested on.

    ``basis[e]`` holds R_e coordinates of a basis of the annihilator piece;
    ``vacuous[e]`` is True when no class could be tested in degree e (every
    product left the window), in which case the piece is all of S_e by default.
    """

    window: GradedCohomologyWindow
    degree_cap: int
    basis: dict[int, np.ndarray] = field(default_factory=dict)
    vacuous: dict[int, bool] = field(default_factory=dict)
    excluded: dict[int, list[int]] = field(default_factory=dict)

    @property
    def field(self):
        return self.window.field

    def polynomials(self, e: int) -> list[Polynomial]:
        ring = self.window.complex.ring
        return [ring.from_vector(e, row) for row in self.basis[e]]

    def contains(self, f: Polynomial) -> bool | None:
        """Membership; None when the degree is above the cap or untested."""
        if f.is_zero():
            return True
        e = f.homogeneous_degree()
        if e is None:
            raise ValueError("annihilator membership needs a homogeneous polynomial")
        if e > self.degree_cap or self.vacuous.get(e, True):
            return None
        return linalg.solve_rows(self.field, self.basis[e], f.to_vector(e)) is not None

    def nonzero_tested(self) -> bool:
        """Whether some positive-degree piece is nonzero and actually tested."""
        return any(self.basis[e].shape[0] for e in self.basis if e > 0 and not self.vacuous[e])

    def check_ideal_closure(self) -> list[tuple[int, int]]:
        """Failures (e, k) of A_e * S_k ⊆ A_{e+k} within the cap; empty when closed."""
        bad = []
        group = self.window.group
        field = self.field
        for e, rows in self.basis.items():
            if self.vacuous[e] or not rows.shape[0]:
                continue
            for k in range(1, self.degree_cap - e + 1):
                if self.vacuous[e + k]:
                    continue
                s = group.invariant_matrix(k)
                if not s.shape[0]:
                    continue
                for f_vec in rows:
                    f = self.window.complex.ring.from_vector(e, f_vec)
                    prods = field.matmul(s, multiplication_matrix(f, k))
                    if linalg.solve_rows_many(field, self.basis[e + k], prods) is None:
                        bad.append((e, k))
                        break
        return bad

    def report(self) -> dict:
        return {
            str(e): {
                "dim": int(self.basis[e].shape[0]),
                "invariant_dim": self.window.group.invariant_dim(e),
                "vacuous": self.vacuous[e],
                "excluded_source_degrees": self.excluded[e],
            }
            for e in sorted(self.basis)
        }


def window_annihilator(w: GradedCohomologyWindow, degree_cap: int) -> WindowAnnihilator:
    field = w.field
    group = w.group
    ann = WindowAnnihilator(w, degree_cap)
    for e in range(0, degree_cap + 1):
        s_e = group.invariant_matrix(e)
        tested = []
        excluded = []
        for n in w.degrees:
            if not w.in_window(n + e) or not (w.stabilized[n] and w.stabilized[n + e]):
                excluded.append(n)
                continue
            if w.dims[n]:
                tested.append(n)
        ann.excluded[e] = excluded
        ann.vacuous[e] = not tested
        if not s_e.shape[0]:
            ann.basis[e] = s_e.reshape(0, piece_dim(group.d, e))
            continue
        cols = [_multiply_all(w, s_e, e, n) for n in tested]
        cols = [c for c in cols if c.shape[1]]
        if not cols:
            ann.basis[e] = s_e.copy()
            continue
        m = np.concatenate(cols, axis=1)
        combos = linalg.left_kernel(field, m)
        ann.basis[e] = linalg.row_basis(field, field.matmul(combos, s_e)) if combos.shape[0] else combos.reshape(0, s_e.shape[1])
    return ann


@dataclass
class ClosureReport:
    violations: list[dict]
    checked: int
    skipped_over_cap: int
    vacuous: int

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "status": "pass" if self.passed else "fail",
            "checked": self.checked,
            "skipped_over_cap": self.skipped_over_cap,
            "vacuous": self.vacuous,
            "violations": self.violations,
        }


def pstar_closure_check(ann: WindowAnnihilator, w: GradedCohomologyWindow | None = None) -> ClosureReport:
    """Check P^i(f) stays in the annihilator for every basis element f."""
    q = ann.field.q
    violations, checked, skipped, vacuous = [], 0, 0, 0
    for e in sorted(ann.basis):
        if e == 0 or ann.vacuous[e]:
            continue
        for f in ann.polynomials(e):
            for i in range(1, e + 1):
                deg = e + i * (q - 1)
                if deg > ann.degree_cap:
                    skipped += 1
                    continue
                verdict = ann.contains(steenrod_p(i, f))
                if verdict is None:
                    vacuous += 1
                elif verdict:
                    checked += 1
                else:
                    checked += 1
                    violations.append({"degree": e, "i": i, "f": str(f)})
    return ClosureReport(violations, checked, skipped, vacuous)


@dataclass
class ContainmentReport:
    status: str  # pass | fail | inconclusive | vacuous_pass | hypothesis_not_met
    per_generator: list[dict]
    reason: str | None = None

    def to_json(self) -> dict:
        out = {"status": self.status, "generators": self.per_generator}
        if self.reason:
            out["reason"] = self.reason
        return out


def dickson_containment_probe(
    ann: WindowAnnihilator,
    algebra: DicksonAlgebra,
    g: int,
    power_bound: int = DEFAULT_POWER_BOUND,
) -> ContainmentReport:
    """Window-precision test that d_{d,0}..d_{d,g-1} lie in the radical of the annihilator."""
    w = ann.window
    if not 0 <= g <= algebra.d:
        raise ValueError(f"g={g} outside [0, {algebra.d}]")
    if w.is_zero():
        return ContainmentReport(
            "vacuous_pass",
            [{"j": j, "status": "contained", "power": 1} for j in range(g)],
            "window cohomology is zero",
        )
    if not ann.nonzero_tested():
        return ContainmentReport("hypothesis_not_met", [], "annihilator is zero in every tested positive degree")
    rows = []
    for j in range(g):
        gen = algebra.gens[j]
        status, power, reason = "not_contained", None, None
        for k in range(1, power_bound + 1):
            verdict = ann.contains(gen**k)
            if verdict is None:
                status, reason = "inconclusive", f"degree {k * gen.homogeneous_degree()} untested or above cap"
                break
            if verdict:
                status, power = "contained", k
                break
        if status == "not_contained":
            reason = f"no power up to {power_bound} annihilates the window"
        row = {"j": j, "status": status}
        if power is not None:
            row["power"] = power
        if reason:
            row["reason"] = reason
        rows.append(row)
    statuses = {r["status"] for r in rows}
    if "not_contained" in statuses:
        overall = "fail"
    elif "inconclusive" in statuses:
        overall = "inconclusive"
    else:
        overall = "pass"
    return ContainmentReport(overall, rows)


# --------------------------------------------------------------------------
# depth


@dataclass
class PrefixVerdict:
    index: int
    degree: int
    regular: bool
    failure_degree: int | None = None
    kernel_dim: int = 0

    def to_json(self) -> dict:
        out = {"index": self.index, "degree": self.degree, "regular": self.regular}
        if not self.regular:
            out["failure_degree"] = self.failure_degree
            out["kernel_dim"] = self.kernel_dim
        return out


@dataclass
class DepthReport:
    prefixes: list[PrefixVerdict]
    degree_cap: int

    @property
    def regular(self) -> bool:
        return all(p.regular for p in self.prefixes)

    @property
    def regular_length(self) -> int:
        k = 0
        for p in self.prefixes:
            if not p.regular:
                break
            k += 1
        return k

    def to_json(self) -> dict:
        return {
            "status": "pass" if self.regular else "fail",
            "regular_length": self.regular_length,
            "degree_cap": self.degree_cap,
            "precision": "window",
            "prefixes": [p.to_json() for p in self.prefixes],
        }


def depth_probe(sequence: Sequence[Polynomial], group: Group, degree_cap: int) -> DepthReport:
    """Injectivity of multiplication by each element on S/(previous elements), source degrees <= cap."""
    field = group.field
    d = group.d
    verdicts = []
    for k, f in enumerate(sequence):
        e = f.homogeneous_degree()
        if e is None:
            raise ValueError("sequence elements must be homogeneous")
        if not f.is_zero() and not group.is_invariant(f):
            raise ValueError(f"{f} is not invariant")
        prefix = list(sequence[:k])
        verdict = PrefixVerdict(k, e, True)
        for n in range(0, degree_cap + 1):
            s_n = group.invariant_matrix(n)
            if not s_n.shape[0]:
                continue
            i_n = ideal_piece(prefix, group, n)
            i_ne = ideal_piece(prefix, group, n + e)
            fs = field.matmul(s_n, multiplication_matrix(f, n)) if not f.is_zero() else np.zeros((s_n.shape[0], piece_dim(d, n + e)), dtype=np.int64)
            stacked = np.concatenate([fs, i_ne]) if i_ne.shape[0] else fs
            # dim {a in S_n : a f in I_{n+e}} minus dim I_n
            preimage = fs.shape[0] + i_ne.shape[0] - linalg.rank(field, stacked)
            kern = preimage - i_n.shape[0]
            if kern:
                verdict = PrefixVerdict(k, e, False, n, kern)
                break
        verdicts.append(verdict)
    return DepthReport(verdicts, degree_cap)


# --------------------------------------------------------------------------
# generator dependence


def compare_generator_choices(
    ideal_a: IdealSpec,
    ideal_b: IdealSpec,
    group: Group,
    i: int,
    window: tuple[int, int],
    t_max: int = 8,
    r_values: Iterable[int] = (1, 2),
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> dict:
    """Compare the Cartan operators induced by two generating sets of one ideal.

    The two windows compute isomorphic graded modules but in unrelated bases,
    so the comparison uses isomorphism invariants: per-degree dimensions and
    the rank of every Q^r between stabilized pieces.  Differing ranks prove
    the structures differ; equal ranks are merely consistent with equality.
    """
    same_ideal = True
    for m in range(0, min(degree_cap, window[1] - window[0] + max(ideal_a.degrees + ideal_b.degrees) + 1)):
        a = ideal_piece(ideal_a.generators, group, m)
        b = ideal_piece(ideal_b.generators, group, m)
        if a.shape != b.shape or not np.array_equal(a, b):
            same_ideal = False
            break
    wa = colimit_window(ideal_a, group, i, window, t_max, degree_cap=degree_cap)
    wb = colimit_window(ideal_b, group, i, window, t_max, degree_cap=degree_cap)
    q = group.field.q
    rows = []
    distinguishable = False
    for n in range(window[0], window[1] + 1):
        for r in r_values:
            tgt = n + r * (q - 1)
            if not (wa.in_window(tgt) and wa.stabilized[n] and wa.stabilized[tgt] and wb.stabilized[n] and wb.stabilized[tgt]):
                continue
            ra = linalg.rank(group.field, induced_q_matrix(wa, r, n)) if wa.dims[n] and wa.dims[tgt] else 0
            rb = linalg.rank(group.field, induced_q_matrix(wb, r, n)) if wb.dims[n] and wb.dims[tgt] else 0
            rows.append({"degree": n, "r": r, "rank_a": ra, "rank_b": rb})
            distinguishable |= ra != rb
    dims_agree = all(wa.dims[n] == wb.dims[n] for n in range(window[0], window[1] + 1) if wa.stabilized[n] and wb.stabilized[n])
    return {
        "same_ideal_in_checked_degrees": same_ideal,
        "dims_agree": dims_agree,
        "structures_differ": distinguishable,
        "rank_table": rows,
        "dims_a": wa.report(),
        "dims_b": wb.report(),
    }


def laurent_count(degrees: Sequence[int], n: int) -> int:
    """Number of monomials x^{-a} with every a_j >= 1 and -sum a_j deg_j = n (brute force)."""
    target = -n
    count = 0

    def rec(k: int, remaining: int) -> None:
        nonlocal count
        if k == len(degrees):
            if remaining == 0:
                count += 1
            return
        a = 1
        while a * degrees[k] <= remaining:
            rec(k + 1, remaining - a * degrees[k])
            a += 1

    rec(0, target)
    return count
