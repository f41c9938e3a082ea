"""Cochain complexes of nerves over prime fields, and the maps between them.

The differential is the alternating sum of face pullbacks; faces that
coincide accumulate, so entries live in F_p from the start.  Cohomology
bases are echelonized deterministically and cached on the nerve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    DegreeOutOfRange,
    InvariantViolation,
    MoritaMapNotInvertible,
    NotACharacter,
)
from .fpmat import FpMat, inv_dense, rref_dense, solve_dense
from .nerve import DeltaSet, map_simplices, nerve
from .two_groupoids import TwoGroupoid, TwoMorphism, two_groupoid_to_cm


class FpComplex:
    """Cochain complex of a nerve: delta(q) maps C^q to C^(q+1).

    Differentials are built on demand from the face arrays; the square of
    the differential is verified over the integers at construction, which
    settles it for every prime at once.
    """

    def __init__(self, ds: DeltaSet, p: int):
        self.ds = ds
        self.p = p
        self.dims = [ds.size(q) for q in range(ds.dim + 1)]
        self._deltas: dict = {}
        _verify_dsquare(ds)

    def delta(self, q: int) -> FpMat:
        if q not in self._deltas:
            self._deltas[q] = _delta_matrix(self.ds, self.p, q)
        return self._deltas[q]


def _delta_matrix(ds: DeltaSet, p: int, q: int) -> FpMat:
    """The alternating-sum differential C^q -> C^(q+1) as a matrix."""
    import numpy as np

    nrows = ds.size(q + 1)
    ncols = ds.size(q)
    if p == 2:
        nwords = (max(ncols, 1) + 63) // 64
        words = np.zeros((nrows, nwords), dtype=np.uint64)
        tau = np.arange(nrows, dtype=np.int64)
        for i in range(q + 2):
            sigma = ds.faces[q + 1][i]
            np.bitwise_xor.at(
                words,
                (tau, sigma >> 6),
                np.left_shift(np.uint64(1), (sigma & 63).astype(np.uint64)),
            )
        blob = words.tobytes()
        stride = nwords * 8
        rows = [
            int.from_bytes(blob[r * stride : (r + 1) * stride], "little")
            for r in range(nrows)
        ]
        return FpMat(2, nrows, ncols, rows)
    entries = (
        (tau, int(ds.faces[q + 1][i][tau]), -1 if i % 2 else 1)
        for tau in range(nrows)
        for i in range(q + 2)
    )
    return FpMat.from_coo(p, nrows, ncols, entries)


def _verify_dsquare(ds: DeltaSet) -> None:
    """Check that iterated faces cancel with signs, over the integers."""
    import numpy as np

    if getattr(ds, "_dsquare_ok", False):
        return
    for q in range(ds.dim - 1):
        n = ds.size(q + 2)
        if n == 0:
            continue
        keys = []
        signs = []
        for i in range(q + 3):
            tau = ds.faces[q + 2][i]
            si = -1 if i % 2 else 1
            for j in range(q + 2):
                sigma = ds.faces[q + 1][j][tau]
                sj = -1 if j % 2 else 1
                keys.append(np.arange(n, dtype=np.int64) * ds.size(q) + sigma)
                signs.append(np.full(n, si * sj, dtype=np.int64))
        flat = np.concatenate(keys)
        weight = np.concatenate(signs)
        _uniq, inverse = np.unique(flat, return_inverse=True)
        totals = np.bincount(inverse, weights=weight)
        if np.any(totals != 0):
            bad = int(np.nonzero(totals)[0][0])
            raise InvariantViolation(
                "differential does not square to zero", (q, bad)
            )
    ds._dsquare_ok = True


def cochain_complex(ds: DeltaSet, p: int) -> FpComplex:
    """The differentials over F_p, with the square-zero check performed."""
    key = ("complex", p)
    if key not in ds._coh:
        ds._coh[key] = FpComplex(ds, p)
    return ds._coh[key]


@dataclass
class CohClass:
    """A cohomology class: degree, prime, and a representative cocycle."""

    degree: int
    p: int
    vector: tuple

    def is_zero_vector(self) -> bool:
        return all(a == 0 for a in self.vector)


class _Echelon:
    """Incremental dense echelon over F_p with pivot bookkeeping."""

    def __init__(self, n: int, p: int):
        self.n = n
        self.p = p
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    def reduce(self, vec: Sequence[int]) -> list[int]:
        v = [a % self.p for a in vec]
        for c, row in zip(self.pivots, self.rows):
            f = v[c]
            if f:
                for k in range(self.n):
                    v[k] = (v[k] - f * row[k]) % self.p
        return v

    def insert(self, vec: Sequence[int]) -> bool:
        """Reduce and insert; True when the vector was independent."""
        v = self.reduce(vec)
        lead = next((i for i, a in enumerate(v) if a), None)
        if lead is None:
            return False
        inv = pow(v[lead], -1, self.p)
        v = [(a * inv) % self.p for a in v]
        at = 0
        while at < len(self.pivots) and self.pivots[at] < lead:
            at += 1
        self.rows.insert(at, v)
        self.pivots.insert(at, lead)
        return True


class CohomologyBasis:
    """Basis data for H^q of one nerve at one prime.

    Dimensions come from ranks; cocycle representatives extending the
    coboundary echelon are computed on first use, so nerves whose H^q
    vanishes never pay for a kernel basis.
    """

    def __init__(self, ds: DeltaSet, p: int, q: int):
        if q < 0 or q > ds.dim - 1:
            raise DegreeOutOfRange(
                "degree needs the next nerve level", (q, ds.dim)
            )
        self.ds = ds
        self.p = p
        self.q = q
        cx = cochain_complex(ds, p)
        n = cx.dims[q]
        self.n = n
        self.rank_out = cx.delta(q).rank()
        self.rank_in = cx.delta(q - 1).rank() if q > 0 else 0
        self.dim = (n - self.rank_out) - self.rank_in
        self._bound: Optional[list[tuple]] = None
        self._reps: Optional[list[tuple]] = None

    @property
    def bound_basis(self) -> list[tuple]:
        if self._bound is None:
            if self.q == 0:
                self._bound = []
            else:
                cx = cochain_complex(self.ds, self.p)
                ech = _Echelon(self.n, self.p)
                for col in _column_space(cx.delta(self.q - 1), self.p):
                    ech.insert(col)
                self._bound = [tuple(r) for r in ech.rows]
        return self._bound

    @property
    def reps(self) -> list[tuple]:
        if self._reps is None:
            if self.dim == 0:
                self._reps = []
            else:
                cx = cochain_complex(self.ds, self.p)
                ech = _Echelon(self.n, self.p)
                for b in self.bound_basis:
                    ech.insert(b)
                reps = []
                for z in cx.delta(self.q).nullspace():
                    if ech.insert(z):
                        reps.append(z)
                    if len(reps) == self.dim:
                        break
                self._reps = reps
        return self._reps

    def classes(self) -> list[CohClass]:
        return [CohClass(self.q, self.p, r) for r in self.reps]

    def is_cocycle(self, vec: Sequence[int]) -> bool:
        cx = cochain_complex(self.ds, self.p)
        return all(a % self.p == 0 for a in cx.delta(self.q).mul_vec(vec))

    def coords(self, vec: Sequence[int]) -> tuple:
        """Coordinates of a cocycle in the rep basis, modulo coboundaries."""
        if not self.is_cocycle(vec):
            raise InvariantViolation("vector is not a cocycle", None)
        if self.dim == 0:
            return ()
        cols = [list(r) for r in self.reps] + [list(b) for b in self.bound_basis]
        a_rows = [[col[i] for col in cols] for i in range(self.n)]
        sol = solve_dense(a_rows, [[v] for v in vec], self.p)
        if sol is None:
            raise InvariantViolation("cocycle outside the computed span", None)
        return tuple(sol[i][0] for i in range(self.dim))


def _column_space(m: FpMat, p: int) -> list[tuple]:
    """A spanning set for the column space, as dense tuples."""
    if m.nrows == 0 or m.ncols == 0:
        return []
    # columns of m = rows of the transpose
    if p == 2:
        return [
            tuple(1 if (row >> c) & 1 else 0 for row in m.rows)
            for c in range(m.ncols)
        ]
    cols = [[0] * m.nrows for _ in range(m.ncols)]
    for i, row in enumerate(m.rows):
        for c, v in row:
            cols[c][i] = v
    return [tuple(col) for col in cols]


def basis(ds: DeltaSet, p: int, q: int) -> CohomologyBasis:
    key = ("basis", p, q)
    if key not in ds._coh:
        ds._coh[key] = CohomologyBasis(ds, p, q)
    return ds._coh[key]


def cohomology(ds: DeltaSet, p: int, q: int) -> tuple[int, list[CohClass]]:
    """Dimension of H^q over F_p and a deterministic basis of classes."""
    b = basis(ds, p, q)
    return b.dim, b.classes()


def induced_map(f: TwoMorphism, q: int, p: int, max_dim: Optional[int] = None) -> list[tuple]:
    """Matrix of the pullback H^q(cod) -> H^q(dom) in the cached bases.

    Row i, column j: coefficient of dom-rep i in the pullback of cod-rep j.
    Checks along the way that pullbacks of cocycles and coboundaries stay
    cocycles and coboundaries.
    """
    d = (q + 1) if max_dim is None else max_dim
    dom_ds = nerve(f.dom, d)
    cod_ds = nerve(f.cod, d)
    push = map_simplices(f, dom_ds, cod_ds, q)
    bd = basis(dom_ds, p, q)
    bc = basis(cod_ds, p, q)

    def pull(vec: Sequence[int]) -> tuple:
        return tuple(vec[push[s]] for s in range(dom_ds.size(q)))

    for bvec in bc.bound_basis:
        pb = pull(bvec)
        if bd.bound_basis:
            _, ech = rref_dense(bd.bound_basis + [list(pb)], bd.n, p)
            if len(ech) > len(bd.bound_basis):
                raise InvariantViolation("pullback of a coboundary is not one", q)
        elif any(a % p for a in pb):
            raise InvariantViolation("pullback of a coboundary is not one", q)
    columns = []
    for rep in bc.reps:
        pb = pull(rep)
        if not bd.is_cocycle(pb):
            raise InvariantViolation("pullback of a cocycle is not one", q)
        columns.append(bd.coords(pb))
    return [tuple(col[i] for col in columns) for i in range(bd.dim)]


def matrix_invertible(m: list[tuple], p: int) -> bool:
    n = len(m)
    if any(len(row) != n for row in m):
        return False
    if n == 0:
        return True
    return inv_dense(m, p) is not None


def apply_matrix(m: list[tuple], vec: Sequence[int], p: int) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, vec)) % p for row in m)


def characteristic_map(span, q: int, p: int, max_dim: Optional[int] = None) -> list[tuple]:
    """H^q(structure 2-group) -> H^q(base) through the span.

    Computed as inverse(left pullback) x right pullback; raises when the
    left leg's pullback is not invertible in this degree.  Rows index the
    base H^q basis, columns the structure 2-group's.
    """
    d = (q + 1) if max_dim is None else max_dim
    dim_base = basis(nerve(span.left.cod, d), p, q).dim
    dim_apex = basis(nerve(span.apex, d), p, q).dim
    left = induced_map(span.left, q, p, d)
    right = induced_map(span.right, q, p, d)
    if dim_apex != dim_base:
        raise MoritaMapNotInvertible(
            "left pullback is not square", (dim_apex, dim_base)
        )
    if dim_base == 0:
        return []
    sol = solve_dense(left, right, p)
    if sol is None or inv_dense(left, p) is None:
        raise MoritaMapNotInvertible("left pullback is singular", q)
    return [tuple(r) for r in sol]


def canonical_class(t: TwoGroupoid, chi: Sequence[int], p: int) -> CohClass:
    """The degree-2 class of a one-object, one-arrow 2-group [A -> 1].

    ``chi`` lists the value in F_p of each kernel fiber element, in fiber
    order; it must be a homomorphism into Z/p.  The class pairs each
    2-simplex with the character value of its filling 2-cell.
    """
    if t.g1.n_objs != 1 or t.g1.n_arrs != 1:
        raise InvariantViolation("expected one object and one arrow", None)
    cm = two_groupoid_to_cm(t)
    group, members = cm.bundle.fiber_group(0)
    if len(chi) != group.order:
        raise NotACharacter("character has the wrong length", len(chi))
    chi = tuple(a % p for a in chi)
    if chi[group.unit] != 0:
        raise NotACharacter("character does not kill the unit", chi)
    for a in group.elements():
        for b in group.elements():
            if chi[group.mul(a, b)] != (chi[a] + chi[b]) % p:
                raise NotACharacter(
                    "character is not additive", (group.labels[a], group.labels[b])
                )
    ds = nerve(t, 3)
    cell_value = {}
    for i, x in enumerate(members):
        cell = t.cell_index(cm.bundle.arrs[x])
        cell_value[cell] = chi[i]
    vec = tuple(cell_value[s[6]] for s in ds.levels[2])
    b = basis(ds, p, 2)
    if not b.is_cocycle(vec):
        raise InvariantViolation("canonical cochain is not closed", None)
    return CohClass(2, p, vec)
