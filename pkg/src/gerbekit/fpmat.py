"""Matrices over prime fields.

Two tiers: FpMat holds large sparse-built matrices (cochain differentials)
and answers rank/kernel/membership questions through the elimination
kernels; the ``*_dense`` helpers below do small exact linear algebra
(basis changes, inverses) on tuple vectors.

Storage: F_2 rows are int bitsets; odd-prime rows are sparse
((col, val), ...) tuples, materialized densely one row at a time while
eliminating, so memory stays proportional to entries plus pivots.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from ._kernels import BACKEND, echelon_f2, echelon_fp

__all__ = [
    "BACKEND",
    "FpMat",
    "rref_dense",
    "matmul_dense",
    "solve_dense",
    "inv_dense",
]


class FpMat:
    """An nrows x ncols matrix over F_p (p prime), immutable once built."""

    def __init__(self, p: int, nrows: int, ncols: int, rows):
        self.p = p
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_coo(cls, p: int, nrows: int, ncols: int, entries: Iterable[tuple]) -> "FpMat":
        """Build from (row, col, value) triples; repeated cells accumulate."""
        if p == 2:
            rows = [0] * nrows
            for r, c, v in entries:
                if v % 2:
                    rows[r] ^= 1 << c
            return cls(p, nrows, ncols, rows)
        acc: list[dict] = [dict() for _ in range(nrows)]
        for r, c, v in entries:
            d = acc[r]
            d[c] = (d.get(c, 0) + v) % p
        rows = [
            tuple(sorted((c, v) for c, v in d.items() if v)) for d in acc
        ]
        return cls(p, nrows, ncols, rows)

    @classmethod
    def from_tuples(cls, p: int, rows: Sequence[Sequence[int]], ncols: int) -> "FpMat":
        if p == 2:
            packed = [_pack(row) for row in rows]
            return cls(p, len(rows), ncols, packed)
        packed = [
            tuple((c, v % p) for c, v in enumerate(row) if v % p) for row in rows
        ]
        return cls(p, len(rows), ncols, packed)

    # -- conversions ----------------------------------------------------------

    def _dense_row(self, i: int) -> list[int]:
        if self.p == 2:
            return list(_unpack(self.rows[i], self.ncols))
        out = [0] * self.ncols
        for c, v in self.rows[i]:
            out[c] = v
        return out

    def row_tuple(self, i: int) -> tuple:
        return tuple(self._dense_row(i))

    def rows_as_tuples(self) -> list[tuple]:
        return [self.row_tuple(i) for i in range(self.nrows)]

    def _dense_iter(self, rows):
        for r in rows:
            out = [0] * self.ncols
            for c, v in r:
                out[c] = v
            yield out

    # -- elimination-backed queries --------------------------------------------

    def rank(self) -> int:
        if self.p == 2:
            rank, _ = echelon_f2(dict.fromkeys(self.rows), self.ncols)
            return rank
        distinct = dict.fromkeys(self.rows)
        rank, _, _ = echelon_fp(self._dense_iter(distinct), self.ncols, self.p)
        return rank

    def row_space(self) -> "_Span":
        """Echelonized span of the rows, usable for membership tests."""
        if self.p == 2:
            _, pivots = echelon_f2(dict.fromkeys(self.rows), self.ncols)
            return _Span(2, self.ncols, pivots, None)
        _, cols, rows = echelon_fp(self._dense_iter(dict.fromkeys(self.rows)), self.ncols, self.p)
        return _Span(self.p, self.ncols, rows, cols)

    def nullspace(self) -> list[tuple]:
        """Deterministic basis of {x : M x = 0}, as tuples of residues."""
        if self.p == 2:
            _, pivots = echelon_f2(dict.fromkeys(self.rows), self.ncols)
            reduced = list(pivots)  # sorted by leading bit, descending
            for i in range(len(reduced) - 1, -1, -1):
                lead = reduced[i].bit_length() - 1
                for j in range(i):
                    if (reduced[j] >> lead) & 1:
                        reduced[j] ^= reduced[i]
            lead_cols = [r.bit_length() - 1 for r in reduced]
            lead_set = set(lead_cols)
            basis = []
            for free in range(self.ncols):
                if free in lead_set:
                    continue
                vec = [0] * self.ncols
                vec[free] = 1
                for r, c in zip(reduced, lead_cols):
                    if (r >> free) & 1:
                        vec[c] = 1
                basis.append(tuple(vec))
            return basis
        _, cols, rows = echelon_fp(self._dense_iter(dict.fromkeys(self.rows)), self.ncols, self.p)
        rows = [list(r) for r in rows]
        for i in range(len(rows) - 1, -1, -1):
            c = cols[i]
            for j in range(i):
                f = rows[j][c]
                if f:
                    rows[j] = [(a - f * b) % self.p for a, b in zip(rows[j], rows[i])]
        col_set = set(cols)
        basis = []
        for free in range(self.ncols):
            if free in col_set:
                continue
            vec = [0] * self.ncols
            vec[free] = 1
            for r, c in zip(rows, cols):
                if r[free]:
                    vec[c] = (-r[free]) % self.p
            basis.append(tuple(vec))
        return basis

    def mul_vec(self, x: Sequence[int]) -> tuple:
        """M x for a column vector x of length ncols."""
        if self.p == 2:
            packed = _pack(x)
            return tuple(_parity(row & packed) for row in self.rows)
        return tuple(
            sum(v * x[c] for c, v in row) % self.p for row in self.rows
        )

    def is_zero(self) -> bool:
        if self.p == 2:
            return all(r == 0 for r in self.rows)
        return all(not row for row in self.rows)


class _Span:
    """Echelonized row span supporting reduction and membership tests."""

    def __init__(self, p: int, ncols: int, rows, cols: Optional[list[int]]):
        self.p = p
        self.ncols = ncols
        self.rows = rows
        self.cols = cols

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Sequence[int]) -> tuple:
        if self.p == 2:
            v = _pack(vec)
            for r in self.rows:
                lead = r.bit_length() - 1
                if (v >> lead) & 1:
                    v ^= r
            return _unpack(v, self.ncols)
        v = [a % self.p for a in vec]
        for c, row in zip(self.cols, self.rows):
            f = v[c]
            if f:
                v = [(a - f * b) % self.p for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, vec: Sequence[int]) -> bool:
        return all(a == 0 for a in self.reduce(vec))


def _pack(vec: Sequence[int]) -> int:
    out = 0
    for i, a in enumerate(vec):
        if a % 2:
            out |= 1 << i
    return out


def _unpack(bits: int, n: int) -> tuple:
    return tuple((bits >> i) & 1 for i in range(n))


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


# -- small dense helpers on tuple vectors ---------------------------------------

def rref_dense(rows: Sequence[Sequence[int]], ncols: int, p: int):
    """Reduced row echelon form.  Returns (pivot_cols, reduced_rows)."""
    work = [list(a % p for a in row) for row in rows]
    pivots: list[int] = []
    out: list[list[int]] = []
    for col in range(ncols):
        src = None
        for i, row in enumerate(work):
            if row[col]:
                src = i
                break
        if src is None:
            continue
        row = work.pop(src)
        inv = pow(row[col], -1, p)
        row = [(a * inv) % p for a in row]
        for other in work:
            f = other[col]
            if f:
                for k in range(ncols):
                    other[k] = (other[k] - f * row[k]) % p
        for other in out:
            f = other[col]
            if f:
                for k in range(ncols):
                    other[k] = (other[k] - f * row[k]) % p
        out.append(row)
        pivots.append(col)
    return pivots, [tuple(r) for r in out]


def matmul_dense(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], p: int) -> list[tuple]:
    """(a @ b) mod p for row-major dense matrices."""
    if not a:
        return []
    bn = len(b)
    bm = len(b[0]) if bn else 0
    out = []
    for row in a:
        acc = [0] * bm
        for k, f in enumerate(row):
            if f:
                brow = b[k]
                for j in range(bm):
                    acc[j] = (acc[j] + f * brow[j]) % p
        out.append(tuple(acc))
    return out


def solve_dense(a: Sequence[Sequence[int]], rhs: Sequence[Sequence[int]], p: int) -> Optional[list[tuple]]:
    """Solve a X = rhs column-wise; None when inconsistent.

    ``a`` is m x n (rows), ``rhs`` m x k; the result is n x k.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    k = len(rhs[0]) if rhs else 0
    aug = [list(a[i]) + list(rhs[i]) for i in range(m)]
    pivots, rows = rref_dense(aug, n + k, p)
    sol = [[0] * k for _ in range(n)]
    for col, row in zip(pivots, rows):
        if col >= n:
            return None  # pivot in the rhs block: inconsistent
        for j in range(k):
            sol[col][j] = row[n + j]
    return [tuple(r) for r in sol]


def inv_dense(a: Sequence[Sequence[int]], p: int) -> Optional[list[tuple]]:
    n = len(a)
    eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    sol = solve_dense(a, eye, p)
    if sol is None:
        return None
    if matmul_dense(a, sol, p) != [tuple(row) for row in eye]:
        return None
    return sol
