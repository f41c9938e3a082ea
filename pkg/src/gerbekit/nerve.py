"""Geometric nerves of finite 2-groupoids, as face-only simplicial sets.

A q-simplex is a flat tuple: q+1 object indices, then C(q+1,2) arrow
indices e_ab (running from vertex a to vertex b, pairs in lex order), then
C(q+1,3) 2-cell indices filling the triangles, triples in lex order.  The
filler of triangle a<b<c runs vertically from e_ac * e_ab^-1 to e_bc, so
its three faces are e_bc, e_ac, e_ab.

A 3-simplex must commute: writing t_i for the filler of the face opposite
vertex i, the two ways around the tetrahedron agree,

    hm(t1, t3) = vm(hm(t0, vid(e_12)), t2),

which for a 2-group [A -> 1] reduces to the linear rule t3+t1 = t0+t2.
Higher simplices are those all of whose 3-faces commute.  When every
(l, u) pair bounds at most one 2-cell the rule holds automatically and the
check is skipped.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product

from .errors import DimensionCapExceeded, InvariantViolation
from .two_groupoids import TwoGroupoid

MAX_DIM = 4


@lru_cache(maxsize=None)
def _layout(q: int):
    """Positions of edges and triangles in the flat tuple of a q-simplex."""
    edges = list(combinations(range(q + 1), 2))
    tris = list(combinations(range(q + 1), 3))
    epos = {e: q + 1 + i for i, e in enumerate(edges)}
    tpos = {t: q + 1 + len(edges) + i for i, t in enumerate(tris)}
    return epos, tpos


@lru_cache(maxsize=None)
def _face_positions(q: int, i: int) -> tuple:
    """Flat positions selecting the i-th face of a q-simplex."""
    keep = [v for v in range(q + 1) if v != i]
    epos, tpos = _layout(q)
    out = list(keep)
    for a, b in combinations(range(q), 2):
        out.append(epos[(keep[a], keep[b])])
    for a, b, c in combinations(range(q), 3):
        out.append(tpos[(keep[a], keep[b], keep[c])])
    return tuple(out)


class DeltaSet:
    """Nerve levels with face maps; validates the simplicial identities.

    Face maps are numpy index arrays; per-level lookup dicts are built on
    first use, so big top levels never pay for an index nobody reads.
    """

    def __init__(self, t: TwoGroupoid, dim: int, levels, faces):
        self.t = t
        self.dim = dim
        self.levels = levels
        self.faces = faces
        self._index: dict = {}
        self._coh: dict = {}

    def size(self, q: int) -> int:
        return len(self.levels[q])

    def face(self, q: int, i: int, s: int) -> int:
        return int(self.faces[q][i][s])

    def index(self, q: int) -> dict:
        if q not in self._index:
            self._index[q] = {s: i for i, s in enumerate(self.levels[q])}
        return self._index[q]

    def validate(self) -> None:
        import numpy as np

        for q in range(2, self.dim + 1):
            for j in range(q + 1):
                for i in range(j):
                    di, dj = self.faces[q][i], self.faces[q][j]
                    lower_i, lower_j1 = self.faces[q - 1][i], self.faces[q - 1][j - 1]
                    if not np.array_equal(lower_i[dj], lower_j1[di]):
                        bad = int(np.nonzero(lower_i[dj] != lower_j1[di])[0][0])
                        raise InvariantViolation(
                            "simplicial identity fails", (q, i, j, bad)
                        )

    def __repr__(self) -> str:
        sizes = ", ".join(str(self.size(q)) for q in range(self.dim + 1))
        return f"DeltaSet(dim={self.dim}, sizes=[{sizes}])"


def _tetra_ok(t: TwoGroupoid, edges: dict, tris: dict, a: int, b: int, c: int, d: int) -> bool:
    t0 = tris[(b, c, d)]
    t1 = tris[(a, c, d)]
    t2 = tris[(a, b, d)]
    t3 = tris[(a, b, c)]
    lhs = t.hm.get((t1, t3))
    whisk = t.hm.get((t0, t.vid[edges[(b, c)]]))
    if lhs is None or whisk is None:
        return False
    rhs = t.vm.get((whisk, t2))
    return rhs is not None and lhs == rhs


def _extend_all(t: TwoGroupoid, simplices: list, q: int) -> list:
    """All (q+1)-simplices whose front face is a member of ``simplices``."""
    g1 = t.g1
    epos, tpos = _layout(q)
    epos1, tpos1 = _layout(q + 1)
    out = []
    arrows_from = {}
    for a in range(g1.n_arrs):
        arrows_from.setdefault(g1.src[a], []).append(a)
    skip_check = t.has_unique_fibers()
    new_tri_keys = [(a, b) for a, b in combinations(range(q + 1), 2)]
    edge_keys = list(combinations(range(q + 2), 2))
    tri_keys = list(combinations(range(q + 2), 3))

    for s in simplices:
        edges = {e: s[p] for e, p in epos.items()}
        tris = {e: s[p] for e, p in tpos.items()}
        for e_last in arrows_from.get(s[q], ()):
            w = g1.tgt[e_last]
            edges[(q, q + 1)] = e_last
            # choose the remaining edges into the new vertex, newest first
            def choose(a: int):
                if a < 0:
                    yield dict(edges)
                    return
                for cand in g1.hom(s[a], w):
                    ok = True
                    for b in range(a + 1, q + 1):
                        lcomp = g1.comp[(cand, g1.inv[edges[(a, b)]])]
                        if not t.fiber(lcomp, edges[(b, q + 1)]):
                            ok = False
                            break
                    if ok:
                        edges[(a, q + 1)] = cand
                        yield from choose(a - 1)
                        del edges[(a, q + 1)]

            for full_edges in choose(q - 1):
                fiber_lists = []
                for (a, b) in new_tri_keys:
                    lcomp = g1.comp[(full_edges[(a, q + 1)], g1.inv[full_edges[(a, b)]])]
                    fiber_lists.append(t.fiber(lcomp, full_edges[(b, q + 1)]))
                head = s[: q + 1] + (w,)
                for fillers in product(*fiber_lists):
                    new_tris = dict(tris)
                    for (a, b), x in zip(new_tri_keys, fillers):
                        new_tris[(a, b, q + 1)] = x
                    if not skip_check:
                        good = all(
                            _tetra_ok(t, full_edges, new_tris, a, b, c, q + 1)
                            for a, b, c in combinations(range(q + 1), 3)
                        )
                        if not good:
                            continue
                    flat = (
                        head
                        + tuple(full_edges[e] for e in edge_keys)
                        + tuple(new_tris[tri] for tri in tri_keys)
                    )
                    out.append(flat)
            del edges[(q, q + 1)]
    return out


def nerve(t: TwoGroupoid, max_dim: int = MAX_DIM) -> DeltaSet:
    """Enumerate the nerve up to ``max_dim`` (at most 4) with face maps.

    Levels 0 and 1 are the objects and all arrows; level 2 pairs a 2-cell
    with a compatible incoming edge; levels 3 and 4 are built by attaching
    a new last vertex under the commutativity rule.  Results are cached on
    the 2-groupoid.
    """
    if max_dim > MAX_DIM:
        raise DimensionCapExceeded("nerve dimension cap", (max_dim, MAX_DIM))
    for built_dim in sorted(t._nerves):
        if built_dim >= max_dim:
            return t._nerves[built_dim]
    g1 = t.g1
    levels: list[list] = [[(o,) for o in range(g1.n_objs)]]
    levels.append(
        [(g1.src[a], g1.tgt[a], a) for a in range(g1.n_arrs)]
    )
    if max_dim >= 2:
        lvl2 = []
        for x in range(t.n_cells):
            for c in g1.arrows_into(t.s2[x]):
                lvl2.append(
                    (g1.src[c], g1.tgt[c], g1.tgt[t.l[x]],
                     c, g1.comp[(t.l[x], c)], t.u[x],
                     x)
                )
        levels.append(lvl2)
    for q in range(2, max_dim):
        levels.append(_extend_all(t, levels[q], q))

    import numpy as np

    faces: list = [None]
    for q in range(1, max_dim + 1):
        index_prev = {s: i for i, s in enumerate(levels[q - 1])}
        per_i = []
        for i in range(q + 1):
            pos = _face_positions(q, i)
            per_i.append(
                np.fromiter(
                    (index_prev[tuple(s[p] for p in pos)] for s in levels[q]),
                    dtype=np.int64,
                    count=len(levels[q]),
                )
            )
        faces.append(per_i)

    ds = DeltaSet(t, max_dim, levels, faces)
    ds.validate()
    t._nerves[max_dim] = ds
    return ds


def map_simplices(f, dom_ds: DeltaSet, cod_ds: DeltaSet, q: int) -> list[int]:
    """Index map N_q(dom) -> N_q(cod) induced by a strict morphism."""
    epos, tpos = _layout(q)
    n_edges = len(epos)
    cod_index = cod_ds.index(q)
    out = []
    for s in dom_ds.levels[q]:
        image = (
            tuple(f.f0[v] for v in s[: q + 1])
            + tuple(f.f1[s[q + 1 + i]] for i in range(n_edges))
            + tuple(f.f2[s[q + 1 + n_edges + i]] for i in range(len(tpos)))
        )
        out.append(cod_index[image])
    return out
