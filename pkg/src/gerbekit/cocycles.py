"""Finite covers, twisted transition data, and their bundles/extensions.

Transition data lives on a cover of a finite set: automorphisms lam[i,j,x]
on double overlaps and group values g[i,j,k,x] on triple overlaps.  The
validator checks

  (1)  lam_ij(lam_jk(y)) = lam_ik(g_ijk * y * g_ijk^-1)        on U_ijk,
  (2)  g_ijl * g_jkl = g_ikl * lam_kl^-1(g_ijk)                on U_ijkl,

quantified over all ordered index tuples with nonempty intersection.
These are exactly the conditions making the twisted arrows

  (x_ij, a) * (x_jk, b) = (x_ik, g_ijk * lam_jk^-1(a) * b)

a groupoid; the associated span and extension constructions read all
other structure off that groupoid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import (
    AssociativityFailure,
    GerbekitError,
    InvalidCocycle,
    NotACover,
    NotAssociative,
)
from .groups import FiniteGroup
from .groupoids import (
    FiniteGroupoid,
    cech_groupoid,
    find_inverses,
    trivial_groupoid,
)
from .spans import Span
from .two_groupoids import (
    TwoGroupoid,
    TwoMorphism,
    as_two_groupoid,
    aut_inner_two_group,
)


class Cover:
    """A finite set with a list of subsets covering it."""

    def __init__(self, points: Sequence, opens: Sequence[Sequence]):
        self.points = list(points)
        self.opens = [list(u) for u in opens]
        covered = {x for u in self.opens for x in u}
        missing = [x for x in self.points if x not in covered]
        if missing:
            raise NotACover("points not covered", tuple(missing))
        self.n = len(self.opens)

    def inter(self, *indices) -> list:
        return [
            x for x in self.points if all(x in self.opens[i] for i in indices)
        ]

    def pairs(self):
        for i in range(self.n):
            for j in range(self.n):
                for x in self.inter(i, j):
                    yield (i, j, x)

    def triples(self):
        for i in range(self.n):
            for j in range(self.n):
                for k in range(self.n):
                    for x in self.inter(i, j, k):
                        yield (i, j, k, x)

    def quadruples(self):
        for i in range(self.n):
            for j in range(self.n):
                for k in range(self.n):
                    for l in range(self.n):
                        for x in self.inter(i, j, k, l):
                            yield (i, j, k, l, x)


def _is_automorphism(g: FiniteGroup, table: tuple) -> bool:
    if len(set(table)) != g.order:
        return False
    return all(
        table[g.mul(a, b)] == g.mul(table[a], table[b])
        for a in g.elements()
        for b in g.elements()
    )


class NonAbCocycle:
    """lam: double overlaps -> Aut(G) (as image tables), g: triples -> G."""

    def __init__(self, cover: Cover, group: FiniteGroup, lam: dict, gval: dict):
        self.cover = cover
        self.group = group
        self.lam = dict(lam)
        self.gval = dict(gval)
        for key in cover.pairs():
            if key not in self.lam:
                raise InvalidCocycle("missing automorphism entry", key)
            if not _is_automorphism(group, tuple(self.lam[key])):
                raise InvalidCocycle("entry is not an automorphism", key)
            self.lam[key] = tuple(self.lam[key])
        for key in cover.triples():
            if key not in self.gval:
                raise InvalidCocycle("missing group entry", key)


class AbCocycle:
    """Triple-overlap values in an abelian group (finite circle stand-in)."""

    def __init__(self, cover: Cover, group: FiniteGroup, gval: dict):
        if not group.is_abelian():
            raise InvalidCocycle("coefficient group must be abelian", None)
        self.cover = cover
        self.group = group
        self.gval = dict(gval)
        for key in cover.triples():
            if key not in self.gval:
                raise InvalidCocycle("missing group entry", key)


@dataclass
class CocycleReport:
    """Outcome of a validator scan: per-identity pass/fail with witnesses."""

    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok


def validate_nonab(c: NonAbCocycle) -> CocycleReport:
    """Scan both identities; report the first witness of each violation."""
    g = c.group
    report = CocycleReport()
    for (i, j, k, x) in c.cover.triples():
        lam_ij = c.lam[(i, j, x)]
        lam_jk = c.lam[(j, k, x)]
        lam_ik = c.lam[(i, k, x)]
        gv = c.gval[(i, j, k, x)]
        for y in g.elements():
            if lam_ij[lam_jk[y]] != lam_ik[g.conj(y, gv)]:
                report.failures.append(("composition-identity", (i, j, k, x, g.labels[y])))
                break
        else:
            continue
        break
    for (i, j, k, l, x) in c.cover.quadruples():
        lhs = g.mul(c.gval[(i, j, l, x)], c.gval[(j, k, l, x)])
        lam_kl_inv = _inverse_table(c.lam[(k, l, x)])
        rhs = g.mul(c.gval[(i, k, l, x)], lam_kl_inv[c.gval[(i, j, k, x)]])
        if lhs != rhs:
            report.failures.append(("coherence-identity", (i, j, k, l, x)))
            break
    return report


def validate_ab(c: AbCocycle) -> CocycleReport:
    g = c.group
    report = CocycleReport()
    for (i, j, k, l, x) in c.cover.quadruples():
        total = g.mul(
            g.mul(c.gval[(j, k, l, x)], g.inv[c.gval[(i, k, l, x)]]),
            g.mul(c.gval[(i, j, l, x)], g.inv[c.gval[(i, j, k, x)]]),
        )
        if total != g.unit:
            report.failures.append(("cech-identity", (i, j, k, l, x)))
            break
    return report


def _inverse_table(table: tuple) -> tuple:
    out = [0] * len(table)
    for a, b in enumerate(table):
        out[b] = a
    return out


def twisted_arrow_groupoid(c: NonAbCocycle) -> FiniteGroupoid:
    """Arrows (x_ij, a) under the twisted multiplication; units and
    inverses are found by scanning, so invalid data fails loudly."""
    g = c.group
    cover = c.cover
    objs = [(x, i) for i in range(cover.n) for x in cover.points if x in cover.opens[i]]
    obj_pos = {o: i for i, o in enumerate(objs)}
    labels = [
        (x, i, j, g.labels[a])
        for i in range(cover.n)
        for j in range(cover.n)
        for x in cover.points
        if x in cover.opens[i] and x in cover.opens[j]
        for a in g.elements()
    ]
    pos = {lab: i for i, lab in enumerate(labels)}
    src = [obj_pos[(lab[0], lab[2])] for lab in labels]
    tgt = [obj_pos[(lab[0], lab[1])] for lab in labels]
    comp = {}
    for a_i, (x, i, j, alab) in enumerate(labels):
        a = g.index_of(alab)
        for b_i, (y, j2, k, blab) in enumerate(labels):
            if x != y or j != j2:
                continue
            b = g.index_of(blab)
            lam_jk_inv = _inverse_table(c.lam[(j, k, x)])
            value = g.mul(c.gval[(i, j, k, x)], g.mul(lam_jk_inv[a], b))
            comp[(a_i, b_i)] = pos[(x, i, k, g.labels[value])]
    idn = []
    for (x, i) in objs:
        block = [pos[(x, i, i, g.labels[a])] for a in g.elements()]
        unit = None
        for cand in block:
            into = [b for b in range(len(labels)) if tgt[b] == obj_pos[(x, i)]]
            outof = [b for b in range(len(labels)) if src[b] == obj_pos[(x, i)]]
            if all(comp[(cand, b)] == b for b in into) and all(
                comp[(b, cand)] == b for b in outof
            ):
                unit = cand
                break
        if unit is None:
            raise AssociativityFailure("no unit in a diagonal block", (x, i))
        idn.append(unit)
    inv = find_inverses(labels, src, tgt, comp, idn)
    try:
        return FiniteGroupoid(objs, labels, src, tgt, comp, idn, inv)
    except NotAssociative as exc:
        raise AssociativityFailure("twisted multiplication fails", exc.witness)


def build_cocycle_two_groupoid(c: NonAbCocycle) -> TwoGroupoid:
    """The apex: pair 2-cells over the twisted arrow groupoid.

    Raises when the data does not actually assemble into a 2-groupoid;
    together with validate_nonab this is a two-sided cross-check.
    """
    g1 = twisted_arrow_groupoid(c)
    g = c.group
    cells = []
    for i in range(c.cover.n):
        for j in range(c.cover.n):
            for x in c.cover.points:
                if x in c.cover.opens[i] and x in c.cover.opens[j]:
                    for a in g.elements():
                        for b in g.elements():
                            cells.append((x, i, j, g.labels[a], g.labels[b]))
    cell_pos = {cl: i for i, cl in enumerate(cells)}
    l = [g1.arr_index((x, i, j, alab)) for (x, i, j, alab, _b) in cells]
    u = [g1.arr_index((x, i, j, blab)) for (x, i, j, _a, blab) in cells]
    vid = []
    for idx in range(g1.n_arrs):
        (x, i, j, alab) = g1.arrs[idx]
        vid.append(cell_pos[(x, i, j, alab, alab)])
    vm = {}
    for bi, (x, i, j, a1, a2) in enumerate(cells):
        for ai, (y, i2, j2, b1, b2) in enumerate(cells):
            if (x, i, j) == (y, i2, j2) and a1 == b2:
                vm[(bi, ai)] = cell_pos[(x, i, j, b1, a2)]
    # horizontal composition is forced: compose the two boundaries
    hm = {}
    for ai in range(len(cells)):
        for bi in range(len(cells)):
            if g1.src[l[ai]] == g1.tgt[l[bi]]:
                lcomp = g1.comp[(l[ai], l[bi])]
                ucomp = g1.comp[(u[ai], u[bi])]
                (x, i, k, alab) = g1.arrs[lcomp]
                (_, _, _, blab) = g1.arrs[ucomp]
                hm[(ai, bi)] = cell_pos[(x, i, k, alab, blab)]
    return TwoGroupoid(g1, cells, l, u, vm, hm, vid)


def cocycle_to_bundle(c: NonAbCocycle, cap: Optional[int] = None) -> Span:
    """Span from the covered set to the inner-automorphism 2-group of G."""
    report = validate_nonab(c)
    if not report:
        raise InvalidCocycle("transition data fails validation", report.failures[0])
    apex = build_cocycle_two_groupoid(c)
    g = c.group
    g1 = apex.g1

    base = as_two_groupoid(trivial_groupoid(c.cover.points))
    point_pos = {xx: i for i, xx in enumerate(c.cover.points)}
    f0 = [point_pos[x] for (x, _i) in g1.objs]
    f1 = [point_pos[lab[0]] for lab in g1.arrs]
    f2 = [point_pos[cl[0]] for cl in apex.cells]
    left = TwoMorphism(apex, base, f0, f1, f2)

    target, cm_t, aut, _action, _inner = aut_inner_two_group(g, cap)

    def leg_arrow(lab) -> int:
        (x, i, j, alab) = lab
        a = g.index_of(alab)
        lam = c.lam[(i, j, x)]
        table = tuple(lam[g.conj(y, a)] for y in g.elements())
        return aut.index_of(table)

    f1r = [leg_arrow(lab) for lab in g1.arrs]
    f2r = []
    for (x, i, j, alab, blab) in apex.cells:
        a, b = g.index_of(alab), g.index_of(blab)
        lam = c.lam[(i, j, x)]
        diff = lam[g.mul(b, g.inv[a])]
        f2r.append(
            target.cell_index((g.labels[diff], aut.labels[f1r[g1.arr_index((x, i, j, alab))]]))
        )
    right = TwoMorphism(apex, target, [0] * g1.n_objs, f1r, f2r)
    return Span(apex, left, right)


def ab_cocycle_to_central_extension(c: AbCocycle, validate: bool = True):
    """Central extension of the cover groupoid twisted by the values.

    Associativity of the twisted multiplication is equivalent to the
    cocycle identity, so building from invalid data raises
    AssociativityFailure even when ``validate`` is off.
    """
    from .extensions import GExtension

    if validate:
        report = validate_ab(c)
        if not report:
            raise InvalidCocycle("cover values fail the cocycle identity", report.failures[0])
    a = c.group
    lam = {key: tuple(range(a.order)) for key in c.cover.pairs()}
    nonab = NonAbCocycle(c.cover, a, lam, c.gval)
    tg = twisted_arrow_groupoid(nonab)
    base = cech_groupoid(c.cover.points, c.cover.opens)
    phi = [base.arr_index((x, i, j)) for (x, i, j, _a) in tg.arrs]
    i_table = []
    for (x, i) in base.objs:
        eps = a.inv[c.gval[(i, i, i, x)]]
        i_table.append(
            [tg.arr_index((x, i, i, a.labels[a.mul(z, eps)])) for z in a.elements()]
        )
    ext = GExtension(a, tg, base, i_table, phi)
    return ext
