"""Two-legged spans of 2-groupoids: the generalized-morphism calculus.

A span holds a common apex with a structure-preserving map to each end;
the left leg must pass the 2-level Morita check.  Composition is the
levelwise strict fiber product, which is also the normal form every
composite is stored in.
"""

from __future__ import annotations

from typing import Optional

from .errors import BudgetExceeded, EmptyApex, NotMorita
from .groupoids import FiniteGroupoid
from .two_groupoids import (
    TwoGroupoid,
    TwoMorphism,
    identity_two_morphism,
    is_morita_2,
    nat2_search,
)


class Span:
    """left: apex -> base (Morita), right: apex -> structure 2-group(oid)."""

    def __init__(self, apex: TwoGroupoid, left: TwoMorphism, right: TwoMorphism):
        if left.dom is not apex or right.dom is not apex:
            raise NotMorita("legs must start at the apex", None)
        check = is_morita_2(left)
        if not check:
            raise NotMorita("left leg fails the Morita check", check.witness)
        self.apex = apex
        self.left = left
        self.right = right

    @property
    def base(self) -> TwoGroupoid:
        return self.left.cod

    @property
    def structure(self) -> TwoGroupoid:
        return self.right.cod

    def __repr__(self) -> str:
        return f"Span({self.apex!r})"


def identity_span(t: TwoGroupoid) -> Span:
    i = identity_two_morphism(t)
    return Span(t, i, i)


def strict_span(f: TwoMorphism) -> Span:
    """A plain morphism as a span with identity left leg."""
    return Span(f.dom, identity_two_morphism(f.dom), f)


def fiber_product_apex(f: TwoMorphism, g: TwoMorphism):
    """Levelwise pairs of f.dom and g.dom agreeing in the shared codomain.

    Returns (apex, pr_f, pr_g).  Raises EmptyApex when no objects pair up.
    """
    if f.cod is not g.cod:
        raise NotMorita("legs do not share a codomain", None)
    e, h = f.dom, g.dom
    objs = [
        (a, b)
        for a in range(e.g1.n_objs)
        for b in range(h.g1.n_objs)
        if f.f0[a] == g.f0[b]
    ]
    if not objs:
        raise EmptyApex("no objects agree in the middle", None)
    obj_labels = [(e.g1.objs[a], h.g1.objs[b]) for (a, b) in objs]
    obj_pos = {pair: i for i, pair in enumerate(objs)}
    arrs = [
        (a, b)
        for a in range(e.g1.n_arrs)
        for b in range(h.g1.n_arrs)
        if f.f1[a] == g.f1[b]
    ]
    arr_labels = [(e.g1.arrs[a], h.g1.arrs[b]) for (a, b) in arrs]
    arr_pos = {pair: i for i, pair in enumerate(arrs)}
    src = [obj_pos[(e.g1.src[a], h.g1.src[b])] for (a, b) in arrs]
    tgt = [obj_pos[(e.g1.tgt[a], h.g1.tgt[b])] for (a, b) in arrs]
    comp = {}
    for i1, (a, b) in enumerate(arrs):
        for i2, (c, d) in enumerate(arrs):
            if e.g1.src[a] == e.g1.tgt[c] and h.g1.src[b] == h.g1.tgt[d]:
                comp[(i1, i2)] = arr_pos[(e.g1.comp[(a, c)], h.g1.comp[(b, d)])]
    idn = [arr_pos[(e.g1.idn[a], h.g1.idn[b])] for (a, b) in objs]
    inv = [arr_pos[(e.g1.inv[a], h.g1.inv[b])] for (a, b) in arrs]
    g1 = FiniteGroupoid(obj_labels, arr_labels, src, tgt, comp, idn, inv)

    cells = [
        (x, y)
        for x in range(e.n_cells)
        for y in range(h.n_cells)
        if f.f2[x] == g.f2[y]
    ]
    cell_labels = [(e.cells[x], h.cells[y]) for (x, y) in cells]
    cell_pos = {pair: i for i, pair in enumerate(cells)}
    l = [arr_pos[(e.l[x], h.l[y])] for (x, y) in cells]
    u = [arr_pos[(e.u[x], h.u[y])] for (x, y) in cells]
    vm = {}
    hm = {}
    for i1, (x1, y1) in enumerate(cells):
        for i2, (x2, y2) in enumerate(cells):
            if (x1, x2) in e.vm and (y1, y2) in h.vm:
                vm[(i1, i2)] = cell_pos[(e.vm[(x1, x2)], h.vm[(y1, y2)])]
            if (x1, x2) in e.hm and (y1, y2) in h.hm:
                hm[(i1, i2)] = cell_pos[(e.hm[(x1, x2)], h.hm[(y1, y2)])]
    vid = [cell_pos[(e.vid[a], h.vid[b])] for (a, b) in arrs]
    apex = TwoGroupoid(g1, cell_labels, l, u, vm, hm, vid)
    pr_f = TwoMorphism(
        apex, e, [a for (a, _b) in objs], [a for (a, _b) in arrs], [x for (x, _y) in cells]
    )
    pr_g = TwoMorphism(
        apex, h, [b for (_a, b) in objs], [b for (_a, b) in arrs], [y for (_x, y) in cells]
    )
    return apex, pr_f, pr_g


def compose_spans(first: Span, second: Span) -> Span:
    """Span composite: pull the two apexes back over the shared middle."""
    if first.right.cod is not second.left.cod:
        raise NotMorita("spans do not share the middle 2-groupoid", None)
    _apex, pr1, pr2 = fiber_product_apex(first.right, second.left)
    return Span(
        pr1.dom,
        first.left.compose_with(pr1),
        second.right.compose_with(pr2),
    )


def pullback_bundle(f: Span, b: Span) -> Span:
    """Pull a bundle back along a generalized morphism of bases."""
    return compose_spans(f, b)


def refine_span(b: Span, r: TwoMorphism) -> Span:
    """Precompose both legs with a Morita morphism into the apex."""
    if r.cod is not b.apex:
        raise NotMorita("refinement must land in the apex", None)
    check = is_morita_2(r)
    if not check:
        raise NotMorita("refinement leg fails the Morita check", check.witness)
    return Span(r.dom, b.left.compose_with(r), b.right.compose_with(r))


def post_compose(b: Span, g: TwoMorphism) -> Span:
    """Change structure 2-group along a strict morphism."""
    if g.dom is not b.right.cod:
        raise NotMorita("morphism must start at the structure 2-group", None)
    return Span(b.apex, b.left, g.compose_with(b.right))


def whitney_sum(b1: Span, b2: Span):
    """Sum of bundles over one base, landing in the product 2-group.

    Returns (span, product_two_group, include_cells) where include_cells
    maps a pair of structure-group cell indices to a product cell index.
    """
    from .two_groupoids import (
        CrossedModuleGpd,
        cm_to_two_groupoid,
        two_groupoid_to_cm,
    )
    from .groupoids import GroupBundle, GroupoidMorphism

    if b1.left.cod is not b2.left.cod:
        raise NotMorita("bundles have different bases", None)
    t1, t2 = b1.right.cod, b2.right.cod
    cm1, cm2 = two_groupoid_to_cm(t1), two_groupoid_to_cm(t2)
    if t1.g1.n_objs != 1 or t2.g1.n_objs != 1:
        raise NotMorita("structure 2-groups must have one object", None)

    # product crossed module, componentwise
    bx, by = cm1.bundle, cm2.bundle
    gx, gy = cm1.gamma, cm2.gamma
    arrs = [(a, b) for a in range(bx.n_arrs) for b in range(by.n_arrs)]
    apos = {p: i for i, p in enumerate(arrs)}
    bundle = GroupBundle(
        ["*"],
        [(bx.arrs[a], by.arrs[b]) for (a, b) in arrs],
        [0] * len(arrs),
        [0] * len(arrs),
        {
            (apos[(a, b)], apos[(c, d)]): apos[(bx.comp[(a, c)], by.comp[(b, d)])]
            for (a, b) in arrs
            for (c, d) in arrs
        },
        [apos[(bx.idn[0], by.idn[0])]],
        [apos[(bx.inv[a], by.inv[b])] for (a, b) in arrs],
    )
    garrs = [(a, b) for a in range(gx.n_arrs) for b in range(gy.n_arrs)]
    gpos = {p: i for i, p in enumerate(garrs)}
    gamma = FiniteGroupoid(
        ["*"],
        [(gx.arrs[a], gy.arrs[b]) for (a, b) in garrs],
        [0] * len(garrs),
        [0] * len(garrs),
        {
            (gpos[(a, b)], gpos[(c, d)]): gpos[(gx.comp[(a, c)], gy.comp[(b, d)])]
            for (a, b) in garrs
            for (c, d) in garrs
        },
        [gpos[(gx.idn[0], gy.idn[0])]],
        [gpos[(gx.inv[a], gy.inv[b])] for (a, b) in garrs],
    )
    rho = GroupoidMorphism(
        bundle, gamma, [0], [gpos[(cm1.rho.f1[a], cm2.rho.f1[b])] for (a, b) in arrs]
    )
    action = {
        (apos[(x, y)], gpos[(a, b)]): apos[(cm1.action[(x, a)], cm2.action[(y, b)])]
        for (x, y) in arrs
        for (a, b) in garrs
    }
    prod_cm = CrossedModuleGpd(bundle, gamma, rho, action)
    prod_t = cm_to_two_groupoid(prod_cm)

    # cell maps t1-cell x t2-cell -> product cell
    def prod_cell(x1: int, x2: int) -> int:
        (k1, a1) = _cell_parts(t1, cm1, x1)
        (k2, a2) = _cell_parts(t2, cm2, x2)
        xlab = (bx.arrs[k1], by.arrs[k2])
        alab = (gx.arrs[a1], gy.arrs[a2])
        return prod_t.cell_index((xlab, alab))

    apex, pr1, pr2 = fiber_product_apex(b1.left, b2.left)
    right = TwoMorphism(
        apex,
        prod_t,
        [0] * apex.g1.n_objs,
        [
            gpos[(b1.right.f1[pr1.f1[a]], b2.right.f1[pr2.f1[a]])]
            for a in range(apex.g1.n_arrs)
        ],
        [
            prod_cell(b1.right.f2[pr1.f2[x]], b2.right.f2[pr2.f2[x]])
            for x in range(apex.n_cells)
        ],
    )
    span = Span(apex, b1.left.compose_with(pr1), right)
    return span, prod_t, prod_cell


def _cell_parts(t: TwoGroupoid, cm, x: int):
    """Split a 2-group cell into (kernel part, arrow part) indices."""
    a = t.l[x]
    k_cell = t.hm[(x, t.vid[t.g1.inv[a]])]
    return cm.bundle.arr_index(t.cells[k_cell]), a


def projection_morphism(prod_t: TwoGroupoid, t1: TwoGroupoid, which: int) -> TwoMorphism:
    """Strict projection [GxG' -> HxH'] -> [G -> H] onto one factor.

    Every product cell splits as kernel-part hm vid(arrow); the projection
    rebuilds the factor cell from the projected parts.
    """
    f1 = [t1.g1.arr_index(lab[which]) for lab in prod_t.g1.arrs]
    f2 = []
    for (xlab, alab) in prod_t.cells:
        kernel_cell = t1.cell_index(xlab[which])
        arrow = t1.g1.arr_index(alab[which])
        f2.append(t1.hm[(kernel_cell, t1.vid[arrow])])
    return TwoMorphism(prod_t, t1, [0], f1, f2)


def span_equivalent(b1: Span, b2: Span, budget: Optional[int] = None,
                    prime: int = 2, max_degree: int = 2) -> str:
    """Semi-decide equivalence of two spans with the same ends.

    Refine both over the common base, search for a 2-transformation
    between the refined right legs, and fall back to comparing
    characteristic matrices.  Returns "equivalent",
    "not_equivalent_by_cohomology", or "unknown".
    """
    from .cohomology import characteristic_map

    if b1.left.cod is not b2.left.cod or b1.right.cod is not b2.right.cod:
        raise NotMorita("spans must share both ends", None)
    try:
        _apex, pr1, pr2 = fiber_product_apex(b1.left, b2.left)
        f = b1.right.compose_with(pr1)
        g = b2.right.compose_with(pr2)
        witness = nat2_search(f, g, budget)
        if witness is not None:
            return "equivalent"
    except (BudgetExceeded, EmptyApex):
        witness = None
    for q in range(max_degree + 1):
        m1 = characteristic_map(b1, q, prime)
        m2 = characteristic_map(b2, q, prime)
        if m1 != m2:
            return "not_equivalent_by_cohomology"
    return "unknown"
