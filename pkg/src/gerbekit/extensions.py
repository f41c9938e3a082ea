"""Groupoid extensions by a fixed group, and the bundle dictionary.

An extension holds a short exact sequence  M x G -> tg -> base  of
groupoids over a common object set.  Both directions of the dictionary
with principal 2-group bundles are implemented: an extension yields a span
into the inner-automorphism 2-group of G, and any span into a 2-group
yields an extension of the base, the two being inverse up to isomorphism.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .errors import (
    InvalidCentralData,
    InvariantViolation,
    NoIsoFound,
    NotAbelianKernel,
    NotCentral,
    NotExact,
    NotInjective,
    NotInjectiveKernel,
    NotSurjective,
)
from .groups import FiniteGroup, center, group_iso_search
from .groupoids import (
    FiniteGroupoid,
    GroupBundle,
    GroupoidMorphism,
    MoritaResult,
    is_morita_1,
    pullback_groupoid,
    quotient_by_bundle,
    sub_groupoid,
    trivial_bundle,
    product_with_group,
)
from .spans import Span, post_compose, span_equivalent
from .two_groupoids import (
    TwoGroupoid,
    TwoMorphism,
    as_two_groupoid,
    aut_inner_two_group,
    one_kernel_two_group,
    two_groupoid_to_cm,
)


class GExtension:
    """M x G -> tg -> base, all over the object set M.

    ``i_table[m][g]`` is the tg-arrow of the kernel element g at object m;
    ``phi`` maps tg-arrows onto base arrows.  Exactness is scanned on
    construction: arrows share a phi-image iff they differ by exactly one
    right kernel factor.
    """

    def __init__(self, g: FiniteGroup, tg: FiniteGroupoid, base: FiniteGroupoid,
                 i_table, phi, validate: bool = True):
        self.g = g
        self.tg = tg
        self.base = base
        self.i_table = tuple(tuple(row) for row in i_table)
        self.phi = tuple(phi)
        self._base2: Optional[TwoGroupoid] = None
        self._kernel_lookup = {
            arrow: (m, x)
            for m, row in enumerate(self.i_table)
            for x, arrow in enumerate(row)
        }
        if validate:
            self.validate()

    @property
    def objects(self) -> tuple:
        return self.tg.objs

    def base_two_groupoid(self) -> TwoGroupoid:
        if self._base2 is None:
            self._base2 = as_two_groupoid(self.base)
        return self._base2

    def i(self, m: int, x: int) -> int:
        return self.i_table[m][x]

    def kernel_element(self, arrow: int) -> Optional[tuple]:
        """(object, group element) when the arrow lies in the kernel."""
        return self._kernel_lookup.get(arrow)

    def ad(self, arrow: int) -> tuple:
        """Conjugation by a tg-arrow as a permutation of the group."""
        tg, g = self.tg, self.g
        m, n = tg.src[arrow], tg.tgt[arrow]
        out = []
        for x in g.elements():
            conj = tg.comp[(tg.comp[(arrow, self.i(m, x))], tg.inv[arrow])]
            hit = self.kernel_element(conj)
            if hit is None or hit[0] != n:
                raise NotExact("conjugate left the kernel", tg.arrs[arrow])
            out.append(hit[1])
        return tuple(out)

    def validate(self) -> None:
        tg, base, g = self.tg, self.base, self.g
        if tg.objs != base.objs:
            raise InvariantViolation("object sets differ", None)
        if len(self.i_table) != tg.n_objs or any(
            len(row) != g.order for row in self.i_table
        ):
            raise InvariantViolation("kernel table has the wrong shape", None)
        seen = set()
        for m in range(tg.n_objs):
            for x in g.elements():
                a = self.i(m, x)
                if tg.src[a] != m or tg.tgt[a] != m:
                    raise InvariantViolation(
                        "kernel element is not a loop at its object",
                        (tg.objs[m], g.labels[x]),
                    )
                if a in seen:
                    raise NotInjective("kernel embedding repeats an arrow", tg.arrs[a])
                seen.add(a)
            if self.i(m, g.unit) != tg.idn[m]:
                raise InvariantViolation("kernel unit is not the identity", tg.objs[m])
            for x in g.elements():
                for y in g.elements():
                    if tg.comp[(self.i(m, x), self.i(m, y))] != self.i(m, g.mul(x, y)):
                        raise InvariantViolation(
                            "kernel embedding is not multiplicative",
                            (tg.objs[m], g.labels[x], g.labels[y]),
                        )
        # phi is a surjective morphism over the identity on objects
        GroupoidMorphism(tg, base, range(tg.n_objs), self.phi)
        if set(self.phi) != set(range(base.n_arrs)):
            missing = next(
                base.arrs[b] for b in range(base.n_arrs) if b not in set(self.phi)
            )
            raise NotSurjective("phi misses an arrow", missing)
        for m in range(tg.n_objs):
            for x in g.elements():
                if self.phi[self.i(m, x)] != base.idn[m]:
                    raise NotExact(
                        "kernel not killed by phi", (tg.objs[m], g.labels[x])
                    )
        for a in range(tg.n_arrs):
            fiber = {b for b in range(tg.n_arrs) if self.phi[b] == self.phi[a]}
            translates = {
                tg.comp[(a, self.i(tg.src[a], x))] for x in g.elements()
            }
            if translates != fiber:
                raise NotExact("phi fiber is not a single kernel orbit", tg.arrs[a])
            if len(translates) != g.order:
                raise NotExact("kernel acts with stabilizer", tg.arrs[a])

    def __repr__(self) -> str:
        return (
            f"GExtension(G={self.g.order}, tg={self.tg.n_arrs} arrows, "
            f"base={self.base.n_arrs} arrows over {self.tg.n_objs} objects)"
        )


def make_extension(g: FiniteGroup, i: GroupoidMorphism, phi: GroupoidMorphism) -> GExtension:
    """Validate a kernel embedding and a projection into an extension.

    ``i`` must come from the trivial bundle of g over phi's object set.
    """
    bundle = i.dom
    if not isinstance(bundle, GroupBundle):
        raise InvariantViolation("kernel must be a group bundle", None)
    if i.cod is not phi.dom:
        raise InvariantViolation("legs do not share the middle groupoid", None)
    tg = phi.dom
    i_table = [
        [i.f1[bundle.arr_index((tg.objs[m], g.labels[x]))] for x in g.elements()]
        for m in range(tg.n_objs)
    ]
    return GExtension(g, tg, phi.cod, i_table, phi.f1)


def trivial_extension(base: FiniteGroupoid, g: FiniteGroup) -> GExtension:
    """base x g with componentwise composition and the obvious projection."""
    tg = product_with_group(base, g)
    i_table = [
        [tg.arr_index((base.arrs[base.idn[m]], g.labels[x])) for x in g.elements()]
        for m in range(base.n_objs)
    ]
    phi = [base.arr_index(lab[0]) for lab in tg.arrs]
    return GExtension(g, tg, base, i_table, phi)


def pullback_extension(e: GExtension, m_objects: Sequence, f: Sequence[int]) -> tuple:
    """Pull the whole sequence back along a surjection onto the objects.

    Returns (extension, tg_map, base_map) where the maps cover f.
    """
    tg_pb, tg_proj = pullback_groupoid(e.tg, m_objects, f)
    base_pb, base_proj = pullback_groupoid(e.base, m_objects, f)
    i_table = [
        [
            tg_pb.arr_index((m_objects[m], e.tg.arrs[e.i(f[m], x)], m_objects[m]))
            for x in e.g.elements()
        ]
        for m in range(len(m_objects))
    ]
    phi = [
        base_pb.arr_index((lab[0], e.base.arrs[e.phi[e.tg.arr_index(lab[1])]], lab[2]))
        for lab in tg_pb.arrs
    ]
    ext = GExtension(e.g, tg_pb, base_pb, i_table, phi)
    return ext, tg_proj, base_proj


def is_morita_ext(e1: GExtension, e2: GExtension, f0: Sequence[int],
                  f_tg: Sequence[int], f_base: Sequence[int]) -> MoritaResult:
    """Morita morphism of extensions: both squares pass the 1-level check.

    The maps must commute with the kernel embeddings and projections.
    """
    f0 = tuple(f0)
    tg_map = GroupoidMorphism(e1.tg, e2.tg, f0, f_tg)
    base_map = GroupoidMorphism(e1.base, e2.base, f0, f_base)
    for m in range(e1.tg.n_objs):
        for x in e1.g.elements():
            if tg_map.f1[e1.i(m, x)] != e2.i(f0[m], x):
                return MoritaResult(
                    False, (e1.tg.objs[m], e1.g.labels[x]), "kernel square fails"
                )
    for a in range(e1.tg.n_arrs):
        if base_map.f1[e1.phi[a]] != e2.phi[tg_map.f1[a]]:
            return MoritaResult(False, e1.tg.arrs[a], "projection square fails")
    if set(f0) != set(range(e2.tg.n_objs)):
        missing = next(
            e2.tg.objs[o] for o in range(e2.tg.n_objs) if o not in set(f0)
        )
        return MoritaResult(False, missing, "object map not onto")
    r1 = is_morita_1(base_map)
    if not r1:
        return r1
    return is_morita_1(tg_map)


# -- extension -> bundle -----------------------------------------------------------


def extension_to_bundle(e: GExtension, cap: Optional[int] = None) -> Span:
    """The span from the base to the inner-automorphism 2-group of G.

    Apex 2-cells are pairs of tg-arrows with equal projection; the left
    leg collapses them to the base, the right leg sends a pair to the
    kernel difference and conjugation by the lower arrow.
    """
    tg, g = e.tg, e.g
    target, cm_t, aut, _action, _inner = aut_inner_two_group(g, cap)

    pairs = [
        (x, y)
        for x in range(tg.n_arrs)
        for y in range(tg.n_arrs)
        if e.phi[x] == e.phi[y]
    ]
    pos = {p: i for i, p in enumerate(pairs)}
    labels = [(tg.arrs[x], tg.arrs[y]) for (x, y) in pairs]
    l = [y for (_x, y) in pairs]
    u = [x for (x, _y) in pairs]
    vid = [pos[(a, a)] for a in range(tg.n_arrs)]
    vm = {}
    for bi, (x1, x2) in enumerate(pairs):
        for ai, (y1, y2) in enumerate(pairs):
            if x2 == y1:
                vm[(bi, ai)] = pos[(x1, y2)]
    hm = {}
    for ai, (x1, x2) in enumerate(pairs):
        for bi, (y1, y2) in enumerate(pairs):
            if tg.src[x1] == tg.tgt[y1]:
                hm[(ai, bi)] = pos[(tg.comp[(x1, y1)], tg.comp[(x2, y2)])]
    apex = TwoGroupoid(tg, labels, l, u, vm, hm, vid)

    base2 = e.base_two_groupoid()
    left = TwoMorphism(
        apex,
        base2,
        range(tg.n_objs),
        e.phi,
        [e.phi[y] for (_x, y) in pairs],
    )

    ad_index = [aut.index_of(e.ad(a)) for a in range(tg.n_arrs)]
    f2 = []
    for (x, y) in pairs:
        diff = tg.comp[(x, tg.inv[y])]
        hit = e.kernel_element(diff)
        if hit is None:
            raise NotExact("pair difference left the kernel", (tg.arrs[x], tg.arrs[y]))
        f2.append(target.cell_index((g.labels[hit[1]], aut.labels[ad_index[y]])))
    right = TwoMorphism(apex, target, [0] * tg.n_objs, ad_index, f2)
    return Span(apex, left, right)


# -- bundle -> extension -----------------------------------------------------------


def bundle_to_extension(b: Span):
    """Extension of the span's base induced by a bundle over a 2-group.

    The kernel cells of the apex embed into the action-twisted product of
    the apex arrows with the structure group; the quotient is the total
    groupoid of the extension.  Returns (extension, to_base) where
    ``to_base`` is the 1-level Morita morphism from the new base onto the
    span's base groupoid.
    """
    t = b.right.cod
    if t.g1.n_objs != 1:
        raise InvariantViolation("structure 2-groupoid must be a 2-group", None)
    cm_t = two_groupoid_to_cm(t)
    g_out, members = cm_t.bundle.fiber_group(0)
    member_pos = {m: i for i, m in enumerate(members)}

    apex = b.apex
    cm_d = two_groupoid_to_cm(apex)
    ldelta = cm_d.bundle  # kernel bundle of the apex
    if len(set(cm_d.rho.f1)) != ldelta.n_arrs:
        dup = next(
            (ldelta.arrs[a], ldelta.arrs[c])
            for a in range(ldelta.n_arrs)
            for c in range(a)
            if cm_d.rho.f1[a] == cm_d.rho.f1[c]
        )
        raise NotInjectiveKernel("apex kernel does not embed", dup)

    # kernel cell -> group element of the structure 2-group
    def g_of(cell_pos: int) -> int:
        image = b.right.f2[apex.cell_index(ldelta.arrs[cell_pos])]
        return member_pos[cm_t.bundle.arr_index(t.cells[image])]

    d1 = apex.g1
    # arrows (d, g) with composition twisted by the structure action
    arrs = [(d, x) for d in range(d1.n_arrs) for x in g_out.elements()]
    pos = {p: i for i, p in enumerate(arrs)}
    labels = [(d1.arrs[d], g_out.labels[x]) for (d, x) in arrs]

    def moved(x: int, d: int) -> int:
        """x acted on by the image of arrow d in the structure group."""
        cell = members[x]
        out = cm_t.action[(cell, b.right.f1[d])]
        return member_pos[out]

    comp = {}
    for i1, (d, x) in enumerate(arrs):
        for i2, (d2, x2) in enumerate(arrs):
            if d1.src[d] == d1.tgt[d2]:
                comp[(i1, i2)] = pos[(d1.comp[(d, d2)], g_out.mul(moved(x, d2), x2))]
    idn = [pos[(d1.idn[o], g_out.unit)] for o in range(d1.n_objs)]
    inv = []
    for (d, x) in arrs:
        xi = g_out.inv[x]
        inv.append(pos[(d1.inv[d], moved(xi, d1.inv[d]))])
    twisted = FiniteGroupoid(d1.objs, labels, [d1.src[d] for (d, _x) in arrs],
                             [d1.tgt[d] for (d, _x) in arrs], comp, idn, inv)

    emb = GroupoidMorphism(
        ldelta,
        twisted,
        range(d1.n_objs),
        [pos[(cm_d.rho.f1[a], g_out.inv[g_of(a)])] for a in range(ldelta.n_arrs)],
    )
    tg_new, proj_tg = quotient_by_bundle(twisted, emb)
    base_new, proj_base = quotient_by_bundle(d1, cm_d.rho)

    i_table = [
        [proj_tg.f1[pos[(d1.idn[m], x)]] for x in g_out.elements()]
        for m in range(d1.n_objs)
    ]
    # class(d, g) -> class(d); well-defined since the embedding pairs
    # kernel arrows with kernel group elements
    phi = [None] * tg_new.n_arrs
    for i1, (d, _x) in enumerate(arrs):
        phi[proj_tg.f1[i1]] = proj_base.f1[d]
    ext = GExtension(g_out, tg_new, base_new, i_table, phi)

    to_base_f1 = [None] * base_new.n_arrs
    for d in range(d1.n_arrs):
        to_base_f1[proj_base.f1[d]] = b.left.f1[d]
    to_base = GroupoidMorphism(base_new, b.left.cod.g1, b.left.f0, to_base_f1)
    return ext, to_base


# -- round trip --------------------------------------------------------------------


def extension_iso_search(e1: GExtension, e2: GExtension):
    """Search for an isomorphism of extensions, including a group match.

    Returns (group_iso, f0, f_tg) or None: a group isomorphism
    e1.g -> e2.g, an object bijection, and an arrow bijection
    e1.tg -> e2.tg commuting with the kernel embeddings and projections.
    The base map is induced.
    """
    if (
        e1.g.order != e2.g.order
        or e1.tg.n_arrs != e2.tg.n_arrs
        or e1.tg.n_objs != e2.tg.n_objs
    ):
        return None
    tg1, tg2 = e1.tg, e2.tg

    def profile(tg, ext, o):
        return (
            len(tg.hom(o, o)),
            sum(len(tg.hom(o, n)) for n in range(tg.n_objs)),
            sum(len(tg.hom(n, o)) for n in range(tg.n_objs)),
        )

    p1 = [profile(tg1, e1, o) for o in range(tg1.n_objs)]
    p2 = [profile(tg2, e2, o) for o in range(tg2.n_objs)]

    for psi in group_iso_search(e1.g, e2.g):
        for f0 in _object_bijections(p1, p2):
            f_tg = _extend_extension_iso(e1, e2, psi, f0)
            if f_tg is not None:
                return psi, f0, f_tg
    return None


def _object_bijections(p1, p2):
    n = len(p1)
    used = [False] * n
    out = [None] * n

    def rec(i):
        if i == n:
            yield tuple(out)
            return
        for j in range(n):
            if not used[j] and p1[i] == p2[j]:
                used[j] = True
                out[i] = j
                yield from rec(i + 1)
                used[j] = False

    yield from rec(0)


def _extend_extension_iso(e1: GExtension, e2: GExtension, psi, f0):
    """Backtracking arrow match pinned on the kernel and phi-compatible."""
    tg1, tg2 = e1.tg, e2.tg
    f_tg: list = [None] * tg1.n_arrs
    used = [False] * tg2.n_arrs
    for m in range(tg1.n_objs):
        for x in e1.g.elements():
            a, b2 = e1.i(m, x), e2.i(f0[m], psi[x])
            if f_tg[a] is not None and f_tg[a] != b2:
                return None
            if f_tg[a] is None:
                if used[b2]:
                    return None
                f_tg[a] = b2
                used[b2] = True

    order = sorted(range(tg1.n_arrs), key=lambda a: (f_tg[a] is None, a))

    def consistent(a) -> bool:
        fa = f_tg[a]
        if tg2.src[fa] != f0[tg1.src[a]] or tg2.tgt[fa] != f0[tg1.tgt[a]]:
            return False
        ia = tg1.inv[a]
        if f_tg[ia] is not None and f_tg[ia] != tg2.inv[fa]:
            return False
        for (x, y), xy in tg1.comp.items():
            fx, fy = f_tg[x], f_tg[y]
            if fx is None or fy is None:
                continue
            if f_tg[xy] is not None and tg2.comp[(fx, fy)] != f_tg[xy]:
                return False
        return True

    def rec(i) -> bool:
        if i == tg1.n_arrs:
            return True
        a = order[i]
        if f_tg[a] is not None:
            return consistent(a) and rec(i + 1)
        for cand in tg2.hom(f0[tg1.src[a]], f0[tg1.tgt[a]]):
            if used[cand]:
                continue
            f_tg[a] = cand
            used[cand] = True
            if consistent(a) and rec(i + 1):
                return True
            f_tg[a] = None
            used[cand] = False
        return False

    if not rec(0):
        return None
    # the base map must be induced and commute with both projections
    base_map: list = [None] * e1.base.n_arrs
    for a in range(tg1.n_arrs):
        want = e2.phi[f_tg[a]]
        have = base_map[e1.phi[a]]
        if have is not None and have != want:
            return None
        base_map[e1.phi[a]] = want
    try:
        GroupoidMorphism(e1.base, e2.base, f0, base_map)
        GroupoidMorphism(e1.tg, e2.tg, f0, f_tg)
    except InvariantViolation:
        return None
    return tuple(f_tg)


def roundtrip_check(e: GExtension):
    """extension -> bundle -> extension, with an explicit isomorphism.

    Returns (new_extension, (group_iso, f0, f_tg)).  Raises NoIsoFound
    when the search exhausts without a witness (never expected).
    """
    back, _to_base = bundle_to_extension(extension_to_bundle(e))
    found = extension_iso_search(e, back)
    if found is None:
        raise NoIsoFound("round trip produced a non-isomorphic extension", None)
    return back, found


# -- centrality and reduction ---------------------------------------------------------


class CentralData:
    """Witness that an extension is central.

    Holds the center quotient q: tg -> tgq, the section sigma of the
    induced projection, the commuting subgroupoid, and the coset map r
    with q(x) = sigma(phi(x)) * r(x).
    """

    def __init__(self, e: GExtension, zg: FiniteGroup, z_members: tuple,
                 tgq: FiniteGroupoid, q_proj: GroupoidMorphism,
                 phi_q: GroupoidMorphism, sigma: GroupoidMorphism,
                 tgprime_arrows: tuple, r: tuple, gz: FiniteGroup,
                 coset_of: tuple):
        self.e = e
        self.zg = zg
        self.z_members = z_members
        self.tgq = tgq
        self.q_proj = q_proj
        self.phi_q = phi_q
        self.sigma = sigma
        self.tgprime_arrows = tgprime_arrows
        self.r = r
        self.gz = gz
        self.coset_of = coset_of

    def validate(self) -> None:
        e = self.e
        tg, g = e.tg, e.g
        for b in range(e.base.n_arrs):
            if self.phi_q.f1[self.sigma.f1[b]] != b:
                raise InvalidCentralData("sigma is not a section", e.base.arrs[b])
        sigma_image = set(self.sigma.f1)
        expected = {
            a for a in range(tg.n_arrs) if self.q_proj.f1[a] in sigma_image
        }
        if set(self.tgprime_arrows) != expected:
            raise InvalidCentralData("subgroupoid is not the section preimage", None)
        for a in self.tgprime_arrows:
            for x in g.elements():
                left = tg.comp[(e.i(tg.tgt[a], x), a)]
                right = tg.comp[(a, e.i(tg.src[a], x))]
                if left != right:
                    raise InvalidCentralData(
                        "section preimage does not commute with the kernel",
                        (tg.arrs[a], g.labels[x]),
                    )
        gz = self.gz
        for a in range(tg.n_arrs):
            # q(a) = sigma(phi(a)) * i_q(r(a))
            rep = self._coset_rep(self.r[a])
            expected_arrow = self.tgq.comp[(
                self.sigma.f1[e.phi[a]],
                self.q_proj.f1[e.i(tg.src[a], rep)],
            )]
            if self.q_proj.f1[a] != expected_arrow:
                raise InvalidCentralData("coset map fails its defining relation", tg.arrs[a])
        for a in range(tg.n_arrs):
            rep = self._coset_rep(self.r[a])
            for x in g.elements():
                lhs = tg.comp[(e.i(tg.tgt[a], x), a)]
                conj = g.mul(g.mul(g.inv[rep], x), rep)
                rhs = tg.comp[(a, e.i(tg.src[a], conj))]
                if lhs != rhs:
                    raise InvalidCentralData(
                        "kernel slides past arrows with the wrong twist",
                        (tg.arrs[a], g.labels[x]),
                    )

    def _coset_rep(self, coset_index: int) -> int:
        return next(
            x for x in self.e.g.elements() if self.coset_of[x] == coset_index
        )


def center_quotient(e: GExtension):
    """tg / Z(G) with its projection, the induced projection to the base,
    and the center's embedding data."""
    zg, incl = center(e.g)
    z_members = tuple(incl.val)
    bundle = trivial_bundle(e.tg.objs, zg)
    j = GroupoidMorphism(
        bundle,
        e.tg,
        range(e.tg.n_objs),
        [
            e.i(m, z_members[x])
            for m in range(e.tg.n_objs)
            for x in zg.elements()
        ],
    )
    tgq, q_proj = quotient_by_bundle(e.tg, j)
    phi_q_f1 = [None] * tgq.n_arrs
    for a in range(e.tg.n_arrs):
        phi_q_f1[q_proj.f1[a]] = e.phi[a]
    phi_q = GroupoidMorphism(tgq, e.base, range(e.tg.n_objs), phi_q_f1)
    return zg, z_members, tgq, q_proj, phi_q


def is_central(e: GExtension) -> Optional[CentralData]:
    """Search the functor sections of the center quotient, first witness wins.

    Sections are enumerated lexicographically over the base arrows; each
    full assignment is checked for the commutation property.  None is
    returned only after exhausting every section.
    """
    zg, z_members, tgq, q_proj, phi_q = center_quotient(e)
    base, tg, g = e.base, e.tg, e.g

    fibers = [
        tuple(a for a in range(tgq.n_arrs) if phi_q.f1[a] == b)
        for b in range(base.n_arrs)
    ]
    assign: list = [None] * base.n_arrs
    idn_set = {base.idn[o] for o in range(base.n_objs)}

    def rec(i: int):
        if i == base.n_arrs:
            yield tuple(assign)
            return
        if assign[i] is not None:
            yield from rec(i + 1)
            return
        for cand in fibers[i]:
            if tgq.src[cand] != base.src[i] or tgq.tgt[cand] != base.tgt[i]:
                continue
            ok = True
            if i in idn_set and cand != tgq.idn[base.src[i]]:
                ok = False
            if ok:
                saved = []
                assign[i] = cand
                saved.append(i)
                # propagate inverse and closed compositions
                inv_b = base.inv[i]
                if assign[inv_b] is None:
                    assign[inv_b] = tgq.inv[cand]
                    saved.append(inv_b)
                elif assign[inv_b] != tgq.inv[cand]:
                    ok = False
                if ok:
                    for (x, y), xy in base.comp.items():
                        if assign[x] is not None and assign[y] is not None:
                            want = tgq.comp[(assign[x], assign[y])]
                            if assign[xy] is None:
                                assign[xy] = want
                                saved.append(xy)
                            elif assign[xy] != want:
                                ok = False
                                break
                if ok:
                    yield from rec(i + 1)
                for k in saved:
                    assign[k] = None
        return

    for candidate in rec(0):
        try:
            sigma = GroupoidMorphism(base, tgq, range(base.n_objs), candidate)
        except InvariantViolation:
            continue
        sigma_image = set(candidate)
        tgprime = tuple(
            a for a in range(tg.n_arrs) if q_proj.f1[a] in sigma_image
        )
        central = all(
            tg.comp[(e.i(tg.tgt[a], x), a)] == tg.comp[(a, e.i(tg.src[a], x))]
            for a in tgprime
            for x in g.elements()
        )
        if not central:
            continue
        gz, coset_proj = _group_quotient_by_members(g, z_members)
        r = []
        for a in range(tg.n_arrs):
            found = None
            for x in g.elements():
                if q_proj.f1[tg.comp[(a, e.i(tg.src[a], g.inv[x]))]] == candidate[e.phi[a]]:
                    found = coset_proj[x]
                    break
            if found is None:
                found = -1
            r.append(found)
        if any(v == -1 for v in r):
            continue
        data = CentralData(
            e, zg, z_members, tgq, q_proj, phi_q, sigma, tgprime,
            tuple(r), gz, tuple(coset_proj),
        )
        data.validate()
        return data
    return None


def _group_quotient_by_members(g: FiniteGroup, members: tuple):
    from .groups import quotient_group

    gz, proj = quotient_group(g, list(members))
    return gz, tuple(proj.val)


def central_reduction(e: GExtension, cd: CentralData, budget: Optional[int] = None):
    """The center-kernel sub-extension and its span into [Z(G) -> 1].

    Returns (reduced_extension, reduced_span, comparison) where comparison
    semi-decides agreement of the included reduced span with the full
    bundle of e.
    """
    cd.validate()
    if cd.e is not e:
        raise InvalidCentralData("witness belongs to a different extension", None)
    tg, g = e.tg, e.g
    zg, z_members = cd.zg, cd.z_members
    tgp = sub_groupoid(tg, cd.tgprime_arrows)
    old_to_new = {tg.arrs[a]: i for i, a in enumerate(sorted(set(cd.tgprime_arrows)))}
    i_table = [
        [old_to_new[tg.arrs[e.i(m, z_members[x])]] for x in zg.elements()]
        for m in range(tg.n_objs)
    ]
    phi = [e.phi[tg.arr_index(lab)] for lab in tgp.arrs]
    reduced = GExtension(zg, tgp, e.base, i_table, phi)

    # span into [Z(G) -> 1] built from the reduced extension
    target, _cm = one_kernel_two_group(zg)
    pairs = [
        (x, y)
        for x in range(tgp.n_arrs)
        for y in range(tgp.n_arrs)
        if reduced.phi[x] == reduced.phi[y]
    ]
    pos = {p: i for i, p in enumerate(pairs)}
    labels = [(tgp.arrs[x], tgp.arrs[y]) for (x, y) in pairs]
    l = [y for (_x, y) in pairs]
    u = [x for (x, _y) in pairs]
    vid = [pos[(a, a)] for a in range(tgp.n_arrs)]
    vm = {}
    for bi, (x1, x2) in enumerate(pairs):
        for ai, (y1, y2) in enumerate(pairs):
            if x2 == y1:
                vm[(bi, ai)] = pos[(x1, y2)]
    hm = {}
    for ai, (x1, x2) in enumerate(pairs):
        for bi, (y1, y2) in enumerate(pairs):
            if tgp.src[x1] == tgp.tgt[y1]:
                hm[(ai, bi)] = pos[(tgp.comp[(x1, y1)], tgp.comp[(x2, y2)])]
    apex = TwoGroupoid(tgp, labels, l, u, vm, hm, vid)
    base2 = e.base_two_groupoid()
    left = TwoMorphism(
        apex, base2, range(tgp.n_objs), reduced.phi,
        [reduced.phi[y] for (_x, y) in pairs],
    )
    one_arrow = 0
    f2 = []
    for (x, y) in pairs:
        diff = tgp.comp[(x, tgp.inv[y])]
        m, z = reduced.kernel_element(diff)
        f2.append(target.cell_index((zg.labels[z], target.g1.arrs[one_arrow])))
    right = TwoMorphism(
        apex, target, [0] * tgp.n_objs, [one_arrow] * tgp.n_arrs, f2
    )
    reduced_span = Span(apex, left, right)

    # compare with the full bundle through the kernel inclusion
    full_span = extension_to_bundle(e)
    inclusion = _inclusion_center_to_aut(target, full_span.right.cod, e, zg, z_members)
    comparison = span_equivalent(
        post_compose(reduced_span, inclusion), full_span, budget=budget
    )
    return reduced, reduced_span, comparison


def _inclusion_center_to_aut(tz: TwoGroupoid, tga: TwoGroupoid, e: GExtension,
                             zg: FiniteGroup, z_members: tuple) -> TwoMorphism:
    """[Z(G) -> 1] -> [G -> Aut(G)]: center inclusion over the identity arrow."""
    id_aut = tga.g1.idn[0]
    f2 = []
    for (zlab, _arrow) in tz.cells:
        z = zg.index_of(zlab)
        glab = e.g.labels[z_members[z]]
        f2.append(tga.cell_index((glab, tga.g1.arrs[id_aut])))
    return TwoMorphism(tz, tga, [0], [id_aut] * tz.g1.n_arrs, f2)


# -- the extension class ----------------------------------------------------------------


def lexicographic_section(e: GExtension) -> tuple:
    """First set-theoretic section of phi with identities to identities."""
    section = [None] * e.base.n_arrs
    for o in range(e.base.n_objs):
        section[e.base.idn[o]] = e.tg.idn[o]
    for b in range(e.base.n_arrs):
        if section[b] is None:
            section[b] = next(
                a for a in range(e.tg.n_arrs) if e.phi[a] == b
            )
    return tuple(section)


def section_cocycle(e: GExtension, section: Sequence[int]) -> dict:
    """c(a, b) with section(a) section(b) = i(c(a, b)) section(ab)."""
    tg, base = e.tg, e.base
    out = {}
    for (a, b), ab in base.comp.items():
        prod = tg.comp[(section[a], section[b])]
        diff = tg.comp[(prod, tg.inv[section[ab]])]
        hit = e.kernel_element(diff)
        if hit is None:
            raise NotExact("section discrepancy left the kernel", (base.arrs[a], base.arrs[b]))
        out[(a, b)] = hit[1]
    return out


def extension_class(e: GExtension, p: int, chi: Optional[Sequence[int]] = None):
    """Degree-2 class of a central extension with abelian kernel.

    ``chi`` gives the F_p value of each kernel element (a character);
    the class lives on the nerve of the base.  Independent of the choice
    of section: different sections shift the cocycle by a coboundary.
    """
    from .cohomology import CohClass, basis
    from .nerve import nerve

    if not e.g.is_abelian():
        raise NotAbelianKernel("kernel must be abelian", None)
    for a in range(e.tg.n_arrs):
        for x in e.g.elements():
            if (
                e.tg.comp[(e.i(e.tg.tgt[a], x), a)]
                != e.tg.comp[(a, e.i(e.tg.src[a], x))]
            ):
                raise NotCentral("kernel is not central", (e.tg.arrs[a], e.g.labels[x]))
    if chi is None:
        chi = tuple(range(e.g.order))  # sensible only for Z/p itself
    chi = tuple(v % p for v in chi)
    section = lexicographic_section(e)
    coc = section_cocycle(e, section)
    base2 = e.base_two_groupoid()
    ds = nerve(base2, 3)
    vec = []
    for s in ds.levels[2]:
        e01, e12 = s[3], s[5]
        vec.append(chi[coc[(e12, e01)]] % p)
    b = basis(ds, p, 2)
    vec = tuple(vec)
    if not b.is_cocycle(vec):
        raise InvariantViolation("section cocycle is not closed", None)
    return CohClass(2, p, vec)
