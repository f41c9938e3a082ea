"""Strict finite 2-groupoids and crossed modules of groupoids.

A 2-groupoid is a double groupoid: 2-cells carry a vertical source/target
pair l, u into the 1-arrows and compose vertically (vm, when l(b) = u(a))
and horizontally (hm, when s(a) = t(b)), subject to the interchange law.
Crossed modules are the equivalent one-sided presentation: a group bundle
X mapping to the arrows, with a right conjugation-like action.

Conventions, fixed once for the whole package:
  * 1-arrows compose right-to-left (a*b needs src(a) = tgt(b));
  * a 2-cell x runs vertically from l(x) to u(x);
  * vm(b, a) = "a then b", hm(a, b) = "b then a";
  * the action of an arrow gamma moves fiber elements from tgt(gamma)
    to src(gamma):  x^gamma is defined when base(x) = tgt(gamma).
"""

from __future__ import annotations

from itertools import product
from typing import Optional, Sequence

from . import config
from .errors import (
    BudgetExceeded,
    InvariantViolation,
    NotSurjective,
)
from .groups import FiniteGroup, GroupHom, RightAction
from .groupoids import (
    FiniteGroupoid,
    GroupBundle,
    GroupoidMorphism,
    MoritaResult,
    find_inverses,
    is_morita_1,
)


class TwoGroupoid:
    """2-cells over a groupoid of 1-arrows over a set of objects."""

    def __init__(self, g1: FiniteGroupoid, cells, l, u, vm, hm, vid, validate=True):
        self.g1 = g1
        self.cells = tuple(cells)
        self.l = tuple(l)
        self.u = tuple(u)
        self.vm = dict(vm)
        self.hm = dict(hm)
        self.vid = tuple(vid)
        self._cell_index = {c: i for i, c in enumerate(self.cells)}
        self.s2 = tuple(g1.src[a] for a in self.l)
        self.t2 = tuple(g1.tgt[a] for a in self.l)
        self.vinv = find_inverses(self.cells, self.l, self.u, self.vm, self.vid)
        hm_idn = [self.vid[g1.idn[o]] for o in range(g1.n_objs)]
        self.hinv = find_inverses(self.cells, self.s2, self.t2, self.hm, hm_idn)
        self._by_lu: Optional[dict] = None
        self._unique_fibers: Optional[bool] = None
        self._nerves: dict = {}
        if validate:
            self.validate()

    # -- queries -----------------------------------------------------------------

    @property
    def objs(self):
        return self.g1.objs

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    def cell_index(self, label) -> int:
        return self._cell_index[label]

    def cells_by_lu(self) -> dict:
        if self._by_lu is None:
            table: dict = {}
            for x in range(self.n_cells):
                table.setdefault((self.l[x], self.u[x]), []).append(x)
            self._by_lu = {k: tuple(v) for k, v in table.items()}
        return self._by_lu

    def fiber(self, la: int, ua: int) -> tuple:
        return self.cells_by_lu().get((la, ua), ())

    def has_unique_fibers(self) -> bool:
        """True when any parallel pair of 1-arrows bounds at most one 2-cell."""
        if self._unique_fibers is None:
            self._unique_fibers = all(
                len(v) == 1 for v in self.cells_by_lu().values()
            )
        return self._unique_fibers

    def vertical_groupoid(self) -> FiniteGroupoid:
        """2-cells as arrows between 1-arrows; composition is vm."""
        return FiniteGroupoid(
            self.g1.arrs, self.cells, self.l, self.u, self.vm, self.vid, self.vinv
        )

    def horizontal_groupoid(self) -> FiniteGroupoid:
        hm_idn = [self.vid[self.g1.idn[o]] for o in range(self.g1.n_objs)]
        return FiniteGroupoid(
            self.objs, self.cells, self.s2, self.t2, self.hm, hm_idn, self.hinv
        )

    def __repr__(self) -> str:
        return (
            f"TwoGroupoid(objs={self.g1.n_objs}, arrs={self.g1.n_arrs}, "
            f"cells={self.n_cells})"
        )

    # -- validation ----------------------------------------------------------------

    def validate(self) -> None:
        g1 = self.g1
        for x in range(self.n_cells):
            if g1.src[self.l[x]] != g1.src[self.u[x]] or g1.tgt[self.l[x]] != g1.tgt[self.u[x]]:
                raise InvariantViolation("l and u of a 2-cell disagree on endpoints", self.cells[x])
        self.vertical_groupoid()
        self.horizontal_groupoid()
        for (a, b), c in self.hm.items():
            if self.l[c] != g1.comp[(self.l[a], self.l[b])]:
                raise InvariantViolation("l is not multiplicative for hm", (self.cells[a], self.cells[b]))
            if self.u[c] != g1.comp[(self.u[a], self.u[b])]:
                raise InvariantViolation("u is not multiplicative for hm", (self.cells[a], self.cells[b]))
        for (a, b), ab in g1.comp.items():
            if self.hm[(self.vid[a], self.vid[b])] != self.vid[ab]:
                raise InvariantViolation("vertical identities not functorial", (g1.arrs[a], g1.arrs[b]))
        # interchange: (a hm b) vm (c hm d) == (a vm c) hm (b vm d)
        vm_pairs_by_tgt: dict = {}
        for (b, d) in self.vm:
            vm_pairs_by_tgt.setdefault(self.t2[b], []).append((b, d))
        for (a, c) in self.vm:
            partners = vm_pairs_by_tgt.get(self.s2[a], ())
            for (b, d) in partners:
                left = self.vm[(self.hm[(a, b)], self.hm[(c, d)])]
                right = self.hm[(self.vm[(a, c)], self.vm[(b, d)])]
                if left != right:
                    raise InvariantViolation(
                        "interchange law fails",
                        (self.cells[a], self.cells[b], self.cells[c], self.cells[d]),
                    )


class CrossedModuleGpd:
    """A group bundle mapped into a groupoid, with a compatible right action.

    ``action[(x, gamma)]`` is defined when the fiber of x sits at
    tgt(gamma) and returns an element of the fiber at src(gamma).
    """

    def __init__(self, bundle: GroupBundle, gamma: FiniteGroupoid, rho: GroupoidMorphism,
                 action: dict, validate=True):
        self.bundle = bundle
        self.gamma = gamma
        self.rho = rho
        self.action = dict(action)
        if validate:
            self.validate()

    def act(self, x: int, g: int) -> int:
        return self.action[(x, g)]

    def validate(self) -> None:
        x_, g_ = self.bundle, self.gamma
        if x_.objs != g_.objs:
            raise InvariantViolation("bundle and groupoid have different objects", None)
        if self.rho.dom is not x_ or self.rho.cod is not g_:
            raise InvariantViolation("structure map has wrong endpoints", None)
        if not self.rho.is_identity_on_objects():
            raise InvariantViolation("structure map must fix objects", None)
        expected = {
            (x, g)
            for x in range(x_.n_arrs)
            for g in range(g_.n_arrs)
            if x_.src[x] == g_.tgt[g]
        }
        if set(self.action) != expected:
            raise InvariantViolation("action table has the wrong domain", None)
        for (x, g), y in self.action.items():
            if x_.src[y] != g_.src[g]:
                raise InvariantViolation("action lands in the wrong fiber", (x_.arrs[x], g_.arrs[g]))
        for o in range(g_.n_objs):
            e = x_.idn[o]
            for g in range(g_.n_arrs):
                if g_.tgt[g] != o:
                    continue
                if self.action[(e, g)] != x_.idn[g_.src[g]]:
                    raise InvariantViolation("action does not fix units", g_.arrs[g])
        for (x, g), y in self.action.items():
            for x2 in x_.loops_at(x_.src[x]):
                lhs = self.action[(x_.comp[(x, x2)], g)]
                rhs = x_.comp[(y, self.action[(x2, g)])]
                if lhs != rhs:
                    raise InvariantViolation(
                        "action is not by homomorphisms", (x_.arrs[x], x_.arrs[x2], g_.arrs[g])
                    )
        for x in range(x_.n_arrs):
            o = x_.src[x]
            if self.action[(x, g_.idn[o])] != x:
                raise InvariantViolation("unit arrow acts nontrivially", x_.arrs[x])
        for (x, g), y in self.action.items():
            for d in range(g_.n_arrs):
                if g_.tgt[d] != g_.src[g]:
                    continue
                gd = g_.comp[(g, d)]
                if self.action[(x, gd)] != self.action[(y, d)]:
                    raise InvariantViolation(
                        "action is not functorial", (x_.arrs[x], g_.arrs[g], g_.arrs[d])
                    )
        # conjugation compatibilities linking rho and the action
        for (x, g), y in self.action.items():
            lhs = self.rho.f1[y]
            rhs = g_.comp[(g_.comp[(g_.inv[g], self.rho.f1[x])], g)]
            if lhs != rhs:
                raise InvariantViolation(
                    "rho does not intertwine the action", (x_.arrs[x], g_.arrs[g])
                )
        for x in range(x_.n_arrs):
            for y in range(x_.n_arrs):
                if x_.src[x] != x_.src[y]:
                    continue
                lhs = self.action[(x, self.rho.f1[y])]
                rhs = x_.comp[(x_.comp[(x_.inv[y], x)], y)]
                if lhs != rhs:
                    raise InvariantViolation(
                        "inner action mismatch", (x_.arrs[x], x_.arrs[y])
                    )

    def __repr__(self) -> str:
        return f"CrossedModuleGpd(fibers={self.bundle.n_arrs}, arrows={self.gamma.n_arrs})"


class TwoMorphism:
    """A strict map of 2-groupoids: three level maps commuting with everything."""

    def __init__(self, dom: TwoGroupoid, cod: TwoGroupoid, f0, f1, f2, validate=True):
        self.dom = dom
        self.cod = cod
        self.f0 = tuple(f0)
        self.f1 = tuple(f1)
        self.f2 = tuple(f2)
        if validate:
            self.validate()

    def validate(self) -> None:
        d, c = self.dom, self.cod
        GroupoidMorphism(d.g1, c.g1, self.f0, self.f1)  # validates level 1
        for x in range(d.n_cells):
            if c.l[self.f2[x]] != self.f1[d.l[x]] or c.u[self.f2[x]] != self.f1[d.u[x]]:
                raise InvariantViolation("2-cell boundaries not preserved", d.cells[x])
        for a in range(d.g1.n_arrs):
            if self.f2[d.vid[a]] != c.vid[self.f1[a]]:
                raise InvariantViolation("vertical identities not preserved", d.g1.arrs[a])
        for (b, a), ba in d.vm.items():
            if c.vm[(self.f2[b], self.f2[a])] != self.f2[ba]:
                raise InvariantViolation("vm not preserved", (d.cells[b], d.cells[a]))
        for (a, b), ab in d.hm.items():
            if c.hm[(self.f2[a], self.f2[b])] != self.f2[ab]:
                raise InvariantViolation("hm not preserved", (d.cells[a], d.cells[b]))

    def level1(self) -> GroupoidMorphism:
        return GroupoidMorphism(self.dom.g1, self.cod.g1, self.f0, self.f1, validate=False)

    def compose_with(self, other: "TwoMorphism") -> "TwoMorphism":
        """self after other."""
        return TwoMorphism(
            other.dom,
            self.cod,
            tuple(self.f0[other.f0[o]] for o in range(other.dom.g1.n_objs)),
            tuple(self.f1[other.f1[a]] for a in range(other.dom.g1.n_arrs)),
            tuple(self.f2[other.f2[x]] for x in range(other.dom.n_cells)),
            validate=False,
        )

    def is_isomorphism(self) -> bool:
        return (
            len(set(self.f0)) == self.cod.g1.n_objs == self.dom.g1.n_objs
            and len(set(self.f1)) == self.cod.g1.n_arrs == self.dom.g1.n_arrs
            and len(set(self.f2)) == self.cod.n_cells == self.dom.n_cells
        )


def identity_two_morphism(t: TwoGroupoid) -> TwoMorphism:
    return TwoMorphism(
        t, t, range(t.g1.n_objs), range(t.g1.n_arrs), range(t.n_cells), validate=False
    )


# -- promotions and conversions ---------------------------------------------------


def as_two_groupoid(g: FiniteGroupoid) -> TwoGroupoid:
    """A 1-groupoid with only vertical identity 2-cells."""
    n = g.n_arrs
    vm = {(a, a): a for a in range(n)}
    hm = {(a, b): c for (a, b), c in g.comp.items()}
    return TwoGroupoid(g, g.arrs, range(n), range(n), vm, hm, range(n))


def crossed_module_of_groups(g: FiniteGroup, h: FiniteGroup, rho: GroupHom,
                             action: RightAction) -> CrossedModuleGpd:
    """Package a crossed module of plain groups over a single object."""
    from .groupoids import group_as_groupoid

    bundle = GroupBundle(
        ["*"],
        g.labels,
        [0] * g.order,
        [0] * g.order,
        {(a, b): g.mul(a, b) for a in g.elements() for b in g.elements()},
        [g.unit],
        g.inv,
    )
    gamma = group_as_groupoid(h)
    rho_m = GroupoidMorphism(bundle, gamma, [0], rho.val)
    act = {
        (x, hh): action(x, hh) for x in g.elements() for hh in h.elements()
    }
    return CrossedModuleGpd(bundle, gamma, rho_m, act)


def cm_to_two_groupoid(cm: CrossedModuleGpd) -> TwoGroupoid:
    """2-cells are composable pairs (x, gamma) with base(x) = tgt(gamma).

    l(x, gamma) = gamma, u(x, gamma) = rho(x)*gamma,
    hm: (x', g') o (x, g) = (x' * x^(g'^-1), g'*g),
    vm: (x', rho(x)g) o (x, g) = (x'x, g).
    """
    x_, g_ = cm.bundle, cm.gamma
    pairs = [
        (x, g)
        for x in range(x_.n_arrs)
        for g in range(g_.n_arrs)
        if x_.src[x] == g_.tgt[g]
    ]
    index = {p: i for i, p in enumerate(pairs)}
    labels = [(x_.arrs[x], g_.arrs[g]) for (x, g) in pairs]
    l = [g for (_x, g) in pairs]
    u = [g_.comp[(cm.rho.f1[x], g)] for (x, g) in pairs]
    vid = [index[(x_.idn[g_.tgt[g]], g)] for g in range(g_.n_arrs)]
    vm = {}
    for bi, (x2, g2) in enumerate(pairs):
        for ai, (x1, g1) in enumerate(pairs):
            if l[bi] == u[ai]:
                vm[(bi, ai)] = index[(x_.comp[(x2, x1)], g1)]
    hm = {}
    for ai, (x1, g1) in enumerate(pairs):
        for bi, (x2, g2) in enumerate(pairs):
            if g_.src[g1] == g_.tgt[g2]:
                moved = cm.action[(x2, g_.inv[g1])]
                hm[(ai, bi)] = index[(x_.comp[(x1, moved)], g_.comp[(g1, g2)])]
    return TwoGroupoid(g_, labels, l, u, vm, hm, vid)


def two_groupoid_to_cm(t: TwoGroupoid) -> CrossedModuleGpd:
    """Extract the crossed module: kernel cells, u as structure map, whisker action."""
    g1 = t.g1
    idn_set = set(g1.idn)
    kernel = sorted(x for x in range(t.n_cells) if t.l[x] in idn_set)
    pos = {x: i for i, x in enumerate(kernel)}
    base_of = [g1.src[t.l[x]] for x in kernel]
    bundle = GroupBundle(
        g1.objs,
        [t.cells[x] for x in kernel],
        base_of,
        base_of,
        {
            (pos[a], pos[b]): pos[t.hm[(a, b)]]
            for a in kernel
            for b in kernel
            if t.s2[a] == t.s2[b]
        },
        [pos[t.vid[g1.idn[o]]] for o in range(g1.n_objs)],
        [pos[t.hinv[x]] for x in kernel],
    )
    rho = GroupoidMorphism(bundle, g1, range(g1.n_objs), [t.u[x] for x in kernel])
    action = {}
    for x in kernel:
        for h in range(g1.n_arrs):
            if g1.tgt[h] != g1.src[t.l[x]]:
                continue
            moved = t.hm[(t.hm[(t.vid[g1.inv[h]], x)], t.vid[h])]
            action[(pos[x], h)] = pos[moved]
    return CrossedModuleGpd(bundle, g1, rho, action)


def cm_roundtrip_iso(cm: CrossedModuleGpd):
    """Canonical identification of cm with two_groupoid_to_cm(cm_to_two_groupoid(cm)).

    Returns (bundle_map, gamma_map) as index tuples; raises if either fails
    to be a bijective structure-preserving match.
    """
    t = cm_to_two_groupoid(cm)
    back = two_groupoid_to_cm(t)
    x_, g_ = cm.bundle, cm.gamma
    bundle_map = []
    for x in range(x_.n_arrs):
        o = x_.src[x]
        cell = t.cell_index((x_.arrs[x], g_.arrs[g_.idn[o]]))
        bundle_map.append(back.bundle.arr_index(t.cells[cell]))
    gamma_map = list(range(g_.n_arrs))
    GroupoidMorphism(x_, back.bundle, range(x_.n_objs), bundle_map)  # validates
    if len(set(bundle_map)) != back.bundle.n_arrs:
        raise InvariantViolation("kernel comparison not bijective", None)
    for (x, g), y in cm.action.items():
        if back.action[(bundle_map[x], g)] != bundle_map[y]:
            raise InvariantViolation("actions disagree after the round trip", (x_.arrs[x], g_.arrs[g]))
    for x in range(x_.n_arrs):
        if back.rho.f1[bundle_map[x]] != cm.rho.f1[x]:
            raise InvariantViolation("structure maps disagree after the round trip", x_.arrs[x])
    return bundle_map, gamma_map


def two_groupoid_roundtrip_iso(t: TwoGroupoid) -> TwoMorphism:
    """Canonical isomorphism cm_to_two_groupoid(two_groupoid_to_cm(t)) -> t.

    Sends the pair (x, gamma) to x hm vid(gamma).
    """
    cm = two_groupoid_to_cm(t)
    t2 = cm_to_two_groupoid(cm)
    f2 = []
    for (xl, gl) in t2.cells:
        x = t.cell_index(xl)
        g = t.g1.arr_index(gl)
        f2.append(t.hm[(x, t.vid[g])])
    tm = TwoMorphism(t2, t, range(t.g1.n_objs), range(t.g1.n_arrs), f2)
    if not tm.is_isomorphism():
        raise InvariantViolation("round trip is not bijective", None)
    return tm


def aut_inner_two_group(g: FiniteGroup, cap: Optional[int] = None):
    """The 2-group of g acting on itself: kernel g, arrows Aut(g).

    Returns (two_group, crossed_module, aut_group, right_action, inner).
    The action is x^phi = phi^-1(x) and the structure map sends x to
    conjugation by x.
    """
    from .groups import automorphism_group, inner_hom

    aut, action = automorphism_group(g, cap)
    inner = inner_hom(g, aut)
    cm = crossed_module_of_groups(g, aut, inner, action)
    return cm_to_two_groupoid(cm), cm, aut, action, inner


def one_kernel_two_group(a: FiniteGroup):
    """The 2-group [A -> 1]: one object, one arrow, cells the group a."""
    from .groups import cyclic_group, make_hom, RightAction

    one = cyclic_group(1)
    rho = make_hom(a, one, [0] * a.order)
    act = RightAction(a, one, tuple((x,) for x in a.elements()))
    cm = crossed_module_of_groups(a, one, rho, act)
    return cm_to_two_groupoid(cm), cm


# -- pullbacks and the 2-level Morita check ------------------------------------------


def pullback_two_groupoid(delta: TwoGroupoid, m_objects: Sequence, f: Sequence[int]):
    """Pull back along a surjection onto the objects; levels become triples."""
    from .groupoids import pullback_groupoid

    f = tuple(f)
    pb1, proj1 = pullback_groupoid(delta.g1, m_objects, f)
    m_index = {m: i for i, m in enumerate(m_objects)}
    cells = [
        (m_objects[m], delta.cells[x], m_objects[n])
        for m in range(len(m_objects))
        for x in range(delta.n_cells)
        for n in range(len(m_objects))
        if delta.s2[x] == f[m] and delta.t2[x] == f[n]
    ]
    index = {c: i for i, c in enumerate(cells)}

    def arr_of(m, a, n):
        return pb1.arr_index((m, delta.g1.arrs[a], n))

    l = [arr_of(m, delta.l[delta.cell_index(x)], n) for (m, x, n) in cells]
    u = [arr_of(m, delta.u[delta.cell_index(x)], n) for (m, x, n) in cells]
    vid = []
    for t in range(pb1.n_arrs):
        (m, g, n) = pb1.arrs[t]
        vid.append(index[(m, delta.cells[delta.vid[delta.g1.arr_index(g)]], n)])
    vm = {}
    hm = {}
    for bi, (m1, x1, n1) in enumerate(cells):
        xi1 = delta.cell_index(x1)
        for ai, (m2, x2, n2) in enumerate(cells):
            xi2 = delta.cell_index(x2)
            if m1 == m2 and n1 == n2 and delta.l[xi1] == delta.u[xi2]:
                vm[(bi, ai)] = index[(m1, delta.cells[delta.vm[(xi1, xi2)]], n1)]
            if m1 == n2:
                hm[(bi, ai)] = index[(m2, delta.cells[delta.hm[(xi1, xi2)]], n1)]
    pb = TwoGroupoid(pb1, cells, l, u, vm, hm, vid)
    proj = TwoMorphism(
        pb,
        delta,
        f,
        [delta.g1.arr_index(g) for (_m, g, _n) in pb1.arrs],
        [delta.cell_index(x) for (_m, x, _n) in cells],
    )
    return pb, proj


def is_morita_2(phi: TwoMorphism) -> MoritaResult:
    """Objects onto, arrows onto the pullback, 2-cells a pullback-level bijection.

    Factor phi through the pullback along its object map; the 1-arrow map
    must be surjective and the square of vertical groupoids must pass the
    1-level Morita check.
    """
    d, c = phi.dom, phi.cod
    hit = set(phi.f0)
    if hit != set(range(c.g1.n_objs)):
        missing = next(c.g1.objs[o] for o in range(c.g1.n_objs) if o not in hit)
        return MoritaResult(False, missing, "object not hit")
    pb, _proj = pullback_two_groupoid(c, d.g1.objs, phi.f0)
    arrow_map = [
        pb.g1.arr_index((d.g1.objs[d.g1.src[a]], c.g1.arrs[phi.f1[a]], d.g1.objs[d.g1.tgt[a]]))
        for a in range(d.g1.n_arrs)
    ]
    hit_arrows = set(arrow_map)
    if hit_arrows != set(range(pb.g1.n_arrs)):
        missing = next(
            pb.g1.arrs[t] for t in range(pb.g1.n_arrs) if t not in hit_arrows
        )
        return MoritaResult(False, missing, "arrow not hit in the pullback")
    cell_map = [
        pb.cell_index((d.g1.objs[d.s2[x]], c.cells[phi.f2[x]], d.g1.objs[d.t2[x]]))
        for x in range(d.n_cells)
    ]
    try:
        square = GroupoidMorphism(
            d.vertical_groupoid(), pb.vertical_groupoid(), arrow_map, cell_map
        )
    except InvariantViolation as exc:
        return MoritaResult(False, exc.witness, "vertical square not a morphism")
    return is_morita_1(square)


# -- natural 2-transformations ----------------------------------------------------


class Nat2Witness:
    """phi: objects -> cod 1-arrows, psi: arrows -> cod 2-cells."""

    def __init__(self, phi: tuple, psi: tuple):
        self.phi = phi
        self.psi = psi

    def __repr__(self) -> str:
        return f"Nat2Witness(phi={self.phi}, psi={self.psi})"


def check_nat2(f: TwoMorphism, g: TwoMorphism, phi: Sequence[int], psi: Sequence[int]) -> bool:
    """Verify the two conjugation identities of a natural 2-transformation."""
    d, c = f.dom, f.cod
    g1c = c.g1
    for m in range(d.g1.n_objs):
        a = phi[m]
        if g1c.src[a] != f.f0[m] or g1c.tgt[a] != g.f0[m]:
            return False
    for j in range(d.g1.n_arrs):
        x = psi[j]
        want_l = g1c.comp[(phi[d.g1.tgt[j]], f.f1[j])]
        want_u = g1c.comp[(g.f1[j], phi[d.g1.src[j]])]
        if c.l[x] != want_l or c.u[x] != want_u:
            return False
    # compatibility with 2-cells
    for x in range(d.n_cells):
        lhs = c.vm[(
            c.hm[(g.f2[x], c.vid[phi[d.s2[x]]])],
            psi[d.l[x]],
        )]
        rhs = c.vm[(
            psi[d.u[x]],
            c.hm[(c.vid[phi[d.t2[x]]], f.f2[x])],
        )]
        if lhs != rhs:
            return False
    # compatibility with composition of 1-arrows
    for (j, i), ji in d.g1.comp.items():
        lhs = psi[ji]
        rhs = c.vm[(
            c.hm[(c.vid[g.f1[j]], psi[i])],
            c.hm[(psi[j], c.vid[f.f1[i]])],
        )]
        if lhs != rhs:
            return False
    return True


def nat2_search(f: TwoMorphism, g: TwoMorphism, budget: Optional[int] = None) -> Optional[Nat2Witness]:
    """Exhaustive search for a natural 2-transformation from f to g.

    Candidates are tried identity-first, so nat2_search(f, f) returns the
    identity witness.  Raises BudgetExceeded when the enumeration would
    visit more combinations than the budget allows; returns None only
    after exhausting the space.
    """
    if f.dom is not g.dom or f.cod is not g.cod:
        raise InvariantViolation("morphisms must share source and target", None)
    limit = config.cap(config.NAT2_BUDGET) if budget is None else budget
    d, c = f.dom, f.cod

    phi_candidates = []
    for m in range(d.g1.n_objs):
        opts = c.g1.hom(f.f0[m], g.f0[m])
        if not opts:
            return None
        e = c.g1.idn[f.f0[m]] if f.f0[m] == g.f0[m] else None
        phi_candidates.append(sorted(opts, key=lambda a: (a != e, a)))

    steps = 0
    for phi in product(*phi_candidates):
        psi_candidates = []
        feasible = True
        for j in range(d.g1.n_arrs):
            want_l = c.g1.comp[(phi[d.g1.tgt[j]], f.f1[j])]
            want_u = c.g1.comp[(g.f1[j], phi[d.g1.src[j]])]
            fib = c.fiber(want_l, want_u)
            if not fib:
                feasible = False
                break
            vid_cell = c.vid[want_l] if want_l == want_u else None
            psi_candidates.append(sorted(fib, key=lambda x: (x != vid_cell, x)))
        if not feasible:
            steps += 1
            if steps > limit:
                raise BudgetExceeded("2-transformation search budget", limit)
            continue
        for psi in product(*psi_candidates):
            steps += 1
            if steps > limit:
                raise BudgetExceeded("2-transformation search budget", limit)
            if check_nat2(f, g, phi, psi):
                return Nat2Witness(tuple(phi), tuple(psi))
    return None


def invert_nat2(f: TwoMorphism, g: TwoMorphism, w: Nat2Witness) -> Nat2Witness:
    """Turn a witness for (f, g) into one for (g, f) by inverting the data."""
    d, c = f.dom, f.cod
    phi = tuple(c.g1.inv[a] for a in w.phi)
    psi = []
    for j in range(d.g1.n_arrs):
        x = c.vinv[w.psi[j]]
        x = c.hm[(c.vid[c.g1.inv[w.phi[d.g1.tgt[j]]]], x)]
        x = c.hm[(x, c.vid[c.g1.inv[w.phi[d.g1.src[j]]]])]
        psi.append(x)
    return Nat2Witness(phi, tuple(psi))
