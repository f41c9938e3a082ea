"""Finite 1-groupoids with explicit composition tables.

Composition is right-to-left throughout the package: ``a*b`` is defined iff
src(a) = tgt(b), and then src(a*b) = src(b), tgt(a*b) = tgt(a).  Arrows and
objects are opaque labels; all structure maps are index tables.
"""

from __future__ import annotations

from typing import Hashable, Optional, Sequence

from . import config
from .errors import (
    CapExceeded,
    InvariantViolation,
    NoInverse,
    NotACover,
    NotAssociative,
    NotInjective,
    NotNormal,
    NotSurjective,
    NoUnit,
)
from .groups import FiniteGroup, make_group


class FiniteGroupoid:
    """Objects, arrows, and a partial composition table.

    ``comp`` maps index pairs (a, b) with src(a) = tgt(b) to the index of
    a*b.  Instances validate on construction and are immutable afterwards.
    """

    def __init__(self, objs, arrs, src, tgt, comp, idn, inv, validate: bool = True):
        self.objs = tuple(objs)
        self.arrs = tuple(arrs)
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        self.comp = dict(comp)
        self.idn = tuple(idn)
        self.inv = tuple(inv)
        self._obj_index = {o: i for i, o in enumerate(self.objs)}
        self._arr_index = {a: i for i, a in enumerate(self.arrs)}
        self._hom: Optional[dict] = None
        self._into: Optional[dict] = None
        if validate:
            self.validate()

    # -- basic queries ---------------------------------------------------------

    @property
    def n_objs(self) -> int:
        return len(self.objs)

    @property
    def n_arrs(self) -> int:
        return len(self.arrs)

    def obj_index(self, label) -> int:
        return self._obj_index[label]

    def arr_index(self, label) -> int:
        return self._arr_index[label]

    def compose(self, a: int, b: int) -> int:
        return self.comp[(a, b)]

    def hom(self, m: int, n: int) -> tuple:
        """Arrows from object m to object n."""
        if self._hom is None:
            table: dict = {}
            for a in range(self.n_arrs):
                table.setdefault((self.src[a], self.tgt[a]), []).append(a)
            self._hom = {k: tuple(v) for k, v in table.items()}
        return self._hom.get((m, n), ())

    def arrows_into(self, n: int) -> tuple:
        if self._into is None:
            table: dict = {}
            for a in range(self.n_arrs):
                table.setdefault(self.tgt[a], []).append(a)
            self._into = {k: tuple(v) for k, v in table.items()}
        return self._into.get(n, ())

    def is_bundle(self) -> bool:
        return all(self.src[a] == self.tgt[a] for a in range(self.n_arrs))

    def loops_at(self, o: int) -> tuple:
        return tuple(a for a in self.hom(o, o))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(objs={self.n_objs}, arrs={self.n_arrs})"

    # -- validation -------------------------------------------------------------

    def validate(self) -> None:
        nA, nO = self.n_arrs, self.n_objs
        if len(set(self.arrs)) != nA or len(set(self.objs)) != nO:
            raise InvariantViolation("duplicate labels", None)
        for a in range(nA):
            if not (0 <= self.src[a] < nO and 0 <= self.tgt[a] < nO):
                raise InvariantViolation("src/tgt out of range", self.arrs[a])
        for o in range(nO):
            e = self.idn[o]
            if self.src[e] != o or self.tgt[e] != o:
                raise NoUnit("identity not a loop at its object", self.objs[o])
        for (a, b), c in self.comp.items():
            if self.src[a] != self.tgt[b]:
                raise InvariantViolation(
                    "composition defined on a non-composable pair",
                    (self.arrs[a], self.arrs[b]),
                )
            if self.src[c] != self.src[b] or self.tgt[c] != self.tgt[a]:
                raise InvariantViolation(
                    "composite has wrong endpoints", (self.arrs[a], self.arrs[b])
                )
        for a in range(nA):
            for b in range(nA):
                if self.src[a] == self.tgt[b] and (a, b) not in self.comp:
                    raise InvariantViolation(
                        "composable pair missing from the table",
                        (self.arrs[a], self.arrs[b]),
                    )
        for a in range(nA):
            if self.comp[(a, self.idn[self.src[a]])] != a:
                raise NoUnit("right unit fails", self.arrs[a])
            if self.comp[(self.idn[self.tgt[a]], a)] != a:
                raise NoUnit("left unit fails", self.arrs[a])
            ia = self.inv[a]
            if self.src[ia] != self.tgt[a] or self.tgt[ia] != self.src[a]:
                raise NoInverse("inverse has wrong endpoints", self.arrs[a])
            if self.comp[(a, ia)] != self.idn[self.tgt[a]]:
                raise NoInverse("a * inv(a) is not an identity", self.arrs[a])
            if self.comp[(ia, a)] != self.idn[self.src[a]]:
                raise NoInverse("inv(a) * a is not an identity", self.arrs[a])
        for (a, b) in self.comp:
            ab = self.comp[(a, b)]
            for c in self.arrows_into(self.src[b]):
                if self.comp[(ab, c)] != self.comp[(a, self.comp[(b, c)])]:
                    raise NotAssociative(
                        "associativity fails",
                        (self.arrs[a], self.arrs[b], self.arrs[c]),
                    )


class GroupBundle(FiniteGroupoid):
    """A groupoid all of whose arrows are loops; fibers are groups."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        for a in range(self.n_arrs):
            if self.src[a] != self.tgt[a]:
                raise InvariantViolation("bundle arrow is not a loop", self.arrs[a])

    def fiber_group(self, o: int) -> tuple[FiniteGroup, tuple]:
        """The fiber over object o as a FiniteGroup, plus its arrow indices."""
        members = self.loops_at(o)
        pos = {a: i for i, a in enumerate(members)}
        table = [
            [self.arrs[self.comp[(a, b)]] for b in members] for a in members
        ]
        return make_group(table, [self.arrs[a] for a in members]), members


class GroupoidMorphism:
    """A functor: object map f0 and arrow map f1 preserving all structure."""

    def __init__(self, dom: FiniteGroupoid, cod: FiniteGroupoid, f0, f1, validate: bool = True):
        self.dom = dom
        self.cod = cod
        self.f0 = tuple(f0)
        self.f1 = tuple(f1)
        if validate:
            self.validate()

    def validate(self) -> None:
        d, c = self.dom, self.cod
        for a in range(d.n_arrs):
            fa = self.f1[a]
            if c.src[fa] != self.f0[d.src[a]] or c.tgt[fa] != self.f0[d.tgt[a]]:
                raise InvariantViolation("endpoints not preserved", d.arrs[a])
            if self.f1[d.inv[a]] != c.inv[fa]:
                raise InvariantViolation("inverses not preserved", d.arrs[a])
        for o in range(d.n_objs):
            if self.f1[d.idn[o]] != c.idn[self.f0[o]]:
                raise InvariantViolation("identities not preserved", d.objs[o])
        for (a, b), ab in d.comp.items():
            if c.comp[(self.f1[a], self.f1[b])] != self.f1[ab]:
                raise InvariantViolation(
                    "composition not preserved", (d.arrs[a], d.arrs[b])
                )

    def is_identity_on_objects(self) -> bool:
        return self.dom.objs == self.cod.objs and all(
            self.f0[o] == o for o in range(self.dom.n_objs)
        )

    def compose_with(self, other: "GroupoidMorphism") -> "GroupoidMorphism":
        """self after other (other.cod must be self.dom)."""
        return GroupoidMorphism(
            other.dom,
            self.cod,
            tuple(self.f0[other.f0[o]] for o in range(other.dom.n_objs)),
            tuple(self.f1[other.f1[a]] for a in range(other.dom.n_arrs)),
            validate=False,
        )


def find_inverses(labels, src, tgt, comp, idn) -> list[int]:
    """Locate two-sided inverses in a composition table by one scan."""
    n = len(labels)
    inv: list = [None] * n
    for (a, b), c in comp.items():
        if c == idn[tgt[a]] and comp.get((b, a)) == idn[src[a]]:
            inv[a] = b
    missing = next((a for a in range(n) if inv[a] is None), None)
    if missing is not None:
        raise NoInverse("no inverse in the table", labels[missing])
    return inv


def make_groupoid(objs, arrows, comp_pairs, identities, validate: bool = True) -> FiniteGroupoid:
    """Assemble a groupoid from labelled data.

    ``arrows`` is a list of (label, src_label, tgt_label); ``comp_pairs``
    lists (a_label, b_label, ab_label) for the defined compositions;
    ``identities`` maps object labels to arrow labels.  Inverses are found
    by scanning the table.
    """
    objs = list(objs)
    obj_index = {o: i for i, o in enumerate(objs)}
    labels = [a[0] for a in arrows]
    arr_index = {a: i for i, a in enumerate(labels)}
    src = [obj_index[a[1]] for a in arrows]
    tgt = [obj_index[a[2]] for a in arrows]
    comp = {
        (arr_index[a], arr_index[b]): arr_index[ab] for a, b, ab in comp_pairs
    }
    idn = [arr_index[identities[o]] for o in objs]
    inv = find_inverses(labels, src, tgt, comp, idn)
    return FiniteGroupoid(objs, labels, src, tgt, comp, idn, inv, validate=validate)


# -- stock groupoids -------------------------------------------------------------


def group_as_groupoid(g: FiniteGroup) -> FiniteGroupoid:
    """A group as a one-object groupoid; arrow order matches element order."""
    comp = {
        (a, b): g.mul(a, b) for a in g.elements() for b in g.elements()
    }
    return FiniteGroupoid(
        ["*"], g.labels, [0] * g.order, [0] * g.order, comp, [g.unit], g.inv
    )


def trivial_groupoid(points: Sequence[Hashable]) -> FiniteGroupoid:
    """Only identity arrows: the set X seen as the groupoid X over X."""
    n = len(points)
    return FiniteGroupoid(
        points,
        [("id", x) for x in points],
        range(n),
        range(n),
        {(i, i): i for i in range(n)},
        range(n),
        range(n),
    )


def pair_groupoid(points: Sequence[Hashable]) -> FiniteGroupoid:
    """Exactly one arrow (m, n) from m to n for every ordered pair."""
    n = len(points)
    labels = [(points[m], points[k]) for m in range(n) for k in range(n)]
    index = {lab: i for i, lab in enumerate(labels)}
    src = [m for m in range(n) for _ in range(n)]
    tgt = [k for _ in range(n) for k in range(n)]
    comp = {}
    for a, (m1, k1) in enumerate(zip(src, tgt)):
        for b, (m2, k2) in enumerate(zip(src, tgt)):
            if m1 == k2:
                comp[(a, b)] = index[(points[m2], points[k1])]
    idn = [index[(points[m], points[m])] for m in range(n)]
    inv = [index[(points[k], points[m])] for (m, k) in zip(src, tgt)]
    return FiniteGroupoid(points, labels, src, tgt, comp, idn, inv)


def trivial_bundle(points: Sequence[Hashable], g: FiniteGroup) -> GroupBundle:
    """Fiber g over every point; arrows are pairs (point, group element)."""
    n = len(points)
    labels = [(points[m], g.labels[x]) for m in range(n) for x in g.elements()]
    index = {lab: i for i, lab in enumerate(labels)}
    src = [m for m in range(n) for _ in g.elements()]
    comp = {}
    for m in range(n):
        for x in g.elements():
            for y in g.elements():
                comp[
                    (index[(points[m], g.labels[x])], index[(points[m], g.labels[y])])
                ] = index[(points[m], g.labels[g.mul(x, y)])]
    idn = [index[(points[m], g.labels[g.unit])] for m in range(n)]
    inv = [
        index[(points[m], g.labels[g.inv[x]])]
        for m in range(n)
        for x in g.elements()
    ]
    return GroupBundle(points, labels, src, list(src), comp, idn, inv)


def product_with_group(base: FiniteGroupoid, g: FiniteGroup) -> FiniteGroupoid:
    """base x g: arrows are pairs, composed componentwise."""
    labels = [
        (base.arrs[a], g.labels[x]) for a in range(base.n_arrs) for x in g.elements()
    ]
    index = {lab: i for i, lab in enumerate(labels)}
    src = [base.src[a] for a in range(base.n_arrs) for _ in g.elements()]
    tgt = [base.tgt[a] for a in range(base.n_arrs) for _ in g.elements()]
    comp = {}
    for (a, b), ab in base.comp.items():
        for x in g.elements():
            for y in g.elements():
                comp[
                    (
                        index[(base.arrs[a], g.labels[x])],
                        index[(base.arrs[b], g.labels[y])],
                    )
                ] = index[(base.arrs[ab], g.labels[g.mul(x, y)])]
    idn = [index[(base.arrs[base.idn[o]], g.labels[g.unit])] for o in range(base.n_objs)]
    inv = [
        index[(base.arrs[base.inv[a]], g.labels[g.inv[x]])]
        for a in range(base.n_arrs)
        for x in g.elements()
    ]
    return FiniteGroupoid(base.objs, labels, src, tgt, comp, idn, inv)


def cech_groupoid(points: Sequence[Hashable], cover: Sequence[Sequence[Hashable]]) -> FiniteGroupoid:
    """The cover groupoid: objects (x, i) for x in U_i, one arrow (x,i)<-(x,j).

    The arrow labelled (x, i, j) runs from (x, j) to (x, i), and
    (x,i,j) * (x,j,k) = (x,i,k).
    """
    points = list(points)
    opens = [list(u) for u in cover]
    covered = {x for u in opens for x in u}
    missing = [x for x in points if x not in covered]
    if missing:
        raise NotACover("points not covered", tuple(missing))
    objs = [(x, i) for i, u in enumerate(opens) for x in points if x in u]
    obj_index = {o: i for i, o in enumerate(objs)}
    labels = []
    for i, ui in enumerate(opens):
        for j, uj in enumerate(opens):
            for x in points:
                if x in ui and x in uj:
                    labels.append((x, i, j))
    index = {lab: i for i, lab in enumerate(labels)}
    src = [obj_index[(x, j)] for (x, i, j) in labels]
    tgt = [obj_index[(x, i)] for (x, i, j) in labels]
    comp = {}
    for a, (x, i, j) in enumerate(labels):
        for b, (y, j2, k) in enumerate(labels):
            if x == y and j == j2:
                comp[(a, b)] = index[(x, i, k)]
    idn = [index[(x, i, i)] for (x, i) in objs]
    inv = [index[(x, j, i)] for (x, i, j) in labels]
    return FiniteGroupoid(objs, labels, src, tgt, comp, idn, inv)


def cech_to_trivial(cech: FiniteGroupoid, points: Sequence[Hashable]) -> GroupoidMorphism:
    """The canonical Morita morphism from a cover groupoid to X over X."""
    triv = trivial_groupoid(points)
    f0 = [points.index(x) for (x, _i) in cech.objs]
    f1 = [points.index(lab[0]) for lab in cech.arrs]  # identity arrow at x
    return GroupoidMorphism(cech, triv, f0, f1)


def pullback_groupoid(delta: FiniteGroupoid, m_objects: Sequence[Hashable], f: Sequence[int]):
    """Pull back along a surjection f: M -> objects(delta).

    Arrows are triples (m, gamma, n) with src(gamma) = f(m) and
    tgt(gamma) = f(n); the triple runs from m to n.  Returns the pullback
    and the canonical projection morphism to delta.
    """
    f = tuple(f)
    if set(f) != set(range(delta.n_objs)):
        missing = [delta.objs[o] for o in range(delta.n_objs) if o not in set(f)]
        raise NotSurjective("object map misses objects", tuple(missing))
    nm = len(m_objects)
    labels = [
        (m_objects[m], delta.arrs[g], m_objects[n])
        for m in range(nm)
        for g in range(delta.n_arrs)
        for n in range(nm)
        if delta.src[g] == f[m] and delta.tgt[g] == f[n]
    ]
    index = {lab: i for i, lab in enumerate(labels)}
    m_index = {m: i for i, m in enumerate(m_objects)}
    src = [m_index[lab[0]] for lab in labels]
    tgt = [m_index[lab[2]] for lab in labels]
    comp = {}
    for a, (m1, g1, n1) in enumerate(labels):
        for b, (m2, g2, n2) in enumerate(labels):
            if m1 == n2:
                comp[(a, b)] = index[
                    (m2, delta.arrs[delta.comp[(delta.arr_index(g1), delta.arr_index(g2))]], n1)
                ]
    idn = [
        index[(m_objects[m], delta.arrs[delta.idn[f[m]]], m_objects[m])]
        for m in range(nm)
    ]
    inv = [
        index[(lab[2], delta.arrs[delta.inv[delta.arr_index(lab[1])]], lab[0])]
        for lab in labels
    ]
    pb = FiniteGroupoid(m_objects, labels, src, tgt, comp, idn, inv)
    proj = GroupoidMorphism(
        pb, delta, f, [delta.arr_index(lab[1]) for lab in labels]
    )
    return pb, proj


# -- Morita check ------------------------------------------------------------------


class MoritaResult:
    """Outcome of a Morita check; truthy iff the morphism passed."""

    def __init__(self, ok: bool, witness=None, reason: str = ""):
        self.ok = ok
        self.witness = witness
        self.reason = reason

    def __bool__(self) -> bool:
        return self.ok

    def __repr__(self) -> str:
        return "MoritaResult(ok)" if self.ok else f"MoritaResult({self.reason}: {self.witness!r})"


def is_morita_1(phi: GroupoidMorphism) -> MoritaResult:
    """Surjective on objects and bijective onto the pullback's arrows.

    The induced map sends a to (src(a), phi(a), tgt(a)); it must hit every
    triple (m, gamma, n) with s(gamma) = f0(m), t(gamma) = f0(n) exactly
    once.
    """
    d, c = phi.dom, phi.cod
    hit = set(phi.f0)
    if hit != set(range(c.n_objs)):
        missing = next(c.objs[o] for o in range(c.n_objs) if o not in hit)
        return MoritaResult(False, missing, "object not hit")
    seen: dict = {}
    for a in range(d.n_arrs):
        key = (d.src[a], phi.f1[a], d.tgt[a])
        if key in seen:
            return MoritaResult(
                False, (d.arrs[seen[key]], d.arrs[a]), "arrow map not injective"
            )
        seen[key] = a
    total = 0
    for m in range(d.n_objs):
        for n in range(d.n_objs):
            for g in c.hom(phi.f0[m], phi.f0[n]):
                total += 1
                if (m, g, n) not in seen:
                    return MoritaResult(
                        False,
                        (d.objs[m], c.arrs[g], d.objs[n]),
                        "arrow fiber not hit",
                    )
    if total != d.n_arrs:
        return MoritaResult(False, (total, d.n_arrs), "arrow counts differ")
    return MoritaResult(True)


# -- quotient by an embedded normal bundle --------------------------------------------


def quotient_by_bundle(tg: FiniteGroupoid, j: GroupoidMorphism):
    """Quotient arrows by a ~ a * j(k), k in the embedded group bundle.

    ``j`` must be injective over the identity on objects and its image
    closed under conjugation by every arrow.  Returns the quotient and the
    projection morphism.
    """
    bundle = j.dom
    if not bundle.is_bundle():
        raise InvariantViolation("kernel is not a group bundle", None)
    if not j.is_identity_on_objects():
        raise InvariantViolation("embedding must fix objects", None)
    if len(set(j.f1)) != bundle.n_arrs:
        dup = next(
            (bundle.arrs[a], bundle.arrs[b])
            for a in range(bundle.n_arrs)
            for b in range(a)
            if j.f1[a] == j.f1[b]
        )
        raise NotInjective("embedding not injective", dup)
    image = set(j.f1)
    for a in range(tg.n_arrs):
        for k in bundle.loops_at(tg.src[a]):
            conj = tg.comp[(tg.comp[(a, j.f1[k])], tg.inv[a])]
            if conj not in image:
                raise NotNormal(
                    "conjugate leaves the embedded bundle",
                    (tg.arrs[a], bundle.arrs[k]),
                )
    # orbits of right multiplication by the embedded fibers
    class_of = {}
    reps = []
    for a in range(tg.n_arrs):
        if a in class_of:
            continue
        orbit = sorted(
            tg.comp[(a, j.f1[k])] for k in bundle.loops_at(tg.src[a])
        )
        rep = orbit[0]
        reps.append(rep)
        for x in orbit:
            class_of[x] = rep
    reps.sort()
    rep_index = {r: i for i, r in enumerate(reps)}
    labels = [("cls", tg.arrs[r]) for r in reps]
    src = [tg.src[r] for r in reps]
    tgt = [tg.tgt[r] for r in reps]
    comp = {}
    for i, a in enumerate(reps):
        for k, b in enumerate(reps):
            if tg.src[a] == tg.tgt[b]:
                comp[(i, k)] = rep_index[class_of[tg.comp[(a, b)]]]
    idn = [rep_index[class_of[tg.idn[o]]] for o in range(tg.n_objs)]
    inv = [rep_index[class_of[tg.inv[r]]] for r in reps]
    q = FiniteGroupoid(tg.objs, labels, src, tgt, comp, idn, inv)
    proj = GroupoidMorphism(
        tg, q, range(tg.n_objs), [rep_index[class_of[a]] for a in range(tg.n_arrs)]
    )
    return q, proj


def sub_groupoid(g: FiniteGroupoid, arrow_subset: Sequence[int]) -> FiniteGroupoid:
    """The subgroupoid on all objects and the given arrows (must be closed)."""
    members = sorted(set(arrow_subset))
    pos = {a: i for i, a in enumerate(members)}
    for o in range(g.n_objs):
        if g.idn[o] not in pos:
            raise InvariantViolation("identity missing from subgroupoid", g.objs[o])
    for a in members:
        if g.inv[a] not in pos:
            raise InvariantViolation("not closed under inverse", g.arrs[a])
        for b in members:
            if g.src[a] == g.tgt[b] and g.comp[(a, b)] not in pos:
                raise InvariantViolation(
                    "not closed under composition", (g.arrs[a], g.arrs[b])
                )
    comp = {
        (pos[a], pos[b]): pos[c]
        for (a, b), c in g.comp.items()
        if a in pos and b in pos
    }
    return FiniteGroupoid(
        g.objs,
        [g.arrs[a] for a in members],
        [g.src[a] for a in members],
        [g.tgt[a] for a in members],
        comp,
        [pos[g.idn[o]] for o in range(g.n_objs)],
        [pos[g.inv[a]] for a in members],
    )


# -- isomorphism search ---------------------------------------------------------------


def _object_profile(g: FiniteGroupoid, o: int):
    loops = len(g.hom(o, o))
    out = sum(len(g.hom(o, n)) for n in range(g.n_objs))
    into = sum(len(g.hom(n, o)) for n in range(g.n_objs))
    return (loops, out, into)


def groupoid_iso_search(g: FiniteGroupoid, h: FiniteGroupoid, cap: Optional[int] = None) -> Optional[GroupoidMorphism]:
    """Backtracking isomorphism search with degree-profile pruning.

    Returns an explicit isomorphism or None.  Deterministic: candidates are
    tried in index order.
    """
    limit = config.cap(config.ISO_SEARCH_CAP) if cap is None else cap
    if max(g.n_arrs, h.n_arrs) > limit:
        raise CapExceeded("isomorphism search cap", (g.n_arrs, h.n_arrs, limit))
    if g.n_objs != h.n_objs or g.n_arrs != h.n_arrs:
        return None
    gp = [_object_profile(g, o) for o in range(g.n_objs)]
    hp = [_object_profile(h, o) for o in range(h.n_objs)]
    if sorted(gp) != sorted(hp):
        return None

    f0: list = [None] * g.n_objs
    used0 = [False] * h.n_objs

    def arrows_ok(f0_final) -> Optional[list]:
        f1: list = [None] * g.n_arrs
        used1 = [False] * h.n_arrs

        order = sorted(range(g.n_arrs), key=lambda a: (g.src[a], g.tgt[a], a))

        def extend(i: int) -> bool:
            if i == len(order):
                return True
            a = order[i]
            if f1[a] is not None:
                return extend(i + 1)
            for b in h.hom(f0_final[g.src[a]], f0_final[g.tgt[a]]):
                if used1[b]:
                    continue
                if (g.idn[g.src[a]] == a) != (h.idn[f0_final[g.src[a]]] == b):
                    continue
                f1[a] = b
                used1[b] = True
                ok = True
                inv_a = g.inv[a]
                if f1[inv_a] is not None and f1[inv_a] != h.inv[b]:
                    ok = False
                if ok:
                    for (x, y), xy in g.comp.items():
                        fx, fy = f1[x], f1[y]
                        if fx is not None and fy is not None:
                            if f1[xy] is not None:
                                if h.comp[(fx, fy)] != f1[xy]:
                                    ok = False
                                    break
                if ok and extend(i + 1):
                    return True
                f1[a] = None
                used1[b] = False
            return False

        if extend(0):
            return f1
        return None

    def assign(o: int) -> Optional[GroupoidMorphism]:
        if o == g.n_objs:
            f1 = arrows_ok(list(f0))
            if f1 is not None:
                return GroupoidMorphism(g, h, list(f0), f1)
            return None
        for t in range(h.n_objs):
            if used0[t] or hp[t] != gp[o]:
                continue
            f0[o] = t
            used0[t] = True
            found = assign(o + 1)
            if found is not None:
                return found
            used0[t] = False
        f0[o] = None
        return None

    return assign(0)


def loops_crossed_module(g: FiniteGroupoid):
    """The loop bundle S = {x : src(x) = tgt(x)} with conjugation action."""
    from .two_groupoids import CrossedModuleGpd

    loop_arrows = sorted(a for a in range(g.n_arrs) if g.src[a] == g.tgt[a])
    pos = {a: i for i, a in enumerate(loop_arrows)}
    bundle = GroupBundle(
        g.objs,
        [g.arrs[a] for a in loop_arrows],
        [g.src[a] for a in loop_arrows],
        [g.src[a] for a in loop_arrows],
        {
            (pos[a], pos[b]): pos[g.comp[(a, b)]]
            for a in loop_arrows
            for b in loop_arrows
            if g.src[a] == g.src[b]
        },
        [pos[g.idn[o]] for o in range(g.n_objs)],
        [pos[g.inv[a]] for a in loop_arrows],
    )
    rho = GroupoidMorphism(bundle, g, range(g.n_objs), loop_arrows)
    action = {}
    for xi, x in enumerate(loop_arrows):
        for gam in range(g.n_arrs):
            if g.tgt[gam] == g.src[x]:
                conj = g.comp[(g.comp[(g.inv[gam], x)], gam)]
                action[(xi, gam)] = pos[conj]
    return CrossedModuleGpd(bundle, g, rho, action)
