"""Finite groups as dense multiplication tables over integer element ids.

Elements are opaque labels ordered once at construction; every operation
works on 0-based indices so composition is a table lookup.  All containers
are tuples, so a validated group is immutable and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Hashable, Optional, Sequence

from . import config
from .errors import (
    CapExceeded,
    NoInverse,
    NotAHomomorphism,
    NotAssociative,
    NotNormal,
    NotSubgroup,
    NoUnit,
)


@dataclass(frozen=True)
class FiniteGroup:
    """A group given by its full Cayley table.

    ``mult[a][b]`` is the product a*b; ``labels`` carries the user-facing
    element names in index order.
    """

    labels: tuple
    mult: tuple
    unit: int
    inv: tuple

    @property
    def order(self) -> int:
        return len(self.labels)

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def conj(self, g: int, h: int) -> int:
        """h * g * h^-1."""
        return self.mul(self.mul(h, g), self.inv[h])

    def element_order(self, a: int) -> int:
        n, x = 1, a
        while x != self.unit:
            x = self.mul(x, a)
            n += 1
        return n

    def is_abelian(self) -> bool:
        return all(
            self.mul(a, b) == self.mul(b, a)
            for a in self.elements()
            for b in self.elements()
        )

    def index_of(self, label) -> int:
        return self.labels.index(label)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"


@dataclass(frozen=True)
class GroupHom:
    """A map of groups checked to preserve products and the unit."""

    dom: FiniteGroup
    cod: FiniteGroup
    val: tuple

    def __call__(self, a: int) -> int:
        return self.val[a]

    def kernel(self) -> tuple:
        return tuple(a for a in self.dom.elements() if self.val[a] == self.cod.unit)

    def is_injective(self) -> bool:
        return len(set(self.val)) == self.dom.order

    def is_surjective(self) -> bool:
        return len(set(self.val)) == self.cod.order


@dataclass(frozen=True)
class RightAction:
    """Right action of ``actor`` on ``acted`` by automorphisms: act[g][h] = g^h."""

    acted: FiniteGroup
    actor: FiniteGroup
    act: tuple

    def __call__(self, g: int, h: int) -> int:
        return self.act[g][h]


def make_group(table: Sequence[Sequence[Hashable]], labels: Optional[Sequence] = None) -> FiniteGroup:
    """Build and validate a group from a square Cayley table.

    ``table[i][j]`` is the product of element i and element j, written with
    the same labels that index the rows.  Raises NotAssociative / NoUnit /
    NoInverse, naming the violating tuple.
    """
    n = len(table)
    if any(len(row) != n for row in table):
        raise NotAssociative("table is not square", (n, [len(r) for r in table]))
    if labels is None:
        # row r is the unit iff table[r] lists the elements in index order
        # and column r does the same; that recovers the labelling.
        labels = None
        for r in range(n):
            cand = tuple(table[r])
            if len(set(cand)) != n:
                continue
            if all(table[i][r] == cand[i] for i in range(n)):
                labels = cand
                break
        if labels is None:
            raise NoUnit("cannot infer element names: no unit row", n)
    index = {x: i for i, x in enumerate(labels)}
    try:
        mult = tuple(tuple(index[x] for x in row) for row in table)
    except KeyError as exc:
        raise NoUnit("table entry is not an element", exc.args[0]) from None

    for a, b, c in product(range(n), repeat=3):
        if mult[mult[a][b]][c] != mult[a][mult[b][c]]:
            raise NotAssociative(
                "associativity fails", (labels[a], labels[b], labels[c])
            )
    unit = next(
        (e for e in range(n) if all(mult[e][a] == a and mult[a][e] == a for a in range(n))),
        None,
    )
    if unit is None:
        raise NoUnit("no two-sided unit", tuple(labels))
    inv = []
    for a in range(n):
        b = next((b for b in range(n) if mult[a][b] == unit and mult[b][a] == unit), None)
        if b is None:
            raise NoInverse("element has no inverse", labels[a])
        inv.append(b)
    return FiniteGroup(tuple(labels), mult, unit, tuple(inv))


def make_hom(dom: FiniteGroup, cod: FiniteGroup, val: Sequence[int]) -> GroupHom:
    val = tuple(val)
    if val[dom.unit] != cod.unit:
        raise NotAHomomorphism("unit not preserved", dom.labels[dom.unit])
    for a in dom.elements():
        for b in dom.elements():
            if val[dom.mul(a, b)] != cod.mul(val[a], val[b]):
                raise NotAHomomorphism(
                    "products not preserved", (dom.labels[a], dom.labels[b])
                )
    return GroupHom(dom, cod, val)


# -- stock constructions -------------------------------------------------------

def cyclic_group(n: int) -> FiniteGroup:
    """Z/n with labels 0..n-1 under addition."""
    return make_group([[(i + j) % n for j in range(n)] for i in range(n)], list(range(n)))


def symmetric_group(n: int) -> FiniteGroup:
    """S_n on 0..n-1; elements are image tuples, product is composition.

    (p*q)(x) = p(q(x)), matching the right-to-left convention used for
    arrow composition everywhere else.
    """
    perms = sorted(_permutations(tuple(range(n))))
    index = {p: i for i, p in enumerate(perms)}
    table = [
        [index[tuple(p[q[x]] for x in range(n))] for q in perms]
        for p in perms
    ]
    return make_group([[perms[e] for e in row] for row in table], perms)


def _permutations(base: tuple):
    if not base:
        yield ()
        return
    for i, x in enumerate(base):
        for rest in _permutations(base[:i] + base[i + 1:]):
            yield (x,) + rest


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    labels = [(a, b) for a in g.labels for b in h.labels]
    table = []
    for (a1, b1) in labels:
        ia, ib = g.index_of(a1), h.index_of(b1)
        row = []
        for (a2, b2) in labels:
            ja, jb = g.index_of(a2), h.index_of(b2)
            row.append((g.labels[g.mul(ia, ja)], h.labels[h.mul(ib, jb)]))
        table.append(row)
    return make_group(table, labels)


def subgroup(g: FiniteGroup, members: Sequence[int]) -> tuple[FiniteGroup, GroupHom]:
    """The subgroup on the given element indices, with its inclusion."""
    members = sorted(set(members))
    pos = {m: i for i, m in enumerate(members)}
    if g.unit not in pos:
        raise NotSubgroup("unit missing", tuple(g.labels[m] for m in members))
    for a in members:
        if g.inv[a] not in pos:
            raise NotSubgroup("not closed under inverse", g.labels[a])
        for b in members:
            if g.mul(a, b) not in pos:
                raise NotSubgroup("not closed under product", (g.labels[a], g.labels[b]))
    labels = [g.labels[m] for m in members]
    table = [[g.labels[g.mul(a, b)] for b in members] for a in members]
    sub = make_group(table, labels)
    incl = make_hom(sub, g, tuple(members))
    return sub, incl


# -- the four table operations -------------------------------------------------

def center(g: FiniteGroup) -> tuple[FiniteGroup, GroupHom]:
    """Elements commuting with everything, plus the inclusion map."""
    members = [
        a for a in g.elements()
        if all(g.mul(a, b) == g.mul(b, a) for b in g.elements())
    ]
    return subgroup(g, members)


def _close(g: FiniteGroup, seed: set[int]) -> set[int]:
    closure = set(seed) | {g.unit}
    changed = True
    while changed:
        changed = False
        for x in list(closure):
            for y in list(closure):
                z = g.mul(x, y)
                if z not in closure:
                    closure.add(z)
                    changed = True
    return closure


def _generating_sequence(g: FiniteGroup) -> list[int]:
    gens: list[int] = []
    closure = {g.unit}
    for a in g.elements():
        if a in closure:
            continue
        gens.append(a)
        closure = _close(g, closure | {a})
        if len(closure) == g.order:
            break
    return gens


def _expression_tree(g: FiniteGroup, gens: Sequence[int]) -> dict[int, tuple]:
    """For each element, a recipe (parent, gen) with x = parent * gen."""
    tree: dict[int, tuple] = {g.unit: (None, None)}
    frontier = [g.unit]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, gen in enumerate(gens):
                y = g.mul(x, gen)
                if y not in tree:
                    tree[y] = (x, gi)
                    nxt.append(y)
        frontier = nxt
    return tree


def automorphism_group(g: FiniteGroup, cap: Optional[int] = None) -> tuple[FiniteGroup, RightAction]:
    """All bijective self-homomorphisms under composition, acting on g.

    Elements of the returned group are labelled by their image tuples and
    ordered lexicographically on those tuples, so ids are reproducible.
    The action is g^phi = phi^-1(g).
    """
    limit = config.cap(config.AUT_CAP) if cap is None else cap
    if g.order > limit:
        raise CapExceeded("automorphism enumeration cap", (g.order, limit))

    gens = _generating_sequence(g)
    tree = _expression_tree(g, gens)
    if len(tree) != g.order:
        raise NotAssociative("generators do not close", tuple(gens))
    orders = [g.element_order(a) for a in g.elements()]
    candidates = [
        [b for b in g.elements() if orders[b] == orders[a]] for a in gens
    ]

    autos: list[tuple] = []

    def build(images: list[int]) -> Optional[tuple]:
        val = [0] * g.order
        val[g.unit] = g.unit
        # expand along the expression tree, then verify on the full table
        pending = set(g.elements()) - {g.unit}
        while pending:
            progressed = False
            for x in list(pending):
                parent, gi = tree[x]
                if parent is None or parent in pending:
                    continue
                val[x] = g.mul(val[parent], images[gi])
                pending.discard(x)
                progressed = True
            if not progressed:
                return None
        if len(set(val)) != g.order:
            return None
        for a in g.elements():
            for b in g.elements():
                if val[g.mul(a, b)] != g.mul(val[a], val[b]):
                    return None
        return tuple(val)

    def search(i: int, images: list[int]):
        if i == len(gens):
            v = build(images)
            if v is not None and v not in autos:
                autos.append(v)
            return
        for c in candidates[i]:
            search(i + 1, images + [c])

    search(0, [])
    autos.sort()
    aut_index = {v: i for i, v in enumerate(autos)}
    table = [
        [autos[aut_index[tuple(p[q[x]] for x in range(g.order))]] for q in autos]
        for p in autos
    ]
    aut = make_group(table, autos)
    inv_perm = [tuple(_perm_inverse(v)) for v in autos]
    act = tuple(
        tuple(inv_perm[h][a] for h in range(len(autos))) for a in g.elements()
    )
    return aut, RightAction(g, aut, act)


def _perm_inverse(v: tuple) -> list[int]:
    out = [0] * len(v)
    for i, x in enumerate(v):
        out[x] = i
    return out


def inner_hom(g: FiniteGroup, aut: Optional[FiniteGroup] = None) -> GroupHom:
    """g |-> conjugation-by-g, landing in automorphism_group(g)."""
    if aut is None:
        aut, _ = automorphism_group(g)
    val = []
    for a in g.elements():
        conj_table = tuple(g.conj(x, a) for x in g.elements())
        val.append(aut.index_of(conj_table))
    return make_hom(g, aut, tuple(val))


def quotient_group(g: FiniteGroup, normal: Sequence[int]) -> tuple[FiniteGroup, GroupHom]:
    """Coset group of a normal subgroup, with the canonical projection."""
    members = sorted(set(normal))
    pos = set(members)
    subgroup(g, members)  # raises NotSubgroup when not closed
    for a in g.elements():
        for nelem in members:
            if g.conj(nelem, a) not in pos:
                raise NotNormal(
                    "conjugation leaves the subgroup", (g.labels[a], g.labels[nelem])
                )
    coset_of = {}
    reps = []
    for a in g.elements():
        if a in coset_of:
            continue
        coset = sorted(g.mul(a, nelem) for nelem in members)
        rep = coset[0]
        reps.append(rep)
        for x in coset:
            coset_of[x] = rep
    reps.sort()
    rep_index = {r: i for i, r in enumerate(reps)}
    labels = [tuple(sorted(g.labels[x] for x in g.elements() if coset_of[x] == r)) for r in reps]
    table = [
        [labels[rep_index[coset_of[g.mul(a, b)]]] for b in reps] for a in reps
    ]
    q = make_group(table, labels)
    proj = make_hom(g, q, tuple(rep_index[coset_of[a]] for a in g.elements()))
    return q, proj


def group_iso_search(g: FiniteGroup, h: FiniteGroup):
    """Yield all isomorphisms g -> h as value tuples, in lexicographic order."""
    if g.order != h.order:
        return
    if sorted(g.element_order(a) for a in g.elements()) != sorted(
        h.element_order(b) for b in h.elements()
    ):
        return
    gens = _generating_sequence(g)
    tree = _expression_tree(g, gens)
    orders = {a: g.element_order(a) for a in gens}
    candidate_lists = [
        [b for b in h.elements() if h.element_order(b) == orders[a]] for a in gens
    ]

    def build(images):
        val = [None] * g.order
        val[g.unit] = h.unit
        pending = set(g.elements()) - {g.unit}
        while pending:
            progressed = False
            for x in list(pending):
                parent, gi = tree[x]
                if parent is None or val[parent] is None:
                    continue
                val[x] = h.mul(val[parent], images[gi])
                pending.discard(x)
                progressed = True
            if not progressed:
                return None
        if len(set(val)) != g.order:
            return None
        for a in g.elements():
            for b in g.elements():
                if val[g.mul(a, b)] != h.mul(val[a], val[b]):
                    return None
        return tuple(val)

    for images in product(*candidate_lists):
        v = build(list(images))
        if v is not None:
            yield v


def all_characters(a: FiniteGroup, p: int) -> list[GroupHom]:
    """Every homomorphism from an abelian group into Z/p (additive)."""
    zp = cyclic_group(p)
    homs = []
    for val in product(range(p), repeat=a.order):
        if val[a.unit] != 0:
            continue
        good = all(
            val[a.mul(x, y)] == (val[x] + val[y]) % p
            for x in a.elements()
            for y in a.elements()
        )
        if good:
            homs.append(GroupHom(a, zp, tuple(val)))
    return homs
