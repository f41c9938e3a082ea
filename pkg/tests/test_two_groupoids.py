from __future__ import annotations

import pytest

from gerbekit.errors import BudgetExceeded, InvariantViolation
from gerbekit.groups import RightAction, automorphism_group, cyclic_group, inner_hom, make_hom
from gerbekit.groupoids import GroupoidMorphism, group_as_groupoid, trivial_groupoid
from gerbekit.two_groupoids import (
    TwoGroupoid,
    TwoMorphism,
    as_two_groupoid,
    aut_inner_two_group,
    check_nat2,
    cm_roundtrip_iso,
    cm_to_two_groupoid,
    crossed_module_of_groups,
    identity_two_morphism,
    invert_nat2,
    is_morita_2,
    nat2_search,
    one_kernel_two_group,
    pullback_two_groupoid,
    two_groupoid_roundtrip_iso,
    two_groupoid_to_cm,
)


def all_roundtrip_cms(z2, z3, s3):
    out = []
    for g in (z2, z3):
        t, cm = one_kernel_two_group(g)
        out.append((cm, t))
    aut2, act2 = automorphism_group(z2)
    cm22 = crossed_module_of_groups(z2, aut2, inner_hom(z2, aut2), act2)
    out.append((cm22, cm_to_two_groupoid(cm22)))
    t_s3, cm_s3, *_ = aut_inner_two_group(s3)
    out.append((cm_s3, t_s3))
    return out


def test_cm_roundtrips(z2, z3, s3):
    for cm, t in all_roundtrip_cms(z2, z3, s3):
        cm_roundtrip_iso(cm)  # raises on failure
        tm = two_groupoid_roundtrip_iso(t)
        assert tm.is_isomorphism()


def test_one_groupoid_as_two_groupoid_has_trivial_kernel(pair3):
    cm = two_groupoid_to_cm(as_two_groupoid(pair3))
    assert cm.bundle.n_arrs == pair3.n_objs  # identities only


def test_semidirect_cells_structure(t_s3_aut, s3):
    assert t_s3_aut.n_cells == 36
    # hm on cells: (g1, p1) o (g2, p2) = (g1 * p1(g2), p1 o p2)
    aut, act = automorphism_group(s3)
    g1, g2 = s3.index_of((1, 0, 2)), s3.index_of((1, 2, 0))
    p1 = aut.index_of(tuple(s3.conj(x, g1) for x in s3.elements()))
    p2 = aut.unit
    a = t_s3_aut.cell_index((s3.labels[g1], aut.labels[p1]))
    b = t_s3_aut.cell_index((s3.labels[g2], aut.labels[p2]))
    out = t_s3_aut.cells[t_s3_aut.hm[(a, b)]]
    applied = aut.labels[p1][g2]  # p1 applied to g2, as an element index
    assert out == (s3.labels[s3.mul(g1, applied)], aut.labels[aut.mul(p1, p2)])


def test_eckmann_hilton(t_z2_1, t_z3_1):
    for t in (t_z2_1, t_z3_1):
        assert set(t.vm) == set(t.hm)
        for key, value in t.vm.items():
            assert t.hm[key] == value
            assert t.hm[(key[1], key[0])] == value  # commutative


def test_broken_interchange_rejected():
    # cells 0..3 over one object and one arrow; vertical composition is the
    # Klein group, horizontal is Z/4: each is a group, but the mixed law fails
    g1 = trivial_groupoid(["*"])

    def v4(i, j):
        return (((i >> 1) ^ (j >> 1)) << 1) | ((i & 1) ^ (j & 1))

    vm = {(i, j): v4(i, j) for i in range(4) for j in range(4)}
    hm = {(i, j): (i + j) % 4 for i in range(4) for j in range(4)}
    with pytest.raises(InvariantViolation) as err:
        TwoGroupoid(g1, [0, 1, 2, 3], [0] * 4, [0] * 4, vm, hm, [0])
    assert "interchange" in str(err.value)


def test_pullback_two_groupoid_counts(t_z2_1):
    pb, proj = pullback_two_groupoid(t_z2_1, [1, 2], [0, 0])
    assert pb.g1.n_arrs == 4 and pb.n_cells == 8
    assert is_morita_2(proj)


def test_pullback_identity_iso(t_z2_1):
    pb, proj = pullback_two_groupoid(t_z2_1, ["*"], [0])
    assert pb.n_cells == t_z2_1.n_cells
    assert is_morita_2(proj)


def test_is_morita_2_identity(t_s3_aut):
    assert is_morita_2(identity_two_morphism(t_s3_aut))


def test_nat2_identity_witness(t_z2_1):
    f = identity_two_morphism(t_z2_1)
    w = nat2_search(f, f)
    assert w is not None
    assert w.phi == (t_z2_1.g1.idn[0],)
    assert all(w.psi[j] == t_z2_1.vid[j] for j in range(t_z2_1.g1.n_arrs))


def test_nat2_conjugate_sections(z2_gpd, s3):
    # two maps Z/2 -> Aut(S3) that differ by conjugation
    t, cm, aut, act, inner = aut_inner_two_group(s3)
    dom = as_two_groupoid(z2_gpd)
    ref = aut.index_of(tuple(s3.conj(x, s3.index_of((1, 0, 2))) for x in s3.elements()))
    other = aut.index_of(tuple(s3.conj(x, s3.index_of((0, 2, 1))) for x in s3.elements()))

    def section(arrow_image):
        f1 = [aut.unit, arrow_image]
        f2 = [t.cell_index((s3.labels[s3.unit], aut.labels[v])) for v in f1]
        return TwoMorphism(dom, t, [0], f1, f2)

    f, g = section(ref), section(other)
    w = nat2_search(f, g)
    assert w is not None
    assert check_nat2(f, g, w.phi, w.psi)
    winv = invert_nat2(f, g, w)
    assert check_nat2(g, f, winv.phi, winv.psi)


def test_nat2_distinguished_by_cohomology(z2_gpd):
    from gerbekit.cohomology import induced_map

    dom = as_two_groupoid(z2_gpd)
    ident = identity_two_morphism(dom)
    collapse = TwoMorphism(dom, dom, [0], [0, 0], [0, 0])
    assert nat2_search(ident, collapse) is None
    m_id = induced_map(ident, 1, 2)
    m_cl = induced_map(collapse, 1, 2)
    assert m_id != m_cl


def test_nat2_budget(t_z2_1):
    f = identity_two_morphism(t_z2_1)
    with pytest.raises(BudgetExceeded):
        nat2_search(f, f, budget=0)


def test_crossed_module_validation_catches_bad_action(z2, z3):
    one = cyclic_group(1)
    rho = make_hom(z3, one, [0, 0, 0])
    # action table claims the unique arrow swaps elements: not functorial
    bad = RightAction(z3, one, ((0,), (2,), (1,)))
    with pytest.raises(InvariantViolation):
        crossed_module_of_groups(z3, one, rho, bad)
