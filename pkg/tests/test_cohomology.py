from __future__ import annotations

import pytest

from gerbekit.errors import DegreeOutOfRange, MoritaMapNotInvertible, NotACharacter
from gerbekit.groupoids import GroupoidMorphism, group_as_groupoid, trivial_groupoid
from gerbekit.cohomology import (
    apply_matrix,
    basis,
    canonical_class,
    characteristic_map,
    cochain_complex,
    cohomology,
    induced_map,
)
from gerbekit.fpmat import matmul_dense
from gerbekit.nerve import nerve
from gerbekit.spans import identity_span
from gerbekit.two_groupoids import TwoMorphism, as_two_groupoid, identity_two_morphism

from oracles import bar_cohomology_dims


def test_dsquare_zero_small_corpus(point2, z2_gpd, pair3, t_z2_1, t_z3_1, e5):
    for t in (point2, as_two_groupoid(z2_gpd), as_two_groupoid(pair3),
              t_z2_1, t_z3_1, as_two_groupoid(e5)):
        ds = nerve(t, 4)
        for p in (2, 3, 5):
            cx = cochain_complex(ds, p)
            # independent double check: multiply the matrices
            for q in range(ds.dim - 1):
                d_q = cx.delta(q)
                d_q1 = cx.delta(q + 1)
                for col in range(d_q.ncols):
                    unit = [1 if i == col else 0 for i in range(d_q.ncols)]
                    assert all(
                        v == 0 for v in d_q1.mul_vec(d_q.mul_vec(unit))
                    )


def test_point_cohomology(point2):
    ds = nerve(point2, 4)
    assert [cohomology(ds, 5, q)[0] for q in range(4)] == [1, 0, 0, 0]


def test_bar_resolution_agreement(z2, z3, z2_gpd):
    ds2 = nerve(as_two_groupoid(z2_gpd), 4)
    got2 = [cohomology(ds2, 2, q)[0] for q in range(4)]
    want2 = bar_cohomology_dims([list(r) for r in z2.mult], z2.unit, 2, 3)
    assert got2 == want2 == [1, 1, 1, 1]

    ds3 = nerve(as_two_groupoid(group_as_groupoid(z3)), 4)
    got3 = [cohomology(ds3, 3, q)[0] for q in range(4)]
    want3 = bar_cohomology_dims([list(r) for r in z3.mult], z3.unit, 3, 3)
    assert got3 == want3 == [1, 1, 1, 1]
    assert [cohomology(ds3, 2, q)[0] for q in range(4)] == [1, 0, 0, 0]


def test_pair3_matches_point(pair3, point2):
    dsp = nerve(as_two_groupoid(pair3), 4)
    dspt = nerve(point2, 4)
    for p in (2, 3):
        for q in range(4):
            assert cohomology(dsp, p, q)[0] == cohomology(dspt, p, q)[0]


def test_degree_out_of_range(z2):
    from gerbekit.two_groupoids import one_kernel_two_group

    fresh, _ = one_kernel_two_group(z2)  # fresh cache: nothing above dim 3
    ds = nerve(fresh, 3)
    with pytest.raises(DegreeOutOfRange):
        basis(ds, 2, 3)


def test_canonical_class(t_z2_1, t_z3_1):
    zero = canonical_class(t_z2_1, (0, 0), 2)
    assert basis(nerve(t_z2_1, 3), 2, 2).coords(zero.vector) == (0,)
    cc = canonical_class(t_z2_1, (0, 1), 2)
    assert basis(nerve(t_z2_1, 3), 2, 2).coords(cc.vector) == (1,)
    cc3 = canonical_class(t_z3_1, (0, 1, 2), 3)
    assert any(basis(nerve(t_z3_1, 3), 3, 2).coords(cc3.vector))
    with pytest.raises(NotACharacter):
        canonical_class(t_z2_1, (0, 1), 3)  # not additive into F_3
    with pytest.raises(NotACharacter):
        canonical_class(t_z3_1, (1, 1, 1), 3)


def test_canonical_cochain_closed_on_all_tetrahedra(t_z2_1):
    # direct evaluation of the alternating face sum on each 3-simplex
    ds = nerve(t_z2_1, 3)
    cm_cells = {t_z2_1.cell_index((lab, t_z2_1.g1.arrs[0])): lab for lab in (0, 1)}
    vec = [cm_cells[s[6]] for s in ds.levels[2]]
    assert ds.size(3) == 8
    for rho in range(ds.size(3)):
        total = sum(
            (-1) ** i * vec[ds.face(3, i, rho)] for i in range(4)
        )
        assert total % 2 == 0


def test_induced_identity(t_z2_1):
    m = induced_map(identity_two_morphism(t_z2_1), 2, 2)
    assert m == [(1,)]


def test_pair3_to_point_iso_all_degrees(pair3, point2):
    t = as_two_groupoid(pair3)
    proj = TwoMorphism(t, point2, [0] * 3, [0] * 9, [0] * 9)
    for q in range(4):
        m = induced_map(proj, q, 2, max_dim=4)
        d = basis(nerve(point2, 4), 2, q).dim
        assert len(m) == d and all(len(r) == d for r in m)
        if d:
            assert m == [(1,)]


def test_functoriality(z2_gpd, point2):
    # pullback of a composite is the composite of pullbacks, contravariantly
    t = as_two_groupoid(z2_gpd)
    collapse = TwoMorphism(t, t, [0], [0, 0], [0, 0])
    ident = identity_two_morphism(t)
    comp = ident.compose_with(collapse)
    for q in range(3):
        m_comp = induced_map(comp, q, 2)
        m_f = induced_map(collapse, q, 2)
        m_g = induced_map(ident, q, 2)
        if m_comp and m_f and m_g:
            assert m_comp == matmul_dense(m_f, m_g, 2)
        else:
            assert m_comp == m_f or m_g == []


def test_charmap_identity_span(t_z2_1):
    m = characteristic_map(identity_span(t_z2_1), 2, 2)
    assert m == [(1,)]


def test_charmap_noninvertible_rejected(z2_gpd, point2):
    # a span whose left leg is stored unchecked cannot sneak through
    from gerbekit.spans import Span
    from gerbekit.errors import NotMorita

    t = as_two_groupoid(z2_gpd)
    collapse = TwoMorphism(t, point2, [0], [0, 0], [0, 0])
    with pytest.raises(NotMorita):
        Span(t, collapse, identity_two_morphism(t))


def test_nat2_invariance_on_cohomology(z2_gpd, s3):
    from gerbekit.two_groupoids import aut_inner_two_group, nat2_search

    t, *_ = aut_inner_two_group(s3)
    dom = as_two_groupoid(z2_gpd)
    aut = None
    # build the two conjugate sections again and compare induced maps
    from gerbekit.groups import automorphism_group

    aut, _ = automorphism_group(s3)
    def section(g_elt):
        img = aut.index_of(tuple(s3.conj(x, g_elt) for x in s3.elements()))
        f1 = [aut.unit, img]
        f2 = [t.cell_index((s3.labels[s3.unit], aut.labels[v])) for v in f1]
        return TwoMorphism(dom, t, [0], f1, f2)

    f = section(s3.index_of((1, 0, 2)))
    g = section(s3.index_of((0, 2, 1)))
    assert nat2_search(f, g) is not None
    for q in range(3):
        assert induced_map(f, q, 2) == induced_map(g, q, 2)
        assert induced_map(f, q, 3) == induced_map(g, q, 3)
