from __future__ import annotations

import pytest

from gerbekit.errors import EmptyApex, NotMorita
from gerbekit.cohomology import characteristic_map
from gerbekit.extensions import central_reduction, extension_to_bundle, is_central
from gerbekit.groupoids import groupoid_iso_search, trivial_groupoid
from gerbekit.spans import (
    Span,
    compose_spans,
    fiber_product_apex,
    identity_span,
    post_compose,
    projection_morphism,
    pullback_bundle,
    refine_span,
    span_equivalent,
    strict_span,
    whitney_sum,
)
from gerbekit.two_groupoids import (
    TwoMorphism,
    as_two_groupoid,
    identity_two_morphism,
    is_morita_2,
    one_kernel_two_group,
)


@pytest.fixture(scope="module")
def z4_span(ext_z4):
    return extension_to_bundle(ext_z4)


@pytest.fixture(scope="module")
def z4_reduced(ext_z4):
    cd = is_central(ext_z4)
    reduced, span, _cmp = central_reduction(ext_z4, cd)
    return span


def levelwise_iso(t1, t2):
    return (
        groupoid_iso_search(t1.g1, t2.g1) is not None
        and groupoid_iso_search(t1.vertical_groupoid(), t2.vertical_groupoid())
        is not None
    )


def test_compose_identity_both_sides(z4_span):
    base_id = identity_span(z4_span.left.cod)
    target_id = identity_span(z4_span.right.cod)
    left_comp = compose_spans(base_id, z4_span)
    right_comp = compose_spans(z4_span, target_id)
    assert levelwise_iso(left_comp.apex, z4_span.apex)
    assert levelwise_iso(right_comp.apex, z4_span.apex)


def test_identity_span_composes_to_identity(t_z2_1):
    ident = identity_span(t_z2_1)
    twice = compose_spans(ident, ident)
    assert levelwise_iso(twice.apex, t_z2_1)


def test_compose_associative_up_to_iso(z4_span):
    base_id = identity_span(z4_span.left.cod)
    target_id = identity_span(z4_span.right.cod)
    left = compose_spans(compose_spans(base_id, z4_span), target_id)
    right = compose_spans(base_id, compose_spans(z4_span, target_id))
    assert levelwise_iso(left.apex, right.apex)


def test_compose_counts_z4_then_inclusion(ext_z4, z4_reduced, z4_span):
    # the reduced bundle included into the full structure 2-group: the
    # fiber product with the inclusion span has one pair per apex cell
    from gerbekit.extensions import _inclusion_center_to_aut

    cd = is_central(ext_z4)
    inc = _inclusion_center_to_aut(
        z4_reduced.right.cod, z4_span.right.cod, ext_z4, cd.zg, cd.z_members
    )
    included = post_compose(z4_reduced, inc)
    assert included.apex.n_cells == 8
    assert is_morita_2(included.left)


def test_empty_fiber_product_detected():
    two = as_two_groupoid(trivial_groupoid(["x", "y"]))
    pt = as_two_groupoid(trivial_groupoid(["*"]))
    to_x = TwoMorphism(pt, two, [0], [two.g1.idn[0]], [two.vid[two.g1.idn[0]]])
    to_y = TwoMorphism(pt, two, [1], [two.g1.idn[1]], [two.vid[two.g1.idn[1]]])
    with pytest.raises(EmptyApex):
        fiber_product_apex(to_x, to_y)


def test_span_requires_morita_left(t_z2_1, point2):
    collapse = TwoMorphism(
        t_z2_1, point2, [0], [0] * t_z2_1.g1.n_arrs, [0] * t_z2_1.n_cells
    )
    with pytest.raises(NotMorita):
        Span(t_z2_1, collapse, identity_two_morphism(t_z2_1))


def test_whitney_with_unit_bundle(z4_reduced, z2):
    from gerbekit.groups import cyclic_group

    one, _ = one_kernel_two_group(cyclic_group(1))
    base = z4_reduced.left.cod
    unit_right = TwoMorphism(
        base, one, [0] * base.g1.n_objs, [0] * base.g1.n_arrs, [0] * base.n_cells
    )
    unit_bundle = Span(base, identity_two_morphism(base), unit_right)
    total, prod_t, _ = whitney_sum(z4_reduced, unit_bundle)
    assert is_morita_2(total.left)
    # summing with the unit bundle keeps the apex equivalent to the original
    assert levelwise_iso(total.apex, z4_reduced.apex)


def test_whitney_two_copies(z4_reduced):
    total, prod_t, _ = whitney_sum(z4_reduced, z4_reduced)
    assert is_morita_2(total.left)
    cm_kernel = prod_t.n_cells  # [Z2xZ2 -> 1] has 4 cells over one arrow
    assert cm_kernel == 4
    for which in (0, 1):
        proj = projection_morphism(prod_t, z4_reduced.right.cod, which)
        assert proj.f2  # validated on construction


def test_refinement_leaves_charmap_unchanged(z4_reduced):
    _apex, pr1, pr2 = fiber_product_apex(z4_reduced.left, z4_reduced.left)
    refined = refine_span(z4_reduced, pr1)
    for q in range(3):
        assert characteristic_map(refined, q, 2) == characteristic_map(z4_reduced, q, 2)


def test_span_equivalent_detects_difference(z4_reduced):
    t = z4_reduced.right.cod
    trivial_right = TwoMorphism(
        z4_reduced.apex,
        t,
        [0] * z4_reduced.apex.g1.n_objs,
        [0] * z4_reduced.apex.g1.n_arrs,
        [t.vid[0]] * z4_reduced.apex.n_cells,
    )
    other = Span(z4_reduced.apex, z4_reduced.left, trivial_right)
    assert span_equivalent(z4_reduced, other) == "not_equivalent_by_cohomology"
    assert span_equivalent(z4_reduced, z4_reduced) == "equivalent"


def test_pullback_bundle_is_composition(z4_span):
    ident = identity_span(z4_span.left.cod)
    pulled = pullback_bundle(ident, z4_span)
    assert levelwise_iso(pulled.apex, z4_span.apex)


def test_strict_span(point2):
    s = strict_span(identity_two_morphism(point2))
    assert s.apex is point2
