from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gerbekit.errors import (
    CapExceeded,
    GerbekitError,
    NotAssociative,
    NotNormal,
    NotSubgroup,
)
from gerbekit.groups import (
    all_characters,
    automorphism_group,
    center,
    cyclic_group,
    direct_product,
    group_iso_search,
    inner_hom,
    make_group,
    quotient_group,
    subgroup,
    symmetric_group,
)

from oracles import brute_force_automorphisms, brute_force_center


def test_trivial_group():
    g = make_group([["e"]])
    assert g.order == 1 and g.unit == 0


def test_z4_table():
    g = make_group([[(i + j) % 4 for j in range(4)] for i in range(4)])
    assert g.labels == (0, 1, 2, 3)
    assert g.unit == 0
    assert g.inv[1] == 3


def test_nonassociative_table_rejected():
    table = [[(i + j) % 6 for j in range(6)] for i in range(6)]
    table[2][3] = (2 + 3 + 1) % 6  # one bad entry
    # confirm by scanning all 216 triples that associativity really breaks
    idx = {v: v for v in range(6)}
    broken = any(
        table[table[a][b]][c] != table[a][table[b][c]]
        for a in range(6)
        for b in range(6)
        for c in range(6)
    )
    assert broken
    with pytest.raises(GerbekitError):
        make_group(table, list(range(6)))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 6), data=st.data())
def test_single_entry_perturbation_never_validates(n, data):
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    a = data.draw(st.integers(0, n - 1))
    b = data.draw(st.integers(0, n - 1))
    delta = data.draw(st.integers(1, n - 1))
    table[a][b] = (table[a][b] + delta) % n
    with pytest.raises(GerbekitError):
        make_group(table, list(range(n)))


@pytest.mark.parametrize(
    "maker,expected",
    [(lambda: cyclic_group(2), 1), (lambda: cyclic_group(4), 2), (symmetric_group3 := lambda: symmetric_group(3), 6)],
)
def test_automorphism_group_sizes(maker, expected):
    g = maker()
    aut, act = automorphism_group(g)
    assert aut.order == expected
    oracle = brute_force_automorphisms([list(r) for r in g.mult], g.unit)
    assert sorted(aut.labels) == sorted(tuple(p) for p in oracle)


def test_automorphism_action_invariants(s3):
    aut, act = automorphism_group(s3)
    for h in aut.elements():
        # each slice is an automorphism
        sl = [act(g, h) for g in s3.elements()]
        assert len(set(sl)) == s3.order
        for a in s3.elements():
            for b in s3.elements():
                assert act(s3.mul(a, b), h) == s3.mul(act(a, h), act(b, h))
    for g in s3.elements():
        assert act(g, aut.unit) == g
        for h1 in aut.elements():
            for h2 in aut.elements():
                assert act(act(g, h1), h2) == act(g, aut.mul(h1, h2))


def test_automorphism_cap():
    with pytest.raises(CapExceeded):
        automorphism_group(cyclic_group(30), cap=24)


def test_center_examples(s3, z2, z4):
    c4, _ = center(z4)
    assert c4.order == 4
    cs3, _ = center(s3)
    assert cs3.order == 1
    assert [s3.labels[i] for i in brute_force_center([list(r) for r in s3.mult])] == list(cs3.labels)
    prod = direct_product(z2, s3)
    cp, incl = center(prod)
    assert cp.order == 2
    assert set(cp.labels) == {(0, (0, 1, 2)), (1, (0, 1, 2))}


def test_inner_hom(s3, z4):
    aut4, _ = automorphism_group(z4)
    ih4 = inner_hom(z4, aut4)
    assert all(v == aut4.unit for v in ih4.val)  # abelian: constant

    auts3, _ = automorphism_group(s3)
    ih = inner_hom(s3, auts3)
    transposition = s3.index_of((1, 0, 2))
    img = ih.val[transposition]
    assert auts3.element_order(img) == 2
    center_set = set(center(s3)[1].val)
    assert set(ih.kernel()) == center_set


def test_quotients(s3, z4):
    q, proj = quotient_group(z4, [0])
    assert q.order == 4 and proj.is_injective()
    q2, proj2 = quotient_group(z4, [0, 2])
    assert q2.order == 2
    a3 = [s3.index_of(p) for p in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]]
    q3, proj3 = quotient_group(s3, a3)
    assert q3.order == 2
    assert sorted(proj3.kernel()) == sorted(a3)
    with pytest.raises(NotNormal):
        quotient_group(s3, [s3.unit, s3.index_of((1, 0, 2))])
    with pytest.raises(NotSubgroup):
        quotient_group(z4, [0, 1, 2])


def test_quotient_projection_properties(s3):
    a3 = [s3.index_of(p) for p in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]]
    q, proj = quotient_group(s3, a3)
    assert proj.is_surjective()
    assert sorted(proj.kernel()) == sorted(a3)


def test_group_iso_search(z4, v4):
    assert list(group_iso_search(z4, v4)) == []
    relabeled = make_group(
        [[chr(97 + (i + j) % 4) for j in range(4)] for i in range(4)],
        [chr(97 + i) for i in range(4)],
    )
    isos = list(group_iso_search(z4, relabeled))
    assert isos and all(v[0] == 0 for v in isos)


def test_all_characters(z2, z3, v4):
    assert len(all_characters(z2, 2)) == 2
    assert len(all_characters(z3, 3)) == 3
    assert len(all_characters(v4, 2)) == 4
    assert len(all_characters(z3, 2)) == 1  # only the zero map


def test_subgroup_errors(s3):
    with pytest.raises(NotSubgroup):
        subgroup(s3, [s3.index_of((1, 0, 2))])  # missing unit
