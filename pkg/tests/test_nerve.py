from __future__ import annotations

import pytest

from gerbekit.errors import DimensionCapExceeded
from gerbekit.groupoids import group_as_groupoid
from gerbekit.nerve import nerve
from gerbekit.two_groupoids import as_two_groupoid

from oracles import one_kernel_three_simplices


def sizes(t, d=4):
    ds = nerve(t, d)
    return [ds.size(q) for q in range(d + 1)]


def test_point_nerve(point2):
    assert sizes(point2) == [1, 1, 1, 1, 1]


def test_group_nerve_counts(z2_gpd, z4):
    assert sizes(as_two_groupoid(z2_gpd)) == [1, 2, 4, 8, 16]
    t4 = as_two_groupoid(group_as_groupoid(z4))
    assert sizes(t4) == [1, 4, 16, 64, 256]


def test_pair3_nerve(pair3):
    assert sizes(as_two_groupoid(pair3)) == [3, 9, 27, 81, 243]


def test_one_kernel_counts(t_z2_1, t_z3_1):
    assert sizes(t_z2_1)[:4] == [1, 1, 2, 8]
    # the commutativity rule cuts N3 down to the stated linear condition
    assert sizes(t_z2_1)[3] == len(one_kernel_three_simplices(2))
    assert sizes(t_z3_1)[3] == len(one_kernel_three_simplices(3))


def test_face_identities_validated(t_z2_1, e5):
    nerve(t_z2_1, 4).validate()
    nerve(as_two_groupoid(e5), 4).validate()


def test_e5_nerve_is_chain_count(e5):
    # nerve of a 1-groupoid counts composable chains
    ds = nerve(as_two_groupoid(e5), 4)
    def chains(k):
        if k == 0:
            return e5.n_objs
        count = 0
        frontier = [(a,) for a in range(e5.n_arrs)]
        for _ in range(k - 1):
            nxt = []
            for chain in frontier:
                for b in range(e5.n_arrs):
                    if e5.src[chain[-1]] == e5.tgt[b]:
                        nxt.append(chain + (b,))
            frontier = nxt
        return len(frontier)
    for q in range(5):
        assert ds.size(q) == chains(q)


def test_dimension_cap(t_z2_1):
    with pytest.raises(DimensionCapExceeded):
        nerve(t_z2_1, 5)


def test_nerve_cached(t_z2_1):
    a = nerve(t_z2_1, 3)
    b = nerve(t_z2_1, 3)
    assert a is b
    big = nerve(t_z2_1, 4)
    assert nerve(t_z2_1, 2) is big  # larger builds serve smaller requests


def test_faces_land_in_previous_level(t_z3_1):
    ds = nerve(t_z3_1, 3)
    for q in range(1, 4):
        for i in range(q + 1):
            col = ds.faces[q][i]
            assert col.min() >= 0 and col.max() < ds.size(q - 1)
