from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gerbekit.groups import cyclic_group, direct_product, symmetric_group
from gerbekit.groupoids import cech_groupoid, group_as_groupoid, pair_groupoid, trivial_groupoid
from gerbekit.two_groupoids import as_two_groupoid, aut_inner_two_group, one_kernel_two_group
from gerbekit.extensions import GExtension, trivial_extension
from gerbekit.cocycles import Cover, NonAbCocycle


@pytest.fixture(scope="session")
def z2():
    return cyclic_group(2)


@pytest.fixture(scope="session")
def z3():
    return cyclic_group(3)


@pytest.fixture(scope="session")
def z4():
    return cyclic_group(4)


@pytest.fixture(scope="session")
def v4(z2):
    return direct_product(z2, z2)


@pytest.fixture(scope="session")
def s3():
    return symmetric_group(3)


@pytest.fixture(scope="session")
def e5():
    return cech_groupoid(["a", "b", "c"], [["a", "b"], ["b", "c"]])


@pytest.fixture(scope="session")
def point2():
    return as_two_groupoid(trivial_groupoid(["*"]))


@pytest.fixture(scope="session")
def z2_gpd(z2):
    return group_as_groupoid(z2)


@pytest.fixture(scope="session")
def pair3():
    return pair_groupoid([0, 1, 2])


@pytest.fixture(scope="session")
def t_z2_1(z2):
    t, _cm = one_kernel_two_group(z2)
    return t


@pytest.fixture(scope="session")
def t_z3_1(z3):
    t, _cm = one_kernel_two_group(z3)
    return t


@pytest.fixture(scope="session")
def t_s3_aut(s3):
    t, *_ = aut_inner_two_group(s3)
    return t


# -- the extension corpus ---------------------------------------------------------


@pytest.fixture(scope="session")
def ext_z4(z2, z4):
    return GExtension(
        z2, group_as_groupoid(z4), group_as_groupoid(cyclic_group(2)),
        [[0, 2]], [0, 1, 0, 1],
    )


@pytest.fixture(scope="session")
def ext_v4(z2, v4):
    tgv = group_as_groupoid(v4)
    i_tab = [[tgv.arr_index((0, 0)), tgv.arr_index((1, 0))]]
    phi = [lab[1] for lab in tgv.arrs]
    return GExtension(z2, tgv, group_as_groupoid(cyclic_group(2)), i_tab, phi)


@pytest.fixture(scope="session")
def ext_s3(z3, s3):
    tgs = group_as_groupoid(s3)
    # lex order of permutation tuples: even ones sit at 0, 3, 4
    sign = [0, 1, 1, 0, 0, 1]
    return GExtension(z3, tgs, group_as_groupoid(cyclic_group(2)), [[0, 3, 4]], sign)


@pytest.fixture(scope="session")
def ext_e5(z3, e5):
    return trivial_extension(e5, z3)


@pytest.fixture(scope="session")
def ext_triv_z3_over_z2(z3, z2_gpd):
    return trivial_extension(z2_gpd, z3)


# -- cocycle corpus -----------------------------------------------------------------


def section_cocycle_tables(group, cover, lifts):
    """Transition data read off a family of section lifts h[i, j]."""
    lam = {
        (i, j, x): tuple(group.conj(y, lifts[(i, j)]) for y in group.elements())
        for (i, j, x) in cover.pairs()
    }
    gval = {
        (i, j, k, x): group.mul(
            group.inv[lifts[(i, k)]], group.mul(lifts[(i, j)], lifts[(j, k)])
        )
        for (i, j, k, x) in cover.triples()
    }
    return lam, gval


@pytest.fixture(scope="session")
def two_open_point_cover():
    return Cover(["p"], [["p"], ["p"]])


@pytest.fixture(scope="session")
def s3_cocycle(s3, two_open_point_cover):
    cover = two_open_point_cover
    lifts = {
        (0, 0): s3.unit,
        (0, 1): s3.index_of((1, 0, 2)),
        (1, 0): s3.unit,
        (1, 1): s3.unit,
    }
    lam, gval = section_cocycle_tables(s3, cover, lifts)
    return NonAbCocycle(cover, s3, lam, gval)


@pytest.fixture(scope="session")
def s3_cocycle_span(s3_cocycle):
    from gerbekit.cocycles import cocycle_to_bundle

    return cocycle_to_bundle(s3_cocycle)


@pytest.fixture(scope="session")
def z3_cover_cocycle(z3):
    cover = Cover(["p", "q"], [["p", "q"], ["q"]])
    lifts = {(0, 0): 0, (0, 1): 1, (1, 0): 2, (1, 1): 0}
    lam, gval = section_cocycle_tables(z3, cover, lifts)
    return NonAbCocycle(cover, z3, lam, gval)
