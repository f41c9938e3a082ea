from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gerbekit._kernels import BACKEND, _fpkern_py as pyk
from gerbekit.fpmat import FpMat, inv_dense, matmul_dense, rref_dense, solve_dense

from oracles import rank_mod_p

try:
    from gerbekit._kernels import _fpkern_c as ck
except ImportError:
    ck = None


def test_backend_selected():
    assert BACKEND in ("py", "c")


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_backend_parity_f2(data):
    if ck is None:
        pytest.skip("compiled backend not built")
    ncols = data.draw(st.integers(1, 40))
    rows = data.draw(st.lists(st.integers(0, 2**40 - 1), max_size=15))
    rows = [r & ((1 << ncols) - 1) for r in rows]
    assert pyk.echelon_f2(rows, ncols) == ck.echelon_f2(rows, ncols)


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_backend_parity_fp(data):
    if ck is None:
        pytest.skip("compiled backend not built")
    p = data.draw(st.sampled_from([2, 3, 5, 7]))
    ncols = data.draw(st.integers(1, 12))
    rows = data.draw(
        st.lists(st.lists(st.integers(0, p - 1), min_size=ncols, max_size=ncols), max_size=10)
    )
    assert pyk.echelon_fp(rows, ncols, p) == ck.echelon_fp(rows, ncols, p)


@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_rank_matches_oracle(data):
    p = data.draw(st.sampled_from([2, 3, 5]))
    ncols = data.draw(st.integers(1, 8))
    dense = data.draw(
        st.lists(st.lists(st.integers(0, p - 1), min_size=ncols, max_size=ncols),
                 min_size=1, max_size=8)
    )
    m = FpMat.from_tuples(p, dense, ncols)
    assert m.rank() == rank_mod_p(dense, p)


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_nullspace_annihilated(data):
    p = data.draw(st.sampled_from([2, 3]))
    ncols = data.draw(st.integers(1, 7))
    dense = data.draw(
        st.lists(st.lists(st.integers(0, p - 1), min_size=ncols, max_size=ncols),
                 min_size=1, max_size=7)
    )
    m = FpMat.from_tuples(p, dense, ncols)
    basis = m.nullspace()
    assert len(basis) == ncols - m.rank()
    for v in basis:
        assert all(a == 0 for a in m.mul_vec(v))


def test_from_coo_accumulates():
    m = FpMat.from_coo(2, 1, 3, [(0, 1, 1), (0, 1, 1), (0, 2, 1)])
    assert m.row_tuple(0) == (0, 0, 1)
    m3 = FpMat.from_coo(3, 1, 2, [(0, 0, 1), (0, 0, 1), (0, 1, -1)])
    assert m3.row_tuple(0) == (2, 2)


def test_dense_helpers_roundtrip():
    p = 5
    a = [(1, 2), (3, 4)]
    inv = inv_dense(a, p)
    assert inv is not None
    assert matmul_dense(a, inv, p) == [(1, 0), (0, 1)]
    sol = solve_dense(a, [(1,), (0,)], p)
    assert sol is not None
    assert matmul_dense(a, sol, p) == [(1,), (0,)]
    assert inv_dense([(1, 2), (2, 4)], p) is None


def test_rref_dense_idempotent():
    rows = [(1, 2, 0), (0, 1, 1), (1, 0, 1)]
    piv, red = rref_dense(rows, 3, 3)
    piv2, red2 = rref_dense(red, 3, 3)
    assert piv == piv2 and red == red2


def test_row_space_membership():
    m = FpMat.from_tuples(2, [(1, 1, 0), (0, 1, 1)], 3)
    span = m.row_space()
    assert span.contains((1, 0, 1))
    assert not span.contains((1, 0, 0))
