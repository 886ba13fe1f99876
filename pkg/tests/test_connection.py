import numpy as np
import pytest

from surfacekz.connection import (ConnectionContext, check_alpha_aperiod,
                                  check_automorphy, check_closedness,
                                  check_commutation,
                                  check_commutation_near_diagonal,
                                  check_gauge_identity, check_leading_term,
                                  check_residue, check_simplicial,
                                  check_w_independence, default_points)


@pytest.fixture(scope="module")
def ctx12():
    return ConnectionContext(1, 2)


@pytest.fixture(scope="module")
def pts12(ctx12):
    return default_points(ctx12, seed=3)


def test_leading_term(ctx12, pts12):
    assert check_leading_term(ctx12, pts12, 1)["ok"]
    assert check_leading_term(ctx12, pts12, 2)["ok"]


def test_w_independence(ctx12, pts12):
    assert check_w_independence(ctx12, pts12, 1)["ok"]


def test_single_point_has_no_psi_terms():
    ctx = ConnectionContext(1, 1)
    val, _ = ctx.alpha([0.1 - 0.2j], 1)
    fl = ctx.quotient.lie
    assert val
    assert all(fl.word_bidegree(m)[1] == 1 for m in val)


def test_automorphy(ctx12, pts12):
    for j in (1, 2):
        rep = check_automorphy(ctx12, pts12, 1, j, 1)
        assert rep["ok"], rep


def test_automorphy_g2():
    ctx = ConnectionContext(2, 2)
    pts = default_points(ctx, seed=3)
    for j in (1, 2):
        for a in (1, 2):
            rep = check_automorphy(ctx, pts, 1, j, a)
            assert rep["ok"], rep


def test_residue_and_aperiod(ctx12, pts12):
    assert check_residue(ctx12, pts12, 1, 2)["ok"]
    assert check_alpha_aperiod(ctx12, pts12, 1, 1)["ok"]


def test_closedness(ctx12, pts12):
    assert check_closedness(ctx12, pts12, 1, 2)["ok"]
    assert check_closedness(ctx12, pts12, 1, 1)["trivial"]


def test_closedness_antisymmetric(ctx12, pts12):
    r12 = check_closedness(ctx12, pts12, 1, 2)
    r21 = check_closedness(ctx12, pts12, 2, 1)
    assert abs(r12["residual"] - r21["residual"]) < 1e-9


def test_commutation(ctx12, pts12):
    rep = check_commutation(ctx12, pts12, 1, 2)
    assert rep["ok"], rep


def test_commutation_residual_shrinks_with_L(pts12):
    ctx_small = ConnectionContext(1, 2, L=4)
    ctx_big = ConnectionContext(1, 2, L=8)
    r_small = check_commutation(ctx_small, pts12, 1, 2)["residual"]
    r_big = check_commutation(ctx_big, pts12, 1, 2)["residual"]
    assert r_big < r_small + 1e-10


def test_commutation_near_diagonal():
    ctx = ConnectionContext(1, 3)
    pts = default_points(ctx, seed=5)
    rep = check_commutation_near_diagonal(ctx, pts, 1, 2)
    assert rep["ok"], rep


def test_simplicial_and_gauge(ctx12):
    ctx1 = ConnectionContext(1, 1)
    zpts = [0.1 - 0.22j]
    assert check_simplicial(ctx12, ctx1, zpts)["ok"]
    assert check_gauge_identity(ctx12, ctx1, zpts)["ok"]


def test_simplicial_n3(ctx12):
    ctx3 = ConnectionContext(1, 3)
    zpts = [0.1 - 0.22j, 0.35 + 0.1j]
    assert check_simplicial(ctx3, ctx12, zpts)["ok"]
    assert check_gauge_identity(ctx3, ctx12, zpts)["ok"]
