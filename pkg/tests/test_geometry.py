import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from drinfeld.counting import omega_count_closed
from drinfeld.errors import BudgetExceeded, NotOnVariety
from drinfeld.geometry import (
    AffineVector,
    ProjectivePoint,
    VarietyCtx,
    _det,
    chart_from_projective,
    chart_stratum,
    chart_to_projective,
    covering_pi,
    delta_symbolic,
    dl_contains,
    enumerate_dl,
    enumerate_omega,
    factorization_check,
    flag_of,
    iter_projective,
    moore_det,
    moore_det_batch,
    normalize_batch,
    omega_contains,
    omega_contains_hyperplanes,
    omega_mask_batch,
    projective_count,
)


def _all_projective(ctx):
    return np.concatenate(list(iter_projective(ctx.big, ctx.d)))


@pytest.mark.parametrize("d,q,m", [(2, 2, 2), (2, 3, 2), (3, 2, 3), (3, 2, 2), (2, 4, 1), (3, 3, 2)])
def test_omega_mask_matches_hyperplane_oracle(d, q, m):
    ctx = VarietyCtx(d, q, m)
    pts = _all_projective(ctx)
    assert pts.shape[0] == projective_count(ctx.Q, d)
    mask = omega_mask_batch(ctx, pts)
    oracle = [omega_contains_hyperplanes(tuple(map(int, r)), ctx) for r in pts]
    assert mask.tolist() == oracle
    assert int(mask.sum()) == omega_count_closed(d, q, m)


def test_moore_batch_matches_gaussian_elimination():
    ctx = VarietyCtx(3, 2, 4)
    F = ctx.big
    rng = np.random.default_rng(1)
    X = rng.integers(0, F.order, (300, 3))
    got = moore_det_batch(F, 2, X)
    for row, val in zip(X, got):
        rows = [[F.frob(int(x), j) for x in row] for j in range(3)]
        assert _det(F, rows) == val


def test_enumeration_is_sorted_and_normalized():
    ctx = VarietyCtx(3, 3, 3)
    om = enumerate_omega(ctx)
    assert np.array_equal(normalize_batch(ctx.big, om), om)
    assert sorted(map(tuple, om.tolist())) == list(map(tuple, om.tolist()))


@pytest.mark.parametrize("d,q,m", [(2, 2, 2), (3, 2, 3), (2, 3, 2), (2, 3, 3), (1, 2, 3), (3, 3, 2)])
def test_dl_methods_agree_with_brute_force(d, q, m):
    ctx = VarietyCtx(d, q, m)
    brute = enumerate_dl(ctx, method="brute")
    assert np.array_equal(enumerate_dl(ctx, method="roots"), brute)
    assert np.array_equal(enumerate_dl(ctx, method="scan"), brute)


def test_dl_small_example():
    ctx = VarietyCtx(2, 2, 2)
    assert enumerate_omega(ctx).shape[0] == 2
    pts = enumerate_dl(ctx)
    assert pts.shape[0] == 6
    for v in pts:
        P = covering_pi(AffineVector.from_coords(ctx, v), ctx)
        assert omega_contains(P, ctx)


def test_dl_equation_sign_and_moore():
    ctx = VarietyCtx(2, 3, 2)
    for v in enumerate_dl(ctx):
        m = moore_det(tuple(map(int, v)), ctx)
        assert m ** 2 == ctx.big(-1)
        assert dl_contains(tuple(map(int, v)), ctx)
    with pytest.raises(NotOnVariety):
        covering_pi((1, 1), ctx)


def test_flag_complete_exactly_on_omega():
    ctx = VarietyCtx(3, 2, 3)
    for row in _all_projective(ctx):
        P = tuple(map(int, row))
        fl = flag_of(P, ctx)
        assert fl.complete == omega_contains(P, ctx)
        if fl.complete:
            assert fl.dims == (1, 2, 3)


@given(st.integers(1, 7), st.integers(1, 7))
def test_chart_round_trip(a, b):
    ctx = VarietyCtx(3, 2, 3)
    P = ProjectivePoint.from_coords(ctx, (1, a, b))
    y = chart_from_projective(P, ctx)
    assert chart_to_projective(y, ctx) == P
    kind = chart_stratum(y, 1, ctx)
    assert (kind == "interior") == omega_contains(P, ctx)


def test_chart_stratum_classification():
    ctx = VarietyCtx(3, 2, 3)
    # y_1 = 0 and y_2 in Ω^1, i.e. y_2 not in F_2
    assert chart_stratum((0, 3), 1, ctx) == "stratum"
    assert chart_stratum((0, 1), 1, ctx) == "outside"
    assert chart_stratum((0, 3), 2, ctx) == "outside"
    with pytest.raises(ValueError):
        chart_stratum((1, 1), 3, ctx)


def test_delta_symbolic_matches_moore_in_chart():
    ctx = VarietyCtx(3, 3, 2)
    delta = delta_symbolic(3, 3)
    F = ctx.big
    for y1 in range(1, F.order):
        for y2 in range(1, F.order, 2):
            X = (1, y1, F.mul(y1, y2))
            want = F.pow(moore_det(X, ctx).value, 2)
            assert delta.evaluate([F.elem(y1), F.elem(y2)]).value == want


@pytest.mark.parametrize("d,q,i", [(2, 2, 1), (2, 3, 1), (3, 2, 1), (3, 2, 2), (3, 3, 1), (3, 3, 2),
                                   (4, 2, 1), (4, 2, 2), (4, 2, 3)])
def test_factorization(d, q, i):
    r = factorization_check(d, q, i)
    assert r.ok, r.lines()


def test_factorization_constants():
    # characteristic 2 has no signs; over F_3 the constants are ±1
    assert int(factorization_check(3, 2, 1).constant) == 1
    assert int(factorization_check(3, 3, 1).constant) == 2
    assert int(factorization_check(3, 3, 2).constant) == 1


def test_budgets():
    with pytest.raises(BudgetExceeded):
        enumerate_omega(VarietyCtx(4, 3, 9, point_budget=10**7))
    with pytest.raises(BudgetExceeded):
        factorization_check(4, 3, 1)
