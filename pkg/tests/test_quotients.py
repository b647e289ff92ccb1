import numpy as np
import pytest
from hypothesis import given, strategies as st

from drinfeld.errors import NotOnVariety
from drinfeld.geometry import ChartPoint, ProjectivePoint, VarietyCtx, chart_from_projective, enumerate_omega
from drinfeld.groups import SimpleRootSubset, act_projective, enumerate_subgroup
from drinfeld.quotients import (
    PartialCompactPoint,
    chart_formulas,
    compactified_check,
    full_quotient_v,
    lemma_aa_certify,
    lusztig_L,
    quotient_laws,
    recursion_table,
    rho_I,
    rho_I_batch,
    rho_I_chart,
    rho_bar_I,
    roundtrip_check,
    stratum_points,
    verify_recursion_table,
    witness_batch,
    witness_from_omega,
)

CTX = VarietyCtx(3, 2, 3)
OMEGA = enumerate_omega(CTX)


@given(st.integers(0, OMEGA.shape[0] - 1))
def test_witness_round_trip(k):
    P = ProjectivePoint.from_coords(CTX, OMEGA[k])
    w = witness_from_omega(P)
    w.check()
    assert all(w.v)
    assert lusztig_L(w) == P


def test_witness_rejects_points_off_omega():
    with pytest.raises(NotOnVariety):
        witness_from_omega(ProjectivePoint.from_coords(CTX, (1, 1, 0)))
    with pytest.raises(NotOnVariety):
        witness_from_omega(ProjectivePoint.from_coords(CTX, (1, 1, 1)))


def test_batch_witness_matches_scalar():
    cols, vs = witness_batch(CTX, OMEGA)
    for r, row in enumerate(OMEGA):
        w = witness_from_omega(ProjectivePoint.from_coords(CTX, row))
        assert w.v == tuple(int(v[r]) for v in vs)
        assert w.columns == tuple(tuple(int(x) for x in c[r]) for c in cols)


@pytest.mark.parametrize("i", [1, 2])
def test_rho_constant_on_u_i_orbits(i):
    # brute force: apply every element of U_I, not just generators
    I = SimpleRootSubset.all_but(3, i)
    group = enumerate_subgroup("U_I", 3, 2, I)
    images = {}
    for row in OMEGA:
        P = ProjectivePoint.from_coords(CTX, row)
        img = rho_I(P, i)
        assert all(rho_I(act_projective(g, P), i) == img for g in group)
        orbit = frozenset(act_projective(g, P).coords for g in group)
        images.setdefault(img, set()).add(orbit)
    assert all(len(v) == 1 for v in images.values())


def test_rho_batch_matches_scalar():
    L, M, R = rho_I_batch(CTX, OMEGA, 1)
    for r, row in enumerate(OMEGA):
        img = rho_I(ProjectivePoint.from_coords(CTX, row), 1)
        assert img.left == tuple(L[r].tolist()) and img.middle == M[r] and img.right == tuple(R[r].tolist())


def test_full_quotient_is_u_invariant():
    group = enumerate_subgroup("U", 3, 2)
    for row in OMEGA:
        P = ProjectivePoint.from_coords(CTX, row)
        v = full_quotient_v(P)
        assert all(full_quotient_v(act_projective(g, P)) == v for g in group)


@pytest.mark.parametrize("d,q,m", [(2, 3, 2), (3, 2, 3), (3, 3, 3), (4, 2, 4)])
def test_quotient_laws(d, q, m):
    ctx = VarietyCtx(d, q, m)
    om = enumerate_omega(ctx)
    for i in [*range(1, d), None]:
        r = quotient_laws(ctx, i, om)
        assert r.ok, r.lines()


@pytest.mark.parametrize("d,q", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)])
def test_recursion_table_independent_recomputation(d, q):
    for i in range(1, d):
        assert verify_recursion_table(recursion_table(d, q, i))


@pytest.mark.parametrize("d,q,i", [(3, 2, 1), (3, 2, 2), (3, 3, 1), (3, 3, 2), (4, 2, 1), (4, 2, 2), (4, 2, 3)])
def test_lemma_aa(d, q, i):
    c = lemma_aa_certify(d, q, i)
    assert c.ok, c.lines()
    assert {name for name, _, _ in c.checks} >= {"pole", "support-v"}


def test_chart_formulas_against_matrix_path():
    ctx = VarietyCtx(3, 3, 3)
    for row in enumerate_omega(ctx)[::17]:
        P = ProjectivePoint.from_coords(ctx, row)
        y = chart_from_projective(P, ctx)
        for i in (1, 2):
            assert rho_I_chart(y, i, ctx) == rho_I(P, i)


def test_boundary_extension():
    ctx = VarietyCtx(3, 2, 4)
    pts = stratum_points(ctx, 1)
    assert pts.shape[0] == 14
    images = {rho_bar_I(PartialCompactPoint.classify(ChartPoint.from_coords(ctx, y), 1)) for y in pts}
    assert len(images) == 14 and all(img.middle == 0 for img in images)
    with pytest.raises(NotOnVariety):
        PartialCompactPoint.classify(ChartPoint.from_coords(ctx, (0, 1)), 1)


@pytest.mark.parametrize("d,q,m", [(3, 2, 4), (3, 3, 3), (4, 2, 4)])
def test_compactified_suite(d, q, m):
    ctx = VarietyCtx(d, q, m)
    for i in range(1, d):
        r = compactified_check(ctx, i)
        assert r.ok, r.lines()


def test_roundtrip_suite():
    assert roundtrip_check(VarietyCtx(4, 2, 5)).ok


def test_chart_formula_shape():
    left, v, right = chart_formulas(3, 2, 1)
    assert len(left) == 1 and len(right) == 2
