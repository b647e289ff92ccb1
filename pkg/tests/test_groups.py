import numpy as np
import pytest

from drinfeld.errors import BudgetExceeded, ContextMismatch
from drinfeld.fields import make_field
from drinfeld.geometry import AffineVector, ProjectivePoint, VarietyCtx, dl_contains, enumerate_dl, enumerate_omega
from drinfeld.groups import (
    GLdElem,
    SimpleRootSubset,
    TorusElem,
    WeylData,
    act_batch,
    act_projective,
    chart_action,
    chart_action_mod_stratum,
    count_subspaces_bruteforce,
    elementary_generators,
    enumerate_subgroup,
    orbit_labels,
    orbits,
    stratum_component_count,
    subgroup_order,
    torus_act,
)
from drinfeld.symbolic import RatFunc

F2 = make_field(2, 1)


def test_root_subset_blocks():
    I = SimpleRootSubset.all_but(4, 2)
    assert I.blocks == (2, 2) and I.missing == (2,)
    assert SimpleRootSubset(4, frozenset()).blocks == (1, 1, 1, 1)
    with pytest.raises(ValueError):
        SimpleRootSubset.all_but(3, 3)


def test_subgroup_orders_match_enumeration():
    I = SimpleRootSubset.all_but(3, 2)
    expected = {"U": 8, "U_I": 4, "V_I": 2, "B": 8, "P_I": 24, "T_d": 7}
    for kind, n in expected.items():
        assert subgroup_order(kind, 3, 2, I) == n
        elems = enumerate_subgroup(kind, 3, 2, I)
        assert len(elems) == n and len(set(elems)) == n


def test_subgroups_closed_under_product():
    I = SimpleRootSubset.all_but(3, 1)
    for kind in ("U", "U_I", "P_I"):
        G = set(enumerate_subgroup(kind, 3, 2, I))
        assert all(a @ b in G for a in G for b in G)
        assert all(a.inverse in G for a in G)


def test_group_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_subgroup("B", 4, 3, budget=100)


def test_weyl_matrices():
    c = WeylData(3).coxeter_matrix(F2)
    assert c.order() == 3
    w0 = WeylData(4).longest_matrix(F2)
    assert (w0 @ w0) == GLdElem.identity(F2, 4)
    with pytest.raises(ValueError):
        GLdElem(F2, [[1, 1], [1, 1]])


@pytest.mark.parametrize("i", [1, 2])
def test_u_i_acts_freely_on_omega(i):
    ctx = VarietyCtx(3, 2, 3)
    om = enumerate_omega(ctx)
    I = SimpleRootSubset.all_but(3, i)
    labels, n = orbit_labels(om, elementary_generators("U_I", 3, 2, I), ctx.big)
    assert n == 6 and np.bincount(labels).tolist() == [4] * 6


def test_orbit_labels_match_explicit_closure():
    ctx = VarietyCtx(3, 2, 3)
    om = enumerate_omega(ctx)
    group = enumerate_subgroup("B", 3, 2)
    pts = [ProjectivePoint.from_coords(ctx, r) for r in om]
    explicit = orbits(group, pts, act_projective)
    labels, n = orbit_labels(om, group, ctx.big)
    assert n == len(explicit)
    for k, orb in enumerate(explicit):
        assert sorted(p.coords for p in orb) == [tuple(r) for r in om[labels == k].tolist()]


def test_act_batch_matches_scalar():
    ctx = VarietyCtx(3, 3, 2)
    om = enumerate_omega(ctx)
    F3 = ctx.base
    g = GLdElem(F3, [[1, 2, 0], [0, 2, 1], [1, 0, 1]])
    got = act_batch(g, om, ctx.big)
    for row, img in zip(om, got):
        assert act_projective(g, ProjectivePoint.from_coords(ctx, row)).coords == tuple(img.tolist())


def test_torus_acts_on_dl():
    ctx = VarietyCtx(2, 2, 2)
    T = make_field(2, 2)
    for s in range(1, 4):
        for v in enumerate_dl(ctx):
            w = torus_act(TorusElem(T.elem(s)), AffineVector.from_coords(ctx, v))
            assert dl_contains(w.coords, ctx)
    with pytest.raises(ContextMismatch):
        torus_act(TorusElem(make_field(2, 2).elem(2)), AffineVector.from_coords(VarietyCtx(2, 2, 3), (1, 1)))


def test_chart_action_and_stratum():
    F = make_field(2, 1)
    g = enumerate_subgroup("U_I", 3, 2, SimpleRootSubset.all_but(3, 2))[3]
    ys = chart_action(g)
    assert len(ys) == 2
    # U_I for I missing α_2 fixes the hyperplane y_2 = 0 pointwise in y_1
    red = chart_action_mod_stratum(g, 2)
    assert red[0] == RatFunc.var(F, 2, 1)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
@pytest.mark.parametrize("q", [2, 3])
def test_subspace_counts(d, q):
    for i in range(0, d + 1):
        assert stratum_component_count(d, q, i) == count_subspaces_bruteforce(d, q, i)
