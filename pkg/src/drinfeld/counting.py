"""Point counts of Ω and DL, covering fibers, determinant classes, twisted counts.

Everything here streams over P^{d-1}(F_{q^m}) in chunks, so memory stays
bounded even when DL has tens of millions of rational points.

Fibers of DL -> Ω: for a point X of Ω the scalars s with sX in DL solve
s^(q^d - 1) = (-1)^(d-1) / moore(X)^(q-1), because moore(sX) = s^N moore(X)
with N = (q^d - 1)/(q - 1).  The solutions come from a linear congruence
in discrete logs.  Every lifted point has its determinant value re-tested
against the DL equation, and a sample per chunk is rebuilt as a vector and
run through the full membership test, so the counts do not rest on the
congruence alone.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded
from .geometry import (
    DEFAULT_POINT_BUDGET,
    VarietyCtx,
    dl_fiber_scalars,
    dl_lift_batch,
    dl_mask_batch,
    iter_omega,
    iter_projective,
    moore_det_batch,
    normalize_batch,
    omega_mask_batch,
    projective_count,
)
from .groups import act_batch

CSV_FIELDS = ("d", "q", "m", "omega_enum", "omega_closed", "dl_enum", "fiber_gcd", "classes")

__all__ = [
    "CSV_FIELDS",
    "ClassReport",
    "CountRow",
    "FiberReport",
    "component_classes",
    "count_row",
    "count_table",
    "fiber_statistics",
    "omega_count_closed",
    "rows_to_csv",
    "rows_to_json",
    "twisted_count",
]


def omega_count_closed(d: int, q: int, m: int) -> int:
    """prod_{j<d} (q^m - q^j) / (q^m - 1): ordered F_q-independent d-tuples up to scaling."""
    Q = q**m
    return math.prod(Q - q**j for j in range(d)) // (Q - 1)


def _lift_chunk(ctx: VarietyCtx) -> int:
    # keep the lifted arrays near 2^21 rows
    g = math.gcd(ctx.q**ctx.d - 1, ctx.Q - 1)
    return max(1 << 10, (1 << 21) // g)


@dataclass
class _Scan:
    omega: int = 0
    dl: int = 0
    empty: int = 0
    sizes: dict = field(default_factory=dict)
    classes: dict = field(default_factory=dict)
    lifted_ok: bool = True


def _scan(ctx: VarietyCtx, budget: int | None, want_classes: bool, sample: int = 4096) -> _Scan:
    """One pass over Ω: fibers, DL count and determinant classes.

    The Moore determinant of a lifted point s·X is s^N·moore(X); that value
    is tested against the DL equation for every lifted point, and for up to
    ``sample`` points per chunk the lifted vector itself is rebuilt and run
    through the full membership test and projected back to X.
    """
    F = ctx.big
    Nd = (ctx.q**ctx.d - 1) // (ctx.q - 1)
    out = _Scan()
    for X in iter_omega(ctx, budget, chunk=_lift_chunk(ctx)):
        out.omega += X.shape[0]
        M = moore_det_batch(F, ctx.q, X)
        owner, s = dl_fiber_scalars(ctx, X, M)
        if owner.size:
            vals = F.vmul(M[owner], F.vpow(s, Nd))
            out.lifted_ok &= bool((F.vpow(vals, ctx.q - 1) == ctx.sign).all())
            pick = np.linspace(0, owner.size - 1, min(sample, owner.size)).astype(np.int64)
            pts = F.vmul(X[owner[pick]], s[pick][:, None])
            out.lifted_ok &= bool(dl_mask_batch(ctx, pts).all())
            out.lifted_ok &= bool(np.array_equal(moore_det_batch(F, ctx.q, pts), vals[pick]))
            out.lifted_ok &= bool(np.array_equal(normalize_batch(F, pts), X[owner[pick]]))
            if want_classes:
                u, c = np.unique(vals, return_counts=True)
                for v, k in zip(u, c):
                    out.classes[int(v)] = out.classes.get(int(v), 0) + int(k)
        counts = np.bincount(owner, minlength=X.shape[0])
        out.empty += int((counts == 0).sum())
        for size, c in zip(*np.unique(counts[counts > 0], return_counts=True)):
            out.sizes[int(size)] = out.sizes.get(int(size), 0) + int(c)
        out.dl += int(owner.size)
    return out


@dataclass
class CountRow:
    d: int
    q: int
    m: int
    omega_enum: int
    omega_closed: int
    dl_enum: int
    fiber_gcd: int
    classes: int
    empty_fibers: int = 0
    fibers_ok: bool = True

    @property
    def ok(self) -> bool:
        return self.omega_enum == self.omega_closed and self.fibers_ok

    def record(self) -> dict:
        return {k: getattr(self, k) for k in CSV_FIELDS}


def count_row(d: int, q: int, m: int, budget: int = DEFAULT_POINT_BUDGET,
              modulus: Sequence[int] | None = None) -> CountRow:
    ctx = VarietyCtx(d, q, m, point_budget=budget, modulus=modulus)
    g = math.gcd(q**d - 1, q**m - 1)
    s = _scan(ctx, budget, want_classes=True)
    fibers_ok = s.lifted_ok and set(s.sizes) <= {g}
    return CountRow(d, q, m, s.omega, omega_count_closed(d, q, m), s.dl, g, len(s.classes),
                    s.empty, fibers_ok)


def count_table(d: int, q: int, ms: Iterable[int], budget: int = DEFAULT_POINT_BUDGET) -> list[CountRow]:
    return [count_row(d, q, m, budget) for m in ms]


def rows_to_csv(rows: Sequence[CountRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r.record())
    return buf.getvalue()


def rows_to_json(rows: Sequence[CountRow]) -> str:
    return json.dumps([r.record() for r in rows], indent=2) + "\n"


# ---------------------------------------------------------------------------

@dataclass
class FiberReport:
    d: int
    q: int
    m: int
    omega: int
    dl: int
    gcd: int
    sizes: dict          # fiber size -> number of Ω points with that size
    empty: int
    ok: bool

    def lines(self) -> list[str]:
        return [
            f"check=covering.fiber-size d={self.d} q={self.q} m={self.m} gcd={self.gcd} "
            f"sizes={sorted(self.sizes)} {'PASS' if self.ok else 'FAIL'}",
            f"stat=covering.empty-fibers d={self.d} q={self.q} m={self.m} "
            f"omega={self.omega} dl={self.dl} empty={self.empty}",
        ]


def fiber_statistics(d: int, q: int, m: int, budget: int = DEFAULT_POINT_BUDGET,
                     modulus: Sequence[int] | None = None) -> FiberReport:
    """Sizes of the rational fibers of DL -> Ω over every point of Ω(F_{q^m}).

    ``ok`` means every nonempty fiber has exactly gcd(q^d - 1, q^m - 1)
    points and every lifted point passed the membership re-check.  Empty
    fibers are counted, not treated as failures.
    """
    ctx = VarietyCtx(d, q, m, point_budget=budget, modulus=modulus)
    g = math.gcd(q**d - 1, q**m - 1)
    s = _scan(ctx, budget, want_classes=False)
    ok = s.lifted_ok and set(s.sizes) <= {g}
    return FiberReport(d, q, m, s.omega, s.dl, g, s.sizes, s.empty, ok)


# ---------------------------------------------------------------------------

@dataclass
class ClassReport:
    d: int
    q: int
    m: int
    classes: dict        # Moore determinant encoding -> number of DL points
    checks: dict
    transitive: bool | None   # None when not every class is populated

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list[str]:
        out = [f"check=classes.{k} d={self.d} q={self.q} m={self.m} {'PASS' if v else 'FAIL'}"
               for k, v in self.checks.items()]
        sizes = sorted(self.classes.values())
        out.append(f"stat=classes.sizes d={self.d} q={self.q} m={self.m} classes={len(sizes)} "
                   f"sizes={sizes} transitive={self.transitive}")
        return out


def component_classes(d: int, q: int, m: int, budget: int = DEFAULT_POINT_BUDGET,
                      modulus: Sequence[int] | None = None) -> ClassReport:
    """Partition DL(F_{q^m}) by the value of the Moore determinant.

    Checks: at most q - 1 classes; scaling by the rational part of
    H = ker(norm) fixes every class; scaling by the rational part of T_d
    multiplies the class value by the norm of the scalar.  When all q - 1
    classes occur, also checks equal class sizes and reports whether the
    rational torus elements permute the classes transitively.
    """
    ctx = VarietyCtx(d, q, m, point_budget=budget, modulus=modulus)
    F = ctx.big
    N1 = F.order - 1
    Nd = (q**d - 1) // (q - 1)
    gen = F.tables.exp
    t_gen = int(gen[(N1 // math.gcd(q**d - 1, N1)) % N1]) if N1 else 1
    h_gen = int(gen[(N1 // math.gcd(Nd, N1)) % N1]) if N1 else 1
    t_norm = F.pow(t_gen, Nd)
    classes: dict[int, int] = {}
    h_ok = t_ok = True
    for X in iter_omega(ctx, budget, chunk=_lift_chunk(ctx)):
        pts, _ = dl_lift_batch(ctx, X)
        if not pts.shape[0]:
            continue
        M = moore_det_batch(F, q, pts)
        vals, c = np.unique(M, return_counts=True)
        for v, k in zip(vals, c):
            classes[int(v)] = classes.get(int(v), 0) + int(k)
        Mh = moore_det_batch(F, q, F.vmul(pts, h_gen))
        h_ok &= bool(np.array_equal(Mh, M))
        Mt = moore_det_batch(F, q, F.vmul(pts, t_gen))
        t_ok &= bool(np.array_equal(Mt, F.vmul(M, t_norm)))
        t_ok &= bool(dl_mask_batch(ctx, F.vmul(pts, t_gen)).all())
    checks = {
        "bound": len(classes) <= q - 1,
        "h-stable": h_ok,
        "torus-norm": t_ok,
    }
    transitive = None
    if classes and len(classes) == q - 1:
        checks["equal-sizes"] = len(set(classes.values())) == 1
        start = next(iter(classes))
        orbit, x = {start}, F.mul(start, t_norm)
        while x not in orbit:
            orbit.add(x)
            x = F.mul(x, t_norm)
        transitive = orbit == set(classes)
    return ClassReport(d, q, m, classes, checks, transitive)


# ---------------------------------------------------------------------------

def twisted_count(g, m: int, s: int | None = None, *, budget: int = DEFAULT_POINT_BUDGET,
                  check_stable: bool = True) -> int:
    """Number of P in Ω with g·F^m(P) = P.

    Such points are defined over F_{q^(m s)} once s is a multiple of the
    projective order of g; the default s is the matrix order of g times d.
    With ``check_stable`` the count is repeated over F_{q^(2 m s)} when the
    budget allows, and a mismatch raises ValueError.
    """
    d = g.d
    q = g.field.order
    if s is None:
        s = g.order() * d
    if s < 1:
        raise ValueError("s must be positive")

    def count(level: int) -> int:
        ctx = VarietyCtx(d, q, m * level, point_budget=budget)
        if projective_count(ctx.Q, d) > budget:
            raise BudgetExceeded(f"|P^{d - 1}(F_{ctx.Q})| exceeds point budget {budget}")
        F = ctx.big
        total = 0
        for X in iter_projective(F, d):
            Y = act_batch(g, F.vfrob(X, m), F)
            fixed = (Y == X).all(axis=1)
            if fixed.any():
                total += int(omega_mask_batch(ctx, X[fixed]).sum())
        return total

    n = count(s)
    if check_stable:
        try:
            n2 = count(2 * s)
        except BudgetExceeded:
            return n
        if n2 != n:
            raise ValueError(f"fixed points not stable between s={s} and 2s; s is too small")
    return n
