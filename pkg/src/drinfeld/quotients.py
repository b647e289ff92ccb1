"""Lusztig's description of Ω by unipotent matrices, and the quotient maps.

A point [X_0 : ... : X_{d-1}] of Ω with x_j = X_j / X_{d-1} determines an
upper unitriangular u whose columns, read right to left, are u_1, ..., u_d:

    u_1 = (x_0, ..., x_{d-2}, 1),
    v_k = u_{d-k,k}^q - u_{d-k,k},
    u_{k+1} = (F(u_k) - u_k) / v_k,

where F raises coordinates to the q-th power and u_{j,k} is row j of u_k.
The tuple (v_{d-1}, ..., v_1) is the quotient by U, and for the maximal
parabolic missing α_i,

    rho_I(P) = ([u_{1,d+1-i} : ... : u_{i-1,d+1-i} : 1], v_{d-i},
                [u_{i+1,1} : ... : u_{d-1,1} : 1])

is the quotient by its unipotent radical U_I.

In the chart y_k = X_k / X_{k-1} the entries become rational functions.
``recursion_table`` computes the functions a_{jk} with
u_{j,k+1} = a_{jk} / (y_j ... y_{d-1-k})^(q^k) together with the v_k.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, CheckFailed, NotOnVariety
from .fields import FieldCtx, FieldElem, make_field, prime_power
from .geometry import (
    DEFAULT_SYMBOLIC_CAP,
    ChartPoint,
    ProjectivePoint,
    VarietyCtx,
    chart_stratum,
    enumerate_omega,
    normalize_batch,
    omega_contains,
    omega_mask_batch,
    point_keys,
)
from .counting import omega_count_closed
from .groups import (
    SimpleRootSubset,
    WeylData,
    act_batch,
    elementary_generators,
    orbit_labels,
    subgroup_order,
)
from .symbolic import MultiPoly, RatFunc, ord_y, reduce_mod_y

__all__ = [
    "PartialCompactPoint",
    "QuotientImagePoint",
    "RecursionTable",
    "SuiteReport",
    "UnipotentWitness",
    "chart_formulas",
    "compactified_check",
    "full_quotient_v",
    "full_quotient_v_batch",
    "lemma_aa_certify",
    "lusztig_L",
    "quotient_laws",
    "recursion_table",
    "rho_I",
    "rho_I_batch",
    "rho_I_chart",
    "rho_bar_I",
    "roundtrip_check",
    "stratum_points",
    "verify_recursion_table",
    "witness_batch",
    "witness_from_omega",
]


# ---------------------------------------------------------------------------
# witnesses

@dataclass(frozen=True)
class UnipotentWitness:
    """Columns u_1, ..., u_d (``columns[k-1]`` is u_k) and v_1, ..., v_{d-1}."""

    ctx: VarietyCtx = field(repr=False, compare=False)
    columns: tuple[tuple[int, ...], ...]
    v: tuple[int, ...]

    def entry(self, j: int, k: int) -> int:
        """u_{j,k}, 1-based."""
        return self.columns[k - 1][j - 1]

    def matrix(self) -> list[list[int]]:
        """u as a matrix: column c (1-based) is u_{d+1-c}."""
        d = self.ctx.d
        return [[self.columns[d - 1 - c][r] for c in range(d)] for r in range(d)]

    def check(self) -> None:
        """Raise CheckFailed unless the defining relations hold."""
        F, d = self.ctx.big, self.ctx.d
        for k in range(1, d + 1):
            col = self.columns[k - 1]
            if col[d - k] != 1 or any(col[d - k + 1:]):
                raise CheckFailed(f"column u_{k} is not unitriangular")
        for k in range(1, d):
            u = self.columns[k - 1]
            a = u[d - k - 1]
            vk = F.sub(F.frob(a), a)
            if vk == 0 or vk != self.v[k - 1]:
                raise CheckFailed(f"v_{k} does not match its column")
            nxt = self.columns[k]
            for r in range(d):
                if F.sub(F.frob(u[r]), u[r]) != F.mul(vk, nxt[r]):
                    raise CheckFailed(f"F(u_{k}) - u_{k} != v_{k} u_{k + 1}")


def witness_from_omega(P, ctx: VarietyCtx | None = None) -> UnipotentWitness:
    """The matrix u attached to a point of Ω."""
    if isinstance(P, ProjectivePoint):
        ctx, X = P.ctx, P.coords
    else:
        X = tuple(int(x) for x in P)
    F, d = ctx.big, ctx.d
    if X[-1] == 0:
        raise NotOnVariety("X_{d-1} = 0: point is not in Ω")
    inv = F.inv(X[-1])
    col = [F.mul(x, inv) for x in X]
    columns = [tuple(col)]
    vs = []
    for k in range(1, d):
        a = col[d - k - 1]
        vk = F.sub(F.frob(a), a)
        if vk == 0:
            raise NotOnVariety(f"v_{k} = 0: point is not in Ω")
        vinv = F.inv(vk)
        col = [F.mul(F.sub(F.frob(x), x), vinv) for x in col]
        columns.append(tuple(col))
        vs.append(vk)
    return UnipotentWitness(ctx, tuple(columns), tuple(vs))


def lusztig_L(w: UnipotentWitness) -> ProjectivePoint:
    """First column of u · w_Δ, as a projective point."""
    w.check()
    F, d = w.ctx.big, w.ctx.d
    u = w.matrix()
    w0 = WeylData(d).longest_matrix(w.ctx.base).embedded(F)
    first = []
    for r in range(d):
        acc = 0
        for c in range(d):
            acc = F.add(acc, F.mul(u[r][c], int(w0[c, 0])))
        first.append(acc)
    P = ProjectivePoint.from_coords(w.ctx, first)
    if not omega_contains(P, w.ctx):
        raise CheckFailed("L(u) is not in Ω")
    return P


def full_quotient_v(P, ctx: VarietyCtx | None = None) -> tuple[int, ...]:
    """(v_{d-1}, ..., v_1)."""
    return tuple(reversed(witness_from_omega(P, ctx).v))


@dataclass(frozen=True)
class QuotientImagePoint:
    """Point of Ω^{i-1} x A^1 x Ω^{d-1-i}; left and right are normalized projective tuples."""

    left: tuple[int, ...]
    middle: int
    right: tuple[int, ...]


def _normalize(F: FieldCtx, coords: Sequence[int]) -> tuple[int, ...]:
    lead = next(c for c in coords if c)
    inv = F.inv(lead)
    return tuple(F.mul(c, inv) for c in coords)


def _check_i(d: int, i: int) -> None:
    if not 1 <= i <= d - 1:
        raise ValueError(f"stratum index {i} out of range 1..{d - 1}")


def rho_I(P, i: int, ctx: VarietyCtx | None = None) -> QuotientImagePoint:
    """Quotient by U_I (I = Δ minus {α_i}), computed from the matrix u."""
    w = witness_from_omega(P, ctx)
    ctx = w.ctx
    F, d = ctx.big, ctx.d
    _check_i(d, i)
    left = [w.entry(j, d + 1 - i) for j in range(1, i)] + [1]
    right = [w.entry(j, 1) for j in range(i + 1, d)] + [1]
    out = QuotientImagePoint(_normalize(F, left), w.v[d - i - 1], _normalize(F, right))
    _check_image(out, ctx, i)
    return out


def _check_image(pt: QuotientImagePoint, ctx: VarietyCtx, i: int) -> None:
    left_ctx = ctx.with_rank(i)
    right_ctx = ctx.with_rank(ctx.d - i)
    if not omega_contains(pt.left, left_ctx) or not omega_contains(pt.right, right_ctx):
        raise CheckFailed("quotient image component is not in Ω")


# ---------------------------------------------------------------------------
# batch versions

def witness_batch(ctx: VarietyCtx, X: np.ndarray) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Columns u_1..u_d (each (n, d)) and v_1..v_{d-1} (each (n,)) for rows of X.

    Rows with some v_k = 0 get zeros from then on; check ``v`` to find them.
    """
    F, d = ctx.big, ctx.d
    X = np.asarray(X, dtype=np.int64)
    last = X[:, -1]
    good = last != 0
    safe = np.where(good, last, 1)
    col = F.vmul(X, F.vinv(safe)[:, None])
    col[~good] = 0
    cols, vs = [col], []
    for k in range(1, d):
        a = col[:, d - k - 1]
        vk = F.vsub(F.vfrob(a), a)
        vs.append(vk)
        nz = vk != 0
        inv = F.vinv(np.where(nz, vk, 1))
        col = F.vmul(F.vsub(F.vfrob(col), col), inv[:, None])
        col[~nz] = 0
        cols.append(col)
    return cols, vs


def full_quotient_v_batch(ctx: VarietyCtx, X: np.ndarray) -> np.ndarray:
    """(v_{d-1}, ..., v_1) per row, shape (n, d-1)."""
    _, vs = witness_batch(ctx, X)
    if not vs:
        return np.zeros((X.shape[0], 0), dtype=np.int64)
    return np.stack(vs[::-1], axis=1)


def rho_I_batch(ctx: VarietyCtx, X: np.ndarray, i: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(left (n, i), middle (n,), right (n, d-i)) with normalized factors."""
    F, d = ctx.big, ctx.d
    _check_i(d, i)
    cols, vs = witness_batch(ctx, X)
    n = X.shape[0]
    ones = np.ones((n, 1), dtype=np.int64)
    left = np.concatenate([cols[d - i][:, :i - 1], ones], axis=1)
    right = np.concatenate([cols[0][:, i:d - 1], ones], axis=1)
    return normalize_batch(F, left), vs[d - i - 1], normalize_batch(F, right)


# ---------------------------------------------------------------------------
# symbolic recursion

@dataclass(frozen=True)
class RecursionTable:
    """a[(j, k)] for 1 <= k <= depth, 1 <= j <= d-k-1, and v[k] for 1 <= k <= depth."""

    d: int
    q: int
    depth: int
    a: dict
    v: dict

    def restrict(self, i: int) -> "RecursionTable":
        """The part needed for the stratum index i (depth d - i)."""
        depth = self.d - i
        return RecursionTable(self.d, self.q, depth,
                              {key: r for key, r in self.a.items() if key[1] <= depth},
                              {k: r for k, r in self.v.items() if k <= depth})


def _prod_monomial(nv: int, lo: int, hi: int, power: int) -> list[int]:
    """Exponent vector of (y_lo ... y_hi)^power (1-based, inclusive)."""
    e = [0] * nv
    for t in range(lo, hi + 1):
        e[t - 1] = power
    return e


def _base_field(q: int) -> FieldCtx:
    p, f = prime_power(q)
    return make_field(p, f, f=f)


@functools.lru_cache(maxsize=None)
def _full_table(d: int, q: int) -> RecursionTable:
    Fq = _base_field(q)
    nv = d - 1
    one = MultiPoly.const(Fq, nv, 1)
    # a_{j,0} = 1 for every j reproduces the closed forms of a_{j,1} and v_1
    num = {j: one for j in range(1, d)}
    den = {j: one for j in range(1, d)}
    a, v = {}, {}
    for k in range(1, d):
        b = d - k
        step = q**k - q ** (k - 1)
        Nb, Db = num[b], den[b]
        mb = _prod_monomial(nv, b, b, step)
        vnum = Nb.frobenius() - (Nb * Db ** (q - 1)).mul_monomial(mb)
        Dbq = Db.frobenius()
        v[k] = RatFunc(vnum, Dbq.mul_monomial(_prod_monomial(nv, b, b, q**k)))
        new_num, new_den = {}, {}
        for j in range(1, d - k):
            Nj, Dj = num[j], den[j]
            mj = _prod_monomial(nv, j, d - k, step)
            top = Nj.frobenius() - (Nj * Dj ** (q - 1)).mul_monomial(mj)
            r = RatFunc(top * Dbq, Dj.frobenius() * vnum).cancel_monomials()
            new_num[j], new_den[j] = r.num, r.den
            a[(j, k)] = r
        num, den = new_num, new_den
    return RecursionTable(d, q, d - 1, a, v)


def recursion_table(d: int, q: int, i: int, *, cap: int = DEFAULT_SYMBOLIC_CAP) -> RecursionTable:
    """Symbolic a_{jk} and v_k needed for the stratum index i (memoized)."""
    _check_i(d, i)
    if q**d > cap:
        raise BudgetExceeded(f"symbolic recursion with q^d = {q**d} exceeds cap {cap}")
    return _full_table(d, q).restrict(i)


def verify_recursion_table(table: RecursionTable) -> bool:
    """Recompute every entry from the defining recursion with generic
    rational-function arithmetic and compare by cross multiplication."""
    d, q = table.d, table.q
    Fq = _base_field(q)
    nv = d - 1

    def mono(lo, hi, power):
        return RatFunc(MultiPoly.monomial(Fq, _prod_monomial(nv, lo, hi, power)))

    def y(n):
        return RatFunc.var(Fq, nv, n)

    prev = {}
    for j in range(1, d - 1):
        prod = mono(j, d - 1, 1)
        prev[j] = (1 - prod ** (q - 1)) / (1 - y(d - 1) ** (q - 1))
    if d >= 2 and table.depth >= 1:
        if table.v[1] != (1 - y(d - 1) ** (q - 1)) / y(d - 1) ** q:
            return False
    for k in range(1, table.depth + 1):
        if k >= 2:
            step = q**k - q ** (k - 1)
            B = prev[d - k]
            denom = B.frobenius() - mono(d - k, d - k, step) * B
            if table.v[k] != denom / y(d - k) ** (q**k):
                return False
            cur = {}
            for j in range(1, d - k):
                A = prev[j]
                cur[j] = (A.frobenius() - mono(j, d - k, step) * A) / denom
            prev = cur
        for j in range(1, d - k):
            if table.a[(j, k)] != prev[j]:
                return False
    return True


def chart_formulas(d: int, q: int, i: int, *, cap: int = DEFAULT_SYMBOLIC_CAP):
    """Left components, middle v_{d-i}, right components of rho_I in the chart."""
    t = recursion_table(d, q, i, cap=cap)
    Fq = _base_field(q)
    nv = d - 1
    k = d - i
    left = []
    for j in range(1, i):
        denom = MultiPoly.monomial(Fq, _prod_monomial(nv, j, i - 1, q**k))
        left.append(RatFunc(t.a[(j, k)].num, t.a[(j, k)].den * denom))
    left.append(RatFunc.const(Fq, nv, 1))
    right = [RatFunc(MultiPoly.const(Fq, nv, 1), MultiPoly.monomial(Fq, _prod_monomial(nv, j, d - 1, 1)))
             for j in range(i + 1, d)]
    right.append(RatFunc.const(Fq, nv, 1))
    return left, t.v[k], right


# ---------------------------------------------------------------------------
# certificates

@dataclass
class Certificate:
    d: int
    q: int
    i: int
    checks: list = field(default_factory=list)   # (name, params, ok)

    @property
    def ok(self) -> bool:
        return all(ok for _, _, ok in self.checks)

    def add(self, name: str, ok: bool, **params) -> None:
        self.checks.append((name, params, bool(ok)))

    def lines(self, prefix: str = "lemma-aa") -> list[str]:
        out = []
        for name, params, ok in self.checks:
            extra = "".join(f" {k}={v}" for k, v in params.items())
            out.append(f"check={prefix}.{name} d={self.d} q={self.q} i={self.i}{extra} "
                       f"{'PASS' if ok else 'FAIL'}")
        return out


def lemma_aa_certify(d: int, q: int, i: int, *, cap: int = DEFAULT_SYMBOLIC_CAP) -> Certificate:
    """Valuation and congruence checks on a_{j,d-i} (j < i) and v_{d-i}.

    shape:     after cancelling monomials, numerator and denominator have the
               same nonzero constant term, so a = (1 + f)/(1 + g) with f, g
               without constant term.
    valuation: ord_{y_n}(a_{j,d-i}) = 0 for every n.
    residue:   a_{j,d-i} ≡ 1 mod y_i.
    pole:      ord_{y_i}(v_{d-i}) = -q^(d-i).
    support:   a_{j,d-i} only involves y_j, ..., y_{d-1} and v_{d-i} only
               y_i, ..., y_{d-1}.
    """
    t = recursion_table(d, q, i, cap=cap)
    k = d - i
    cert = Certificate(d, q, i)
    for j in range(1, i):
        a = t.a[(j, k)].cancel_monomials()
        c_num, c_den = a.num.constant_term(), a.den.constant_term()
        cert.add("shape", c_num != 0 and c_num == c_den, j=j)
        cert.add("valuation", all(ord_y(a, n) == 0 for n in range(1, d)), j=j)
        cert.add("residue", reduce_mod_y(a, i) == 1, j=j)
        cert.add("support", a.support() <= set(range(j, d)), j=j)
    v = t.v[k]
    cert.add("pole", ord_y(v, i) == -(q**k), order=ord_y(v, i))
    cert.add("support-v", v.support() <= set(range(i, d)))
    return cert


# ---------------------------------------------------------------------------
# chart maps and the partial compactification

def _eval(r: RatFunc, ys: Sequence[int], ctx: VarietyCtx) -> int:
    return r.evaluate([FieldElem(ctx.big, y) for y in ys]).value


def rho_I_chart(y, i: int, ctx: VarietyCtx, *, cap: int = DEFAULT_SYMBOLIC_CAP) -> QuotientImagePoint:
    """rho_I through the symbolic chart formulas."""
    ys = y.coords if isinstance(y, ChartPoint) else tuple(int(c) for c in y)
    if chart_stratum(ys, i, ctx) != "interior":
        raise NotOnVariety("chart point is not in Ω")
    left, v, right = chart_formulas(ctx.d, ctx.q, i, cap=cap)
    F = ctx.big
    return QuotientImagePoint(_normalize(F, [_eval(r, ys, ctx) for r in left]), _eval(v, ys, ctx),
                              _normalize(F, [_eval(r, ys, ctx) for r in right]))


@dataclass(frozen=True)
class PartialCompactPoint:
    """A chart point of Ω or of the boundary stratum inside y_i = 0."""

    kind: str          # "interior" or "boundary"
    chart: ChartPoint
    i: int

    @classmethod
    def classify(cls, y: ChartPoint, i: int) -> "PartialCompactPoint":
        s = chart_stratum(y, i, y.ctx)
        if s == "outside":
            raise NotOnVariety("chart point is neither in Ω nor on the stratum")
        return cls("interior" if s == "interior" else "boundary", y, i)


def rho_bar_I(pt: PartialCompactPoint, *, cap: int = DEFAULT_SYMBOLIC_CAP) -> QuotientImagePoint:
    """Extension of rho_I (with inverted middle coordinate) to the stratum."""
    y, i = pt.chart, pt.i
    ctx = y.ctx
    F, d = ctx.big, ctx.d
    if pt.kind == "interior":
        img = rho_I_chart(y, i, ctx, cap=cap)
        return QuotientImagePoint(img.left, F.inv(img.middle), img.right)
    ys = y.coords
    if chart_stratum(ys, i, ctx) != "stratum":
        raise NotOnVariety("point is not on the stratum")
    e = ctx.q ** (d - i)
    left = []
    for j in range(1, i):
        prod = 1
        for t in range(j, i):
            prod = F.mul(prod, ys[t - 1])
        left.append(F.pow(F.inv(prod), e))
    left.append(1)
    right = []
    for j in range(i + 1, d):
        prod = 1
        for t in range(j, d):
            prod = F.mul(prod, ys[t - 1])
        right.append(F.inv(prod))
    right.append(1)
    return QuotientImagePoint(_normalize(F, left), 0, _normalize(F, right))


def stratum_points(ctx: VarietyCtx, i: int) -> np.ndarray:
    """Chart coordinates (n, d-1) of the rational points of the stratum in y_i = 0.

    Such a point is (y_<i, 0, y_>i) with y_<i and y_>i chart points of Ω in
    ranks i and d - i.
    """
    _check_i(ctx.d, i)
    parts = []
    for rank in (i, ctx.d - i):
        sub = ctx.with_rank(rank)
        om = enumerate_omega(sub)
        F = ctx.big
        ys = F.vdiv(om[:, 1:], om[:, :-1]) if rank > 1 else np.zeros((om.shape[0], 0), dtype=np.int64)
        parts.append(ys)
    lo, hi = parts
    n1, n2 = lo.shape[0], hi.shape[0]
    out = np.zeros((n1 * n2, ctx.d - 1), dtype=np.int64)
    out[:, :i - 1] = np.repeat(lo, n2, axis=0)
    out[:, i:] = np.tile(hi, (n1, 1))
    return out


# ---------------------------------------------------------------------------
# quotient laws on a full enumeration

@dataclass
class LawReport:
    d: int
    q: int
    m: int
    i: int | None
    points: int
    orbits: int
    images: int
    target_size: int
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list[str]:
        label = "quotient.U" if self.i is None else "quotient.U_I"
        i = "" if self.i is None else f" i={self.i}"
        out = []
        for name, ok in self.checks.items():
            out.append(f"check={label}.{name} d={self.d} q={self.q} m={self.m}{i} "
                       f"{'PASS' if ok else 'FAIL'}")
        out.append(f"stat={label}.surjectivity d={self.d} q={self.q} m={self.m}{i} "
                   f"orbits={self.orbits} images={self.images} target={self.target_size}")
        return out


def _row_ids(arrays: Sequence[np.ndarray]) -> np.ndarray:
    """Integer id per row of the concatenated columns (equal rows, equal ids)."""
    cols = np.concatenate([a.reshape(a.shape[0], -1) for a in arrays], axis=1)
    _, inv = np.unique(cols, axis=0, return_inverse=True)
    return inv.reshape(-1)


def quotient_laws(ctx: VarietyCtx, i: int | None, omega: np.ndarray | None = None) -> LawReport:
    """Orbit constancy, orbit separation and image membership.

    With ``i`` the group is U_I (I = Δ minus {α_i}) and the map rho_I;
    with ``i=None`` the group is U and the map is (v_{d-1}, ..., v_1).
    Surjectivity onto rational points of the target is reported only.
    """
    d, q, m = ctx.d, ctx.q, ctx.m
    F = ctx.big
    om = enumerate_omega(ctx) if omega is None else omega
    if i is None:
        gens = elementary_generators("U", d, q)
        order = subgroup_order("U", d, q)
        img_fn = lambda X: [full_quotient_v_batch(ctx, X)]
    else:
        I = SimpleRootSubset.all_but(d, i)
        gens = elementary_generators("U_I", d, q, I)
        order = subgroup_order("U_I", d, q, I)
        img_fn = lambda X: list(rho_I_batch(ctx, X, i))
    labels, n_orbits = orbit_labels(om, gens, F)
    img = img_fn(om)
    checks = {}
    if i is None:
        checks["nonzero"] = bool((img[0] != 0).all())
    else:
        left, middle, right = img
        checks["nonzero"] = bool((middle != 0).all())
        checks["membership"] = bool(omega_mask_batch(ctx.with_rank(i), left).all()
                                    and omega_mask_batch(ctx.with_rank(d - i), right).all())
    const = True
    for g in gens:
        moved = img_fn(act_batch(g, om, F))
        const &= all(np.array_equal(a, b) for a, b in zip(img, moved))
    checks["constancy"] = bool(const)
    ids = _row_ids(img) if om.shape[0] else np.zeros(0, dtype=np.int64)
    n_images = int(ids.max()) + 1 if ids.size else 0
    # separation: each image value comes from exactly one orbit
    pairs = np.unique(np.stack([ids, labels], axis=1), axis=0) if ids.size else np.zeros((0, 2))
    checks["separation"] = bool(pairs.shape[0] == n_images == n_orbits)
    sizes = np.bincount(labels) if labels.size else np.zeros(0, dtype=np.int64)
    checks["free"] = bool((sizes == order).all())
    Q = F.order
    if i is None:
        target = (Q - 1) ** (d - 1)
    else:
        target = omega_count_closed(i, q, m) * (Q - 1) * omega_count_closed(d - i, q, m)
    return LawReport(d, q, m, i, int(om.shape[0]), int(n_orbits), n_images, target, checks)


# ---------------------------------------------------------------------------
# batch suites: round trip and the partial compactification

@dataclass
class SuiteReport:
    """Named boolean checks plus informational stats for one parameter set."""

    label: str
    params: dict
    checks: dict
    stats: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list[str]:
        ps = " ".join(f"{k}={v}" for k, v in self.params.items())
        out = [f"check={self.label}.{k} {ps} {'PASS' if v else 'FAIL'}" for k, v in self.checks.items()]
        if self.stats:
            out.append(f"stat={self.label} {ps} " + " ".join(f"{k}={v}" for k, v in self.stats.items()))
        return out


def roundtrip_check(ctx: VarietyCtx, omega: np.ndarray | None = None) -> SuiteReport:
    """Build u for every point of Ω and map it back through L.

    Checks that every v_k is nonzero, that the columns are unitriangular and
    satisfy F(u_k) - u_k = v_k u_{k+1}, and that the first column of u·w_Δ
    is the starting point.
    """
    F, d = ctx.big, ctx.d
    om = enumerate_omega(ctx) if omega is None else omega
    cols, vs = witness_batch(ctx, om)
    checks = {"v-nonzero": all(bool((v != 0).all()) for v in vs)}
    shape = True
    for k in range(1, d + 1):
        c = cols[k - 1]
        shape &= bool((c[:, d - k] == 1).all()) and not c[:, d - k + 1:].any()
    rel = True
    for k in range(1, d):
        lhs = F.vsub(F.vfrob(cols[k - 1]), cols[k - 1])
        rel &= bool(np.array_equal(lhs, F.vmul(cols[k], vs[k - 1][:, None])))
    checks["unitriangular"] = shape
    checks["recursion"] = rel
    # first column of u·w_Δ, where column c of u is u_{d-c} (0-based c)
    w0 = WeylData(d).longest_matrix(ctx.base).embedded(F)
    first = np.zeros_like(om)
    for c in range(d):
        coef = int(w0[c, 0])
        if coef:
            first = F.vadd(first, F.vmul(cols[d - 1 - c], coef))
    back = normalize_batch(F, first)
    checks["identity"] = bool(np.array_equal(back, normalize_batch(F, om)))
    checks["image-in-omega"] = bool(omega_mask_batch(ctx, back).all())
    return SuiteReport("roundtrip", {"d": d, "q": ctx.q, "m": ctx.m}, checks,
                       {"points": int(om.shape[0])})


def _chart_cols(F: FieldCtx, om: np.ndarray) -> list[np.ndarray]:
    ys = F.vdiv(om[:, 1:], om[:, :-1])
    return [ys[:, k] for k in range(ys.shape[1])]


def compactified_check(ctx: VarietyCtx, i: int, *, cap: int = DEFAULT_SYMBOLIC_CAP,
                       omega: np.ndarray | None = None, sample: int = 64) -> SuiteReport:
    """Chart formulas against the matrix path, and the boundary extension.

    chart-agree:        symbolic rho_I equals rho_I_batch on every point of Ω.
    boundary-reduction: on every rational point of the stratum, the closed
                        boundary formula equals the chart formulas reduced
                        mod y_i, and 1/v_{d-i} reduces to 0.
    boundary-injective: distinct stratum points have distinct images.
    boundary-membership: the outer image components lie in Ω.
    interior-extension: on a sample of Ω, rho_bar_I is rho_I with the middle
                        coordinate inverted.
    """
    F, d = ctx.big, ctx.d
    _check_i(d, i)
    om = enumerate_omega(ctx) if omega is None else omega
    left_f, v_f, right_f = chart_formulas(d, ctx.q, i, cap=cap)
    ycols = _chart_cols(F, om)
    ev = lambda fs, cols: np.stack([r.evaluate_batch(F, cols) for r in fs], axis=1)
    L, M, R = rho_I_batch(ctx, om, i)
    checks = {
        "chart-agree": bool(np.array_equal(normalize_batch(F, ev(left_f, ycols)), L)
                            and np.array_equal(v_f.evaluate_batch(F, ycols), M)
                            and np.array_equal(normalize_batch(F, ev(right_f, ycols)), R)),
    }

    pts = stratum_points(ctx, i)
    left_r = [reduce_mod_y(r, i) for r in left_f]
    right_r = [reduce_mod_y(r, i) for r in right_f]
    mid_r = reduce_mod_y(v_f.inverse(), i)
    scols = [pts[:, k] for k in range(d - 1)]
    exp_l, exp_r = normalize_batch(F, ev(left_r, scols)), normalize_batch(F, ev(right_r, scols))
    imgs = []
    agree = mid_r.is_zero()
    for r, y in enumerate(pts):
        img = rho_bar_I(PartialCompactPoint.classify(ChartPoint.from_coords(ctx, y), i), cap=cap)
        agree &= (img.middle == 0 and img.left == tuple(int(x) for x in exp_l[r])
                  and img.right == tuple(int(x) for x in exp_r[r]))
        imgs.append((img.left, img.right))
    checks["boundary-reduction"] = bool(agree)
    checks["boundary-injective"] = len(set(imgs)) == len(imgs)
    checks["boundary-membership"] = bool(omega_mask_batch(ctx.with_rank(i), exp_l).all()
                                         and omega_mask_batch(ctx.with_rank(d - i), exp_r).all())

    ext = True
    for r in np.linspace(0, om.shape[0] - 1, min(sample, om.shape[0])).astype(np.int64):
        y = ChartPoint.from_coords(ctx, [int(c[r]) for c in ycols])
        img = rho_bar_I(PartialCompactPoint.classify(y, i), cap=cap)
        ext &= (img.left == tuple(int(x) for x in L[r]) and img.right == tuple(int(x) for x in R[r])
                and img.middle == F.inv(int(M[r])))
    checks["interior-extension"] = bool(ext)
    return SuiteReport("compactified-quotient", {"d": d, "q": ctx.q, "m": ctx.m, "i": i}, checks,
                       {"interior": int(om.shape[0]), "stratum": int(pts.shape[0])})
