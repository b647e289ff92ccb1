"""Drinfeld space, the covering variety DL, flags and the y-chart.

Points over F_{q^m} are handled two ways.  The small classes below
(``ProjectivePoint`` and friends) hold tuples of element encodings and use
scalar arithmetic; they are what the tests use as oracles.  The ``*_batch``
functions take an int64 array of shape (n, d) of encodings and do the same
computations through log tables, which is what makes full enumerations over
millions of points feasible.

Notation: Ω ⊂ P^{d-1} is the set of points whose coordinates are linearly
independent over F_q (the complement of all F_q-rational hyperplanes), and
DL ⊂ A^d is cut out by moore(X)^(q-1) = (-1)^(d-1).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, NotOnVariety
from .fields import DEFAULT_FIELD_BUDGET, FieldCtx, FieldElem, embedding, make_field, prime_power
from .symbolic import MultiPoly

DEFAULT_POINT_BUDGET = 10**7
DEFAULT_SYMBOLIC_CAP = 27
_CHUNK = 1 << 20

__all__ = [
    "AffineVector",
    "ChartPoint",
    "DEFAULT_POINT_BUDGET",
    "DEFAULT_SYMBOLIC_CAP",
    "Flag",
    "ProjectivePoint",
    "VarietyCtx",
    "chart_from_projective",
    "chart_stratum",
    "chart_to_projective",
    "covering_pi",
    "delta_di_symbolic",
    "delta_symbolic",
    "dl_contains",
    "dl_fiber_logs",
    "dl_fiber_scalars",
    "dl_lift_batch",
    "dl_mask_batch",
    "enumerate_dl",
    "enumerate_omega",
    "factorization_check",
    "flag_of",
    "iter_projective",
    "linear_form_product",
    "moore_det",
    "moore_det_batch",
    "normalize_batch",
    "omega_contains",
    "omega_contains_hyperplanes",
    "omega_mask_batch",
    "point_keys",
    "projective_count",
]


# ---------------------------------------------------------------------------
# context and point types

class VarietyCtx:
    """Rank d, base field F_q and the field F_{q^m} of rational points."""

    def __init__(self, d: int, q: int, m: int, *, field_budget: int = DEFAULT_FIELD_BUDGET,
                 point_budget: int = DEFAULT_POINT_BUDGET, modulus: Sequence[int] | None = None):
        if d < 1:
            raise ValueError("rank d must be >= 1")
        if m < 1:
            raise ValueError("extension degree m must be >= 1")
        p, f = prime_power(q)
        self.d, self.q, self.m, self.p, self.f = d, q, m, p, f
        self.field_budget = field_budget
        self.point_budget = point_budget
        self.base = make_field(p, f, f=f, budget=field_budget)
        self.big = make_field(p, f * m, f=f, modulus=modulus, budget=field_budget)
        self.modulus = None if modulus is None else self.big.modulus
        self._torus: FieldCtx | None = None

    def with_rank(self, d: int) -> "VarietyCtx":
        """Same fields and budgets, rank d."""
        return VarietyCtx(d, self.q, self.m, field_budget=self.field_budget,
                          point_budget=self.point_budget, modulus=self.modulus)

    def __repr__(self) -> str:
        return f"VarietyCtx(d={self.d}, q={self.q}, m={self.m})"

    @property
    def torus_field(self) -> FieldCtx:
        """F_{q^d}, whose unit group is the torus T_d."""
        if self._torus is None:
            self._torus = make_field(self.p, self.f * self.d, f=self.f, budget=self.field_budget)
        return self._torus

    @property
    def Q(self) -> int:
        return self.big.order

    def embed_base(self, codes):
        """Image of F_q encodings inside F_{q^m}."""
        return embedding(self.base, self.big)(codes)

    @property
    def sign(self) -> int:
        """(-1)^(d-1) as an encoding of F_p."""
        return 1 if (self.d % 2 == 1 or self.p == 2) else self.p - 1


def _codes(ctx: VarietyCtx, coords) -> tuple[int, ...]:
    out = []
    for c in coords:
        if isinstance(c, FieldElem):
            if c.ctx != ctx.big:
                raise ValueError("coordinate lies in another field")
            out.append(c.value)
        else:
            c = int(c)
            if not 0 <= c < ctx.Q:
                raise ValueError(f"{c} is not an encoding of F_{ctx.Q}")
            out.append(c)
    if len(out) != ctx.d:
        raise ValueError(f"expected {ctx.d} coordinates, got {len(out)}")
    return tuple(out)


@dataclass(frozen=True)
class ProjectivePoint:
    """[X_0 : ... : X_{d-1}] with first nonzero coordinate equal to 1."""

    ctx: VarietyCtx = field(compare=False, repr=False)
    coords: tuple[int, ...]

    @classmethod
    def from_coords(cls, ctx: VarietyCtx, coords) -> "ProjectivePoint":
        X = _codes(ctx, coords)
        lead = next((x for x in X if x), 0)
        if not lead:
            raise ValueError("all projective coordinates are zero")
        inv = ctx.big.inv(lead)
        return cls(ctx, tuple(ctx.big.mul(x, inv) for x in X))

    def elems(self) -> list[FieldElem]:
        return [FieldElem(self.ctx.big, x) for x in self.coords]


@dataclass(frozen=True)
class AffineVector:
    """(X_0, ..., X_{d-1}) in A^d, not normalized."""

    ctx: VarietyCtx = field(compare=False, repr=False)
    coords: tuple[int, ...]

    @classmethod
    def from_coords(cls, ctx: VarietyCtx, coords) -> "AffineVector":
        return cls(ctx, _codes(ctx, coords))

    def elems(self) -> list[FieldElem]:
        return [FieldElem(self.ctx.big, x) for x in self.coords]


@dataclass(frozen=True)
class ChartPoint:
    """(y_1, ..., y_{d-1}) with y_k = X_k / X_{k-1}."""

    ctx: VarietyCtx = field(compare=False, repr=False)
    coords: tuple[int, ...]

    @classmethod
    def from_coords(cls, ctx: VarietyCtx, coords) -> "ChartPoint":
        ys = tuple(c.value if isinstance(c, FieldElem) else int(c) for c in coords)
        if len(ys) != ctx.d - 1:
            raise ValueError(f"expected {ctx.d - 1} chart coordinates")
        return cls(ctx, ys)

    def elems(self) -> list[FieldElem]:
        return [FieldElem(self.ctx.big, y) for y in self.coords]


@dataclass(frozen=True)
class Flag:
    """D_1 ⊂ D_2 ⊂ ... ; ``bases[i]`` is a row-reduced basis of D_{i+1}."""

    bases: tuple[tuple[tuple[int, ...], ...], ...]
    complete: bool

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.bases)


# ---------------------------------------------------------------------------
# scalar linear algebra over F_{q^m}

def _row_reduce(F: FieldCtx, rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Reduced row echelon form of the nonzero part, as a list of rows."""
    M = [list(r) for r in rows]
    out: list[list[int]] = []
    ncols = len(M[0]) if M else 0
    col = 0
    while M and col < ncols:
        piv = next((r for r in M if r[col]), None)
        if piv is None:
            col += 1
            continue
        M.remove(piv)
        inv = F.inv(piv[col])
        piv = [F.mul(x, inv) for x in piv]
        M = [[F.sub(a, F.mul(r[col], b)) for a, b in zip(r, piv)] for r in M]
        out = [[F.sub(a, F.mul(r[col], b)) for a, b in zip(r, piv)] for r in out]
        out.append(piv)
        col += 1
    return [r for r in out if any(r)]


def _det(F: FieldCtx, rows: Sequence[Sequence[int]]) -> int:
    """Determinant by Gaussian elimination."""
    M = [list(r) for r in rows]
    n = len(M)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = F.neg(det)
        det = F.mul(det, M[c][c])
        inv = F.inv(M[c][c])
        for r in range(c + 1, n):
            if M[r][c]:
                t = F.mul(M[r][c], inv)
                M[r] = [F.sub(a, F.mul(t, b)) for a, b in zip(M[r], M[c])]
    return det


def _coords_of(ctx: VarietyCtx, P) -> tuple[int, ...]:
    if isinstance(P, (ProjectivePoint, AffineVector)):
        return P.coords
    return _codes(ctx, P)


def moore_det(P, ctx: VarietyCtx) -> FieldElem:
    """det(X_i^(q^j)), computed by elimination on the Moore matrix."""
    X = _coords_of(ctx, P)
    F = ctx.big
    rows = [[F.frob(x, j) for j in range(ctx.d)] for x in X]
    return FieldElem(F, _det(F, rows))


def omega_contains(P, ctx: VarietyCtx) -> bool:
    return bool(moore_det(P, ctx))


def omega_contains_hyperplanes(P, ctx: VarietyCtx) -> bool:
    """Ω membership tested directly: no rational linear form vanishes at P."""
    X = _coords_of(ctx, P)
    F = ctx.big
    emb = embedding(ctx.base, F)
    for a in itertools.product(range(ctx.q), repeat=ctx.d):
        if not any(a):
            continue
        s = 0
        for ai, x in zip(a, X):
            s = F.add(s, F.mul(int(emb.table[ai]), x))
        if s == 0:
            return False
    return True


def dl_contains(v, ctx: VarietyCtx) -> bool:
    X = _coords_of(ctx, v)
    M = moore_det(X, ctx)
    return ctx.big.pow(M.value, ctx.q - 1) == ctx.sign and bool(M)


def covering_pi(v, ctx: VarietyCtx) -> ProjectivePoint:
    if not dl_contains(v, ctx):
        raise NotOnVariety("vector is not a point of DL")
    return ProjectivePoint.from_coords(ctx, _coords_of(ctx, v))


def flag_of(P, ctx: VarietyCtx) -> Flag:
    """Flag D_i = span(P, F(P), ..., F^(i-1)(P)) with F the q-power map."""
    X = _coords_of(ctx, P)
    F = ctx.big
    vectors = [X]
    for _ in range(ctx.d - 1):
        vectors.append(tuple(F.frob(x) for x in vectors[-1]))
    bases = []
    for i in range(1, ctx.d + 1):
        bases.append(tuple(tuple(r) for r in _row_reduce(F, vectors[:i])))
    complete = all(len(b) == i + 1 for i, b in enumerate(bases))
    return Flag(tuple(bases), complete)


# ---------------------------------------------------------------------------
# chart

def chart_from_projective(P, ctx: VarietyCtx) -> ChartPoint:
    X = _coords_of(ctx, P)
    F = ctx.big
    if any(x == 0 for x in X[:-1]):
        raise NotOnVariety("a coordinate X_0..X_{d-2} vanishes; point is outside the chart")
    return ChartPoint(ctx, tuple(F.div(X[k], X[k - 1]) for k in range(1, ctx.d)))


def chart_to_projective(y, ctx: VarietyCtx) -> ProjectivePoint:
    ys = y.coords if isinstance(y, ChartPoint) else tuple(int(c) for c in y)
    F = ctx.big
    X = [1]
    for yk in ys:
        X.append(F.mul(X[-1], yk))
    return ProjectivePoint(ctx, tuple(X))


def _chart_moore(ys: Sequence[int], ctx: VarietyCtx) -> int:
    """Moore determinant of (1, y_1, y_1 y_2, ...) for a chart of any rank."""
    F = ctx.big
    X = [1]
    for yk in ys:
        X.append(F.mul(X[-1], yk))
    rows = [[F.frob(x, j) for j in range(len(X))] for x in X]
    return _det(F, rows)


def chart_stratum(y, i: int, ctx: VarietyCtx) -> str:
    """'interior', 'stratum' (the boundary piece inside y_i = 0) or 'outside'."""
    ys = y.coords if isinstance(y, ChartPoint) else tuple(int(c) for c in y)
    if not 1 <= i <= ctx.d - 1:
        raise ValueError(f"stratum index {i} out of range 1..{ctx.d - 1}")
    if _chart_moore(ys, ctx):
        return "interior"
    if ys[i - 1] == 0 and _chart_moore(ys[:i - 1], ctx) and _chart_moore(ys[i:], ctx):
        return "stratum"
    return "outside"


# ---------------------------------------------------------------------------
# symbolic δ polynomials

def _symbolic_base(d: int, q: int, cap: int) -> FieldCtx:
    if d < 1:
        raise ValueError("rank d must be >= 1")
    if q**d > cap:
        raise BudgetExceeded(f"symbolic computation with q^d = {q**d} exceeds cap {cap}")
    p, f = prime_power(q)
    return make_field(p, f, f=f)


def _chart_monomials(d: int, nvars: int, offset: int = 0) -> list[tuple[int, ...]]:
    """Exponent vectors of 1, y_{o+1}, y_{o+1}y_{o+2}, ... (length d)."""
    out = []
    for k in range(d):
        e = [0] * nvars
        for t in range(offset, offset + k):
            e[t] = 1
        out.append(tuple(e))
    return out


def delta_symbolic(d: int, q: int, *, nvars: int | None = None, offset: int = 0,
                   cap: int = DEFAULT_SYMBOLIC_CAP) -> MultiPoly:
    """moore(1, y_1, y_1y_2, ..., y_1...y_{d-1})^(q-1) as a polynomial.

    With ``offset`` the variables are shifted to y_{offset+1}, ..., inside a
    ring of ``nvars`` variables.
    """
    Fq = _symbolic_base(d, q, cap)
    nvars = d - 1 if nvars is None else nvars
    monos = _chart_monomials(d, nvars, offset)
    terms: dict[tuple[int, ...], int] = {}
    for perm in itertools.permutations(range(d)):
        sign = _perm_sign(perm)
        e = [0] * nvars
        for row, col in enumerate(perm):
            # entry (row, col) of the Moore matrix is X_col^(q^row)
            for t, x in enumerate(monos[col]):
                e[t] += x * q**row
        key = tuple(e)
        c = 1 if sign > 0 else Fq.neg(1)
        terms[key] = Fq.add(terms.get(key, 0), c)
    moore = MultiPoly.from_dict(Fq, nvars, {k: FieldElem(Fq, v) for k, v in terms.items()})
    return moore ** (q - 1)


def _perm_sign(perm: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(perm)
    for s in range(len(perm)):
        if seen[s]:
            continue
        length, j = 0, s
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def linear_form_product(d: int, q: int, keep=None, *, cap: int = DEFAULT_SYMBOLIC_CAP) -> MultiPoly:
    """Product of a_0 + a_1 y_1 + ... + a_{d-1} y_1...y_{d-1} over nonzero a in F_q^d.

    ``keep(a)`` restricts the product to the tuples for which it is true.
    """
    Fq = _symbolic_base(d, q, cap)
    nvars = d - 1
    monos = _chart_monomials(d, nvars)
    result = MultiPoly.const(Fq, nvars, 1)
    for a in itertools.product(range(q), repeat=d):
        if not any(a) or (keep is not None and not keep(a)):
            continue
        form = MultiPoly.from_dict(Fq, nvars, {monos[k]: FieldElem(Fq, a[k]) for k in range(d) if a[k]})
        result = result * form
    return result


def delta_di_symbolic(d: int, q: int, i: int, *, cap: int = DEFAULT_SYMBOLIC_CAP) -> MultiPoly:
    """Product of the linear forms whose coefficient tuple has a_j != 0 for some j < i."""
    if not 1 <= i <= d - 1:
        raise ValueError(f"index {i} out of range 1..{d - 1}")
    return linear_form_product(d, q, keep=lambda a: any(a[:i]), cap=cap)


@dataclass
class FactorizationReport:
    d: int
    q: int
    i: int
    product_constant: FieldElem      # δ_d = c · ∏_{a≠0} ℓ_a
    constant: FieldElem              # C in the split factorization
    residue_constant: FieldElem | None  # δ_{d,i} ≡ c' · δ_i^{q^{d-i}} mod y_i
    ok: bool
    checks: dict[str, bool]

    def lines(self) -> list[str]:
        out = []
        for name, ok in self.checks.items():
            out.append(f"check=factorization.{name} d={self.d} q={self.q} i={self.i} "
                       f"C={int(self.constant)} {'PASS' if ok else 'FAIL'}")
        return out


def _leading_ratio(a: MultiPoly, b: MultiPoly) -> FieldElem:
    (ea, ca), (eb, cb) = a.leading(), b.leading()
    if ea != eb:
        raise ValueError("leading monomials differ; polynomials are not proportional")
    return FieldElem(a.ctx, a.ctx.div(ca, cb))


def factorization_check(d: int, q: int, i: int, *, cap: int = DEFAULT_SYMBOLIC_CAP) -> FactorizationReport:
    """Split δ_d along the i-th stratum and verify the identity exactly.

    δ_d = C · (y_1...y_i)^(q^(d-i) - 1) · δ_{d-i}(y_{i+1}, ...) · δ_{d,i}.
    C is read off from leading coefficients, then both sides are compared
    as polynomials.  Also checks δ_d against the full product of linear
    forms and δ_{d,i} mod y_i against δ_i^(q^(d-i)), each up to a constant.
    """
    if not 1 <= i <= d - 1:
        raise ValueError(f"index {i} out of range 1..{d - 1}")
    nv = d - 1
    delta = delta_symbolic(d, q, cap=cap)
    full = linear_form_product(d, q, cap=cap)
    c_full = _leading_ratio(delta, full)
    checks = {"product": delta == full.scale(c_full)}

    ddi = delta_di_symbolic(d, q, i, cap=cap)
    mono = [0] * nv
    for t in range(i):
        mono[t] = q ** (d - i) - 1
    lower = delta_symbolic(d - i, q, nvars=nv, offset=i, cap=cap)
    rhs = (lower * ddi).mul_monomial(mono)
    C = _leading_ratio(delta, rhs)
    checks["split"] = delta == rhs.scale(C)

    residue = ddi.substitute({i: 0})
    target = delta_symbolic(i, q, nvars=nv, cap=cap) ** (q ** (d - i))
    try:
        c_res = _leading_ratio(residue, target)
        checks["residue"] = residue == target.scale(c_res)
    except ValueError:
        c_res = None
        checks["residue"] = False
    return FactorizationReport(d, q, i, c_full, C, c_res, all(checks.values()), checks)


# ---------------------------------------------------------------------------
# batch computations

def projective_count(Q: int, d: int) -> int:
    return (Q**d - 1) // (Q - 1)


def iter_projective(field_: FieldCtx, d: int, chunk: int = _CHUNK) -> Iterator[np.ndarray]:
    """Normalized points of P^{d-1}(field) in lexicographic order, in chunks."""
    Q = field_.order
    for lead in range(d - 1, -1, -1):
        free = d - 1 - lead
        total = Q**free
        for start in range(0, total, chunk):
            r = np.arange(start, min(start + chunk, total), dtype=np.int64)
            X = np.zeros((r.size, d), dtype=np.int64)
            X[:, lead] = 1
            for j in range(d - 1, lead, -1):
                X[:, j] = r % Q
                r //= Q
            yield X


def moore_det_batch(field_: FieldCtx, q: int, X: np.ndarray) -> np.ndarray:
    """Moore determinant of every row of X (Leibniz expansion in log space)."""
    X = np.asarray(X, dtype=np.int64)
    n, d = X.shape
    if d == 1:
        return X[:, 0].copy()
    N = field_.order - 1
    t = field_.tables
    dead = (X == 0).any(axis=1)
    L = np.where(X == 0, 0, t.log[X])
    # scaled[i][j] = log(X_i^(q^j))
    scaled = [[(L[:, i] * pow(q, j, N)) % N for j in range(d)] for i in range(d)]
    pos = np.zeros(n, dtype=np.int64)
    neg = np.zeros(n, dtype=np.int64)
    for perm in itertools.permutations(range(d)):
        e = scaled[0][perm[0]].copy()
        for i in range(1, d):
            e += scaled[i][perm[i]]
        val = t.exp[e % N]
        if _perm_sign(perm) > 0:
            pos = field_.vadd(pos, val)
        else:
            neg = field_.vadd(neg, val)
    out = field_.vsub(pos, neg)
    out[dead] = 0
    return out


def omega_mask_batch(ctx: VarietyCtx, X: np.ndarray) -> np.ndarray:
    return moore_det_batch(ctx.big, ctx.q, X) != 0


def dl_mask_batch(ctx: VarietyCtx, X: np.ndarray) -> np.ndarray:
    M = moore_det_batch(ctx.big, ctx.q, X)
    return (M != 0) & (ctx.big.vpow(M, ctx.q - 1) == ctx.sign)


def normalize_batch(field_: FieldCtx, X: np.ndarray) -> np.ndarray:
    """Scale every row so that its first nonzero entry is 1."""
    X = np.asarray(X, dtype=np.int64)
    nz = X != 0
    if not nz.any(axis=1).all():
        raise ValueError("zero row cannot be normalized")
    lead = X[np.arange(X.shape[0]), nz.argmax(axis=1)]
    inv = field_.vinv(lead)
    return field_.vmul(X, inv[:, None])


def point_keys(Q: int, X: np.ndarray) -> np.ndarray:
    """Injective int64 key of each row (base-Q number, first coordinate most significant)."""
    X = np.asarray(X, dtype=np.int64)
    if Q ** X.shape[1] >= 1 << 62:
        raise BudgetExceeded("points too large for 64-bit keys")
    key = np.zeros(X.shape[0], dtype=np.int64)
    for j in range(X.shape[1]):
        key = key * Q + X[:, j]
    return key


def _check_points(ctx: VarietyCtx, budget: int | None) -> None:
    budget = ctx.point_budget if budget is None else budget
    total = projective_count(ctx.Q, ctx.d)
    if total > budget:
        raise BudgetExceeded(f"|P^{ctx.d - 1}(F_{ctx.Q})| = {total} exceeds point budget {budget}")


def iter_omega(ctx: VarietyCtx, budget: int | None = None, chunk: int = _CHUNK) -> Iterator[np.ndarray]:
    _check_points(ctx, budget)
    for X in iter_projective(ctx.big, ctx.d, chunk):
        keep = omega_mask_batch(ctx, X)
        if keep.any():
            yield X[keep]


def enumerate_omega(ctx: VarietyCtx, budget: int | None = None) -> np.ndarray:
    """All normalized points of Ω(F_{q^m}), lexicographic order, shape (n, d)."""
    parts = list(iter_omega(ctx, budget))
    return np.concatenate(parts) if parts else np.zeros((0, ctx.d), dtype=np.int64)


def dl_fiber_logs(ctx: VarietyCtx, X: np.ndarray, M: np.ndarray | None = None
                  ) -> tuple[np.ndarray, np.ndarray, int]:
    """Solve s^(q^d - 1) = (-1)^(d-1) / moore(X)^(q-1) for s in F_{q^m}^x.

    Returns (solvable mask, one solution's discrete log, g) where
    g = gcd(q^d - 1, q^m - 1); when solvable the solutions are
    t0 + k (q^m - 1)/g for k < g.  ``M`` may pass precomputed Moore
    determinants of the rows.
    """
    F = ctx.big
    N = F.order - 1
    e = ctx.q**ctx.d - 1
    g = math.gcd(e, N)
    if M is None:
        M = moore_det_batch(F, ctx.q, X)
    if (M == 0).any():
        raise NotOnVariety("point outside Ω has no DL fiber")
    t = F.tables
    c = (int(t.log[ctx.sign]) - (t.log[M] * (ctx.q - 1))) % N
    ok = c % g == 0
    step = N // g
    inv = pow((e // g) % step, -1, step) if step > 1 else 0
    t0 = ((c // g) * inv) % step if step > 1 else np.zeros_like(c)
    return ok, t0, g


def dl_fiber_scalars(ctx: VarietyCtx, X: np.ndarray, M: np.ndarray | None = None
                     ) -> tuple[np.ndarray, np.ndarray]:
    """(owner, s): every scalar s with s·X[owner] in DL, grouped by owner row."""
    F = ctx.big
    N = F.order - 1
    ok, t0, g = dl_fiber_logs(ctx, X, M)
    rows = np.flatnonzero(ok)
    step = N // g
    logs = (t0[rows][:, None] + step * np.arange(g, dtype=np.int64)[None, :]) % max(N, 1)
    return np.repeat(rows, g), F.tables.exp[logs].reshape(-1)


def dl_lift_batch(ctx: VarietyCtx, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All DL points over the given Ω points via the congruence solution.

    Returns (points, owner) where owner[r] is the row of X that points[r] covers.
    """
    owner, s = dl_fiber_scalars(ctx, X)
    return ctx.big.vmul(X[owner], s[:, None]), owner


def dl_scan_batch(ctx: VarietyCtx, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """DL points over the given Ω points, by trying every scalar s."""
    F = ctx.big
    units = np.arange(1, F.order, dtype=np.int64)
    owner = np.repeat(np.arange(X.shape[0]), units.size)
    cand = F.vmul(X[owner], np.tile(units, X.shape[0])[:, None])
    keep = dl_mask_batch(ctx, cand)
    return cand[keep], owner[keep]


def enumerate_dl(ctx: VarietyCtx, method: str = "auto", budget: int | None = None) -> np.ndarray:
    """All points of DL(F_{q^m}), lexicographic order, shape (n, d).

    ``scan`` scales each Ω point by every unit, ``roots`` solves the fiber
    congruence, ``brute`` tests every vector of A^d; ``auto`` picks scan for
    small inputs and roots otherwise.  Every returned point has passed the
    DL membership test.
    """
    budget = ctx.point_budget if budget is None else budget
    if method == "brute":
        if ctx.Q**ctx.d > budget:
            raise BudgetExceeded(f"q^(md) = {ctx.Q**ctx.d} exceeds budget {budget}")
        r = np.arange(ctx.Q**ctx.d, dtype=np.int64)
        V = np.zeros((r.size, ctx.d), dtype=np.int64)
        for j in range(ctx.d - 1, -1, -1):
            V[:, j] = r % ctx.Q
            r //= ctx.Q
        return V[dl_mask_batch(ctx, V)]
    omega = enumerate_omega(ctx, budget)
    g = math.gcd(ctx.q**ctx.d - 1, ctx.Q - 1)
    if omega.shape[0] * g > budget:
        raise BudgetExceeded(f"DL point list would exceed budget {budget}")
    if method == "auto":
        method = "scan" if omega.shape[0] * (ctx.Q - 1) <= 2_000_000 else "roots"
    if method == "scan":
        pts, _ = dl_scan_batch(ctx, omega)
    elif method == "roots":
        pts, _ = dl_lift_batch(ctx, omega)
        if not dl_mask_batch(ctx, pts).all():
            raise AssertionError("congruence solution produced a non-DL point")
    else:
        raise ValueError(f"unknown DL enumeration method {method!r}")
    if pts.shape[0] == 0:
        return pts
    order = np.lexsort(pts.T[::-1])
    return pts[order]
