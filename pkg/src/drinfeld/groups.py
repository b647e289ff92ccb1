"""Finite subgroups of GL_d(F_q), the torus F_{q^d}^x, and their actions.

Matrices act on column vectors, so the parabolic attached to the simple
roots I is block upper triangular, with diagonal blocks given by the runs of
consecutive indices joined by roots in I.  For I = Δ minus {α_i} it is the
stabilizer of span(e_1, ..., e_i) and its unipotent radical is
[[1_i, A], [0, 1_{d-i}]].

Orbits on large point arrays are computed as connected components of the
graph "P -- g.P" for a generating set g, using integer point keys.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import BudgetExceeded, ContextMismatch
from .fields import FieldCtx, FieldElem, embedding, make_field, prime_power
from .geometry import (
    AffineVector,
    ProjectivePoint,
    VarietyCtx,
    _det,
    normalize_batch,
    point_keys,
)
from .symbolic import MultiPoly, RatFunc, reduce_mod_y

DEFAULT_GROUP_BUDGET = 200_000

__all__ = [
    "DEFAULT_GROUP_BUDGET",
    "GLdElem",
    "SimpleRootSubset",
    "TorusElem",
    "WeylData",
    "act_dl",
    "act_projective",
    "act_batch",
    "chart_action",
    "count_subspaces_bruteforce",
    "elementary_generators",
    "enumerate_subgroup",
    "gaussian_binomial",
    "orbit_labels",
    "orbits",
    "stratum_component_count",
    "subgroup_order",
    "torus_act",
]


@dataclass(frozen=True)
class SimpleRootSubset:
    """A subset I of the simple roots α_1, ..., α_{d-1}, stored as indices."""

    d: int
    indices: frozenset[int]

    def __post_init__(self):
        bad = [j for j in self.indices if not 1 <= j <= self.d - 1]
        if bad:
            raise ValueError(f"simple root indices {bad} out of range 1..{self.d - 1}")

    @classmethod
    def all_but(cls, d: int, i: int) -> "SimpleRootSubset":
        """I = Δ minus {α_i}."""
        if not 1 <= i <= d - 1:
            raise ValueError(f"index {i} out of range 1..{d - 1}")
        return cls(d, frozenset(range(1, d)) - {i})

    @property
    def missing(self) -> tuple[int, ...]:
        return tuple(sorted(set(range(1, self.d)) - self.indices))

    @property
    def blocks(self) -> tuple[int, ...]:
        """Sizes of the diagonal blocks of the standard parabolic."""
        sizes, run = [], 1
        for j in range(1, self.d):
            if j in self.indices:
                run += 1
            else:
                sizes.append(run)
                run = 1
        sizes.append(run)
        return tuple(sizes)

    def block_of(self) -> list[int]:
        out = []
        for b, size in enumerate(self.blocks):
            out += [b] * size
        return out


class GLdElem:
    """Invertible d x d matrix over F_q (entries are F_q encodings)."""

    def __init__(self, field_: FieldCtx, rows: Sequence[Sequence[int]]):
        self.field = field_
        self.rows = tuple(tuple(int(x) for x in r) for r in rows)
        d = len(self.rows)
        if any(len(r) != d for r in self.rows):
            raise ValueError("matrix is not square")
        if _det(field_, self.rows) == 0:
            raise ValueError("matrix is singular")

    @classmethod
    def identity(cls, field_: FieldCtx, d: int) -> "GLdElem":
        return cls(field_, [[int(r == c) for c in range(d)] for r in range(d)])

    @property
    def d(self) -> int:
        return len(self.rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, GLdElem) and self.rows == other.rows and self.field == other.field

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"GLdElem({[list(r) for r in self.rows]})"

    def __matmul__(self, other: "GLdElem") -> "GLdElem":
        F = self.field
        cols = list(zip(*other.rows))
        rows = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = 0
                for a, b in zip(r, c):
                    if a and b:
                        acc = F.add(acc, F.mul(a, b))
                row.append(acc)
            rows.append(row)
        return GLdElem(F, rows)

    @cached_property
    def inverse(self) -> "GLdElem":
        F, d = self.field, self.d
        M = [list(r) + [int(i == j) for j in range(d)] for i, r in enumerate(self.rows)]
        for c in range(d):
            piv = next(r for r in range(c, d) if M[r][c])
            M[c], M[piv] = M[piv], M[c]
            inv = F.inv(M[c][c])
            M[c] = [F.mul(x, inv) for x in M[c]]
            for r in range(d):
                if r != c and M[r][c]:
                    t = M[r][c]
                    M[r] = [F.sub(a, F.mul(t, b)) for a, b in zip(M[r], M[c])]
        return GLdElem(F, [row[d:] for row in M])

    def order(self) -> int:
        """Multiplicative order as a matrix."""
        one = GLdElem.identity(self.field, self.d)
        g, k = self, 1
        while g != one:
            g = g @ self
            k += 1
        return k

    def projective_order(self) -> int:
        """Order in PGL_d(F_q): least k with g^k scalar."""
        g, k = self, 1
        while not _is_scalar(g):
            g = g @ self
            k += 1
        return k

    def embedded(self, big: FieldCtx) -> np.ndarray:
        return embedding(self.field, big)(np.array(self.rows, dtype=np.int64))


def _is_scalar(g: GLdElem) -> bool:
    c = g.rows[0][0]
    return all(g.rows[r][k] == (c if r == k else 0) for r in range(g.d) for k in range(g.d))


@dataclass(frozen=True)
class WeylData:
    """Coxeter cycle c = (1, ..., d), its matrix ċ and the longest element w_Δ."""

    d: int

    @property
    def coxeter(self) -> tuple[int, ...]:
        """c as a 0-based permutation: c[k] is the image of k."""
        return tuple((k + 1) % self.d for k in range(self.d))

    def coxeter_matrix(self, field_: FieldCtx) -> GLdElem:
        """ċ with ċ(e_k) = e_{k+1} and ċ(e_d) = e_1."""
        d = self.d
        rows = [[0] * d for _ in range(d)]
        for k, img in enumerate(self.coxeter):
            rows[img][k] = 1
        return GLdElem(field_, rows)

    def longest_matrix(self, field_: FieldCtx) -> GLdElem:
        d = self.d
        return GLdElem(field_, [[int(r + c == d - 1) for c in range(d)] for r in range(d)])


@dataclass(frozen=True)
class TorusElem:
    """Element of T_d, identified with F_{q^d}^x."""

    value: FieldElem

    def __post_init__(self):
        if not self.value:
            raise ValueError("torus elements are nonzero")


# ---------------------------------------------------------------------------
# subgroups

def _gl_order(n: int, q: int) -> int:
    return math.prod(q**n - q**j for j in range(n))


def _unipotent_positions(d: int, I: SimpleRootSubset | None, kind: str) -> list[tuple[int, int]]:
    if kind == "U":
        return [(r, c) for r in range(d) for c in range(r + 1, d)]
    blk = I.block_of()
    if kind == "U_I":
        return [(r, c) for r in range(d) for c in range(r + 1, d) if blk[r] != blk[c]]
    if kind == "V_I":
        return [(r, c) for r in range(d) for c in range(r + 1, d) if blk[r] == blk[c]]
    raise ValueError(kind)


def subgroup_order(kind: str, d: int, q: int, I: SimpleRootSubset | None = None) -> int:
    if kind in ("U", "U_I", "V_I"):
        if kind != "U" and I is None:
            raise ValueError(f"{kind} needs a root subset I")
        return q ** len(_unipotent_positions(d, I, kind))
    if kind == "B":
        return (q - 1) ** d * q ** (d * (d - 1) // 2)
    if kind == "P_I":
        if I is None:
            raise ValueError("P_I needs a root subset I")
        return math.prod(_gl_order(n, q) for n in I.blocks) * q ** len(_unipotent_positions(d, I, "U_I"))
    if kind == "T_d":
        return q**d - 1
    raise ValueError(f"unknown subgroup kind {kind!r}")


def _gl_list(F: FieldCtx, n: int) -> list[tuple[tuple[int, ...], ...]]:
    out = []
    for flat in itertools.product(range(F.order), repeat=n * n):
        rows = tuple(tuple(flat[r * n:(r + 1) * n]) for r in range(n))
        if _det(F, rows):
            out.append(rows)
    return out


def enumerate_subgroup(kind: str, d: int, q: int, I: SimpleRootSubset | None = None,
                       budget: int = DEFAULT_GROUP_BUDGET) -> list:
    """Every element of U, U_I, V_I, B, P_I (as GLdElem) or T_d (as TorusElem)."""
    order = subgroup_order(kind, d, q, I)
    if order > budget:
        raise BudgetExceeded(f"|{kind}| = {order} exceeds group budget {budget}")
    p, f = prime_power(q)
    F = make_field(p, f, f=f)
    if kind == "T_d":
        T = make_field(p, f * d, f=f)
        return [TorusElem(FieldElem(T, s)) for s in range(1, T.order)]
    if kind in ("U", "U_I", "V_I"):
        pos = _unipotent_positions(d, I, kind)
        out = []
        for vals in itertools.product(range(q), repeat=len(pos)):
            rows = [[int(r == c) for c in range(d)] for r in range(d)]
            for (r, c), v in zip(pos, vals):
                rows[r][c] = v
            out.append(GLdElem(F, rows))
        return out
    if kind == "B":
        I = SimpleRootSubset(d, frozenset())
    blocks = I.blocks
    starts = list(itertools.accumulate((0,) + blocks[:-1]))
    upper = _unipotent_positions(d, I, "U_I")
    out = []
    for diag in itertools.product(*(_gl_list(F, n) for n in blocks)):
        for vals in itertools.product(range(q), repeat=len(upper)):
            rows = [[0] * d for _ in range(d)]
            for s, blockmat in zip(starts, diag):
                for r, row in enumerate(blockmat):
                    rows[s + r][s:s + len(row)] = row
            for (r, c), v in zip(upper, vals):
                rows[r][c] = v
            out.append(GLdElem(F, rows))
    return out


def elementary_generators(kind: str, d: int, q: int, I: SimpleRootSubset | None = None) -> list[GLdElem]:
    """1 + t E_{rc} over the unipotent positions, t running through an F_p-basis of F_q."""
    p, f = prime_power(q)
    F = make_field(p, f, f=f)
    out = []
    for r, c in _unipotent_positions(d, I, kind):
        for b in range(f):
            rows = [[int(a == e) for e in range(d)] for a in range(d)]
            rows[r][c] = p**b
            out.append(GLdElem(F, rows))
    return out


# ---------------------------------------------------------------------------
# actions

def _apply(g: GLdElem, X: Sequence[int], big: FieldCtx) -> list[int]:
    G = g.embedded(big)
    out = []
    for row in G:
        acc = 0
        for a, x in zip(row, X):
            if a and x:
                acc = big.add(acc, big.mul(int(a), x))
        out.append(acc)
    return out


def act_projective(g: GLdElem, P: ProjectivePoint) -> ProjectivePoint:
    ctx = P.ctx
    if g.d != ctx.d or g.field != ctx.base:
        raise ContextMismatch("matrix and point have different rank or base field")
    return ProjectivePoint.from_coords(ctx, _apply(g, P.coords, ctx.big))


def act_dl(g: GLdElem, v: AffineVector) -> AffineVector:
    ctx = v.ctx
    if g.d != ctx.d or g.field != ctx.base:
        raise ContextMismatch("matrix and vector have different rank or base field")
    return AffineVector(ctx, tuple(_apply(g, v.coords, ctx.big)))


def _torus_scalar(s, ctx: VarietyCtx) -> int:
    """Encoding in F_{q^m} of a torus element that is rational over F_{q^m}."""
    big = ctx.big
    e = ctx.q**ctx.d - 1
    if isinstance(s, TorusElem):
        T = s.value.ctx
        g = math.gcd(ctx.d, ctx.m)
        if s.value.frobenius(g) != s.value:
            raise ContextMismatch(f"{s.value} is not defined over F_(q^{ctx.m})")
        sub = make_field(ctx.p, ctx.f * g, f=ctx.f)
        table = embedding(sub, T).table
        code = int(np.flatnonzero(table == s.value.value)[0])
        return int(embedding(sub, big).table[code])
    if isinstance(s, FieldElem) and s.ctx == big:
        if big.pow(s.value, e) != 1:
            raise ContextMismatch(f"{s} is not in T_d (s^(q^d-1) != 1)")
        return s.value
    raise ContextMismatch("torus element must be a TorusElem or an element of F_(q^m)")


def torus_act(s, v: AffineVector) -> AffineVector:
    """Scalar action v -> s v of T_d on rational points of DL."""
    ctx = v.ctx
    c = _torus_scalar(s, ctx)
    return AffineVector(ctx, tuple(ctx.big.mul(c, x) for x in v.coords))


def act_batch(g: GLdElem, X: np.ndarray, big: FieldCtx, normalize: bool = True) -> np.ndarray:
    """g applied to every row of X (optionally renormalized projectively)."""
    G = g.embedded(big)
    d = X.shape[1]
    cols = []
    for r in range(d):
        acc = np.zeros(X.shape[0], dtype=np.int64)
        for c in range(d):
            a = int(G[r, c])
            if a == 1:
                acc = big.vadd(acc, X[:, c])
            elif a:
                acc = big.vadd(acc, big.vmul(X[:, c], a))
        cols.append(acc)
    Y = np.stack(cols, axis=1)
    return normalize_batch(big, Y) if normalize else Y


# ---------------------------------------------------------------------------
# orbits

def orbits(group: Iterable, points: Sequence, action: Callable) -> list[list]:
    """Orbit partition by explicit closure, ordered by minimal member."""
    pts = list(points)
    index = {p: k for k, p in enumerate(pts)}
    group = list(group)
    seen = [False] * len(pts)
    out = []
    for k, p in enumerate(pts):
        if seen[k]:
            continue
        orbit, stack = {k}, [p]
        seen[k] = True
        while stack:
            x = stack.pop()
            for g in group:
                y = action(g, x)
                j = index.get(y)
                if j is None:
                    raise ValueError(f"action leaves the point list: {y}")
                if not seen[j]:
                    seen[j] = True
                    orbit.add(j)
                    stack.append(y)
        out.append(sorted(orbit))
    out.sort(key=lambda o: o[0])
    return [[pts[j] for j in o] for o in out]


def orbit_labels(points: np.ndarray, generators: Sequence[GLdElem], big: FieldCtx) -> tuple[np.ndarray, int]:
    """Orbit label of each row of a lexicographically sorted point array.

    Labels are numbered by first (= minimal) member.  Raises if some
    generator moves a point outside the array.
    """
    n = points.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64), 0
    keys = point_keys(big.order, points)
    if np.any(np.diff(keys) <= 0):
        raise ValueError("points must be sorted and distinct")
    src, dst = [], []
    for g in generators:
        k = point_keys(big.order, act_batch(g, points, big))
        j = np.searchsorted(keys, k)
        j[j == n] = 0
        if np.any(keys[j] != k):
            raise ValueError("action leaves the point set")
        src.append(np.arange(n))
        dst.append(j)
    if src:
        src_a, dst_a = np.concatenate(src), np.concatenate(dst)
    else:
        src_a = dst_a = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(src_a.size, dtype=np.int8), (src_a, dst_a)), shape=(n, n))
    count, raw = connected_components(graph, directed=True, connection="weak")
    first = np.full(count, n, dtype=np.int64)
    np.minimum.at(first, raw, np.arange(n))
    relabel = np.empty(count, dtype=np.int64)
    relabel[np.argsort(first)] = np.arange(count)
    return relabel[raw], count


# ---------------------------------------------------------------------------
# chart action and strata

def chart_action(g: GLdElem, nvars: int | None = None) -> list[RatFunc]:
    """g acting on [1 : y_1 : y_1y_2 : ...], rewritten in chart coordinates.

    Returns y'_1, ..., y'_{d-1} as rational functions of y_1, ..., y_{d-1}.
    """
    F, d = g.field, g.d
    nv = d - 1 if nvars is None else nvars
    X = [MultiPoly.const(F, nv, 1)]
    for k in range(1, d):
        X.append(X[-1] * MultiPoly.var(F, nv, k))
    Y = []
    for row in g.rows:
        acc = MultiPoly.const(F, nv, 0)
        for a, x in zip(row, X):
            if a:
                acc = acc + x.scale(FieldElem(F, a))
        Y.append(acc)
    return [RatFunc(Y[k], Y[k - 1]).cancel_monomials() for k in range(1, d)]


def chart_action_mod_stratum(g: GLdElem, i: int) -> list[RatFunc]:
    """The chart action reduced modulo y_i, i.e. restricted to the hyperplane y_i = 0."""
    return [reduce_mod_y(r, i) for r in chart_action(g)]


def gaussian_binomial(d: int, i: int, q: int) -> int:
    if not 0 <= i <= d:
        raise ValueError(f"i = {i} out of range 0..{d}")
    num = math.prod(q ** (d - j) - 1 for j in range(i))
    den = math.prod(q ** (j + 1) - 1 for j in range(i))
    return num // den


def stratum_component_count(d: int, q: int, i: int) -> int:
    """Number of i-dimensional F_q-subspaces of F_q^d."""
    prime_power(q)
    return gaussian_binomial(d, i, q)


def count_subspaces_bruteforce(d: int, q: int, i: int) -> int:
    """Count i-dimensional subspaces by growing spans one vector at a time."""
    if not 0 <= i <= d:
        raise ValueError(f"i = {i} out of range 0..{d}")
    p, f = prime_power(q)
    F = make_field(p, f, f=f)
    vectors = list(itertools.product(range(q), repeat=d))

    def add(u, v):
        return tuple(F.add(a, b) for a, b in zip(u, v))

    def scale(c, v):
        return tuple(F.mul(c, a) for a in v)

    zero = tuple([0] * d)
    level = {frozenset([zero])}
    for _ in range(i):
        nxt = set()
        for space in level:
            for v in vectors:
                if v in space:
                    continue
                new = set(space)
                for c in range(1, q):
                    w = scale(c, v)
                    new |= {add(s, w) for s in space}
                nxt.add(frozenset(new))
        level = nxt
    return len(level)
