"""Sparse multivariate polynomials and rational functions over F_q.

Variables are y_1, ..., y_r (1-based in every public method).  A monomial's
exponent vector is packed into one Python int, 32 bits per variable, so a
product of monomials is a single integer addition.  Exponents are capped at
2**31 and exceeding the cap raises ``OverflowError``.

Rational functions are *not* kept in lowest terms: equality is decided by
cross multiplication, and ``RatFunc.cancel_monomials`` strips only common
monomial factors, which is all the valuation code needs.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ContextMismatch
from .fields import FieldCtx, FieldElem, embedding

_W = 32
_MASK = (1 << _W) - 1
EXP_CAP = 1 << 31

__all__ = [
    "EXP_CAP",
    "MultiPoly",
    "RatFunc",
    "ord_y",
    "reduce_mod_y",
]


def _pack(exps: Sequence[int]) -> int:
    key = 0
    for k, e in enumerate(exps):
        if e < 0:
            raise ValueError("negative exponent")
        if e >= EXP_CAP:
            raise OverflowError(f"exponent {e} exceeds cap 2**31")
        key |= e << (_W * k)
    return key


def _unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (_W * k)) & _MASK for k in range(nvars))


def _var_exp(key: int, k: int) -> int:
    return (key >> (_W * k)) & _MASK


class MultiPoly:
    """Polynomial in ``nvars`` variables with coefficients in ``ctx`` (= F_q)."""

    __slots__ = ("ctx", "nvars", "terms", "_maxexp")

    def __init__(self, ctx: FieldCtx, nvars: int, terms: Mapping[int, int] | None = None):
        self.ctx = ctx
        self.nvars = nvars
        self.terms: dict[int, int] = {k: c for k, c in (terms or {}).items() if c}
        self._maxexp: int | None = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, ctx: FieldCtx, nvars: int, c) -> "MultiPoly":
        c = _coef(ctx, c)
        return cls(ctx, nvars, {0: c} if c else {})

    @classmethod
    def var(cls, ctx: FieldCtx, nvars: int, n: int) -> "MultiPoly":
        if not 1 <= n <= nvars:
            raise IndexError(f"variable y_{n} out of range 1..{nvars}")
        return cls(ctx, nvars, {1 << (_W * (n - 1)): 1})

    @classmethod
    def monomial(cls, ctx: FieldCtx, exps: Sequence[int], c=1) -> "MultiPoly":
        c = _coef(ctx, c)
        return cls(ctx, len(exps), {_pack(exps): c} if c else {})

    @classmethod
    def from_dict(cls, ctx: FieldCtx, nvars: int, terms: Mapping[tuple[int, ...], object]) -> "MultiPoly":
        out: dict[int, int] = {}
        for exps, c in terms.items():
            if len(exps) != nvars:
                raise ValueError("exponent vector has wrong length")
            key = _pack(exps)
            out[key] = ctx.add(out.get(key, 0), _coef(ctx, c))
        return cls(ctx, nvars, out)

    def _new(self, terms: dict[int, int]) -> "MultiPoly":
        return MultiPoly(self.ctx, self.nvars, terms)

    def _check(self, other: "MultiPoly") -> None:
        if other.nvars != self.nvars or other.ctx != self.ctx:
            raise ContextMismatch("polynomials over different rings")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, FieldElem, np.integer)):
            return MultiPoly.const(self.ctx, self.nvars, other)
        return NotImplemented

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self) -> Iterable[tuple[tuple[int, ...], int]]:
        for key, c in self.terms.items():
            yield _unpack(key, self.nvars), c

    def max_exponent(self) -> int:
        if self._maxexp is None:
            m = 0
            for key in self.terms:
                for k in range(self.nvars):
                    e = _var_exp(key, k)
                    if e > m:
                        m = e
            self._maxexp = m
        return self._maxexp

    def constant_term(self) -> int:
        return self.terms.get(0, 0)

    def var_order(self, n: int) -> int:
        """Largest power of y_n dividing the polynomial."""
        if not self.terms:
            raise ValueError("order of the zero polynomial")
        return min(_var_exp(key, n - 1) for key in self.terms)

    def content_monomial(self) -> tuple[int, ...]:
        return tuple(self.var_order(n) for n in range(1, self.nvars + 1))

    def support(self) -> set[int]:
        """1-based indices of the variables that occur."""
        used = set()
        for key in self.terms:
            for k in range(self.nvars):
                if _var_exp(key, k):
                    used.add(k + 1)
        return used

    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.items()), default=-1)

    def leading(self) -> tuple[tuple[int, ...], int]:
        """Leading (exponents, coefficient) in graded lexicographic order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.items(), key=lambda t: (sum(t[0]), t[0]))

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        add = self.ctx.add
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = add(out.get(key, 0), c)
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ctx.neg
        return self._new({k: neg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "MultiPoly":
        c = _coef(self.ctx, c)
        if not c:
            return self._new({})
        mul = self.ctx.mul
        return self._new({k: mul(v, c) for k, v in self.terms.items()})

    def mul_monomial(self, exps: Sequence[int], c=1) -> "MultiPoly":
        shift = _pack(exps)
        if self.max_exponent() + max(exps, default=0) >= EXP_CAP:
            raise OverflowError("exponent cap exceeded")
        c = _coef(self.ctx, c)
        mul = self.ctx.mul
        return self._new({k + shift: mul(v, c) for k, v in self.terms.items() if mul(v, c)})

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return self._new({})
        if self.max_exponent() + other.max_exponent() >= EXP_CAP:
            raise OverflowError("exponent cap exceeded")
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        ctx = self.ctx
        out: dict[int, int] = {}
        if ctx.n == 1:
            p = ctx.p
            for kb, cb in b.items():
                for ka, ca in a.items():
                    key = ka + kb
                    out[key] = (out.get(key, 0) + ca * cb) % p
        else:
            mul, add = ctx.mul, ctx.add
            for kb, cb in b.items():
                for ka, ca in a.items():
                    key = ka + kb
                    out[key] = add(out.get(key, 0), mul(ca, cb))
        return self._new(out)

    __rmul__ = __mul__

    def p_power(self, j: int = 1) -> "MultiPoly":
        """self ** (p ** j), computed coefficientwise (Frobenius of char p)."""
        factor = self.ctx.p**j
        if self.max_exponent() * factor >= EXP_CAP:
            raise OverflowError("exponent cap exceeded")
        ctx = self.ctx
        return self._new({k * factor: ctx.pow(c, factor) for k, c in self.terms.items()})

    def frobenius(self, times: int = 1) -> "MultiPoly":
        """self ** (q ** times); coefficients in F_q are fixed."""
        return self.p_power(self.ctx.f * times)

    def __pow__(self, e: int) -> "MultiPoly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(self.ctx, self.nvars, 1)
        p, j = self.ctx.p, 0
        while e:
            e, digit = divmod(e, p)
            if digit:
                base = self.p_power(j)
                for _ in range(digit):
                    result = result * base
            j += 1
        return result

    def divide_monomial(self, exps: Sequence[int]) -> "MultiPoly":
        shift = _pack(exps)
        out = {}
        for key, c in self.terms.items():
            for k, e in enumerate(exps):
                if _var_exp(key, k) < e:
                    raise ValueError("monomial does not divide polynomial")
            out[key - shift] = c
        return self._new(out)

    def substitute(self, mapping: Mapping[int, object]) -> "MultiPoly":
        """Replace y_n by mapping[n] (a polynomial in the same ring or a scalar)."""
        if not mapping:
            return self
        subs = {n - 1: (v if isinstance(v, MultiPoly) else MultiPoly.const(self.ctx, self.nvars, v))
                for n, v in mapping.items()}
        for v in subs.values():
            self._check(v)
        zeros = [k for k, v in subs.items() if v.is_zero()]
        cache: dict[tuple[int, int], MultiPoly] = {}
        out = self._new({})
        for key, c in self.terms.items():
            if any(_var_exp(key, k) for k in zeros):
                continue
            rest = key
            factor = MultiPoly.const(self.ctx, self.nvars, c)
            for k, v in subs.items():
                e = _var_exp(key, k)
                if e:
                    rest -= e << (_W * k)
                    if (k, e) not in cache:
                        cache[k, e] = v**e
                    factor = factor * cache[k, e]
            out = out + factor.mul_monomial(_unpack(rest, self.nvars))
        return out

    def reindex(self, nvars: int, offset: int) -> "MultiPoly":
        """Move y_t to y_{t+offset} inside a ring with ``nvars`` variables."""
        if offset < 0 or self.nvars + offset > nvars:
            raise ValueError("reindexing out of range")
        return MultiPoly(self.ctx, nvars, {key << (_W * offset): c for key, c in self.terms.items()})

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, values: Sequence[FieldElem | int]) -> FieldElem:
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} values")
        field = _target_field(self.ctx, values)
        emb = embedding(self.ctx, field)
        vals = [v.value if isinstance(v, FieldElem) else field.from_int(v) for v in values]
        total = 0
        for exps, c in self.items():
            t = int(emb.table[c])
            for v, e in zip(vals, exps):
                if e:
                    t = field.mul(t, field.pow(v, e))
            total = field.add(total, t)
        return FieldElem(field, total)

    def evaluate_batch(self, field: FieldCtx, cols: Sequence[np.ndarray]) -> np.ndarray:
        """Evaluate at many points of ``field``; ``cols[k]`` holds the y_{k+1} values."""
        if len(cols) != self.nvars:
            raise ValueError(f"expected {self.nvars} columns")
        emb = embedding(self.ctx, field)
        size = len(cols[0]) if cols else 1
        cols = [np.asarray(c, dtype=np.int64) for c in cols]
        powers: dict[tuple[int, int], np.ndarray] = {}
        total = np.zeros(size, dtype=np.int64)
        for exps, c in self.items():
            term = np.full(size, int(emb.table[c]), dtype=np.int64)
            for k, e in enumerate(exps):
                if e:
                    if (k, e) not in powers:
                        powers[k, e] = field.vpow(cols[k], e)
                    term = field.vmul(term, powers[k, e])
            total = field.vadd(total, term)
        return total

    # -- text form ----------------------------------------------------------

    def to_text(self) -> str:
        """One monomial per line, ``coef:e1,e2,...``, graded-lex descending."""
        rows = sorted(self.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return "\n".join(f"{c}:{','.join(map(str, e))}" for e, c in rows)

    @classmethod
    def from_text(cls, ctx: FieldCtx, nvars: int, text: str) -> "MultiPoly":
        terms: dict[tuple[int, ...], int] = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            c, _, rest = line.partition(":")
            exps = tuple(int(e) for e in rest.split(",")) if rest else ()
            terms[exps] = int(c)
        return cls.from_dict(ctx, nvars, {e: ctx.elem(c) for e, c in terms.items()})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in sorted(self.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True):
            mono = "*".join(f"y{k + 1}^{e}" if e > 1 else f"y{k + 1}" for k, e in enumerate(exps) if e)
            parts.append(mono if (mono and c == 1) else f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


def _coef(ctx: FieldCtx, c) -> int:
    if isinstance(c, FieldElem):
        if c.ctx != ctx:
            raise ContextMismatch("coefficient from another field")
        return c.value
    return ctx.from_int(int(c))


def _target_field(ctx: FieldCtx, values) -> FieldCtx:
    for v in values:
        if isinstance(v, FieldElem):
            return v.ctx
    return ctx


class RatFunc:
    """Quotient num/den of polynomials; equality by cross multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.const(num.ctx, num.nvars, 1)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    @classmethod
    def const(cls, ctx: FieldCtx, nvars: int, c) -> "RatFunc":
        return cls(MultiPoly.const(ctx, nvars, c))

    @classmethod
    def var(cls, ctx: FieldCtx, nvars: int, n: int) -> "RatFunc":
        return cls(MultiPoly.var(ctx, nvars, n))

    @property
    def ctx(self) -> FieldCtx:
        return self.num.ctx

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def _lift(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            self.num._check(other.num)
            return other
        if isinstance(other, MultiPoly):
            return RatFunc(other)
        if isinstance(other, (int, FieldElem, np.integer)):
            return RatFunc.const(self.ctx, self.nvars, other)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None  # equality is not representative-stable

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int) -> "RatFunc":
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num**e, self.den**e)

    def frobenius(self, times: int = 1) -> "RatFunc":
        return RatFunc(self.num.frobenius(times), self.den.frobenius(times))

    def cancel_monomials(self) -> "RatFunc":
        """Divide numerator and denominator by their common monomial factor."""
        if self.num.is_zero():
            return RatFunc(self.num, MultiPoly.const(self.ctx, self.nvars, 1))
        common = tuple(map(min, self.num.content_monomial(), self.den.content_monomial()))
        if not any(common):
            return self
        return RatFunc(self.num.divide_monomial(common), self.den.divide_monomial(common))

    def as_constant(self) -> FieldElem | None:
        """The constant c if self == c, else None."""
        if self.num.is_zero():
            return self.ctx.zero
        (en, cn), (ed, cd) = self.num.leading(), self.den.leading()
        if en != ed:
            return None
        c = self.ctx.div(cn, cd)
        return FieldElem(self.ctx, c) if self.num == self.den.scale(FieldElem(self.ctx, c)) else None

    def support(self) -> set[int]:
        return self.num.support() | self.den.support()

    def evaluate(self, values: Sequence[FieldElem | int]) -> FieldElem:
        d = self.den.evaluate(values)
        if not d:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.evaluate(values) / d

    def evaluate_batch(self, field: FieldCtx, cols: Sequence[np.ndarray]) -> np.ndarray:
        """Vectorized evaluation; raises ZeroDivisionError on any pole."""
        return field.vdiv(self.num.evaluate_batch(field, cols), self.den.evaluate_batch(field, cols))

    def __repr__(self) -> str:
        return f"({self.num}) / ({self.den})"


def ord_y(r: RatFunc, n: int) -> int:
    """Valuation of r along y_n = 0."""
    if r.is_zero():
        raise ValueError("valuation of zero")
    return r.num.var_order(n) - r.den.var_order(n)


def reduce_mod_y(r: RatFunc, i: int) -> RatFunc:
    """Residue of r modulo y_i (r must have no pole along y_i = 0).

    The result lives in the same ring but no longer involves y_i; when it is
    a constant the canonical form c/1 is returned.
    """
    if r.is_zero():
        return r
    r = r.cancel_monomials()
    a, b = r.num.var_order(i), r.den.var_order(i)
    if b > 0:
        raise ValueError(f"pole of order {b - a} along y_{i} = 0")
    if a > 0:
        return RatFunc.const(r.ctx, r.nvars, 0)
    res = RatFunc(r.num.substitute({i: 0}), r.den.substitute({i: 0}))
    c = res.as_constant()
    return RatFunc.const(r.ctx, r.nvars, c) if c is not None else res
