"""Finite fields F_p ⊂ F_q ⊂ F_{q^k} with explicit moduli.

An element of F_{p^n} is stored as a plain ``int``: the coordinate vector
(c_0, ..., c_{n-1}) in the power basis 1, x, ..., x^{n-1} is encoded as
``sum(c_i * p**i)``.  So 0 is zero, 1 is one, and for p = 2 the encoding is
the usual bit vector.

Scalar arithmetic (``FieldCtx.mul`` and friends, ``FieldElem``) is pure
polynomial arithmetic and needs no tables.  The ``v*`` methods operate on
numpy integer arrays of encodings through exp/log/Zech tables, built lazily
and shared between contexts with the same modulus.
"""

from __future__ import annotations

import functools
import itertools
import math
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, ContextMismatch

DEFAULT_FIELD_BUDGET = 1 << 24
_GENERATOR_CHECK_LIMIT = 1 << 20

__all__ = [
    "DEFAULT_FIELD_BUDGET",
    "Embedding",
    "FieldCtx",
    "FieldElem",
    "embedding",
    "enumerate_field",
    "factor_int",
    "frobenius_q",
    "is_irreducible",
    "is_prime",
    "make_field",
    "norm_to_base",
    "prime_power",
    "smallest_irreducible",
]


# ---------------------------------------------------------------------------
# integers

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = 3
    while r * r <= n:
        if n % r == 0:
            return False
        r += 2
    return True


def factor_int(n: int) -> dict[int, int]:
    """Trial-division factorization (fine for n < 2**40)."""
    out: dict[int, int] = {}
    r = 2
    while r * r <= n:
        while n % r == 0:
            out[r] = out.get(r, 0) + 1
            n //= r
        r += 1 if r == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, f) with q = p**f, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    fac = factor_int(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    ((p, f),) = fac.items()
    return p, f


# ---------------------------------------------------------------------------
# dense polynomials over F_p, coefficient lists low-to-high

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = (a[-1] * inv) % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(a: list[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Ben-Or test for a monic polynomial over F_p (coefficients low-to-high)."""
    f = _trim([c % p for c in coeffs])
    n = len(f) - 1
    if n < 1 or f[-1] != 1:
        raise ValueError("expected a monic polynomial of degree >= 1")
    if n == 1:
        return True
    h = [0, 1]
    for _ in range(n // 2):
        h = _ppowmod(h, p, f, p)
        g = _pgcd(f, _psub(h, [0, 1], p), p)
        if len(g) > 1:
            return False
    return True


def _digits(v: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        v, r = divmod(v, p)
        out.append(r)
    return out


def smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Monic irreducible of degree n whose lower coefficients, read as a
    base-p numeral (c_0 least significant), is smallest."""
    for idx in range(p**n):
        coeffs = _digits(idx, p, n) + [1]
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# ---------------------------------------------------------------------------
# tables for vectorized arithmetic

class _Tables:
    __slots__ = ("exp", "log", "zech", "generator")

    def __init__(self, exp, log, zech, generator):
        self.exp = exp
        self.log = log
        self.zech = zech
        self.generator = generator


@functools.lru_cache(maxsize=8)
def _tables_for(p: int, n: int, modulus: tuple[int, ...]) -> _Tables:
    ctx = make_field(p, n, modulus=modulus, budget=p**n)
    order = p**n
    g = ctx.generator
    exp = np.empty(order - 1, dtype=np.int64)
    exp[0] = 1
    filled = 1
    while filled < order - 1:
        take = min(filled, order - 1 - filled)
        exp[filled:filled + take] = ctx._vmul_const(exp[:take], ctx.pow(g, filled))
        filled += take
    log = np.full(order, -1, dtype=np.int64)
    log[exp] = np.arange(order - 1, dtype=np.int64)
    if order > 1 and int((log >= 0).sum()) != order - 1:
        raise AssertionError("generator is not primitive")
    zech = None
    if p != 2:
        low = exp % p
        one_plus = exp - low + (low + 1) % p
        zech = log[one_plus]
    return _Tables(exp, log, zech, g)


# ---------------------------------------------------------------------------

class FieldCtx:
    """The field F_{p^n}, viewed as an extension of degree k = n/f of F_q, q = p^f.

    Immutable after construction.  ``modulus`` is the monic defining
    polynomial over F_p, coefficients low-to-high.
    """

    def __init__(self, p: int, n: int, f: int = 1, modulus: Sequence[int] | None = None,
                 budget: int = DEFAULT_FIELD_BUDGET):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if n < 1:
            raise ValueError("degree must be >= 1")
        if f < 1 or n % f:
            raise ValueError(f"base degree f={f} must divide n={n}")
        if p**n > budget:
            raise BudgetExceeded(f"field F_{p}^{n} has {p**n} elements, budget is {budget}")
        if modulus is None:
            modulus = smallest_irreducible(p, n)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {n}")
        if not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.n = n
        self.f = f
        self.k = n // f
        self.q = p**f
        self.order = p**n
        self.modulus = modulus
        self._modint = sum(c << i for i, c in enumerate(modulus)) if p == 2 else None
        self._gen: int | None = None
        if self.order <= _GENERATOR_CHECK_LIMIT:
            self.generator  # exhibits a primitive element

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, n={self.n}, f={self.f})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, FieldCtx) and self.p == other.p and self.n == other.n
                and self.modulus == other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.modulus))

    def same_field(self, other: "FieldCtx") -> bool:
        return self == other

    # -- encoding ----------------------------------------------------------

    def coords(self, a: int) -> tuple[int, ...]:
        return tuple(_digits(a, self.p, self.n))

    def from_coords(self, coords: Sequence[int]) -> int:
        if len(coords) > self.n:
            raise ValueError("too many coordinates")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coords))

    def from_int(self, k: int) -> int:
        """Image of the integer k in the prime field."""
        return k % self.p

    def __call__(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            if value.ctx != self:
                raise ContextMismatch("element belongs to another field")
            return value
        if isinstance(value, (list, tuple)):
            return FieldElem(self, self.from_coords(value))
        return FieldElem(self, self.from_int(int(value)))

    def elem(self, code: int) -> "FieldElem":
        if not 0 <= code < self.order:
            raise ValueError(f"{code} is not an element encoding of F_{self.order}")
        return FieldElem(self, code)

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(self, 0)

    @property
    def one(self) -> "FieldElem":
        return FieldElem(self, 1)

    # -- scalar arithmetic on encodings -------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.n == 1:
            return (a + b) % p
        out, pw = 0, 1
        while a or b:
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * pw
            pw *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        if self.n == 1:
            return (-a) % p
        out, pw = 0, 1
        while a:
            a, r = divmod(a, p)
            out += ((-r) % p) * pw
            pw *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        p = self.p
        if self.n == 1:
            return (a * b) % p
        if p == 2:
            n, mod = self.n, self._modint
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if (a >> n) & 1:
                    a ^= mod
            return r
        prod = _pmul(_digits(a, p, self.n), _digits(b, p, self.n), p)
        rem = _pmod(prod, self.modulus, p)
        return sum(c * p**i for i, c in enumerate(rem))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        e %= self.order - 1
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frob(self, a: int, times: int = 1) -> int:
        """a ** (q ** times)."""
        if a == 0:
            return 0
        return self.pow(a, pow(self.q, times, self.order - 1) or (self.order - 1))

    def in_subfield(self, a: int, degree: int) -> bool:
        """Whether a lies in F_{p^degree}."""
        return self.pow(a, self.p**degree) == a

    @property
    def generator(self) -> int:
        """Smallest encoding of a primitive element."""
        if self._gen is None:
            N = self.order - 1
            if N == 1:
                self._gen = 1
            else:
                primes = list(factor_int(N))
                for g in range(2, self.order):
                    if all(self.pow(g, N // r) != 1 for r in primes):
                        self._gen = g
                        break
        return self._gen

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        N = self.order - 1
        order = N
        for r, e in factor_int(N).items():
            for _ in range(e):
                if self.pow(a, order // r) == 1:
                    order //= r
                else:
                    break
        return order

    # -- vectorized arithmetic ----------------------------------------------

    @property
    def tables(self) -> _Tables:
        return _tables_for(self.p, self.n, self.modulus)

    def _vmul_const(self, arr: np.ndarray, c: int) -> np.ndarray:
        """Multiply an array of encodings by a constant without tables."""
        arr = np.asarray(arr, dtype=np.int64)
        if c == 0:
            return np.zeros_like(arr)
        p, n = self.p, self.n
        if p == 2:
            acc = np.zeros_like(arr)
            j = 0
            while c >> j:
                if (c >> j) & 1:
                    acc ^= arr << j
                j += 1
            for b in range(2 * n - 2, n - 1, -1):
                bit = (acc >> b) & 1
                acc ^= bit * (self._modint << (b - n))
            return acc
        pw = p ** np.arange(n, dtype=np.int64)
        cols = [self.coords(self.mul(c, p**j)) for j in range(n)]
        M = np.array(cols, dtype=np.int64)  # row j = coords of c * x^j
        out = np.empty_like(arr)
        step = 1 << 16
        for s in range(0, arr.size, step):
            chunk = arr.ravel()[s:s + step]
            D = (chunk[:, None] // pw[None, :]) % p
            out.ravel()[s:s + step] = ((D @ M) % p) @ pw
        return out

    def asarray(self, values) -> np.ndarray:
        return np.asarray(values, dtype=np.int64)

    def vadd(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.n == 1:
            return (a + b) % self.p
        t = self.tables
        N1 = self.order - 1
        la, lb = t.log[a], t.log[b]
        z = t.zech[(lb - la) % N1]
        out = t.exp[(la + z) % N1]
        out = np.where(z < 0, 0, out)
        return np.where(a == 0, b, np.where(b == 0, a, out))

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        if self.n == 1:
            return (-a) % self.p
        t = self.tables
        N1 = self.order - 1
        out = t.exp[(t.log[a] + N1 // 2) % N1]
        return np.where(a == 0, 0, out)

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.n == 1:
            return (a * b) % self.p
        t = self.tables
        out = t.exp[(t.log[a] + t.log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vpow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e < 0:
            return self.vpow(self.vinv(a), -e)
        if e == 0:
            return np.ones_like(a)
        N1 = self.order - 1
        if N1 == 1 or e % N1 == 1:
            return a.copy()
        t = self.tables
        out = t.exp[(t.log[a] * (e % N1)) % N1]
        return np.where(a == 0, 0, out)

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in array")
        if self.order == 2:
            return a.copy()
        t = self.tables
        return t.exp[(-t.log[a]) % (self.order - 1)]

    def vdiv(self, a, b) -> np.ndarray:
        return self.vmul(a, self.vinv(b))

    def vfrob(self, a, times: int = 1) -> np.ndarray:
        """Elementwise a ** (q ** times)."""
        a = np.asarray(a, dtype=np.int64)
        if self.order == 2:
            return a.copy()
        return self.vpow(a, pow(self.q, times, self.order - 1) or (self.order - 1))

    def vsum(self, arrays: Iterable[np.ndarray]) -> np.ndarray:
        total = None
        for arr in arrays:
            total = np.asarray(arr, dtype=np.int64) if total is None else self.vadd(total, arr)
        if total is None:
            raise ValueError("empty sum")
        return total

    def subfield_codes(self, degree: int) -> np.ndarray:
        """Sorted encodings of the subfield F_{p^degree}."""
        if self.n % degree:
            raise ValueError(f"F_{self.p}^{degree} is not a subfield of F_{self.p}^{self.n}")
        if degree == self.n:
            return np.arange(self.order, dtype=np.int64)
        if degree == 1:
            return np.arange(self.p, dtype=np.int64)
        step = (self.order - 1) // (self.p**degree - 1)
        units = self.tables.exp[::step]
        return np.sort(np.concatenate([[0], units]))

    def base_codes(self) -> np.ndarray:
        """Encodings of the base field F_q inside this field."""
        return self.subfield_codes(self.f)

    def elements(self) -> list["FieldElem"]:
        return enumerate_field(self)


@functools.lru_cache(maxsize=None)
def _make_field_cached(p, n, f, modulus, budget):
    return FieldCtx(p, n, f=f, modulus=modulus, budget=budget)


def make_field(p: int, degree: int, *, f: int = 1, modulus: Sequence[int] | None = None,
               budget: int = DEFAULT_FIELD_BUDGET) -> FieldCtx:
    """F_{p^degree} with the smallest irreducible modulus (or the given one).

    ``f`` fixes the base field F_q, q = p^f, used by Frobenius and norms.
    Equal arguments return the same context object.
    """
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if p**degree > budget:
        raise BudgetExceeded(f"field F_{p}^{degree} has {p**degree} elements, budget is {budget}")
    mod = tuple(modulus) if modulus is not None else None
    return _make_field_cached(p, degree, f, mod, budget)


class FieldElem:
    """An element of a ``FieldCtx``; supports the usual operators.

    Plain ints on either side of an operator are read as prime-field
    constants.
    """

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: FieldCtx, value: int):
        self.ctx = ctx
        self.value = value

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.ctx.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.ctx, self.ctx.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.ctx, self.ctx.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.ctx, self.ctx.sub(b, self.value))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.ctx, self.ctx.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.ctx, self.ctx.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.ctx, self.ctx.div(b, self.value))

    def __pow__(self, e: int):
        return FieldElem(self.ctx, self.ctx.pow(self.value, e))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.inv(self.value))

    def frobenius(self, times: int = 1) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.frob(self.value, times))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.value == other.value and self.ctx == other.ctx
        if isinstance(other, (int, np.integer)):
            return self.value == self.ctx.from_int(int(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx.order, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __lt__(self, other: "FieldElem") -> bool:
        return self.value < other.value

    @property
    def coords(self) -> tuple[int, ...]:
        return self.ctx.coords(self.value)

    def __repr__(self) -> str:
        return f"F{self.ctx.order}({self.value})"


def enumerate_field(ctx: FieldCtx, budget: int = DEFAULT_FIELD_BUDGET) -> list[FieldElem]:
    """All elements, in base-p counting order of their coordinates."""
    if ctx.order > budget:
        raise BudgetExceeded(f"enumerating {ctx.order} elements exceeds budget {budget}")
    return [FieldElem(ctx, v) for v in range(ctx.order)]


def frobenius_q(x: FieldElem, times: int = 1) -> FieldElem:
    """x ** (q ** times) where q is the base field size of x's context."""
    return x.frobenius(times)


def norm_to_base(x: FieldElem, degree: int | None = None) -> FieldElem:
    """Norm from F_{q^degree} down to F_q, i.e. x ** (1 + q + ... + q^(degree-1)).

    ``degree`` defaults to the degree of x's field over F_q; a smaller value
    requires x to lie in the subfield F_{q^degree}.
    """
    ctx = x.ctx
    degree = ctx.k if degree is None else degree
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if degree != ctx.k and x.frobenius(degree) != x:
        raise ValueError(f"{x} does not lie in F_(q^{degree})")
    e = (ctx.q**degree - 1) // (ctx.q - 1)
    return x**e


class Embedding:
    """Field homomorphism sub -> big sending the generator x of ``sub`` to
    the smallest-encoded root of sub's modulus in ``big``."""

    def __init__(self, sub: FieldCtx, big: FieldCtx):
        if sub.p != big.p or big.n % sub.n:
            raise ContextMismatch(f"{sub} does not embed in {big}")
        self.sub = sub
        self.big = big
        if sub.n == 1:
            root = 0
        elif sub == big:
            root = big.p  # the class of x itself
        else:
            root = self._smallest_root()
        self.root = root
        powers = [1]
        for _ in range(sub.n - 1):
            powers.append(big.mul(powers[-1], root))
        table = np.zeros(sub.order, dtype=np.int64)
        for code in range(sub.order):
            acc = 0
            for c, pw in zip(sub.coords(code), powers):
                if c:
                    acc = big.add(acc, big.mul(big.from_int(c), pw))
            table[code] = acc
        self.table = table

    def _smallest_root(self) -> int:
        big, mod = self.big, self.sub.modulus
        step = 1 << 16
        for start in range(0, big.order, step):
            xs = np.arange(start, min(start + step, big.order), dtype=np.int64)
            acc = np.zeros_like(xs)
            for c in reversed(mod):
                acc = big.vadd(big.vmul(acc, xs), np.full_like(xs, big.from_int(c)))
            hits = np.flatnonzero(acc == 0)
            if hits.size:
                return int(xs[hits[0]])
        raise AssertionError("sub modulus has no root in big field")  # pragma: no cover

    def __call__(self, x):
        if isinstance(x, FieldElem):
            if x.ctx != self.sub:
                raise ContextMismatch("element not in the embedded field")
            return FieldElem(self.big, int(self.table[x.value]))
        return self.table[np.asarray(x, dtype=np.int64)]


@functools.lru_cache(maxsize=None)
def embedding(sub: FieldCtx, big: FieldCtx) -> Embedding:
    return Embedding(sub, big)


def all_vectors(ctx: FieldCtx, length: int) -> Iterable[tuple[int, ...]]:
    """Every vector in F^length as tuples of encodings, counting order."""
    return itertools.product(range(ctx.order), repeat=length)


def lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)
