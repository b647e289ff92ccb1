import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from drinfeld.errors import BudgetExceeded, ContextMismatch
from drinfeld.fields import (
    FieldElem,
    embedding,
    factor_int,
    is_irreducible,
    is_prime,
    make_field,
    norm_to_base,
    prime_power,
    smallest_irreducible,
)


def _naive_mul(a, b, p, mod):
    # schoolbook product then reduction, on coefficient lists
    n = len(mod) - 1
    prod = [0] * (2 * n)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for t in range(n + 1):
                prod[k - n + t] = (prod[k - n + t] - c * mod[t]) % p
    return prod[:n]


def test_prime_helpers():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert factor_int(360) == {2: 3, 3: 2, 5: 1}
    assert prime_power(8) == (2, 3) and prime_power(9) == (3, 2) and prime_power(7) == (7, 1)
    with pytest.raises(ValueError):
        prime_power(12)


def test_smallest_irreducible_is_lexicographically_first():
    for p, n in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)]:
        mod = smallest_irreducible(p, n)
        assert is_irreducible(mod, p)
        # every monic candidate that sorts earlier is reducible
        for coeffs in itertools.product(range(p), repeat=n):
            cand = tuple(coeffs) + (1,)
            if cand[::-1] < mod[::-1]:
                assert not is_irreducible(cand, p)


def test_irreducibility_against_root_count():
    # a degree 2 or 3 polynomial is irreducible iff it has no root in F_p
    p = 5
    for coeffs in itertools.product(range(p), repeat=3):
        poly = tuple(coeffs) + (1,)
        has_root = any(sum(c * x**k for k, c in enumerate(poly)) % p == 0 for x in range(p))
        assert is_irreducible(poly, p) == (not has_root)


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (2, 4), (3, 3)])
def test_mul_matches_schoolbook(p, n):
    F = make_field(p, n)
    for a in range(F.order):
        for b in range(0, F.order, max(1, F.order // 7)):
            got = F.coords(F.mul(a, b))
            want = _naive_mul(F.coords(a), F.coords(b), p, F.modulus)
            assert list(got) == want


def test_vector_ops_match_scalar(small_fields):
    rng = np.random.default_rng(0)
    for F in small_fields:
        a = rng.integers(0, F.order, 200)
        b = rng.integers(1, F.order, 200)
        assert F.vadd(a, b).tolist() == [F.add(int(x), int(y)) for x, y in zip(a, b)]
        assert F.vsub(a, b).tolist() == [F.sub(int(x), int(y)) for x, y in zip(a, b)]
        assert F.vmul(a, b).tolist() == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
        assert F.vdiv(a, b).tolist() == [F.div(int(x), int(y)) for x, y in zip(a, b)]
        assert F.vpow(a, 5).tolist() == [F.pow(int(x), 5) for x in a]
        assert F.vfrob(a).tolist() == [F.frob(int(x)) for x in a]
        with pytest.raises(ZeroDivisionError):
            F.vinv(np.array([0, 1]))


@given(st.integers(0, 26), st.integers(0, 26), st.integers(0, 26))
def test_field_axioms_f27(a, b, c):
    F = make_field(3, 3)
    x, y, z = F.elem(a), F.elem(b), F.elem(c)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x - x == 0
    if y:
        assert (x / y) * y == x
    # Frobenius is additive and fixes exactly F_p for this field
    assert (x + y) ** 3 == x**3 + y**3


def test_multiplicative_order_divides():
    F = make_field(2, 6)
    g = F.generator
    assert F.multiplicative_order(g) == 63
    for a in range(1, F.order):
        assert 63 % F.multiplicative_order(a) == 0


def test_subfields_and_base_codes():
    F = make_field(2, 6, f=2)
    assert F.q == 4 and F.k == 3
    base = set(F.base_codes().tolist())
    assert len(base) == 4
    assert all(F.frob(a) == a for a in base)
    assert len(F.subfield_codes(2)) == 4 and len(F.subfield_codes(3)) == 8


def test_embedding_is_a_homomorphism():
    sub, big = make_field(2, 2), make_field(2, 6)
    e = embedding(sub, big)
    for a in range(4):
        for b in range(4):
            assert e.table[sub.mul(a, b)] == big.mul(int(e.table[a]), int(e.table[b]))
            assert e.table[sub.add(a, b)] == big.add(int(e.table[a]), int(e.table[b]))
    with pytest.raises(ContextMismatch):
        embedding(make_field(2, 4), make_field(2, 6))


def test_norm_lands_in_base():
    F = make_field(3, 4, f=1)
    for a in range(1, F.order, 7):
        n = norm_to_base(F.elem(a))
        assert n.value < 3 and n.value != 0


def test_custom_modulus_gives_isomorphic_field():
    F = make_field(2, 3, modulus=(1, 0, 1, 1))
    assert F.modulus == (1, 0, 1, 1)
    assert sorted(F.multiplicative_order(a) for a in range(1, 8)) == [1] + [7] * 6
    with pytest.raises(ValueError):
        make_field(2, 3, modulus=(1, 1, 1, 1))


def test_budget_refuses_big_fields():
    with pytest.raises(BudgetExceeded):
        make_field(2, 30)


def test_elements_mixing_fields_raise():
    with pytest.raises(ContextMismatch):
        make_field(2, 3)(1) + make_field(2, 2)(1)
    assert isinstance(make_field(2, 3)(3), FieldElem)
