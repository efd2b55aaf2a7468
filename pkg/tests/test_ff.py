import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fingeo.errors import DivisionByZero, FieldMismatch, NotPrime, NotSubfieldOrder, OrderOverflow
from fingeo.ff import (
    FieldSpec,
    dth_root,
    field_of_order,
    frobenius,
    is_irreducible,
    is_prime,
    make_field,
    power_residues,
    prime_power_decompose,
    rel_norm,
    residue_count,
    subfield_elements,
)

FIELDS = [(2, 1), (3, 1), (7, 1), (13, 1), (2, 3), (3, 2), (5, 2), (2, 4), (7, 2)]


def _naive_primes(n):
    return [m for m in range(2, n) if all(m % k for k in range(2, int(m**0.5) + 1))]


def _polymod_zero(a, b, p):
    """Is b (monic) a divisor of a over F_p?  Plain long division."""
    a = list(a)
    while len(a) >= len(b):
        c = a[-1] % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a.pop()
    return not any(x % p for x in a)


def _irreducible_oracle(modulus, p):
    """Trial division by every monic polynomial of degree 1..n/2."""
    n = len(modulus) - 1
    for deg in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if _polymod_zero(modulus, list(low) + [1], p):
                return False
    return True


def test_is_prime_matches_sieve():
    assert [n for n in range(2000) if is_prime(n)] == _naive_primes(2000)


def test_prime_power_decompose():
    assert prime_power_decompose(625) == (5, 4)
    assert prime_power_decompose(401**3) == (401, 3)
    assert prime_power_decompose(12) is None
    assert prime_power_decompose(1) is None


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_irreducibility_against_trial_division(p, n):
    for low in itertools.product(range(p), repeat=n):
        mod = list(low) + [1]
        assert is_irreducible(mod, p) == _irreducible_oracle(mod, p), mod


def test_modulus_is_lex_least_irreducible():
    assert make_field(3, 2).modulus == (1, 0, 1)
    assert make_field(401, 3, max_order=1 << 62).modulus == (1, 0, 5, 1)
    for p, t in [(2, 4), (3, 3), (5, 2)]:
        monic = [low + (1,) for low in itertools.product(range(p), repeat=t)]
        first = min(m for m in monic if _irreducible_oracle(list(m), p))
        assert make_field(p, t).modulus == first


def test_constructor_errors():
    with pytest.raises(NotPrime):
        make_field(6)
    with pytest.raises(OrderOverflow):
        make_field(2, 40)
    with pytest.raises(NotPrime):
        field_of_order(12)
    with pytest.raises(DivisionByZero):
        make_field(7).zero.inverse()


def test_mixing_fields_is_rejected():
    with pytest.raises(FieldMismatch):
        make_field(5).one + make_field(7).one


@pytest.mark.parametrize("p,t", FIELDS)
def test_multiplicative_group_is_cyclic_of_right_order(p, t):
    F = make_field(p, t)
    nz = list(F.nonzero())
    assert len(nz) == F.q - 1
    assert all(x ** (F.q - 1) == F.one for x in nz)
    orders = set()
    for x in nz:
        k = 1
        y = x
        while y != F.one:
            y = y * x
            k += 1
        orders.add(k)
    assert F.q - 1 in orders


@pytest.mark.parametrize("p,t", FIELDS)
def test_vectorised_ops_match_scalar(p, t):
    F = make_field(p, t)
    a = np.array([x for x in range(F.q) for _ in range(F.q)], dtype=np.int64)
    b = np.array([y for _ in range(F.q) for y in range(F.q)], dtype=np.int64)
    assert F.vadd(a, b).tolist() == [F.add_c(x, y) for x, y in zip(a.tolist(), b.tolist())]
    assert F.vsub(a, b).tolist() == [F.sub_c(x, y) for x, y in zip(a.tolist(), b.tolist())]
    assert F.vmul(a, b).tolist() == [F.mul_c(x, y) for x, y in zip(a.tolist(), b.tolist())]
    assert F.vneg(a).tolist() == [F.neg_c(x) for x in a.tolist()]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_field_axioms(pt, data):
    F = make_field(*pt)
    el = st.integers(0, F.q - 1).map(F.from_code)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == F.zero and a + (-a) == F.zero
    if not a.is_zero():
        assert a * a.inverse() == F.one


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(9, 3), (25, 5), (16, 2), (16, 4), (49, 7), (8, 2)]), st.data())
def test_frobenius_and_norm(pair, data):
    q, q0 = pair
    F = field_of_order(q)
    el = st.integers(0, q - 1).map(F.from_code)
    x, y = data.draw(el), data.draw(el)
    assert frobenius(x + y, q0) == frobenius(x, q0) + frobenius(y, q0)
    assert frobenius(x * y, q0) == frobenius(x, q0) * frobenius(y, q0)
    sub = set(subfield_elements(F, q0))
    assert rel_norm(x, q0) in sub
    assert rel_norm(x * y, q0) == rel_norm(x, q0) * rel_norm(y, q0)


def test_norm_surjects_onto_subfield_units():
    F = field_of_order(25)
    fibres = {}
    for x in F.nonzero():
        fibres.setdefault(rel_norm(x, 5), 0)
        fibres[rel_norm(x, 5)] += 1
    assert len(fibres) == 4 and set(fibres.values()) == {6}


def test_f9_frobenius_of_generator():
    F = make_field(3, 2)
    a = F.gen
    assert frobenius(a, 3) == -a
    assert rel_norm(a, 3) == F.one


def test_subfield_order_must_divide():
    with pytest.raises(NotSubfieldOrder):
        subfield_elements(field_of_order(25), 3)


@pytest.mark.parametrize("q,d", [(13, 2), (13, 3), (31, 3), (9, 2), (16, 3)])
def test_power_residues(q, d):
    F = field_of_order(q)
    direct = {x**d for x in F.nonzero()}
    assert power_residues(F, d) == frozenset(direct)
    assert residue_count(F, d) == len(direct)


def test_residues_mod_13():
    F = make_field(13)
    assert sorted(x.code for x in power_residues(F, 2)) == [1, 3, 4, 9, 10, 12]


@pytest.mark.parametrize("q,d", [(13, 2), (31, 3), (25, 2)])
def test_dth_root_is_code_least(q, d):
    F = field_of_order(q)
    for y in F.elements():
        roots = [x for x in F.elements() if x**d == y]
        r = dth_root(F, y, d)
        if roots:
            assert r == min(roots, key=lambda e: e.code)
        else:
            assert r is None
    assert dth_root(make_field(13), make_field(13)(3), 2).code == 4


@pytest.mark.parametrize("p,t", FIELDS)
def test_json_round_trip(p, t):
    F = make_field(p, t)
    assert FieldSpec.from_json(F.to_json()) == F


def test_integer_embedding_reduces_mod_p():
    F = make_field(7)
    assert F(10) == F(3) and F(-1) == F(6)
    G = make_field(3, 2)
    assert G(4) == G.one
