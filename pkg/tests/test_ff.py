from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from k3picard import arith
from k3picard.errors import FieldError
from k3picard.ff import (arith as field_arith, frobenius, make_field, quadratic_character,
                         quartic_root_count, root_count_brute)


def test_character_matches_euler_on_f25():
    fld = make_field(5, 2)
    for a in fld.elements():
        assert quadratic_character(a) == a.euler_character()
    assert quadratic_character(fld.zero) == 0


@pytest.mark.parametrize("p,k", [(5, 1), (7, 2), (5, 3), (11, 2)])
def test_half_the_units_are_squares(p, k):
    fld = make_field(p, k)
    chars = [quadratic_character(a) for a in fld.elements()]
    assert chars.count(1) == chars.count(-1) == (fld.q - 1) // 2


def test_frobenius_has_order_k():
    fld = make_field(7, 3)
    for a in list(fld.elements())[::17]:
        assert frobenius(frobenius(frobenius(a))) == a
        assert a.frobenius() == a**7


def test_prime_subfield_is_fixed_by_frobenius():
    fld = make_field(13, 2)
    fixed = [a for a in fld.elements() if a.frobenius() == a]
    assert len(fixed) == 13


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 120), st.integers(0, 120), st.integers(0, 120))
def test_field_axioms_f_11_squared(i, j, l):
    fld = make_field(11, 2)
    a, b, c = (fld.from_index(x) for x in (i, j, l))
    assert (a + b) * c == a * c + b * c
    assert field_arith(a, b, "sub") + b == a
    if not b.is_zero():
        assert field_arith(a, b, "div") * b == a
        assert b * b.inverse() == fld.one
    assert (a * b).norm() == a.norm() * b.norm() % 11


def test_log_tables_roundtrip():
    fld = make_field(7, 2)
    t = fld.tables
    for a in fld.elements():
        if a.is_zero():
            assert t.to_log(a) == -1
        else:
            assert t.from_log(fld, t.to_log(a)) == a
    assert len(set(int(x) for x in t.exp[: fld.q - 1])) == fld.q - 1


@pytest.mark.parametrize("p,k", [(5, 1), (5, 2), (7, 2)])
def test_root_count_two_routes(p, k):
    rng = np.random.default_rng(p * k)
    fld = make_field(p, k)
    for _ in range(25):
        f = [fld.from_index(int(x)) for x in rng.integers(0, fld.q, 5)]
        assert quartic_root_count(f) == root_count_brute(f)
    # (t - 1)(t - 2)^2 t has three distinct roots
    one = fld.one
    f = [fld.zero, fld(-4), fld(8), fld(-5), one]
    assert quartic_root_count(f) == 3


def test_zero_polynomial_sentinel():
    fld = make_field(5)
    assert quartic_root_count([fld.zero] * 5) == 6


@pytest.mark.parametrize("p,k", [(4, 1), (9, 1), (3, 1), (2, 2), (5, 0)])
def test_bad_field_parameters(p, k):
    with pytest.raises(FieldError):
        make_field(p, k)


def test_mixed_fields_rejected():
    with pytest.raises(FieldError):
        make_field(5, 2).one + make_field(7, 2).one


def test_arith_helpers():
    assert arith.square_class(Fraction(-12, 5)) == -15
    assert arith.square_class(18) == 2
    assert arith.squarefree_part(-50) == -2
    assert arith.primes_between(5, 20) == [5, 7, 11, 13, 17, 19]
    for p in (13, 17, 1000003):
        for a in (2, 3, 5, 10):
            if arith.legendre(a, p) == 1:
                r = arith.sqrt_mod(a, p)
                assert r * r % p == a % p
