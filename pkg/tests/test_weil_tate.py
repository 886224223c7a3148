import random
from fractions import Fraction

import pytest
import sympy

from k3picard.count import compute_counts
from k3picard.errors import BothRejected, NewtonNonIntegral, ParityViolation
from k3picard.family import reduce_mod_p
from k3picard.tate import (RankBoundAtPrime, artin_tate_disc_class, artin_tate_value, base_change_degree,
                           combine_primes, cyclotomic, rank_upper_bound, tate_class_count,
                           tate_class_count_reversed)
from k3picard.weil import (PsiCandidate, SignResolution, coeffs_from_power_sums, known_factor,
                           known_power_sums, power_sums, psi_from_traces, resolve_with_t4, roots_on_circle)

T = sympy.symbols("T")


def _poly(expr):
    return [int(c) for c in sympy.Poly(sympy.expand(expr), T).all_coeffs()]


def _synthetic(p, rng):
    """A degree-7 Weil polynomial: a real root +-p and three quadratic factors."""
    expr = T - rng.choice((p, -p))
    for _ in range(3):
        if rng.random() < 0.3:
            n = rng.choice((3, 4, 6))
            phi = sympy.cyclotomic_poly(n, T)
            expr *= sympy.expand(p**2 * phi.subs(T, T / p))
        else:
            expr *= T**2 - rng.randint(-2 * p + 1, 2 * p - 1) * T + p**2
    return _poly(expr)


def _traces(psi, cycle, p, n):
    s = power_sums(psi, n)
    return [s[k - 1] + known_power_sums(cycle, p, k) for k in range(1, n + 1)]


def test_known_power_sums():
    assert known_power_sums([1] * 14, 7, 1) == 15 * 7
    cycle = [1] * 8 + [2] * 3
    assert known_power_sums(cycle, 5, 1) == 9 * 5
    assert known_power_sums(cycle, 5, 2) == 15 * 25
    assert known_power_sums(cycle, 5, 4) == 15 * 5**4
    with pytest.raises(ValueError):
        known_power_sums([1] * 13, 5, 1)


def test_known_factor_degree_and_roots():
    f = known_factor([1] * 12 + [2], 23)
    assert len(f) == 16
    assert power_sums(f, 2) == [13 * 23, 15 * 23**2]


def test_round_trip_200_synthetic():
    rng = random.Random(7)
    for i in range(200):
        p = rng.choice((11, 13, 17, 23, 29, 41, 61, 101))
        psi = _synthetic(p, rng)
        cycle = rng.choice(([1] * 14, [1] * 8 + [2] * 3, [1] * 12 + [2]))
        res = psi_from_traces(_traces(psi, cycle, p, 3), cycle, p)
        assert psi in [list(c.coeffs) for c in res.candidates]
        for c in res.candidates:
            assert c.satisfies_functional_equation(p)
            assert abs(c.coeffs[7]) == p**7
            assert power_sums(c.coeffs, 3) == power_sums(psi, 3)
        if not res.resolved:
            fixed = resolve_with_t4(res, _traces(psi, cycle, p, 4)[3], cycle, p)
            assert psi in [list(c.coeffs) for c in fixed.candidates]


def test_non_integral_newton():
    with pytest.raises(NewtonNonIntegral):
        psi_from_traces([1 + 15 * 7, 15 * 49, 15 * 343], [1] * 14, 7)


def test_t4_both_survive_and_both_rejected():
    p = 13
    cands = [PsiCandidate((1, 0, 0, 0, 0, 0, 0, s * p**7), s) for s in (1, -1)]
    res = SignResolution("ambiguous", cands)
    s4 = power_sums(cands[0].coeffs, 4)[3]
    assert s4 == power_sums(cands[1].coeffs, 4)[3]
    t4 = s4 + known_power_sums([1] * 14, p, 4)
    assert not resolve_with_t4(res, t4, [1] * 14, p).resolved
    with pytest.raises(BothRejected):
        resolve_with_t4(res, t4 + 1, [1] * 14, p)


def test_roots_off_circle_rejected():
    assert not roots_on_circle(PsiCandidate(tuple(_poly((T - 2 * 5) * (T - 5) ** 6)), 1), 5)
    assert roots_on_circle(PsiCandidate(tuple(_poly((T - 5) ** 7)), -1), 5)


def test_newton_coefficients_round_trip():
    f = _poly((T - 3) * (T**2 + 2 * T + 9) * (T + 3))
    assert coeffs_from_power_sums(power_sums(f, 4), 4) == f


def test_tate_counts():
    p = 7
    assert tate_class_count(_poly((T - p) ** 7), p) == 7
    assert rank_upper_bound(7).bound == 22
    g = _poly((T - p) * (T**6 + T**5 * 3 + 2 * p * T**4 + T**3 + 2 * p**3 * T**2 + 3 * p**5 * T + p**6))
    assert tate_class_count(g, p) == 1
    assert rank_upper_bound(1).bound == 16
    rng = random.Random(1)
    for _ in range(50):
        q = rng.choice((11, 23, 37))
        psi = _synthetic(q, rng)
        assert tate_class_count(psi, q) == tate_class_count_reversed(psi, q)


def test_cyclotomic_table():
    for n in (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 18):
        assert list(cyclotomic(n)) == [int(c) for c in sympy.Poly(sympy.cyclotomic_poly(n, T), T).all_coeffs()]


def test_parity():
    with pytest.raises(ParityViolation):
        rank_upper_bound(2)
    rb = rank_upper_bound([1, 3], 43, [-10, -1])
    assert rb.bound == 18 and rb.ambiguous and rb.disc_classes == {-10, -1}


def test_artin_tate_against_resultant():
    p = 5
    # two Weil quadratics whose normalized traces 3/5, -1/5 are not algebraic integers
    g4 = (T**2 - 3 * T + p**2) * (T**2 + T + p**2)
    psi = _poly((T - p) * (T**2 + p * T + p**2) * g4)
    cand = PsiCandidate(tuple(psi), 1)
    cycle = [1] * 14
    m = base_change_degree(cand, cycle, p)
    assert m == 3
    value = artin_tate_value(cand, cycle, p, 18)
    res = sympy.resultant(sympy.Poly(g4, T), sympy.Poly(p**m - T**m, T))
    assert value == Fraction(int(res), p ** (3 * m))
    assert res > 0
    # rho = 18: negative sign, Brauer square dropped
    assert artin_tate_disc_class(cand, cycle, p, 18) == -sympy.ntheory.factor_.core(int(res) * p ** (3 * m), 2)


@pytest.mark.parametrize("cv,p", [([1, 1, 1, -1, -13, 0, 11, -11], 23), ([1, 1, 1, -1, -16, 7, 10, -10], 17),
                                  ([1, 1, 1, -1, -16, 7, 10, -10], 31)])
def test_artin_tate_base_change_invariance(cv, p):
    s = reduce_mod_p(cv, p)
    res = psi_from_traces(compute_counts(s, 3).traces, s.cycle_type, p)
    for cand in res.candidates:
        u = tate_class_count(cand, p)
        m = base_change_degree(cand, s.cycle_type, p)
        classes = {artin_tate_disc_class(cand, s.cycle_type, p, 15 + u, k * m) for k in (1, 2, 3)}
        assert len(classes) == 1


def test_combine_rules():
    b = lambda p, n, cls: RankBoundAtPrime(p, n, frozenset(cls))
    assert combine_primes([b(5, 16, {-1}), b(7, 16, {-2})]).upper == 15
    assert combine_primes([b(5, 16, {-1}), b(7, 16, {-1})]).upper == 16
    assert combine_primes([b(7, 16, {-2}), b(5, 16, {-1})]).incompatible in ((5, 7), (7, 5))
    bounds = [b(11, 18, {-3}), b(13, 18, {-22}), b(17, 20, {1})]
    assert combine_primes(bounds).upper == 17
    assert combine_primes(bounds[::-1]).upper == 17
    assert combine_primes(bounds + [b(19, 16, {-1})]).upper == 16


def test_s5_at_23():
    s = reduce_mod_p([1, 1, 1, -1, -13, 0, 11, -11], 23)
    res = psi_from_traces(compute_counts(s, 3).traces, s.cycle_type, 23)
    us = [tate_class_count(c, 23) for c in res.candidates]
    assert rank_upper_bound(us).bound == 18


def test_s1_at_61():
    s = reduce_mod_p([1, 1, 1, -7, 16, 6, -9, 12], 61)
    res = psi_from_traces(compute_counts(s, 3).traces, s.cycle_type, 61)
    assert res.resolved
    u = tate_class_count(res.candidates[0], 61)
    assert rank_upper_bound(u).bound == 16
    assert artin_tate_disc_class(res.candidates[0], s.cycle_type, 61, 16) == -6
