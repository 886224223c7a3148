import csv

import pytest

from k3picard import forms
from k3picard.count import (compute_counts, count_brute, count_degree_two, count_direct,
                            count_fibration, count_points, degree_two_model, dump_counts_csv,
                            lift_counts_to_resolution)
from k3picard.errors import BadReduction, NodeNotRational
from k3picard.family import random_sample, reduce_mod_p


@pytest.fixture(scope="module")
def surfaces():
    return random_sample(10, 2024)


def _good(cvs, p):
    out = []
    for cv in cvs:
        try:
            out.append(reduce_mod_p(cv, p))
        except BadReduction:
            pass
    return out


@pytest.mark.parametrize("p", [5, 7, 11])
def test_all_methods_match_brute_force_k1(surfaces, p):
    good = _good(surfaces, p)
    assert good
    for s in good:
        n = count_brute(s, 1)
        assert count_degree_two(degree_two_model(s), 1) == n
        assert count_direct(s, 1) == n
        assert count_fibration(s, 1) == n


def test_brute_force_k2_at_5(surfaces):
    for s in _good(surfaces, 5):
        n = count_brute(s, 2)
        assert count_points(s, 2, "degree-two") == n
        assert count_points(s, 2, "direct") == n


def test_orbit_skipping_equals_naive(surfaces):
    for p, k in ((5, 2), (7, 3)):
        for s in _good(surfaces, p)[:3]:
            m = degree_two_model(s)
            assert count_degree_two(m, k, use_orbits=True) == count_degree_two(m, k, use_orbits=False)


def test_direct_vs_degree_two_up_to_13(surfaces):
    for p in (11, 13):
        for s in _good(surfaces, p):
            assert count_direct(s, 2) == count_degree_two(degree_two_model(s), 2)


def test_fibration_fast_path_agrees(surfaces):
    # q >= 1000 switches the fibers to elliptic-curve group orders
    for s in _good(surfaces, 37)[:4]:
        assert count_fibration(s, 2) == count_degree_two(degree_two_model(s), 2)


def test_model_slices_and_ramification(examples):
    s = reduce_mod_p(examples["S5"], 23)
    m = degree_two_model(s)
    w2 = {e[:3]: c for e, c in s.form.items() if e[3] == 2}
    assert m.Q == w2
    rebuilt = {}
    for part, power in ((m.Q, 2), (m.K, 1), (m.F, 0)):
        for e, c in part.items():
            rebuilt[e + (power,)] = c
    assert forms.clean(rebuilt) == forms.clean(s.form)
    ram = m.ramification
    assert forms.degree(ram) == 6
    expect = forms.sub(forms.scale(forms.mul(m.F, m.Q), 4), forms.mul(m.K, m.K))
    assert ram == forms.map_coeffs(expect, lambda c: c % 23)


def test_model_at_other_rational_node(examples):
    s = reduce_mod_p(examples["S5"], 23)
    m = degree_two_model(s, s.rational_nodes()[2])
    assert count_degree_two(m, 1) == count_degree_two(degree_two_model(s), 1)
    with pytest.raises(NodeNotRational):
        degree_two_model(s, (1, 2, 3, 4))


def test_lift_orbit_arithmetic():
    pc = lift_counts_to_resolution([100], [1] * 14, 7)
    assert pc.Nres == [100 + 14 * 7]
    sizes = [1] * 8 + [2] * 6
    pc = lift_counts_to_resolution([10, 20], sizes, 5)
    assert pc.Nres == [10 + 8 * 5, 20 + 14 * 25]
    assert pc.traces == [pc.Nres[0] - 1 - 25, pc.Nres[1] - 1 - 625]


def test_weil_bound_on_traces(surfaces):
    for s in _good(surfaces, 13):
        pc = compute_counts(s, 3)
        for k, t in enumerate(pc.traces, start=1):
            assert abs(t) <= 22 * 13**k


def test_csv_dump(tmp_path):
    path = tmp_path / "counts.csv"
    dump_counts_csv(path, [(5, 1, "brute", 30, 100, 3, 1.5)])
    rows = list(csv.reader(open(path)))
    assert rows == [["5", "1", "brute", "30", "100", "3", "1.5"]]
