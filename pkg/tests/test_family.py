import random
from itertools import combinations

import pytest
import sympy

from k3picard import forms
from k3picard.errors import BadReduction
from k3picard.family import (CoefficientVector, build_quartic, is_admissible, random_sample, reduce_mod_p,
                             save_sample, load_sample, singular_points, six_term_quartic, tropes)
from k3picard.surd import Surd, rank


def _sympy_det(cv):
    x, y, z, w = sympy.symbols("x y z w")
    (l1, l2, l3), (m1, m2, m3) = [[sum(c * v for c, v in zip(f, (x, y, z, w))) for f in fs]
                                  for fs in CoefficientVector(tuple(cv)).linear_forms()]
    M = sympy.Matrix([[0, l1, l2, l3], [l1, 0, m3, m2], [l2, m3, 0, m1], [l3, m2, m1, 0]])
    poly = sympy.Poly(sympy.expand(M.det()), x, y, z, w)
    return {e: int(c) for e, c in poly.terms()}


def test_s5_expansion_matches_symbolic_determinant(examples):
    G = build_quartic(examples["S5"])
    assert G == _sympy_det(examples["S5"].c)
    assert all(sum(e) == 4 for e in G)


def test_determinant_equals_six_term_identity():
    rng = random.Random(3)
    for _ in range(100):
        cv = [rng.randint(-20, 20) for _ in range(8)]
        assert build_quartic(cv) == six_term_quartic(cv)


def test_only_one_pair_survives():
    # zero vector leaves the product of the third pair of planes
    assert build_quartic([0] * 8) == {(0, 0, 2, 2): 1}


@pytest.mark.parametrize("name", ["S1", "S2", "S3", "S4", "S5"])
def test_fourteen_a1_nodes(examples, name):
    cv = examples[name]
    nodes = singular_points(cv)
    assert len(nodes) == 14
    assert [n.kind for n in nodes] == ["plane-triple"] * 8 + ["conic-pair"] * 6
    G = build_quartic(cv)
    grads = [forms.derivative(G, i) for i in range(4)]
    for n in nodes:
        for g in grads:
            assert Surd.coerce(forms.evaluate(g, n.coords, Surd(1))).is_zero()
        if n.conjugate is not None:
            other = nodes[n.conjugate]
            assert other.d == n.d and other.conjugate == n.index
    assert tuple(nodes[0].coords) == (0, 0, 0, 1)
    assert nodes[0].rational and nodes[2].rational


def test_s5_node_fields(examples):
    ds = sorted({n.d for n in singular_points(examples["S5"])})
    assert ds == [-95, -51, 1]


def test_s5_collinearity(examples):
    nodes = singular_points(examples["S5"])
    G = build_quartic(examples["S5"])
    for quad in combinations(nodes, 4):
        assert rank([list(n.coords) for n in quad]) >= 3
    collinear = [t for t in combinations(nodes, 3) if rank([list(n.coords) for n in t]) == 2]
    for t in collinear:
        line = forms.restrict_to_line(G, t[0].coords, t[1].coords)
        assert all(Surd.coerce(c).is_zero() for c in line.values())
    assert len(collinear) == 2


@pytest.mark.parametrize("name", ["S2", "S5"])
def test_tropes(examples, name):
    ts = tropes(examples[name])
    assert len(ts) == 6
    assert all(len(t.nodes) == 6 for t in ts)
    per_node = [sum(i in t.nodes for t in ts) for i in range(14)]
    assert max(per_node) <= 3
    assert any(t.degenerate for t in ts)


def test_generic_tropes_are_smooth_conics():
    cv = random_sample(1, 5)[0]
    assert sum(t.degenerate for t in tropes(cv)) <= 1


def test_reduction_good_at_listed_primes(examples):
    s5 = reduce_mod_p(examples["S5"], 23)
    assert sorted(s5.cycle_type) == [1] * 12 + [2]
    assert sum(s5.orbit_of) == 16 and len(s5.nodes) == 14
    assert all(s5.orbit_of[i] == 1 for i in range(8))
    reduce_mod_p(examples["S1"], 61)


def test_bad_reduction(examples):
    # S2 has a node collision mod 23; p = 3 is outside the supported range
    with pytest.raises(BadReduction):
        reduce_mod_p(examples["S2"], 23)
    with pytest.raises(BadReduction):
        reduce_mod_p(examples["S2"], 3)


def test_sample_determinism(tmp_path):
    a = random_sample(4, 11)
    assert a == random_sample(4, 11)
    assert random_sample(0, 11) == []
    for cv in a:
        assert cv.c[:3] == (1, 1, 1) and all(-20 <= c <= 20 for c in cv.c)
        assert is_admissible(cv)
    save_sample(a, tmp_path / "s.json")
    assert load_sample(tmp_path / "s.json") == a
    assert CoefficientVector.parse(a[0].to_json()) == a[0]
