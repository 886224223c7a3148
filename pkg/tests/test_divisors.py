import json
from fractions import Fraction as F

import networkx as nx
import pytest

from k3picard.divisors import (DivisorClass, find_divisors, find_lines, find_splitting_planes, find_submatrix,
                               gram_matrix, gram_rank, intersection_number, lattice_disc_class,
                               rank_lower_bound)
from k3picard.errors import MultiplicityUnsupported, SingularSpan
from k3picard.family import random_sample, singular_points, tropes
from k3picard.surd import determinant

h = F(1, 2)
REFERENCE = {
    "S2": [[0, 2, h, h], [2, 0, h, h], [h, h, -h, 1], [h, h, 1, -h]],
    "S3": [[-h, F(5, 2), h, h], [F(5, 2), -h, h, h], [h, h, -h, 1], [h, h, 1, -h]],
    "S4": [[0, 1, 1, 0, 0], [1, -h, h, 1, 0], [1, h, -h, 0, 1], [0, 1, 0, -h, h], [0, 0, 1, h, -h]],
    "S5": [[-h, h, h, h], [h, 0, 2, 1], [h, 2, 0, 1], [h, 1, 1, 0]],
}
# planes through four nodes of S5 and its two lines, 1-based reference labels
TABLE3 = {"E1": (1, 2, 9, 11), "E2": (3, 4, 13, 14), "E3": (3, 7, 12, 14), "E4": (4, 8, 10, 13),
          "E5": (5, 6, 9, 11), "E6": (7, 8, 10, 12), "L1": (9, 10, 14), "L2": (11, 12, 13)}


@pytest.fixture(scope="module")
def searches(examples):
    return {name: find_divisors(cv) for name, cv in examples.items()}


def test_projected_self_intersections():
    line = DivisorClass.line({0, 1, 2})
    assert intersection_number(line, line, same=True) == -h
    q1, q2 = DivisorClass.conic({0, 1, 2, 3}), DivisorClass.conic({0, 1, 2, 3})
    assert intersection_number(q1, q2, 0) == 2
    e = DivisorClass("exceptional", frozenset({0}))
    for d in (line, q1, DivisorClass.hyperplane()):
        assert intersection_number(d, e) == 0
    assert intersection_number(e, e, same=True) == -2
    H = DivisorClass.hyperplane()
    assert intersection_number(H, H, same=True) == 4 and intersection_number(H, q1) == 2


@pytest.mark.parametrize("k", [2, 3])
def test_line_cubic_determinant(k):
    nodes = set(range(k))
    g = gram_matrix([DivisorClass.line(nodes), DivisorClass.cubic_residual(nodes)], {(0, 1): 3 - k})
    assert determinant(g) == 2 * k - 9


@pytest.mark.parametrize("k", [2, 3, 4])
def test_conic_pair_determinant(k):
    nodes = set(range(k))
    g = gram_matrix([DivisorClass.conic(nodes), DivisorClass.conic(nodes)], {(0, 1): 4 - k})
    assert determinant(g) == 2 * k - 12


def test_disc_classes_of_blocks():
    assert lattice_disc_class([[F(4)]]) == 1
    nodes = {0, 1, 2}
    g = gram_matrix([DivisorClass.line(nodes), DivisorClass.cubic_residual(nodes)], {})
    assert lattice_disc_class(g) == -3
    assert lattice_disc_class(REFERENCE["S5"]) == -3
    with pytest.raises(SingularSpan):
        lattice_disc_class([[F(0)]])


def test_multiplicity_rejected():
    d = DivisorClass("conic", frozenset({0}), F(-2), 2, multiplicity=2)
    with pytest.raises(MultiplicityUnsupported):
        intersection_number(d, DivisorClass.line({0}))


def test_hyperplane_only():
    assert rank_lower_bound([[F(4)]]) == 15


@pytest.mark.parametrize("name,rank", [("S2", 3), ("S3", 3), ("S4", 3), ("S5", 4)])
def test_reference_matrices_reproduced(searches, name, rank):
    gram = searches[name].gram
    idx = find_submatrix(gram, REFERENCE[name])
    assert idx is not None
    assert gram_rank([[gram[i][j] for j in idx] for i in idx]) == rank


@pytest.mark.parametrize("name,lower,cls", [("S1", 16, -6), ("S2", 17, 3), ("S3", 17, 2), ("S4", 17, 2),
                                            ("S5", 18, -3)])
def test_lower_bounds(searches, name, lower, cls):
    assert searches[name].lower_bound == lower
    assert searches[name].disc_class == cls


def test_s1_tangent_plane(searches):
    (plane,) = searches["S1"].planes
    assert plane.kind == "split" and len(plane.nodes) == 3
    conics = [c for c in searches["S1"].classes if c.kind == "conic"]
    assert len(conics) == 2
    # the two conics touch at a smooth point of the plane
    i, j = (searches["S1"].classes.index(c) for c in conics)
    assert searches["S1"].smooth.get((i, j)) == 1


def test_s2_plane_through_four_nodes(searches):
    s = searches["S2"]
    four = [p for p in s.planes if len(p.nodes) == 4 and p.kind == "split"]
    assert four
    assert all(len(l.nodes) == 3 for l in s.lines)


def test_s5_incidence_matches_table_up_to_relabeling(examples, searches):
    s = searches["S5"]
    ours = {f"E{i}": tuple(sorted(p.nodes)) for i, p in enumerate(s.planes)}
    ours.update({f"L{i}": tuple(sorted(l.nodes)) for i, l in enumerate(s.lines)})
    assert all(len(v) == 4 for k, v in ours.items() if k.startswith("E")) and len(s.planes) == 6

    def graph(data, offset):
        g = nx.Graph()
        for name, nodes in data.items():
            g.add_node(name, kind=name[0])
            for n in nodes:
                g.add_node(("P", n - offset), kind="P")
                g.add_edge(name, ("P", n - offset))
        return g
    match = nx.is_isomorphic(graph(TABLE3, 1), graph(ours, 0), node_match=lambda a, b: a["kind"] == b["kind"])
    assert match
    # the two lines meet in a smooth point and form a degenerate trope
    i, j = (s.classes.index(c) for c in s.classes if c.kind == "line")
    assert s.smooth[(i, j)] == 1
    degenerate = [set(t.nodes) for t in tropes(examples["S5"]) if t.degenerate]
    assert set().union(*(l.nodes for l in s.lines)) in degenerate


def test_hyperplane_is_dependent_on_s5(searches):
    gram = searches["S5"].gram
    without = [row[1:] for row in gram[1:]]
    assert gram_rank(without) == gram_rank(gram)


def test_generic_surface_has_no_extras():
    cv = random_sample(1, 77)[0]
    nodes = singular_points(cv)
    assert find_lines(cv, nodes) == []
    assert find_splitting_planes(cv, nodes) == []
    assert find_divisors(cv).lower_bound == 15


def test_lines_have_two_or_three_nodes(searches):
    for s in searches.values():
        assert all(len(l.nodes) in (2, 3) for l in s.lines)


def test_json_output(searches):
    data = json.loads(searches["S5"].to_json())
    assert data["lowerBound"] == 18
    assert sorted(set(data["nodeFields"].values())) == [-95, -51, 1]
    assert len(data["planes"]) == 6 and len(data["lines"]) == 2
