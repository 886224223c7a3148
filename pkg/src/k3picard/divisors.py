"""Explicit divisors on the resolution: lines, conics in split planes, Gram matrices.

Curves are *certified* with exact arithmetic over the multi-quadratic field of
the nodes: a line through two nodes lies on V when the quartic restricts to
zero, and a plane through three nodes cuts V in two conics when the conic
obtained from the Cremona transformation centred at those nodes has rank 2.
The explicit components and their smooth intersection points are then
computed in two independent embeddings into large prime fields F_P in which
the whole configuration splits; both embeddings must produce the same Gram
matrix.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Sequence

from . import forms
from .arith import is_prime, legendre, square_class, sqrt_mod
from .errors import ConsistencyError, MultiplicityUnsupported, SingularSpan
from .family import Node, as_cv, build_quartic, singular_points, tropes
from .surd import Surd, determinant, nullspace, rank, row_echelon

EMBEDDING_START = 1_000_003
KINDS = ("hyperplane", "exceptional", "line", "conic", "cubic-residual")


# -- classes and intersection numbers --

@dataclass(frozen=True)
class DivisorClass:
    kind: str
    incident: frozenset[int] = frozenset()
    self_int: Fraction = Fraction(-2)
    degree: int = 0
    label: str = ""
    multiplicity: int = 1  # of the incidences; only 1 is supported
    plane: int | None = None  # index of the plane the curve lies in

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown divisor kind {self.kind!r}")

    @classmethod
    def hyperplane(cls) -> "DivisorClass":
        return cls("hyperplane", frozenset(), Fraction(4), 4, "H")

    @classmethod
    def line(cls, incident, label="") -> "DivisorClass":
        return cls("line", frozenset(incident), Fraction(-2), 1, label)

    @classmethod
    def conic(cls, incident, label="", plane=None) -> "DivisorClass":
        return cls("conic", frozenset(incident), Fraction(-2), 2, label, plane=plane)

    @classmethod
    def cubic_residual(cls, incident, label="") -> "DivisorClass":
        return cls("cubic-residual", frozenset(incident), Fraction(0), 3, label)

    def as_json(self) -> dict:
        return {"kind": self.kind, "incident": sorted(self.incident), "selfInt": str(self.self_int),
                "degree": self.degree, "label": self.label}


def intersection_number(d1: DivisorClass, d2: DivisorClass, smooth_meets: int = 0, same: bool | None = None) -> Fraction:
    """Product of the projected classes D' = D + (1/2) sum of incident E_i."""
    for d in (d1, d2):
        if d.multiplicity != 1:
            raise MultiplicityUnsupported(f"{d.label or d.kind} passes a node with multiplicity {d.multiplicity}")
    if same is None:
        same = d1 is d2
    if "exceptional" in (d1.kind, d2.kind):
        if d1.kind == d2.kind == "exceptional":
            return Fraction(-2) if d1.incident == d2.incident else Fraction(0)
        return Fraction(0)
    if d1.kind == "hyperplane" and d2.kind == "hyperplane":
        return Fraction(4)
    if d1.kind == "hyperplane":
        return Fraction(d2.degree)
    if d2.kind == "hyperplane":
        return Fraction(d1.degree)
    if same:
        return d1.self_int + Fraction(len(d1.incident), 2)
    shared = len(d1.incident & d2.incident)
    return Fraction(smooth_meets) + Fraction(shared, 2)


def gram_matrix(classes: Sequence[DivisorClass], smooth: dict[tuple[int, int], int] | None = None) -> list[list[Fraction]]:
    smooth = smooth or {}
    n = len(classes)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            k = smooth.get((i, j), smooth.get((j, i), 0))
            v = intersection_number(classes[i], classes[j], k, same=(i == j))
            out[i][j] = out[j][i] = v
    return out


def gram_rank(gram: Sequence[Sequence[Fraction]]) -> int:
    return rank([list(r) for r in gram]) if gram else 0


def rank_lower_bound(gram: Sequence[Sequence[Fraction]]) -> int:
    return 14 + gram_rank(gram)


def span_basis(gram: Sequence[Sequence[Fraction]]) -> list[int]:
    """Indices of a maximal set of classes with nonsingular Gram submatrix."""
    _, pivots = row_echelon([list(r) for r in gram])
    return pivots


def lattice_disc_class(gram: Sequence[Sequence[Fraction]]) -> int:
    basis = span_basis(gram)
    if not basis:
        raise SingularSpan("the classes span a totally degenerate space")
    sub = [[gram[i][j] for j in basis] for i in basis]
    det = determinant(sub)
    if det == 0:
        raise SingularSpan("Gram matrix restricted to a basis is singular")
    return square_class(Fraction(2**14) * det)


# -- embeddings into F_P --

@dataclass
class Embedding:
    P: int
    roots: dict[int, int]  # sqrt(prime) mod P, prime = -1 allowed

    def __call__(self, x) -> int:
        if isinstance(x, Surd):
            return x.to_mod(self.P, self.roots)
        x = Fraction(x)
        return x.numerator * pow(x.denominator, -1, self.P) % self.P

    def vec(self, v: Sequence) -> tuple[int, ...]:
        return tuple(self(x) for x in v)


def split_primes(radicand_primes: set[int], start: int = EMBEDDING_START):
    """Primes P >= start in which every given prime (and -1) is a square."""
    P = start
    while True:
        if is_prime(P) and all(legendre(r % P, P) == 1 for r in radicand_primes):
            roots = {r: sqrt_mod(r % P, P) for r in radicand_primes}
            yield Embedding(P, roots)
        P += 2 if P % 2 else 1


# -- small linear algebra mod P --

def _mod_nullspace(rows: Sequence[Sequence[int]], P: int) -> list[list[int]]:
    m = [[x % P for x in r] for r in rows]
    ncols = len(m[0])
    pivots, r = [], 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, P)
        m[r] = [x * inv % P for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % P for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    out = []
    for fcol in (c for c in range(ncols) if c not in pivots):
        v = [0] * ncols
        v[fcol] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fcol] % P
        out.append(v)
    return out


def _mod_rank(rows: Sequence[Sequence[int]], P: int) -> int:
    if not rows:
        return 0
    return len(rows[0]) - len(_mod_nullspace(rows, P))


def _mod_solve(cols: Sequence[Sequence[int]], target: Sequence[int], P: int) -> list[int] | None:
    """Coefficients c with sum c_i cols[i] = target, or None."""
    n = len(cols)
    rows = [[cols[i][r] for i in range(n)] + [-target[r]] for r in range(len(target))]
    for v in _mod_nullspace(rows, P):
        if v[n] % P:
            inv = pow(v[n], -1, P)
            return [x * inv % P for x in v[:n]]
    return None


def _cross(a: Sequence[int], b: Sequence[int], P: int) -> tuple[int, int, int]:
    return ((a[1] * b[2] - a[2] * b[1]) % P, (a[2] * b[0] - a[0] * b[2]) % P, (a[0] * b[1] - a[1] * b[0]) % P)


def _dot(u: Sequence, v: Sequence):
    acc = 0
    for a, b in zip(u, v):
        acc = acc + a * b
    return acc


# -- quartic evaluation and the Cremona conic --

def _evaluator(G: dict, P: int) -> Callable[[Sequence[int]], int]:
    terms = [(e, c % P) for e, c in G.items()]

    def ev(v: Sequence[int]) -> int:
        acc = 0
        for e, c in terms:
            t = c
            for x, n in zip(v, e):
                if n:
                    t = t * pow(x, n, P)
            acc += t
        return acc % P
    return ev


CONIC_MONOMIALS = ((2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1))
_SAMPLE = ((1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1), (1, 2, 3), (3, 1, 2))


@lru_cache(maxsize=1)
def _interpolation_inverse() -> list[list[Fraction]]:
    mat = [[Fraction(X**a * Y**b * Z**c) for (a, b, c) in CONIC_MONOMIALS] for (X, Y, Z) in _SAMPLE]
    n = len(mat)
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    red, piv = row_echelon(aug)
    assert piv[:n] == list(range(n)), "interpolation points are not independent"
    return [row[n:] for row in red]


def cremona_conic(values: Sequence) -> list:
    """Coefficients of C in CONIC_MONOMIALS from the values f(YZ, XZ, XY)/(XYZ)^2 at the samples."""
    inv = _interpolation_inverse()
    return [sum((inv[i][j] * values[j] for j in range(6)), 0 * values[0]) for i in range(6)]


def conic_matrix(c: Sequence) -> list[list]:
    """2 x the symmetric matrix of the conic with coefficients ``c``."""
    xx, yy, zz, xy, xz, yz = c
    return [[2 * xx, xy, xz], [xy, 2 * yy, yz], [xz, yz, 2 * zz]]


def _cremona_values(ev: Callable, A, B, C, scale: Callable) -> list:
    vals = []
    for X, Y, Z in _SAMPLE:
        pt = [Y * Z * a + X * Z * b + X * Y * c for a, b, c in zip(A, B, C)]
        vals.append(scale(ev(pt), (X * Y * Z) ** 2))
    return vals


# -- curves over F_P --

@dataclass
class ModCurve:
    kind: str  # "line" or "conic"
    incident: frozenset[int]
    points: tuple[tuple[int, ...], ...]  # line: two points; conic: plane basis
    conic: tuple[int, ...] = ()  # CONIC_MONOMIALS coefficients in plane coordinates
    normal: tuple[int, ...] = ()
    plane: int | None = None

    def plane_coords(self, X: Sequence[int], P: int) -> list[int] | None:
        return _mod_solve(self.points, X, P)

    def conic_value(self, coords: Sequence[int], P: int) -> int:
        a, b, c = coords
        mons = (a * a, b * b, c * c, a * b, a * c, b * c)
        return sum(m * k for m, k in zip(mons, self.conic)) % P


def _binary_restriction(curve: ModCurve, u: Sequence[int], v: Sequence[int], P: int) -> tuple[int, int, int]:
    cu = curve.plane_coords(u, P)
    cv = curve.plane_coords(v, P)
    cw = curve.plane_coords([(a + b) % P for a, b in zip(u, v)], P)
    a = curve.conic_value(cu, P)
    c = curve.conic_value(cv, P)
    w = curve.conic_value(cw, P)
    return a, (w - a - c) % P, c


def smooth_meets(c1: ModCurve, c2: ModCurve, P: int) -> int:
    """Number of smooth points of V common to two distinct curves (transverse only)."""
    shared = len(c1.incident & c2.incident)
    if c1.kind == "line" and c2.kind == "line":
        meet = _mod_rank(list(c1.points) + list(c2.points), P) <= 3
        return int(meet) - shared
    if c1.kind == "line" or c2.kind == "line":
        line, conic = (c1, c2) if c1.kind == "line" else (c2, c1)
        U, V = line.points
        nU, nV = _dot(conic.normal, U) % P, _dot(conic.normal, V) % P
        if nU == 0 and nV == 0:
            return 2 - shared
        X = [(nV * a - nU * b) % P for a, b in zip(U, V)]
        coords = conic.plane_coords(X, P)
        on = conic.conic_value(coords, P) == 0
        return int(on) - shared
    if _mod_rank([c1.normal, c2.normal], P) == 1:
        return 4 - shared
    u, v = _mod_nullspace([c1.normal, c2.normal], P)
    g1 = _binary_restriction(c1, u, v, P)
    g2 = _binary_restriction(c2, u, v, P)
    a1, b1, d1 = g1
    a2, b2, d2 = g2
    proportional = all((x * y2 - y * x2) % P == 0 for x, y, x2, y2 in
                       ((a1, b1, a2, b2), (a1, d1, a2, d2), (b1, d1, b2, d2)))
    if proportional:
        common = 2
        if (b1 * b1 - 4 * a1 * d1) % P == 0 and shared < 2:
            raise MultiplicityUnsupported("two conics touch at a smooth point")
    else:
        res = ((a1 * d2 - a2 * d1) ** 2 - (a1 * b2 - a2 * b1) * (b1 * d2 - b2 * d1)) % P
        common = 1 if res == 0 else 0
    return common - shared


# -- the search --

@dataclass
class Plane:
    nodes: frozenset[int]
    normal: tuple  # exact (Surd) normal vector
    kind: str  # "split" (two conics), "lines" (contains lines, residual conic)
    lines: tuple[int, ...] = ()

    def as_json(self) -> dict:
        return {"kind": self.kind, "nodes": sorted(self.nodes), "lines": list(self.lines),
                "normal": [repr(x) for x in self.normal]}


@dataclass
class Line:
    nodes: frozenset[int]
    points: tuple  # two exact nodes spanning it

    def as_json(self) -> dict:
        return {"kind": "line", "nodes": sorted(self.nodes)}


@dataclass
class DivisorSearch:
    cv: tuple[int, ...]
    nodes: list[Node]
    lines: list[Line] = field(default_factory=list)
    planes: list[Plane] = field(default_factory=list)
    classes: list[DivisorClass] = field(default_factory=list)
    smooth: dict[tuple[int, int], int] = field(default_factory=dict)
    primes: tuple[int, ...] = ()
    unresolved: list[str] = field(default_factory=list)

    @property
    def gram(self) -> list[list[Fraction]]:
        return gram_matrix(self.classes, self.smooth)

    @property
    def lower_bound(self) -> int:
        return rank_lower_bound(self.gram)

    @property
    def disc_class(self) -> int:
        return lattice_disc_class(self.gram)

    def field_discriminants(self) -> dict[int, int]:
        return {n.index: n.d for n in self.nodes}

    def to_json(self) -> str:
        return json.dumps({
            "cv": list(self.cv),
            "nodeFields": {str(k): v for k, v in self.field_discriminants().items()},
            "lines": [l.as_json() for l in self.lines],
            "planes": [p.as_json() for p in self.planes],
            "classes": [c.as_json() for c in self.classes],
            "lowerBound": self.lower_bound,
            "unresolved": self.unresolved,
        })


def _radicand_primes(nodes: Sequence[Node]) -> set[int]:
    out: set[int] = set()
    for n in nodes:
        for x in n.coords:
            out |= x.primes()
    return out


def _is_zero_form(f: dict) -> bool:
    return all(Surd.coerce(c).is_zero() for c in f.values())


def _collinear_exact(points: Sequence[Sequence[Surd]]) -> bool:
    return rank([list(p) for p in points]) <= 2


def find_lines(cv, nodes: Sequence[Node] | None = None, emb: Embedding | None = None) -> list[Line]:
    """Lines on V through pairs of nodes (exact test, prefiltered mod P)."""
    cv = as_cv(cv)
    nodes = list(nodes or singular_points(cv))
    G = build_quartic(cv)
    emb = emb or next(split_primes(_radicand_primes(nodes)))
    ev = _evaluator(G, emb.P)
    modp = [emb.vec(n.coords) for n in nodes]
    found: dict[frozenset[int], Line] = {}
    for i, j in combinations(range(len(nodes)), 2):
        if any(i in key and j in key for key in found):
            continue
        a, b = modp[i], modp[j]
        if any(ev([(x + t * y) % emb.P for x, y in zip(a, b)]) for t in range(1, 4)):
            continue
        if ev([(x + 4 * y) % emb.P for x, y in zip(a, b)]):
            continue
        restricted = forms.restrict_to_line(G, nodes[i].coords, nodes[j].coords)
        if not _is_zero_form(restricted):
            continue
        incident = frozenset(k for k in range(len(nodes))
                             if _collinear_exact([nodes[i].coords, nodes[j].coords, nodes[k].coords]))
        found[incident] = Line(incident, (nodes[i].coords, nodes[j].coords))
    return sorted(found.values(), key=lambda l: sorted(l.nodes))


def collinearity_audit(nodes: Sequence[Node], lines: Sequence[Line]) -> None:
    """No four nodes collinear; three collinear nodes only on a line of V."""
    line_sets = [l.nodes for l in lines]
    for l in line_sets:
        if len(l) not in (2, 3):
            raise ConsistencyError(f"line through {sorted(l)} has {len(l)} nodes")
    for tri in combinations(range(len(nodes)), 3):
        if _collinear_exact([nodes[i].coords for i in tri]):
            if not any(set(tri) <= l for l in line_sets):
                raise ConsistencyError(f"nodes {tri} are collinear but span no line of V")


def _exact_normal(pts: Sequence[Sequence[Surd]]) -> tuple:
    basis = nullspace([list(p) for p in pts], Surd(1))
    if len(basis) != 1:
        raise ConsistencyError("three nodes do not span a plane")
    return tuple(basis[0])


def _nodes_on(normal: Sequence, nodes: Sequence[Node]) -> frozenset[int]:
    return frozenset(n.index for n in nodes if Surd.coerce(_dot(normal, n.coords)).is_zero())


def find_splitting_planes(cv, nodes: Sequence[Node] | None = None, lines: Sequence[Line] | None = None,
                          emb: Embedding | None = None) -> list[Plane]:
    """Planes through >= 3 nodes on which V splits into two conics, plus planes
    spanned by two meeting lines of V (their residual conic)."""
    cv = as_cv(cv)
    nodes = list(nodes or singular_points(cv))
    emb = emb or next(split_primes(_radicand_primes(nodes)))
    lines = list(lines if lines is not None else find_lines(cv, nodes, emb))
    G = build_quartic(cv)
    P = emb.P
    ev = _evaluator(G, P)
    modp = [emb.vec(n.coords) for n in nodes]
    trope_sets = {frozenset(t.nodes) for t in tropes(cv)}
    seen: set[frozenset[int]] = set()
    planes: list[Plane] = []

    def lines_in(node_set: frozenset[int]) -> tuple[int, ...]:
        return tuple(i for i, l in enumerate(lines) if len(l.nodes & node_set) >= 2)

    for tri in combinations(range(len(nodes)), 3):
        if any(set(tri) <= s for s in seen):
            continue
        A, B, C = (modp[i] for i in tri)
        if _mod_rank([A, B, C], P) < 3:
            continue
        vals = _cremona_values(ev, A, B, C, lambda v, d: v * pow(d, -1, P) % P)
        cm = [[x % P for x in row] for row in conic_matrix([int(Fraction(x).numerator * pow(Fraction(x).denominator, -1, P)) % P
                                                             for x in cremona_conic(vals)])]
        if _mod_rank(cm, P) == 3:
            continue
        # exact certification
        ex = [nodes[i].coords for i in tri]
        if _collinear_exact(ex):
            continue
        normal = _exact_normal(ex)
        on = _nodes_on(normal, nodes)
        seen.add(on)
        if on in trope_sets:
            continue
        if lines_in(on):
            continue  # handled by the residual construction below
        exact_vals = _cremona_values(lambda v: forms.evaluate(G, v, Surd(1)), *ex,
                                     lambda v, d: Surd.coerce(v) / d)
        cmat = conic_matrix(cremona_conic(exact_vals))
        r = rank(cmat)
        if r == 2:
            planes.append(Plane(on, normal, "split"))
        elif r < 2:
            raise ConsistencyError(f"plane through {sorted(on)} is a double conic but not a trope")
    for (i, l1), (j, l2) in combinations(enumerate(lines), 2):
        pts = [l1.points[0], l1.points[1], l2.points[0], l2.points[1]]
        if rank([list(p) for p in pts]) != 3:
            continue
        basis = [pts[0], pts[1]] + [p for p in pts[2:] if rank([list(pts[0]), list(pts[1]), list(p)]) == 3][:1]
        normal = _exact_normal(basis)
        on = _nodes_on(normal, nodes)
        if on in trope_sets or any(pl.nodes == on for pl in planes):
            continue
        planes.append(Plane(on, normal, "lines", lines_in(on)))
    return planes


def _conic_from_lines_plane(plane: Plane, lines: Sequence[Line], ev, emb: Embedding, nodes_modp) -> ModCurve | None:
    """Residual conic f / (l1 l2) on a plane containing two lines of V; None if reducible."""
    P = emb.P
    l1, l2 = (lines[i] for i in plane.lines[:2])
    pts = [emb.vec(p) for p in l1.points] + [emb.vec(p) for p in l2.points]
    basis = [pts[0], pts[1]]
    for p in pts[2:]:
        if _mod_rank(basis + [p], P) == 3:
            basis.append(p)
            break
    if len(plane.lines) > 2:
        return None  # three or more lines: the residual is a line as well
    curve = ModCurve("conic", frozenset(), tuple(basis), normal=emb.vec(plane.normal))
    # plane coordinates of the two lines
    lin = []
    for l in (l1, l2):
        c0 = curve.plane_coords(emb.vec(l.points[0]), P)
        c1 = curve.plane_coords(emb.vec(l.points[1]), P)
        lin.append(_cross(c0, c1, P))

    def at(coords):
        X = [sum(c * b[r] for c, b in zip(coords, basis)) % P for r in range(4)]
        return ev(X)

    def lval(l, coords):
        return sum(a * b for a, b in zip(l, coords)) % P

    rows, rhs = [], []
    rng = random.Random(P)
    while len(rows) < 6:
        coords = (1, rng.randrange(P), rng.randrange(P))
        d = lval(lin[0], coords) * lval(lin[1], coords) % P
        if d == 0:
            continue
        a, b, c = coords
        mons = [a * a, b * b, c * c, a * b, a * c, b * c]
        cand = rows + [mons]
        if _mod_rank(cand, P) < len(cand):
            continue
        rows.append(mons)
        rhs.append(at(coords) * pow(d, -1, P) % P)
    coef = _mod_solve([[rows[r][i] for r in range(6)] for i in range(6)], rhs, P)
    if coef is None:
        raise ConsistencyError("residual conic interpolation failed")
    curve.conic = tuple(coef)
    # verify f = l1 l2 r at fresh points
    for s in range(7, 12):
        coords = (s, (s * s + 1) % P, 1)
        lhs = at(coords)
        if lhs != lval(lin[0], coords) * lval(lin[1], coords) * curve.conic_value(coords, P) % P:
            raise ConsistencyError("residual conic does not divide the plane section")
    if _mod_rank(conic_matrix(list(curve.conic)), P) < 3:
        return None
    inc = frozenset(i for i in plane.nodes
                    if curve.conic_value(curve.plane_coords(nodes_modp[i], P), P) == 0)
    curve.incident = inc
    return curve


class _NonSplit(Exception):
    """The embedding does not split a conic pair; try another prime."""


def _conics_from_split_plane(plane: Plane, nodes: Sequence[Node], ev, emb: Embedding, nodes_modp) -> list[ModCurve]:
    P = emb.P
    tri = sorted(plane.nodes)[:3]
    A, B, C = (nodes_modp[i] for i in tri)
    if _mod_rank([A, B, C], P) < 3:
        tri = next(t for t in combinations(sorted(plane.nodes), 3)
                   if _mod_rank([nodes_modp[i] for i in t], P) == 3)
        A, B, C = (nodes_modp[i] for i in tri)
    vals = _cremona_values(ev, A, B, C, lambda v, d: v * pow(d, -1, P) % P)
    coeffs = [emb(x) for x in cremona_conic([Fraction(v) for v in vals])]
    M = [[x % P for x in row] for row in conic_matrix(coeffs)]
    ker = _mod_nullspace(M, P)
    if len(ker) != 1:
        raise ConsistencyError("split plane conic is not of rank 2 mod P")
    R = ker[0]
    U, V = [v for v in ([1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1], [0, 1, 1])
            if _mod_rank([R, v], P) == 2][:2]
    if _mod_rank([R, U, V], P) < 3:
        V = next(v for v in ([1, 2, 3], [3, 1, 2], [2, 3, 1]) if _mod_rank([R, U, v], P) == 3)

    def cval(X):
        x, y, z = X
        return (coeffs[0] * x * x + coeffs[1] * y * y + coeffs[2] * z * z + coeffs[3] * x * y
                + coeffs[4] * x * z + coeffs[5] * y * z) % P
    a = cval(U)
    c = cval(V)
    b = (cval([(x + y) % P for x, y in zip(U, V)]) - a - c) % P
    disc = (b * b - 4 * a * c) % P
    if legendre(disc, P) != 1:
        raise _NonSplit()
    r = sqrt_mod(disc, P)
    out = []
    for sgn in (1, -1):
        if a:
            s, t = (-b + sgn * r) % P, 2 * a % P
        else:
            s, t = ((1, 0) if sgn == 1 else ((-c) % P, b))
        X = [(s * u + t * v) % P for u, v in zip(U, V)]
        la, lb, lc = _cross(R, X, P)
        # conic la*beta*gamma + lb*alpha*gamma + lc*alpha*beta in plane coordinates (alpha, beta, gamma)
        if la * lb * lc % P == 0:
            raise ConsistencyError("a conic of a split plane degenerates")
        out.append(ModCurve("conic", plane.nodes, (A, B, C), (0, 0, 0, lc, lb, la), emb.vec(plane.normal)))
    # the product of the two conics is the plane section up to a scalar
    for s in range(2, 6):
        coords = (1, s, s * s + 1)
        X = [sum(c_ * b_[k] for c_, b_ in zip(coords, (A, B, C))) % P for k in range(4)]
        prod = out[0].conic_value(coords, P) * out[1].conic_value(coords, P) % P
        if (ev(X) == 0) != (prod == 0):
            raise ConsistencyError("conic pair does not reproduce the plane section")
    return out


def _curves_mod(search: DivisorSearch, G, emb: Embedding) -> list[ModCurve]:
    P = emb.P
    ev = _evaluator(G, P)
    nodes_modp = [emb.vec(n.coords) for n in search.nodes]
    curves: list[ModCurve] = []
    for l in search.lines:
        curves.append(ModCurve("line", l.nodes, (emb.vec(l.points[0]), emb.vec(l.points[1]))))
    for i, pl in enumerate(search.planes):
        if pl.kind == "split":
            found = _conics_from_split_plane(pl, search.nodes, ev, emb, nodes_modp)
        else:
            found = [c for c in [_conic_from_lines_plane(pl, search.lines, ev, emb, nodes_modp)] if c]
        for c in found:
            c.plane = i
            curves.append(c)
    return curves


def _classes_and_smooth(curves: Sequence[ModCurve], P: int) -> tuple[list[DivisorClass], dict]:
    classes = [DivisorClass.hyperplane()]
    nl = nc = 0
    for c in curves:
        if c.kind == "line":
            nl += 1
            classes.append(DivisorClass.line(c.incident, f"L{nl}"))
        else:
            nc += 1
            classes.append(DivisorClass.conic(c.incident, f"Q{nc}", plane=c.plane))
    smooth = {}
    for i, j in combinations(range(len(curves)), 2):
        k = smooth_meets(curves[i], curves[j], P)
        if k < 0:
            raise ConsistencyError(f"negative smooth intersection between curves {i} and {j}")
        if k:
            smooth[(i + 1, j + 1)] = k
    return classes, smooth


def find_submatrix(gram: Sequence[Sequence[Fraction]], target: Sequence[Sequence]) -> list[int] | None:
    """Distinct indices i_1..i_n with gram[i_a][i_b] == target[a][b], or None."""
    n = len(target)
    target = [[Fraction(x) for x in row] for row in target]
    chosen: list[int] = []

    def extend() -> bool:
        a = len(chosen)
        if a == n:
            return True
        for i in range(len(gram)):
            if i in chosen or gram[i][i] != target[a][a]:
                continue
            if all(gram[i][chosen[b]] == target[a][b] for b in range(a)):
                chosen.append(i)
                if extend():
                    return True
                chosen.pop()
        return False
    return list(chosen) if extend() else None


def _same_configuration(cls0, sm0, cls1, sm1) -> bool:
    """Equal up to the order of the two conics within each split plane."""
    if [(c.kind, c.incident, c.plane) for c in cls0] != [(c.kind, c.incident, c.plane) for c in cls1]:
        return False
    groups: dict[int, list[int]] = {}
    for i, c in enumerate(cls0):
        if c.kind == "conic":
            groups.setdefault(c.plane, []).append(i)
    pairs = [g for g in groups.values() if len(g) == 2]
    g0 = gram_matrix(cls0, sm0)
    g1 = gram_matrix(cls1, sm1)
    n = len(cls0)
    for mask in range(2 ** len(pairs)):
        perm = list(range(n))
        for b, (i, j) in enumerate(pairs):
            if mask >> b & 1:
                perm[i], perm[j] = j, i
        if all(g0[i][j] == g1[perm[i]][perm[j]] for i in range(n) for j in range(n)):
            return True
    return False


def find_divisors(cv, embeddings: int = 2) -> DivisorSearch:
    """Lines and split planes with their Gram data, checked in two embeddings."""
    cv = as_cv(cv)
    nodes = singular_points(cv)
    gen = split_primes(_radicand_primes(nodes))
    first = next(gen)
    lines = find_lines(cv, nodes, first)
    collinearity_audit(nodes, lines)
    planes = find_splitting_planes(cv, nodes, lines, first)
    search = DivisorSearch(cv.c, nodes, lines, planes)
    G = build_quartic(cv)
    results = []
    emb = first
    while len(results) < embeddings:
        try:
            curves = _curves_mod(search, G, emb)
        except _NonSplit:
            emb = next(gen)
            continue
        results.append((emb.P, _classes_and_smooth(curves, emb.P)))
        emb = next(gen)
    (P0, (classes, smooth)), *others = results
    for P1, (cls1, sm1) in others:
        if not _same_configuration(classes, smooth, cls1, sm1):
            raise ConsistencyError(f"embeddings mod {P0} and {P1} disagree on the divisor configuration")
    search.classes = classes
    search.smooth = smooth
    search.primes = tuple(P for P, _ in results)
    return search
