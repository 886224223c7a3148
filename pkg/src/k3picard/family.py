"""The normalized Cayley-Rohn family: quartic, nodes, tropes, reduction mod p."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Sequence

import numpy as np

from . import forms, kernels
from .arith import is_prime, legendre
from .errors import BadReduction, DegenerateSurface, NotAPerfectSquare
from .ff import ExtField, FieldElement, make_field
from .surd import Surd, nullspace, rank

NVARS = 4


@dataclass(frozen=True)
class CoefficientVector:
    c: tuple[int, ...]

    def __post_init__(self):
        if len(self.c) != 8:
            raise ValueError("a coefficient vector has exactly 8 entries")
        object.__setattr__(self, "c", tuple(int(v) for v in self.c))

    @classmethod
    def parse(cls, text: str) -> "CoefficientVector":
        text = text.strip()
        if not text.startswith("["):
            text = f"[{text}]"
        return cls(tuple(json.loads(text)))

    def to_json(self) -> str:
        return json.dumps(list(self.c))

    def __str__(self) -> str:
        return "[" + ", ".join(str(v) for v in self.c) + "]"

    def linear_forms(self) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
        """(l1, l2, l3), (l1', l2', l3') as coefficient 4-vectors in x, y, z, w.

        The determinant's upper triangle is filled row by row with
        x, y, z, w, u = c1x + c2y + c3z + c4w, v = c5x + c6y + c7z + c8w, so the
        pairs multiplied in the quartic are (x, v), (y, u) and (z, w).
        """
        c = self.c
        unprimed = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)]
        primed = [tuple(c[4:8]), tuple(c[0:4]), (0, 0, 0, 1)]
        return unprimed, primed


def as_cv(cv) -> CoefficientVector:
    return cv if isinstance(cv, CoefficientVector) else CoefficientVector(tuple(cv))


# -- the quartic --

def _det(matrix: list[list[forms.Poly]]) -> forms.Poly:
    """Leibniz expansion of a determinant of polynomial entries."""
    n = len(matrix)
    out: forms.Poly = {}
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = forms.constant(sign, NVARS)
        for i in range(n):
            term = forms.mul(term, matrix[i][perm[i]])
            if not term:
                break
        out = forms.add(out, term)
    return out


def build_quartic(cv) -> forms.Poly:
    cv = as_cv(cv)
    (l1, l2, l3), (m1, m2, m3) = (list(map(forms.linear, g)) for g in cv.linear_forms())
    zero: forms.Poly = {}
    matrix = [
        [zero, l1, l2, l3],
        [l1, zero, m3, m2],
        [l2, m3, zero, m1],
        [l3, m2, m1, zero],
    ]
    return _det(matrix)


def six_term_quartic(cv) -> forms.Poly:
    """g(a1, a2, a3) = a1^2 + a2^2 + a3^2 - 2a1a2 - 2a1a3 - 2a2a3 with a_i = l_i l_i'."""
    cv = as_cv(cv)
    ls, ms = cv.linear_forms()
    a = [forms.mul(forms.linear(l), forms.linear(m)) for l, m in zip(ls, ms)]
    out: forms.Poly = {}
    for i in range(3):
        out = forms.add(out, forms.mul(a[i], a[i]))
    for i, j in combinations(range(3), 2):
        out = forms.add(out, forms.scale(forms.mul(a[i], a[j]), -2))
    return out


# -- nodes --

@dataclass(frozen=True)
class Node:
    """A singular point; coordinates are Surds (rational or in Q(sqrt d))."""

    index: int
    coords: tuple[Surd, ...]
    kind: str  # "plane-triple" or "conic-pair"
    d: int = 1  # squarefree radicand of the field of definition
    conjugate: int | None = None  # index of the Galois-conjugate node

    @property
    def rational(self) -> bool:
        return self.d == 1

    def as_json(self) -> dict:
        return {"index": self.index, "kind": self.kind, "d": self.d,
                "coords": [repr(c) for c in self.coords]}


def normalize_point(v: Sequence) -> tuple:
    """Scale so that the first nonzero coordinate is 1."""
    lead = next(x for x in v if not _is_zero(x))
    inv = 1 / lead if not hasattr(lead, "inverse") else lead.inverse()
    return tuple(x * inv for x in v)


def _is_zero(x) -> bool:
    return x.is_zero() if hasattr(x, "is_zero") else x == 0


def _dot(u: Sequence, v: Sequence):
    acc = 0
    for a, b in zip(u, v):
        acc = acc + a * b
    return acc


def _binary_quadratic(u: Sequence, v: Sequence, ls, ms, j: int, k: int):
    """Coefficients (A, B, C) of a_j - a_k on s u + t v."""
    def prod_coeffs(l, m):
        lu, lv, mu, mv = _dot(l, u), _dot(l, v), _dot(m, u), _dot(m, v)
        return lu * mu, lu * mv + lv * mu, lv * mv
    pj = prod_coeffs(ls[j], ms[j])
    pk = prod_coeffs(ls[k], ms[k])
    return tuple(x - y for x, y in zip(pj, pk))


def _node_candidates(ls, ms, one, sqrt):
    """The 14 candidate points over a field; ``sqrt(disc)`` returns a root and its
    field label or raises.  Returns (points, kinds, labels, pair_links)."""
    points, kinds, labels, links = [], [], [], []
    for choice in product((0, 1), repeat=3):
        rows = [[one * x for x in (ls[i] if s == 0 else ms[i])] for i, s in enumerate(choice)]
        basis = nullspace(rows, one)
        if len(basis) != 1:
            raise DegenerateSurface(f"linear system {choice} has a {len(basis)}-dimensional solution space")
        points.append(normalize_point(basis[0]))
        kinds.append("plane-triple")
        labels.append(1)
        links.append(None)
    for i in range(3):
        j, k = [t for t in range(3) if t != i]
        rows = [[one * x for x in ls[i]], [one * x for x in ms[i]]]
        basis = nullspace(rows, one)
        if len(basis) != 2:
            raise DegenerateSurface(f"l{i + 1} and l{i + 1}' are dependent")
        u, v = basis
        A, B, C = _binary_quadratic(u, v, ls, ms, j, k)
        if _is_zero(A) and _is_zero(B) and _is_zero(C):
            raise DegenerateSurface(f"a{j + 1} - a{k + 1} vanishes on the line l{i + 1} = l{i + 1}' = 0")
        disc = B * B - 4 * A * C
        if _is_zero(disc):
            raise DegenerateSurface(f"conic-pair nodes on line {i + 1} collide")
        if _is_zero(A):
            # one root at t = 0, i.e. the point u; the other at s/t = -C/B
            pair = [u, [-C * a + B * b for a, b in zip(u, v)]]
            label = 1
        else:
            r, label = sqrt(disc)
            pair = [[(-B + sgn * r) * a + 2 * A * b for a, b in zip(u, v)] for sgn in (1, -1)]
        base = len(points)
        for n, pt in enumerate(pair):
            points.append(normalize_point(pt))
            kinds.append("conic-pair")
            labels.append(label)
            links.append(base + 1 - n if label != 1 else None)
    return points, kinds, labels, links


def _hessian_rank(hess: list[list[forms.Poly]], point: Sequence, one) -> int:
    rows = [[forms.evaluate(h, point, one) for h in row] for row in hess]
    rows = [[one * x if isinstance(x, int) else x for x in row] for row in rows]
    return rank(rows)


def _distinct(points: Sequence[Sequence]) -> bool:
    seen = set()
    for pt in points:
        key = tuple(pt)
        if key in seen:
            return False
        seen.add(key)
    return True


def _surd_sqrt(disc: Surd) -> tuple[Surd, int]:
    r = Surd.sqrt(disc.rational())
    (d,) = r.terms.keys()
    return r, d


@lru_cache(maxsize=256)
def _singular_points_cached(cv: CoefficientVector) -> tuple[Node, ...]:
    ls, ms = cv.linear_forms()
    one = Surd(1)
    points, kinds, labels, links = _node_candidates(ls, ms, one, _surd_sqrt)
    if not _distinct(points):
        raise DegenerateSurface("two of the 14 nodes coincide")
    G = build_quartic(cv)
    hess = forms.hessian(G, NVARS)
    grads = [forms.derivative(G, i) for i in range(NVARS)]
    nodes = []
    for idx, pt in enumerate(points):
        if any(not forms.evaluate(g, pt, one).is_zero() for g in grads):
            raise DegenerateSurface(f"candidate {idx} is not singular")
        if _hessian_rank(hess, pt, one) != 3:
            raise DegenerateSurface(f"node {idx} is not of type A1")
        nodes.append(Node(idx, tuple(pt), kinds[idx], labels[idx], links[idx]))
    return tuple(nodes)


def singular_points(cv) -> list[Node]:
    return list(_singular_points_cached(as_cv(cv)))


def is_admissible(cv) -> bool:
    try:
        singular_points(cv)
    except DegenerateSurface:
        return False
    return True


# -- tropes --

@dataclass(frozen=True)
class Trope:
    name: str  # "l1", ..., "l3'"
    plane: tuple[int, ...]
    conic: forms.Poly  # ternary form in the plane's parameters
    degenerate: bool
    nodes: tuple[int, ...]


def plane_basis(plane: Sequence) -> list[list]:
    """Three points spanning the plane {plane . v = 0}."""
    one = Surd(1) if any(isinstance(x, Surd) for x in plane) else Fraction(1)
    return nullspace([[one * x for x in plane]], one)


def ternary_square_root(f: forms.Poly) -> forms.Poly | None:
    """A ternary quadratic s with s^2 = f (coefficients in Q), or None."""
    # leading monomial ordering: solve coefficient by coefficient
    mons = list(forms.monomials(3, 2))
    lead = max(f, key=lambda e: e) if f else None
    if lead is None:
        return {}
    if any(x % 2 for x in lead):
        return None
    c = Fraction(f[lead])
    if c <= 0:
        return None
    half = tuple(x // 2 for x in lead)
    r = Surd.sqrt(c)
    if not r.is_rational():
        return None
    s: dict = {half: r.rational()}
    # remaining coefficients follow from 2 * s_half * s_m = f_{half+m} - (known terms)
    for m in sorted(mons, reverse=True):
        if m == half or m > half:
            continue
        e = tuple(a + b for a, b in zip(half, m))
        acc = Fraction(f.get(e, 0))
        for m1, c1 in s.items():
            m2 = tuple(a - b for a, b in zip(e, m1))
            if m2 in s and m1 != half:
                acc -= c1 * s[m2]
        s[m] = acc / (2 * s[half])
    s = forms.clean(s)
    square = forms.mul(s, s)
    return s if forms.is_zero(forms.sub(square, f)) else None


def _conic_splits(conic: forms.Poly) -> bool:
    mat = [[Fraction(0)] * 3 for _ in range(3)]
    for e, c in conic.items():
        idx = [i for i in range(3) for _ in range(e[i])]
        i, j = idx
        if i == j:
            mat[i][i] += Fraction(c)
        else:
            mat[i][j] += Fraction(c) / 2
            mat[j][i] += Fraction(c) / 2
    return rank(mat) < 3


def tropes(cv) -> list[Trope]:
    cv = as_cv(cv)
    G = build_quartic(cv)
    nodes = singular_points(cv)
    ls, ms = cv.linear_forms()
    out = []
    for name, plane in [("l1", ls[0]), ("l2", ls[1]), ("l3", ls[2]),
                        ("l1'", ms[0]), ("l2'", ms[1]), ("l3'", ms[2])]:
        a, b, c = plane_basis(plane)
        restricted = forms.map_coeffs(forms.restrict_to_plane(G, a, b, c), Fraction)
        conic = ternary_square_root(restricted)
        if conic is None:
            raise NotAPerfectSquare(f"quartic restricted to {name} = 0 is not a square")
        incident = tuple(n.index for n in nodes if _dot(plane, n.coords).is_zero())
        out.append(Trope(name, tuple(plane), conic, _conic_splits(conic), incident))
    return out


# -- reduction mod p --

@dataclass
class ReducedSurface:
    cv: CoefficientVector
    p: int
    form: dict  # exponent tuple -> residue mod p
    nodes: list[tuple[FieldElement, ...]]  # all over F_{p^2}
    orbit_of: list[int]  # orbit size of each node (1 or 2)
    node_kinds: list[str] = field(default_factory=list)

    @property
    def cycle_type(self) -> list[int]:
        """Orbit sizes, one entry per orbit."""
        out, seen = [], set()
        for i, size in enumerate(self.orbit_of):
            if i in seen:
                continue
            if size == 2:
                j = next(j for j in range(len(self.nodes))
                         if j != i and j not in seen and self.nodes[j] == tuple(x.frobenius() for x in self.nodes[i]))
                seen.add(j)
            seen.add(i)
            out.append(size)
        return sorted(out)

    def rational_nodes(self) -> list[tuple[int, ...]]:
        """Nodes defined over F_p, as integer tuples."""
        return [tuple(x.c[0] for x in pt) for pt, size in zip(self.nodes, self.orbit_of) if size == 1]

    def fix_count(self, k: int) -> int:
        return sum(1 for s in self.orbit_of if k % s == 0)


def _fp2_sqrt(fld: ExtField):
    tables = fld.tables

    def sqrt(disc: FieldElement):
        e = tables.to_log(disc)
        if e < 0 or e % 2:
            raise ValueError("not a square in F_p^2")
        split = legendre(disc.c[0], fld.p) == 1
        return tables.from_log(fld, e // 2), (1 if split else 2)
    return sqrt


def reduce_mod_p(cv, p: int) -> ReducedSurface:
    cv = as_cv(cv)
    if not is_prime(p) or p < 5:
        raise BadReduction(p, "p must be a prime >= 5")
    fld = make_field(p, 2)
    one = fld.one
    ls, ms = cv.linear_forms()
    sqrt = _fp2_sqrt(fld)
    try:
        points, kinds, labels, links = _node_candidates(ls, ms, one, sqrt)
    except DegenerateSurface as exc:
        raise BadReduction(p, f"degenerate linear system: {exc}") from exc
    if not _distinct(points):
        raise BadReduction(p, "collision of two nodes")
    G = build_quartic(cv)
    form = forms.map_coeffs(G, lambda c: c % p)
    hess = forms.hessian(form, NVARS)
    for idx, pt in enumerate(points):
        if _hessian_rank(hess, pt, one) != 3:
            raise BadReduction(p, f"node {idx} is not A1 mod p")
    orbit = [1 if all(all(v == 0 for v in x.c[1:]) for x in pt) else 2 for pt in points]
    exps = np.array(list(form), dtype=np.int64).reshape(-1, 4)
    coeffs = np.array(list(form.values()), dtype=np.int64)
    extra = kernels.rational_singular_points(exps, coeffs, p) - orbit.count(1)
    if extra:
        raise BadReduction(p, f"{extra} further F_{p}-rational singular point(s)")
    return ReducedSurface(cv, p, form, points, orbit, kinds)


# -- sampling --

def random_sample(n: int, seed: int, bound: int = 20) -> list[CoefficientVector]:
    if bound < 1:
        raise ValueError("bound must be at least 1")
    rng = random.Random(seed)
    out: list[CoefficientVector] = []
    while len(out) < n:
        cv = CoefficientVector((1, 1, 1) + tuple(rng.randint(-bound, bound) for _ in range(5)))
        if is_admissible(cv):
            out.append(cv)
    return out


def save_sample(vectors: Sequence[CoefficientVector], path) -> None:
    with open(path, "w") as fh:
        json.dump([list(v.c) for v in vectors], fh)


def load_sample(path) -> list[CoefficientVector]:
    with open(path) as fh:
        return [CoefficientVector(tuple(v)) for v in json.load(fh)]
