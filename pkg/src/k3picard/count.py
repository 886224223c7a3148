"""Point counts of the singular quartic over F_{p^k} and their lift to the resolution."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from . import forms, kernels
from .errors import DegenerateTangentCone, NodeNotRational, NoExteriorPoint
from .family import ReducedSurface
from .ff import make_field
from .surd import rank

METHODS = ("degree-two", "direct", "fibration", "brute")
EC_TRIES = 24


@dataclass
class DegreeTwoModel:
    """V: Q w^2 + K w + F = 0 after moving ``center`` to (0:0:0:1)."""

    p: int
    center: tuple[int, ...]
    transform: tuple[tuple[int, ...], ...]  # columns: images of e_x, e_y, e_z, e_w
    Q: dict
    K: dict
    F: dict

    @property
    def ramification(self) -> dict:
        """The sextic 4FQ - K^2."""
        four_fq = forms.scale(forms.mul(self.F, self.Q), 4)
        out = forms.sub(four_fq, forms.mul(self.K, self.K))
        return forms.map_coeffs(out, lambda c: c % self.p)

    def coefficient_logs(self, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Kernel layout: [i, j] holds log of the coefficient of x^i y^j z^(d-i-j)."""
        log = make_field(self.p, k).tables.log
        out = []
        for poly, deg in ((self.Q, 2), (self.K, 3), (self.F, 4)):
            arr = np.full((deg + 1, deg + 1), -1, dtype=np.int64)
            for (i, j, _), c in poly.items():
                arr[i, j] = log[c % self.p]
            out.append(arr)
        return tuple(out)


def _transform_for(center: Sequence[int], p: int) -> list[list[int]]:
    """Columns e_a, e_b, e_c, center with {a, b, c} the axes other than a pivot of center."""
    pivot = next(i for i in range(4) if center[i] % p)
    cols = [[int(i == a) for i in range(4)] for a in range(4) if a != pivot]
    cols.append([c % p for c in center])
    return cols


def degree_two_model(surface: ReducedSurface, node: Sequence[int] | None = None) -> DegreeTwoModel:
    p = surface.p
    if node is None:
        node = (0, 0, 0, 1)
    node = tuple(int(x) % p for x in node)
    if tuple(node) not in {tuple(x) for x in surface.rational_nodes()}:
        raise NodeNotRational(f"{node} is not an F_{p}-rational node")
    cols = _transform_for(node, p)
    images = [forms.clean({tuple(int(r == c) for r in range(4)): cols[c][v] for c in range(4)}) for v in range(4)]
    G = forms.map_coeffs(forms.substitute(surface.form, images, 4), lambda c: c % p)
    parts: list[dict] = [{}, {}, {}]
    for e, c in G.items():
        if e[3] > 2:
            raise DegenerateTangentCone("the center is not a singular point")
        parts[e[3]][e[:3]] = c
    F, K, Q = parts
    if not Q:
        raise DegenerateTangentCone("tangent cone vanishes")
    mat = [[0] * 3 for _ in range(3)]
    for e, c in Q.items():
        idx = [i for i in range(3) for _ in range(e[i])]
        a, b = idx
        if a == b:
            mat[a][a] += 2 * c
        else:
            mat[a][b] += c
            mat[b][a] += c
    # 2 * Gram matrix of Q has the same rank for odd p
    fld = make_field(p)
    if rank([[fld(x) for x in row] for row in mat]) != 3:
        raise DegenerateTangentCone("tangent cone has rank < 3")
    return DegreeTwoModel(p, node, tuple(tuple(c) for c in cols), Q, K, F)


def _log4(p: int, k: int) -> int:
    return int(make_field(p, k).tables.log[4 % p])


def count_degree_two(model: DegreeTwoModel, k: int, use_orbits: bool = True) -> int:
    fld = make_field(model.p, k)
    qc, kc, fc = model.coefficient_logs(k)
    s = kernels.degree_two_sum(qc, kc, fc, model.p, k, _log4(model.p, k), fld.tables.zech, use_orbits)
    return 1 + int(s)


def count_fibration(surface: ReducedSurface, k: int, seed: int = 1, stats: np.ndarray | None = None) -> int:
    """Pencil of planes x = lam z through the nodes (0:0:0:1) and (0:1:0:1).

    Each plane section is projected from (0:0:0:1) onto the line x = lam z of
    the degree-two model; its count is a character sum of a binary quartic
    evaluated through the Jacobian elliptic curve for q >= 1000.
    """
    model = degree_two_model(surface)
    fld = make_field(surface.p, k)
    qc, kc, fc = model.coefficient_logs(k)
    if stats is None:
        stats = np.zeros(2, dtype=np.int64)
    s = kernels.fibration_sum(qc, kc, fc, surface.p, k, _log4(surface.p, k), fld.tables.zech, EC_TRIES, seed, stats)
    return 1 + int(s)


def _exterior_point(surface: ReducedSurface) -> tuple[int, ...]:
    p = surface.p
    for rest in product(range(p), repeat=3):
        pt = rest + (1,)
        if forms.evaluate(surface.form, pt) % p:
            return pt
    raise NoExteriorPoint(f"every affine F_{p}-point lies on V")


def count_direct(surface: ReducedSurface, k: int) -> int:
    p = surface.p
    origin = _exterior_point(surface)
    # G(O + t d) in the variables d0..d3, t
    images = [forms.clean({(0, 0, 0, 0, 0): origin[i], tuple(int(j == i) for j in range(4)) + (1,): 1})
              for i in range(4)]
    expanded = forms.map_coeffs(forms.substitute(surface.form, images, 5), lambda c: c % p)
    log = make_field(p, k).tables.log
    exps = np.array([e[:4] for e in expanded], dtype=np.int64).reshape(-1, 4)
    coeffs = np.array([log[c] for c in expanded.values()], dtype=np.int64)
    degs = np.array([e[4] for e in expanded], dtype=np.int64)
    return int(kernels.direct_count(exps, coeffs, degs, 3, p, k, make_field(p, k).tables.zech))


def count_brute(surface: ReducedSurface, k: int) -> int:
    p = surface.p
    fld = make_field(p, k)
    exps = np.array(list(surface.form.keys()), dtype=np.int64).reshape(-1, 4)
    coeffs = np.array([fld.tables.log[c] for c in surface.form.values()], dtype=np.int64)
    return int(kernels.projective_points_count(exps, coeffs, p, k, fld.tables.zech))


def choose_method(p: int, k: int) -> str:
    """The fibration path is asymptotically cheapest once q exceeds the direct threshold."""
    return "fibration" if p**k >= kernels.DIRECT_THRESHOLD else "degree-two"


def count_points(surface: ReducedSurface, k: int, method: str = "auto") -> int:
    if method == "auto":
        method = choose_method(surface.p, k)
    if method == "degree-two":
        return count_degree_two(degree_two_model(surface), k)
    if method == "fibration":
        return count_fibration(surface, k)
    if method == "direct":
        return count_direct(surface, k)
    if method == "brute":
        return count_brute(surface, k)
    raise ValueError(f"unknown counting method {method!r}")


@dataclass
class PointCounts:
    p: int
    Nv: list[int]
    Nres: list[int]
    traces: list[int]
    timings_ms: list[float] = field(default_factory=list)
    method: str = "auto"

    def to_dict(self) -> dict:
        return {"p": self.p, "Nv": self.Nv, "Nres": self.Nres, "traces": self.traces,
                "timings_ms": self.timings_ms, "method": self.method}


def lift_counts_to_resolution(Nv: Sequence[int], orbit_sizes: Sequence[int], p: int) -> PointCounts:
    """Each F_{p^k}-rational A1 node is replaced by a conic with p^k + 1 points.

    ``orbit_sizes`` lists the Frobenius orbit size of every node (length 14).
    """
    Nres, traces = [], []
    for k, n in enumerate(Nv, start=1):
        fix = sum(1 for s in orbit_sizes if k % s == 0)
        res = n + p**k * fix
        Nres.append(res)
        traces.append(res - 1 - p ** (2 * k))
    return PointCounts(p, list(Nv), Nres, traces)


def compute_counts(surface: ReducedSurface, max_k: int, method: str = "auto") -> PointCounts:
    Nv, times = [], []
    for k in range(1, max_k + 1):
        t0 = time.perf_counter()
        Nv.append(count_points(surface, k, method))
        times.append((time.perf_counter() - t0) * 1000)
    pc = lift_counts_to_resolution(Nv, surface.orbit_of, surface.p)
    pc.timings_ms = times
    pc.method = method
    return pc


def extend_counts(surface: ReducedSurface, counts: PointCounts, k: int, method: str = "auto") -> PointCounts:
    t0 = time.perf_counter()
    Nv = counts.Nv + [count_points(surface, k, method)]
    pc = lift_counts_to_resolution(Nv, surface.orbit_of, surface.p)
    pc.timings_ms = counts.timings_ms + [(time.perf_counter() - t0) * 1000]
    pc.method = counts.method
    return pc


def dump_counts_csv(path, rows: Sequence[tuple]) -> None:
    """Append (p, k, method, Nv, Nres, t, wall-time-ms) rows."""
    with open(path, "a", newline="") as fh:
        csv.writer(fh).writerows(rows)
