"""Sparse multivariate polynomials as ``{exponent tuple: coefficient}`` dicts.

The coefficient type is whatever the caller supplies (int, Fraction,
:class:`~k3picard.surd.Surd`, :class:`~k3picard.ff.FieldElement`); only ring
operations and a zero test are used.
"""

from __future__ import annotations

from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

Poly = dict[tuple[int, ...], object]


def _is_zero(c) -> bool:
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return c == 0


def clean(f: Mapping) -> Poly:
    return {e: c for e, c in f.items() if not _is_zero(c)}


def linear(coeffs: Sequence) -> Poly:
    n = len(coeffs)
    out = {}
    for i, c in enumerate(coeffs):
        e = [0] * n
        e[i] = 1
        out[tuple(e)] = c
    return clean(out)


def constant(c, nvars: int) -> Poly:
    return clean({(0,) * nvars: c})


def add(f: Mapping, g: Mapping) -> Poly:
    out = dict(f)
    for e, c in g.items():
        out[e] = out[e] + c if e in out else c
    return clean(out)


def scale(f: Mapping, s) -> Poly:
    return clean({e: c * s for e, c in f.items()})


def sub(f: Mapping, g: Mapping) -> Poly:
    return add(f, scale(g, -1))


def mul(f: Mapping, g: Mapping) -> Poly:
    out: dict = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out[e] + c1 * c2 if e in out else c1 * c2
    return clean(out)


def power(f: Mapping, n: int, nvars: int) -> Poly:
    out = constant(1, nvars)
    for _ in range(n):
        out = mul(out, f)
    return out


def substitute(f: Mapping, images: Sequence[Mapping], nvars: int) -> Poly:
    """f(images[0], images[1], ...) where the images are polynomials in nvars variables."""
    cache: dict[tuple[int, int], Poly] = {}

    def pw(i: int, n: int) -> Poly:
        if (i, n) not in cache:
            cache[(i, n)] = power(images[i], n, nvars)
        return cache[(i, n)]

    out: Poly = {}
    for e, c in f.items():
        term = constant(c, nvars)
        for i, n in enumerate(e):
            if n:
                term = mul(term, pw(i, n))
        out = add(out, term)
    return out


def evaluate(f: Mapping, point: Sequence, one=1):
    acc = None
    for e, c in f.items():
        term = c
        for x, n in zip(point, e):
            if n:
                term = term * x**n
        acc = term if acc is None else acc + term
    if acc is None:
        return one * 0
    return acc


def derivative(f: Mapping, i: int) -> Poly:
    out = {}
    for e, c in f.items():
        if e[i]:
            e2 = list(e)
            e2[i] -= 1
            out[tuple(e2)] = c * e[i]
    return clean(out)


def hessian(f: Mapping, nvars: int) -> list[list[Poly]]:
    first = [derivative(f, i) for i in range(nvars)]
    return [[derivative(first[i], j) for j in range(nvars)] for i in range(nvars)]


def map_coeffs(f: Mapping, fn: Callable) -> Poly:
    return clean({e: fn(c) for e, c in f.items()})


def degree(f: Mapping) -> int:
    return max((sum(e) for e in f), default=-1)


def monomials(nvars: int, deg: int) -> Iterable[tuple[int, ...]]:
    for e in product(range(deg + 1), repeat=nvars):
        if sum(e) == deg:
            yield e


def restrict_to_line(f: Mapping, a: Sequence, b: Sequence) -> Poly:
    """Binary form f(s a + t b) in (s, t)."""
    n = len(a)
    images = [clean({(1, 0): a[i], (0, 1): b[i]}) for i in range(n)]
    return substitute(f, images, 2)


def restrict_to_plane(f: Mapping, a: Sequence, b: Sequence, c: Sequence) -> Poly:
    """Ternary form f(u a + v b + w c) in (u, v, w)."""
    n = len(a)
    images = [clean({(1, 0, 0): a[i], (0, 1, 0): b[i], (0, 0, 1): c[i]}) for i in range(n)]
    return substitute(f, images, 3)


def is_zero(f: Mapping) -> bool:
    return not clean(f)
