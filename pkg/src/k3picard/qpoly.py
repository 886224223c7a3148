"""Dense univariate polynomials over Q, leading coefficient first."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

QPoly = list[Fraction]


def trim(a: Sequence) -> QPoly:
    out = [Fraction(x) for x in a]
    while out and out[0] == 0:
        out.pop(0)
    return out


def divmod_(num: Sequence, den: Sequence) -> tuple[QPoly, QPoly]:
    num, den = trim(num), trim(den)
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    quot: QPoly = []
    while len(num) >= len(den):
        f = num[0] / den[0]
        quot.append(f)
        for i, d in enumerate(den):
            num[i] -= f * d
        num.pop(0)
    return quot, trim(num)


def mul(a: Sequence, b: Sequence) -> QPoly:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def derivative(a: Sequence) -> QPoly:
    n = len(a) - 1
    return trim([c * (n - i) for i, c in enumerate(a[:-1])])


def monic(a: Sequence) -> QPoly:
    a = trim(a)
    return [x / a[0] for x in a]


def gcd(a: Sequence, b: Sequence) -> QPoly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a) if a else []


def squarefree_part(a: Sequence) -> QPoly:
    g = gcd(a, derivative(a))
    if len(g) <= 1:
        return monic(a)
    return monic(divmod_(a, g)[0])
