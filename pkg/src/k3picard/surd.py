"""Exact arithmetic in multi-quadratic fields Q(sqrt(d1), sqrt(d2), ...).

A :class:`Surd` is a finite Q-linear combination of square roots of distinct
squarefree integers, stored as ``{m: Fraction}`` with ``m`` the radicand.
For negative ``m`` the root is ``i * sqrt(|m|)``.  The radicands
``sqrt(m)`` are linearly independent over Q, so the zero test is exact.
Also hosts a little exact linear algebra that works over any field type
supplying +, -, *, / and a zero test.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .arith import factorize, squarefree_part


def _radical_product(m1: int, m2: int) -> tuple[int, int]:
    """sqrt(m1) * sqrt(m2) = c * sqrt(m) with m squarefree; returns (c, m)."""
    sign = -1 if (m1 < 0 and m2 < 0) else 1
    g = gcd(abs(m1), abs(m2))
    return sign * g, m1 * m2 // (g * g)


class Surd:
    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | int | Fraction | None = None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = {1: Fraction(terms)}
        self.terms = {m: Fraction(c) for m, c in terms.items() if c != 0}

    @classmethod
    def sqrt(cls, n: int | Fraction) -> "Surd":
        n = Fraction(n)
        if n == 0:
            return cls()
        # sqrt(a/b) = sqrt(a b) / b
        prod = n.numerator * n.denominator
        m = squarefree_part(prod)
        c2 = Fraction(prod, m)  # perfect square
        root = _isqrt_exact(int(c2))
        return cls({m: Fraction(root, n.denominator)})

    @staticmethod
    def coerce(x) -> "Surd":
        return x if isinstance(x, Surd) else Surd(x)

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(m == 1 for m in self.terms)

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.terms.get(1, Fraction(0))

    @property
    def radicands(self) -> set[int]:
        return set(self.terms) - {1}

    def primes(self) -> set[int]:
        """Primes (and -1) generating the field this element lives in."""
        out: set[int] = set()
        for m in self.terms:
            if m < 0:
                out.add(-1)
            if abs(m) > 1:
                out.update(factorize(m))
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda v: (abs(v), v)):
            c = self.terms[m]
            parts.append(f"{c}" if m == 1 else f"{c}*sqrt({m})")
        return " + ".join(parts)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Surd(other)
        if not isinstance(other, Surd):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other):
        other = Surd.coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Surd(out)

    __radd__ = __add__

    def __neg__(self):
        return Surd({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Surd.coerce(other))

    def __rsub__(self, other):
        return Surd.coerce(other) - self

    def __mul__(self, other):
        other = Surd.coerce(other)
        out: dict[int, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                f, m = _radical_product(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2 * f
        return Surd(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = Surd(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self, prime: int) -> "Surd":
        """Apply the automorphism sqrt(prime) -> -sqrt(prime) (prime may be -1)."""
        out = {}
        for m, c in self.terms.items():
            flips = (m < 0) if prime == -1 else (m % prime == 0)
            out[m] = -c if flips else c
        return Surd(out)

    def inverse(self) -> "Surd":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero surd")
        num, den = Surd(1), self
        for prime in sorted(den.primes()):
            if prime not in den.primes():
                continue
            conj = den.conjugate(prime)
            num, den = num * conj, den * conj
        r = den.rational()
        return Surd({m: c / r for m, c in num.terms.items()})

    def __truediv__(self, other):
        return self * Surd.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Surd.coerce(other) * self.inverse()

    def sqrt_of(self) -> "Surd | None":
        """A square root inside a multi-quadratic field, or None if not found."""
        if self.is_zero():
            return Surd()
        if self.is_rational():
            return Surd.sqrt(self.rational())
        # a + b sqrt(d) = (u + v sqrt(d))^2 with u, v in Q(other roots) - only
        # handled when self lives in a single quadratic field
        rads = self.radicands
        if len(rads) == 1:
            (d,) = rads
            a, b = self.terms.get(1, Fraction(0)), self.terms[d]
            n = a * a - d * b * b
            if _is_rational_square(n):
                rn = _rat_sqrt(n)
                for u2 in ((a + rn) / 2, (a - rn) / 2):
                    if u2 != 0:
                        u = Surd.sqrt(u2)
                        v = Surd(b) / (2 * u)
                        cand = u + v * Surd.sqrt(d)
                        if cand * cand == self:
                            return cand
        return None

    def to_mod(self, p: int, roots: dict[int, int]) -> int:
        """Image under the embedding sqrt(prime) -> roots[prime] into F_p."""
        acc = 0
        for m, c in self.terms.items():
            r = 1
            if m < 0:
                r = roots[-1]
            for prime, e in (factorize(m).items() if abs(m) > 1 else ()):
                r = r * pow(roots[prime], e, p) % p
            acc = (acc + c.numerator * pow(c.denominator, -1, p) * r) % p
        return acc

    def __float__(self) -> float:
        acc = 0.0
        for m, c in self.terms.items():
            if m < 0:
                raise ValueError("non-real surd")
            acc += float(c) * abs(m) ** 0.5
        return acc


def _isqrt_exact(n: int) -> int:
    from math import isqrt

    r = isqrt(n)
    if r * r != n:
        raise ValueError(f"{n} is not a square")
    return r


def _is_rational_square(x: Fraction) -> bool:
    from .arith import is_square

    return x >= 0 and is_square(x.numerator) and is_square(x.denominator)


def _rat_sqrt(x: Fraction) -> Fraction:
    return Fraction(_isqrt_exact(x.numerator), _isqrt_exact(x.denominator))


def field_primes(values: Iterable[Surd]) -> set[int]:
    out: set[int] = set()
    for v in values:
        out |= Surd.coerce(v).primes()
    return out


# -- exact linear algebra over any field-like element type --

def _zero(x) -> bool:
    return x.is_zero() if hasattr(x, "is_zero") else x == 0


def row_echelon(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if not _zero(m[i][col])), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col] if not hasattr(m[r][col], "inverse") else m[r][col].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not _zero(m[i][col]):
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(row_echelon(rows)[1])


def nullspace(rows: Sequence[Sequence], one=1) -> list[list]:
    """Basis of {v : rows v = 0}."""
    ncols = len(rows[0])
    red, pivots = row_echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    zero = one * 0 if not isinstance(one, int) else 0
    basis = []
    for fcol in free:
        v = [zero] * ncols
        v[fcol] = one
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fcol]
        basis.append(v)
    return basis


def determinant(rows: Sequence[Sequence]):
    m = [list(r) for r in rows]
    n = len(m)
    det = 1
    for col in range(n):
        piv = next((i for i in range(col, n) if not _zero(m[i][col])), None)
        if piv is None:
            return m[0][0] * 0 if n else 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col]
        inv = 1 / m[col][col] if not hasattr(m[col][col], "inverse") else m[col][col].inverse()
        for i in range(col + 1, n):
            if not _zero(m[i][col]):
                f = m[i][col] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return det
