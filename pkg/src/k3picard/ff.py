"""Arithmetic in F_p and its extensions F_{p^k}, k <= 4.

Two representations are used:

* :class:`FieldElement` - a residue vector in the polynomial basis, convenient
  and exact, used everywhere outside the counting loops;
* :class:`FieldTables` - discrete-log / Zech-log tables over a primitive
  element, used by the compiled kernels in :mod:`k3picard.kernels`.  There an
  element is an int64 ``log`` in ``[0, q-1)`` and zero is ``-1``.

Elements are identified with their *dense index* ``sum(c_i * p**i)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .arith import factorize, is_prime
from .errors import FieldError

MAX_DEGREE = 4


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    a = [x % p for x in a]
    _poly_trim(a)
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _poly_trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [x % p for x in out]


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim([x % p for x in a]), _poly_trim([x % p for x in b])
    while b:
        a, b = b, _poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [x * inv % p for x in a]
    return a


def _xpow_mod(e: int, m: Sequence[int], p: int) -> list[int]:
    result, base = [1], [0, 1]
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Rabin-style test: gcd(f, X^(p^i) - X) = 1 for i <= deg/2 and f | X^(p^n) - X."""
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    for i in range(1, n // 2 + 1):
        h = _xpow_mod(p**i, f, p)
        h = (h + [0, 0])[: max(len(h), 2)]
        h[1] = (h[1] - 1) % p
        if len(_poly_gcd(list(f), h, p)) > 1:
            return False
    return True


def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k (low degree first)."""
    if k == 1:
        return (0, 1)
    for coeffs in itertools.product(range(p), repeat=k):
        f = list(coeffs) + [1]
        if is_irreducible_mod_p(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


@dataclass(frozen=True)
class ExtField:
    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def order(self) -> int:
        return self.q

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})"

    def __call__(self, value: int | Sequence[int]) -> "FieldElement":
        if isinstance(value, (int, np.integer)):
            c = [int(value) % self.p] + [0] * (self.k - 1)
        else:
            c = [int(v) % self.p for v in value]
            if len(c) > self.k:
                c = _poly_mod(c, self.modulus, self.p)
            c = c + [0] * (self.k - len(c))
        return FieldElement(self, tuple(c))

    @property
    def zero(self) -> "FieldElement":
        return self(0)

    @property
    def one(self) -> "FieldElement":
        return self(1)

    @property
    def gen(self) -> "FieldElement":
        """Class of T modulo the defining polynomial."""
        if self.k == 1:
            return self(0)
        return self([0, 1])

    def from_index(self, index: int) -> "FieldElement":
        c = []
        for _ in range(self.k):
            index, r = divmod(index, self.p)
            c.append(r)
        return FieldElement(self, tuple(c))

    def elements(self) -> Iterable["FieldElement"]:
        for i in range(self.q):
            yield self.from_index(i)

    @cached_property
    def _square_table(self) -> np.ndarray:
        """Quadratic character of F_p indexed by residue."""
        table = np.full(self.p, -1, dtype=np.int8)
        table[0] = 0
        for a in range(1, self.p):
            table[a * a % self.p] = 1
        return table

    @cached_property
    def tables(self) -> "FieldTables":
        return FieldTables.build(self)


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> ExtField:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise FieldError(f"p={p} is not prime")
    if p < 5:
        raise FieldError("characteristic 2 and 3 are not supported")
    if not 1 <= k <= MAX_DEGREE:
        raise FieldError(f"extension degree {k} outside 1..{MAX_DEGREE}")
    return ExtField(int(p), int(k), least_irreducible(int(p), int(k)))


class FieldElement:
    __slots__ = ("field", "c")

    def __init__(self, field: ExtField, c: tuple[int, ...]):
        self.field = field
        self.c = c

    def _check(self, other: object) -> "FieldElement":
        if isinstance(other, (int, np.integer)):
            return self.field(int(other))
        if not isinstance(other, FieldElement):
            return NotImplemented  # type: ignore[return-value]
        if other.field != self.field:
            raise FieldError(f"mixed fields {self.field} and {other.field}")
        return other

    @property
    def index(self) -> int:
        out = 0
        for x in reversed(self.c):
            out = out * self.field.p + x
        return out

    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, np.integer)):
            other = self.field(int(other))
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.c == other.c

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.k, self.c))

    def __repr__(self) -> str:
        if self.field.k == 1:
            return f"{self.c[0]} mod {self.field.p}"
        return f"{list(self.c)} in {self.field}"

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.c))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        f = self.field
        if f.k == 1:
            return FieldElement(f, ((self.c[0] * other.c[0]) % f.p,))
        prod = _poly_mod(_poly_mul(self.c, other.c, f.p), f.modulus, f.p)
        return FieldElement(f, tuple(prod + [0] * (f.k - len(prod))))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in " + repr(self.field))
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def frobenius(self) -> "FieldElement":
        return self ** self.field.p

    def norm(self) -> int:
        """N_{F_q/F_p}(self) as a residue mod p."""
        out, x = self.field.one, self
        for _ in range(self.field.k):
            out = out * x
            x = x.frobenius()
        assert all(c == 0 for c in out.c[1:])
        return out.c[0]

    def quadratic_character(self) -> int:
        """+1 / -1 / 0 via the character of the norm (table lookup in F_p)."""
        return int(self.field._square_table[self.norm()])

    def euler_character(self) -> int:
        """Independent route: Euler's criterion in F_q itself."""
        if self.is_zero():
            return 0
        r = self ** ((self.field.q - 1) // 2)
        return 1 if r == self.field.one else -1


def arith(a: FieldElement, b: FieldElement | int | None, op: str) -> FieldElement:
    """Functional front door to the field operations (op in add/sub/mul/div/pow/inv/neg)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** int(b)
    if op == "inv":
        return a.inverse()
    if op == "neg":
        return -a
    raise ValueError(f"unknown op {op!r}")


def frobenius(a: FieldElement) -> FieldElement:
    return a.frobenius()


def quadratic_character(a: FieldElement) -> int:
    return a.quadratic_character()


# -- univariate polynomials over F_q (coefficient lists, low degree first) --

def _upoly_trim(a: list[FieldElement]) -> list[FieldElement]:
    while a and a[-1].is_zero():
        a.pop()
    return a


def _upoly_mod(a: list[FieldElement], m: list[FieldElement]) -> list[FieldElement]:
    a = _upoly_trim(list(a))
    inv = m[-1].inverse()
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1] * inv
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = a[shift + i] - c * mi
        _upoly_trim(a)
    return a


def _upoly_mul(a: list[FieldElement], b: list[FieldElement], zero: FieldElement) -> list[FieldElement]:
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def quartic_root_count(f: Sequence[FieldElement]) -> int:
    """Distinct roots in F_q of f (degree <= 4, low degree first).

    deg gcd(f, X^q - X), with X^q reduced mod f by square-and-multiply.
    The zero polynomial returns the sentinel q + 1 (a whole line).
    """
    f = list(f)
    if not f:
        raise ValueError("empty coefficient list")
    fld = f[0].field
    f = _upoly_trim(f)
    if not f:
        return fld.q + 1
    if len(f) == 1:
        return 0
    zero, one = fld.zero, fld.one
    result, base, e = [one], [zero, one], fld.q
    while e:
        if e & 1:
            result = _upoly_mod(_upoly_mul(result, base, zero), f)
        base = _upoly_mod(_upoly_mul(base, base, zero), f)
        e >>= 1
    h = list(result) + [zero] * max(0, 2 - len(result))
    h[1] = h[1] - one
    a, b = f, _upoly_trim(h)
    while b:
        a, b = b, _upoly_mod(a, b)
    return len(a) - 1


def root_count_brute(f: Sequence[FieldElement]) -> int:
    fld = f[0].field
    if all(c.is_zero() for c in f):
        return fld.q + 1
    count = 0
    for t in fld.elements():
        acc = fld.zero
        for c in reversed(f):
            acc = acc * t + c
        count += acc.is_zero()
    return count


# -- discrete-log tables for the compiled kernels --

@dataclass(frozen=True)
class FieldTables:
    p: int
    k: int
    q: int
    generator: int
    exp: np.ndarray = field(repr=False)
    log: np.ndarray = field(repr=False)
    zech: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, fld: ExtField) -> "FieldTables":
        q = fld.q
        ell = list(factorize(q - 1)) if q > 2 else []
        one = fld.one
        for idx in range(2 if q > 2 else 1, q):
            g = fld.from_index(idx)
            if all(g ** ((q - 1) // l) != one for l in ell):
                break
        else:  # pragma: no cover
            raise AssertionError("no primitive element")
        exp = _power_table(np.array(g.c, dtype=np.int64), np.array(fld.modulus, dtype=np.int64), fld.p, q)
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)
        d0 = exp % fld.p
        plus_one = exp - d0 + (d0 + 1) % fld.p
        zech = log[plus_one]
        return cls(fld.p, fld.k, q, g.index, exp, log, zech)

    def to_log(self, a: FieldElement) -> int:
        return int(self.log[a.index])

    def from_log(self, fld: ExtField, e: int) -> FieldElement:
        if e < 0:
            return fld.zero
        return fld.from_index(int(self.exp[e % (self.q - 1)]))


def _power_table(g: np.ndarray, modulus: np.ndarray, p: int, q: int) -> np.ndarray:
    from .kernels import power_table

    return power_table(g, modulus, p, q)
