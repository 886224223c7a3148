"""Tate classes, single-prime rank bounds, Artin-Tate square classes, prime combination."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from . import qpoly
from .arith import lcm, square_class
from .errors import NonPositiveLimit, NonzeroRemainder, ParityViolation
from .weil import PsiCandidate, coeffs_from_power_sums, power_sums

CYCLOTOMIC_ORDERS = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 14, 18)
BASE_RANK = 15


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Phi_n, leading first, via T^n - 1 = prod_{d | n} Phi_d."""
    poly = [Fraction(1)] + [Fraction(0)] * (n - 1) + [Fraction(-1)]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = qpoly.divmod_(poly, cyclotomic(d))
            assert not any(rem)
    return tuple(int(x) for x in poly)


def normalized(cand: PsiCandidate | Sequence[int], p: int) -> list[Fraction]:
    """psi*(T) = psi(pT) / p^7, leading first."""
    coeffs = cand.coeffs if isinstance(cand, PsiCandidate) else cand
    return [Fraction(c, p**i) for i, c in enumerate(coeffs)]


def cyclotomic_factors(poly: Sequence[Fraction]) -> tuple[dict[int, int], list[Fraction]]:
    """Multiplicities of Phi_n (n in CYCLOTOMIC_ORDERS) in poly, and the cofactor."""
    found: dict[int, int] = {}
    rest = list(poly)
    for n in CYCLOTOMIC_ORDERS:
        phi = cyclotomic(n)
        while len(rest) > len(phi) - 1:
            q, r = qpoly.divmod_(rest, phi)
            if any(r):
                break
            found[n] = found.get(n, 0) + 1
            rest = q
    return found, rest


def tate_class_count(cand: PsiCandidate | Sequence[int], p: int) -> int:
    found, _ = cyclotomic_factors(normalized(cand, p))
    return sum(len(cyclotomic(n)) - 1 for n in found for _ in range(found[n]))


def tate_class_count_reversed(cand: PsiCandidate | Sequence[int], p: int) -> int:
    """Same count from the reciprocal polynomial; cyclotomic factors are self-reciprocal."""
    poly = normalized(cand, p)[::-1]
    poly = [x / poly[0] for x in poly]
    found, _ = cyclotomic_factors(poly)
    return sum(len(cyclotomic(n)) - 1 for n in found for _ in range(found[n]))


@dataclass(frozen=True)
class RankBoundAtPrime:
    p: int
    bound: int
    disc_classes: frozenset[int]
    ambiguous: bool = False

    def to_dict(self) -> dict:
        return {"p": self.p, "bound": self.bound, "discClasses": sorted(self.disc_classes),
                "ambiguous": self.ambiguous}


def bound_from_u(u: int) -> int:
    if u % 2 == 0:
        raise ParityViolation(f"{u} Tate classes in psi; expected an odd number")
    return BASE_RANK + u


def rank_upper_bound(us: int | Sequence[int], p: int = 0, classes: Sequence[int | None] = ()) -> RankBoundAtPrime:
    """Bound from one candidate, or the maximum over an ambiguous pair.

    The class set of an ambiguous pair is the union over both candidates, so
    that the pair only ever rules out what both of its members rule out.
    """
    us = [us] if isinstance(us, int) else list(us)
    bounds = [bound_from_u(u) for u in us]
    kept = frozenset(c for c in classes if c is not None)
    return RankBoundAtPrime(p, max(bounds), kept, len(us) > 1)


def artin_tate_value(cand: PsiCandidate, cycle_type: Sequence[int], p: int, rho: int,
                     m: int | None = None) -> Fraction:
    """lim_{T -> p^m} Phi_m(T) / (T - p^m)^rho / (p^m)^(21 - rho) over F_{p^m}."""
    found, transcendental = cyclotomic_factors(normalized(cand, p))
    u = sum((len(cyclotomic(n)) - 1) * e for n, e in found.items())
    if m is None:
        m = base_change_degree(cand, cycle_type, p)
    if BASE_RANK + u != rho:
        raise NonzeroRemainder(f"multiplicity of p^m is {BASE_RANK + u}, not rho = {rho}")
    for n in found:
        if m % n:
            raise ValueError(f"m = {m} does not kill the cyclotomic order {n}")
    for d in cycle_type:
        if m % d:
            raise ValueError(f"m = {m} does not kill the orbit size {d}")
    deg = len(transcendental) - 1
    # mu = lambda / p over the transcendental roots; prod (1 - mu^m) = P_m(1)
    s = power_sums(transcendental, deg * m)
    sm = [s[j * m - 1] for j in range(1, deg + 1)]
    pm = coeffs_from_power_sums(sm, deg)
    at_one = sum(Fraction(c) for c in pm)
    # prod (p^m - lambda^m) / (p^m)^(21 - rho) with deg = 22 - rho transcendental roots
    value = Fraction(p**m) ** deg * at_one / Fraction(p**m) ** (21 - rho)
    if value <= 0:
        raise NonPositiveLimit(f"Artin-Tate limit {value} is not positive")
    return value


def base_change_degree(cand: PsiCandidate, cycle_type: Sequence[int], p: int) -> int:
    found, _ = cyclotomic_factors(normalized(cand, p))
    return lcm(*found, *cycle_type)


def artin_tate_disc_class(cand: PsiCandidate, cycle_type: Sequence[int], p: int, rho: int,
                          m: int | None = None) -> int:
    """Signed squarefree class of disc Pic; the sign is that of a lattice of signature (1, rho - 1)."""
    value = artin_tate_value(cand, cycle_type, p, rho, m)
    return (-1) ** (rho - 1) * square_class(value)


@dataclass
class CombinedBound:
    upper: int
    witnesses: list[RankBoundAtPrime] = field(default_factory=list)
    incompatible: tuple[int, int] | None = None  # primes whose classes are disjoint

    def to_dict(self) -> dict:
        return {"upper": self.upper, "witnesses": [w.to_dict() for w in self.witnesses],
                "incompatible": list(self.incompatible) if self.incompatible else None}


def combine_primes(bounds: Iterable[RankBoundAtPrime]) -> CombinedBound:
    bounds = sorted(bounds, key=lambda b: (b.bound, b.p))
    if not bounds:
        raise ValueError("need at least one prime")
    top = bounds[0].bound
    witnesses = [b for b in bounds if b.bound == top]
    for a, b in combinations(witnesses, 2):
        if a.disc_classes and b.disc_classes and not (a.disc_classes & b.disc_classes):
            return CombinedBound(top - 1, witnesses, (a.p, b.p))
    return CombinedBound(top, witnesses)
