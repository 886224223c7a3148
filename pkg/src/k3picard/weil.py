"""Reconstruction of the degree-7 transcendental factor psi from Frobenius traces."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

from . import qpoly
from .errors import BothRejected, NewtonNonIntegral, NoCandidateSurvives

ROOT_TOL = 1e-6
DEGREE = 7


def fix_count(cycle_type: Sequence[int], k: int) -> int:
    """Fixed points of sigma^k on the 14 nodes; cycle_type lists one size per orbit."""
    return sum(d for d in cycle_type if k % d == 0)


def known_power_sums(cycle_type: Sequence[int], p: int, k: int) -> int:
    if sum(cycle_type) != 14:
        raise ValueError(f"cycle type {list(cycle_type)} does not cover 14 nodes")
    return p**k * (1 + fix_count(cycle_type, k))


def known_factor(cycle_type: Sequence[int], p: int) -> list[int]:
    """(T - p) prod (T^d - p^d), coefficients leading first."""
    poly = [1, -p]
    for d in cycle_type:
        factor = [1] + [0] * (d - 1) + [-(p**d)]
        out = [0] * (len(poly) + d)
        for i, a in enumerate(poly):
            for j, b in enumerate(factor):
                out[i + j] += a * b
        poly = out
    return poly


def power_sums(coeffs: Sequence, n: int) -> list:
    """s_1..s_n of the roots of the monic polynomial [1, c1, ..., cd] (Newton)."""
    c = list(coeffs[1:])
    d = len(c)
    s: list = []
    for k in range(1, n + 1):
        acc = k * c[k - 1] if k <= d else 0
        for i in range(1, min(k, d + 1)):
            acc += c[i - 1] * s[k - i - 1]
        s.append(-acc)
    return s


def coeffs_from_power_sums(s: Sequence, d: int) -> list:
    """Monic [1, c1, ..., cd] with the given power sums (exact rational)."""
    c: list = []
    for k in range(1, d + 1):
        acc = s[k - 1]
        for i in range(1, k):
            acc += c[i - 1] * s[k - i - 1]
        c.append(-Fraction(acc) / k)
    return [1] + c


@dataclass(frozen=True)
class PsiCandidate:
    coeffs: tuple[int, ...]  # [1, c1, ..., c7]
    sign: int

    def to_list(self) -> list[int]:
        return list(self.coeffs)

    def satisfies_functional_equation(self, p: int) -> bool:
        c = self.coeffs
        return all(c[DEGREE - i] == self.sign * p ** (DEGREE - 2 * i) * c[i] for i in range(4))


@dataclass
class SignResolution:
    status: str  # "resolved" or "ambiguous"
    candidates: list[PsiCandidate]
    rejected: list[PsiCandidate] = field(default_factory=list)

    @property
    def resolved(self) -> bool:
        return self.status == "resolved"

    def to_dict(self) -> dict:
        return {"status": self.status,
                "candidates": [{"sign": c.sign, "coeffs": c.to_list()} for c in self.candidates]}

    @classmethod
    def from_dict(cls, data: dict) -> "SignResolution":
        cands = [PsiCandidate(tuple(c["coeffs"]), c["sign"]) for c in data["candidates"]]
        return cls(data["status"], cands)


def mirror(c1: int, c2: int, c3: int, sign: int, p: int) -> PsiCandidate:
    low = [1, c1, c2, c3]
    high = [sign * p ** (DEGREE - 2 * i) * low[i] for i in range(3, -1, -1)]
    return PsiCandidate(tuple(low + high), sign)


def roots_on_circle(cand: PsiCandidate, p: int, tol: float = ROOT_TOL) -> bool:
    """All complex roots of psi(pT)/p^7 have modulus 1 within ``tol``.

    Roots are taken of the exact squarefree part, so repeated cyclotomic
    factors do not stall the iteration.
    """
    poly = qpoly.squarefree_part([Fraction(c, p**i) for i, c in enumerate(cand.coeffs)])
    if len(poly) == 1:
        return True
    with mpmath.workdps(50):
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in poly]
        roots = mpmath.polyroots(coeffs, maxsteps=500, extraprec=200)
        return all(abs(abs(r) - 1) <= tol for r in roots)


def _unknown_power_sums(traces: Sequence[int], cycle_type: Sequence[int], p: int) -> list[int]:
    return [t - known_power_sums(cycle_type, p, k) for k, t in enumerate(traces, start=1)]


def psi_from_traces(traces: Sequence[int], cycle_type: Sequence[int], p: int) -> SignResolution:
    if len(traces) < 3:
        raise ValueError("need traces t1, t2, t3")
    s1, s2, s3 = _unknown_power_sums(traces[:3], cycle_type, p)
    e1 = s1
    e2_num = e1 * s1 - s2
    if e2_num % 2:
        raise NewtonNonIntegral(f"e2 = {e2_num}/2 at p={p}")
    e2 = e2_num // 2
    e3_num = e2 * s1 - e1 * s2 + s3
    if e3_num % 3:
        raise NewtonNonIntegral(f"e3 = {e3_num}/3 at p={p}")
    e3 = e3_num // 3
    survivors, rejected = [], []
    for sign in (1, -1):
        cand = mirror(-e1, e2, -e3, sign, p)
        (survivors if roots_on_circle(cand, p) else rejected).append(cand)
    if not survivors:
        raise NoCandidateSurvives(f"neither sign gives roots of modulus {p}")
    status = "resolved" if len(survivors) == 1 else "ambiguous"
    return SignResolution(status, survivors, rejected)


def predicted_s4(cand: PsiCandidate) -> int:
    return power_sums(cand.coeffs, 4)[3]


def resolve_with_t4(resolution: SignResolution, t4: int, cycle_type: Sequence[int], p: int) -> SignResolution:
    s4 = t4 - known_power_sums(cycle_type, p, 4)
    keep = [c for c in resolution.candidates if predicted_s4(c) == s4]
    drop = [c for c in resolution.candidates if predicted_s4(c) != s4]
    if not keep:
        raise BothRejected(f"no candidate predicts s4 = {s4} at p={p}")
    status = "resolved" if len(keep) == 1 else "ambiguous"
    return SignResolution(status, keep, resolution.rejected + drop)
