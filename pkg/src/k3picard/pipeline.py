"""Per-prime analysis, rank verdicts, persistence and reporting."""

from __future__ import annotations

import csv
import fcntl
import io
import json
import logging
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .arith import primes_between
from .count import compute_counts, extend_counts
from .divisors import find_divisors
from .errors import BadReduction, BothRejected, ConsistencyError, NewtonNonIntegral, NoCandidateSurvives
from .family import as_cv, reduce_mod_p
from .tate import (BASE_RANK, bound_from_u, RankBoundAtPrime, artin_tate_disc_class, combine_primes,
                   rank_upper_bound, tate_class_count)
from .weil import psi_from_traces, resolve_with_t4

log = logging.getLogger(__name__)

T4_CAP = 23  # F_{p^4} counts only for p <= T4_CAP


@dataclass
class PrimeRecord:
    cv: list[int]
    p: int
    max_k: int
    version: str = __version__
    good: bool = True
    reason: str = ""
    cycle_type: list[int] = field(default_factory=list)
    Nv: list[int] = field(default_factory=list)
    traces: list[int] = field(default_factory=list)
    resolution: dict | None = None
    us: list[int] = field(default_factory=list)
    bound: int | None = None
    disc_classes: list[int] = field(default_factory=list)
    candidate_classes: list[int | None] = field(default_factory=list)
    ambiguous: bool = False
    method: str = "auto"
    timings_ms: dict = field(default_factory=dict)

    @property
    def key(self) -> tuple:
        return (tuple(self.cv), self.p, self.max_k, self.version)

    def rank_bound(self) -> RankBoundAtPrime | None:
        if not self.good or self.bound is None:
            return None
        return RankBoundAtPrime(self.p, self.bound, frozenset(self.disc_classes), self.ambiguous)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "PrimeRecord":
        return cls(**json.loads(line))


def _bad(cv, p, max_k, reason, **extra) -> PrimeRecord:
    return PrimeRecord(list(cv), p, max_k, good=False, reason=reason, **extra)


def analyze_surface_at_prime(cv, p: int, max_k: int = 3, method: str = "auto",
                             t4_cap: int = T4_CAP) -> PrimeRecord:
    """Counts, psi and the rank bound at one prime.

    Bad reduction is recorded rather than raised. Non-integral Newton
    coefficients, a psi without unit-circle roots, or a t4 contradicting both
    candidates also mark the prime bad: the traces then do not come from a
    K3 resolution, which happens when the reduction acquires singularities
    beyond the 14 nodes over an extension field.
    """
    cv = as_cv(cv)
    timings = {}
    t0 = time.perf_counter()
    try:
        surface = reduce_mod_p(cv, p)
    except BadReduction as exc:
        return _bad(cv.c, p, max_k, exc.reason)
    timings["reduce"] = (time.perf_counter() - t0) * 1000
    ct = surface.cycle_type
    t0 = time.perf_counter()
    counts = compute_counts(surface, max_k, method)
    timings["count"] = (time.perf_counter() - t0) * 1000
    extra = dict(cycle_type=ct, Nv=counts.Nv, traces=counts.traces, method=method, timings_ms=timings)
    t0 = time.perf_counter()
    try:
        res = psi_from_traces(counts.traces, ct, p)
    except (NewtonNonIntegral, NoCandidateSurvives) as exc:
        return _bad(cv.c, p, max_k, f"{type(exc).__name__}: {exc}", **extra)
    if not res.resolved and (max_k >= 4 or p <= t4_cap):
        if max_k < 4:
            t1 = time.perf_counter()
            counts = extend_counts(surface, counts, 4, method)
            timings["count4"] = (time.perf_counter() - t1) * 1000
            extra.update(Nv=counts.Nv, traces=counts.traces)
        try:
            res = resolve_with_t4(res, counts.traces[3], ct, p)
        except BothRejected as exc:
            return _bad(cv.c, p, max_k, f"BothRejected: {exc}", **extra)
    us = [tate_class_count(c, p) for c in res.candidates]
    classes = [artin_tate_disc_class(c, ct, p, BASE_RANK + u) for c, u in zip(res.candidates, us)]
    rb = rank_upper_bound(us, p, classes)
    timings["weil"] = (time.perf_counter() - t0) * 1000
    return PrimeRecord(list(cv.c), p, max_k, good=True, resolution=res.to_dict(), us=us, bound=rb.bound,
                       disc_classes=sorted(rb.disc_classes), candidate_classes=classes,
                       ambiguous=rb.ambiguous, **extra)


# -- persistence --

class ResultStore:
    """Append-only JSONL file of PrimeRecords keyed by (cv, p, maxK, version)."""

    def __init__(self, path: str | Path | None):
        self.path = Path(path) if path else None
        self.records: dict[tuple, PrimeRecord] = {}
        if self.path and self.path.exists():
            with open(self.path) as fh:
                for line in fh:
                    if line.strip():
                        rec = PrimeRecord.from_json(line)
                        self.records[rec.key] = rec

    def get(self, cv, p: int, max_k: int) -> PrimeRecord | None:
        return self.records.get((tuple(as_cv(cv).c), p, max_k, __version__))

    def put(self, rec: PrimeRecord) -> None:
        self.records[rec.key] = rec
        if self.path is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            fh.write(rec.to_json() + "\n")
            fcntl.flock(fh, fcntl.LOCK_UN)

    def for_surface(self, cv) -> list[PrimeRecord]:
        c = tuple(as_cv(cv).c)
        return sorted((r for r in self.records.values() if tuple(r.cv) == c), key=lambda r: r.p)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records.values())


def analyze(cv, p: int, max_k: int = 3, store: ResultStore | None = None, method: str = "auto") -> PrimeRecord:
    if store is not None:
        rec = store.get(cv, p, max_k)
        if rec is not None:
            return rec
    rec = analyze_surface_at_prime(cv, p, max_k, method)
    if store is not None:
        store.put(rec)
    return rec


def _job(args) -> PrimeRecord:
    cv, p, max_k, method = args
    return analyze_surface_at_prime(cv, p, max_k, method)


def batch(vectors: Sequence, primes: Iterable[int], store: ResultStore, max_k: int = 3, jobs: int = 1,
          method: str = "auto") -> int:
    """Analyze every (surface, prime) pair missing from ``store``; returns the number computed."""
    todo = [(list(as_cv(cv).c), p, max_k, method) for p in primes for cv in vectors
            if store.get(cv, p, max_k) is None]
    if jobs > 1:
        from multiprocessing import Pool
        with Pool(jobs) as pool:
            for rec in pool.imap_unordered(_job, todo):
                store.put(rec)
    else:
        for args in todo:
            store.put(_job(args))
    return len(todo)


# -- verdicts --

@dataclass
class PrimePolicy:
    start: int = 5
    cap: int = 103
    max_k: int = 3

    def primes(self) -> list[int]:
        return primes_between(self.start, self.cap)


@dataclass
class SurfaceVerdict:
    cv: list[int]
    lower: int
    upper: int | None
    rank: int | None
    lattice_class: int | None
    witnesses: list[dict] = field(default_factory=list)
    incompatible: list[int] | None = None
    primes_used: list[int] = field(default_factory=list)
    bad_primes: list[int] = field(default_factory=list)
    divisors: dict = field(default_factory=dict)

    @property
    def resolved(self) -> bool:
        return self.rank is not None

    def to_dict(self) -> dict:
        return asdict(self) | {"resolved": self.resolved}


def lower_bound_data(cv) -> tuple[int, int | None, dict]:
    search = find_divisors(cv)
    gram = search.gram
    summary = {"lines": [sorted(l.nodes) for l in search.lines],
               "planes": [{"kind": p.kind, "nodes": sorted(p.nodes)} for p in search.planes],
               "gram": [[str(x) for x in row] for row in gram]}
    return search.lower_bound, search.disc_class, summary


def determine_rank(cv, policy: PrimePolicy | None = None, store: ResultStore | None = None,
                   lower: tuple[int, int | None, dict] | None = None) -> SurfaceVerdict:
    """Raise the upper bound prime by prime until it meets the divisor lower bound."""
    policy = policy or PrimePolicy()
    cv = as_cv(cv)
    low, lclass, summary = lower or lower_bound_data(cv)
    bounds: list[RankBoundAtPrime] = []
    used, bad = [], []
    combined = None
    for p in policy.primes():
        rec = analyze(cv, p, policy.max_k, store)
        used.append(p)
        rb = rec.rank_bound()
        if rb is None:
            bad.append(p)
            continue
        bounds.append(rb)
        combined = combine_primes(bounds)
        if combined.upper < low:
            raise ConsistencyError(f"upper bound {combined.upper} below the divisor bound {low} for {cv}")
        if combined.upper == low:
            break
    verdict = SurfaceVerdict(list(cv.c), low, combined.upper if combined else None, None, lclass,
                             primes_used=used, bad_primes=bad, divisors=summary)
    if combined is None:
        return verdict
    verdict.witnesses = [w.to_dict() for w in combined.witnesses]
    verdict.incompatible = list(combined.incompatible) if combined.incompatible else None
    if combined.upper == low:
        verdict.rank = low
        # a witness at bound rho sees a finite-index image of Pic
        if lclass is not None and low > BASE_RANK:
            for w in combined.witnesses:
                if w.bound == low and w.disc_classes and lclass not in w.disc_classes:
                    raise ConsistencyError(f"lattice class {lclass} not among {sorted(w.disc_classes)} at p={w.p}")
    return verdict


def first_bound_prime(records: Sequence[PrimeRecord], target: int) -> int | None:
    """The prime at which the combined upper bound first reaches ``target``."""
    bounds = []
    for rec in sorted(records, key=lambda r: r.p):
        rb = rec.rank_bound()
        if rb is None:
            continue
        bounds.append(rb)
        if combine_primes(bounds).upper <= target:
            return rec.p
    return None


def signatures(rec: PrimeRecord) -> set[tuple[int, int | None]]:
    """(rank bound, class) for each surviving sign candidate."""
    return {(bound_from_u(u), c) for u, c in zip(rec.us, rec.candidate_classes)}


def _differ(ra: PrimeRecord, rb: PrimeRecord) -> bool:
    # every combination of candidates must differ, so the true pair does too
    for ba, ca in signatures(ra):
        for bb, cb in signatures(rb):
            if ba == bb and (ca is None or cb is None or ca == cb):
                return False
    return True


def distinguish_surfaces(records: Iterable[PrimeRecord]) -> dict[tuple[tuple, tuple], int | None]:
    """For each pair of surfaces, a common good prime where rank bound or class differs."""
    by_cv: dict[tuple, dict[int, PrimeRecord]] = {}
    for rec in records:
        if rec.good and rec.bound is not None and rec.candidate_classes:
            by_cv.setdefault(tuple(rec.cv), {})[rec.p] = rec
    out = {}
    for a, b in combinations(sorted(by_cv), 2):
        out[(a, b)] = next((p for p in sorted(set(by_cv[a]) & set(by_cv[b]))
                            if _differ(by_cv[a][p], by_cv[b][p])), None)
    return out


# -- reports --

def progress_table(records: Iterable[PrimeRecord], targets: dict[tuple, int] | None = None) -> list[tuple[int, int, int]]:
    """(prime, #finished at that prime, #left) for surfaces grouped by cv."""
    by_cv: dict[tuple, list[PrimeRecord]] = {}
    for rec in records:
        by_cv.setdefault(tuple(rec.cv), []).append(rec)
    if not by_cv:
        return []
    targets = targets or {}
    finished = Counter()
    for cv, recs in by_cv.items():
        p = first_bound_prime(recs, targets.get(cv, BASE_RANK))
        if p is not None:
            finished[p] += 1
    left = len(by_cv)
    rows = []
    for p in sorted({r.p for recs in by_cv.values() for r in recs}):
        if finished[p]:
            left -= finished[p]
            rows.append((p, finished[p], left))
    return rows


def bound16_fractions(records: Iterable[PrimeRecord]) -> list[tuple[int, int, int]]:
    """(p, #good reduction, #good with bound 16) per prime."""
    good, b16 = Counter(), Counter()
    for rec in records:
        if rec.good and rec.bound is not None:
            good[rec.p] += 1
            b16[rec.p] += rec.bound == 16
    return [(p, good[p], b16[p]) for p in sorted(good)]


def disc_histogram(records: Iterable[PrimeRecord]) -> Counter:
    """Per surface, the class at its smallest unambiguous bound-16 prime."""
    first: dict[tuple, PrimeRecord] = {}
    for rec in sorted(records, key=lambda r: r.p):
        if rec.good and rec.bound == 16 and len(rec.disc_classes) == 1:
            first.setdefault(tuple(rec.cv), rec)
    return Counter(r.disc_classes[0] for r in first.values())


def report(records: Iterable[PrimeRecord], fmt: str = "table", targets: dict | None = None) -> str:
    records = list(records)
    progress = progress_table(records, targets)
    fractions = bound16_fractions(records)
    hist = disc_histogram(records)
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf)
        w.writerow(["p", "good", "bound16"])
        w.writerows(fractions)
        return buf.getvalue()
    if fmt != "table":
        raise ValueError(f"unknown report format {fmt!r}")
    buf.write("prime  finished  left\n")
    half = (len(progress) + 1) // 2
    left_col, right_col = progress[:half], progress[half:]
    for i in range(half):
        row = "%5d %9d %5d" % left_col[i]
        if i < len(right_col):
            row += "   |%5d %9d %5d" % right_col[i]
        buf.write(row + "\n")
    buf.write("\np  good  bound16\n")
    for p, g, b in fractions:
        buf.write(f"{p:3d} {g:5d} {b:8d}\n")
    buf.write("\nclass  count\n")
    for cls, n in hist.most_common():
        buf.write(f"{cls:5d} {n:6d}\n")
    return buf.getvalue()
