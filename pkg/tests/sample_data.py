"""Cached random-sample runs shared by the statistical acceptance checks."""

from __future__ import annotations

import os
from pathlib import Path

from k3picard.arith import primes_between
from k3picard.divisors import find_divisors
from k3picard.family import load_sample, random_sample, save_sample
from k3picard.pipeline import PrimePolicy, ResultStore, batch, determine_rank

CACHE = Path(os.environ.get("K3PICARD_RESULTS", Path(__file__).parent / ".cache"))

TREND_SEED, TREND_SIZE, TREND_PRIMES = 8, 100, primes_between(11, 47)
RANK_SEED, RANK_SIZE, RANK_POOL = 9, 50, 60
STRUCT_SEED, STRUCT_SIZE = 10, 30


def sample(seed: int, size: int):
    path = CACHE / f"sample-{seed}-{size}.json"
    if path.exists():
        return load_sample(path)
    vectors = random_sample(size, seed)
    CACHE.mkdir(parents=True, exist_ok=True)
    save_sample(vectors, path)
    return vectors


def store(seed: int, size: int) -> ResultStore:
    return ResultStore(CACHE / f"results-{seed}-{size}.jsonl")


def trend_records():
    vectors = sample(TREND_SEED, TREND_SIZE)
    st = store(TREND_SEED, TREND_SIZE)
    batch(vectors, TREND_PRIMES, st)
    keys = {tuple(v.c) for v in vectors}
    return [r for r in st if tuple(r.cv) in keys and r.p in TREND_PRIMES]


def rank_verdicts(cap: int = 103):
    """Verdicts for the first RANK_SIZE divisor-free surfaces of the rank pool, plus its store."""
    vectors = sample(RANK_SEED, RANK_POOL)
    st = store(RANK_SEED, RANK_SIZE)
    verdicts = []
    for v in vectors:
        if len(verdicts) == RANK_SIZE:
            break
        search = find_divisors(v)
        if search.lower_bound != 15:
            continue
        lower = (15, search.disc_class, {})
        verdicts.append(determine_rank(v, PrimePolicy(cap=cap), st, lower=lower))
    return vectors, verdicts, st


def isomorphy_records(cap: int = 61):
    vectors = sample(RANK_SEED, RANK_SIZE)
    st = store(RANK_SEED, RANK_SIZE)
    batch(vectors, primes_between(5, cap), st)
    keys = {tuple(v.c) for v in vectors}
    return vectors, [r for r in st if tuple(r.cv) in keys and r.p <= cap]
