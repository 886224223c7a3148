"""Command line interface: sample, analyze, batch, rank, report."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .arith import primes_between
from .errors import ConsistencyError
from .family import CoefficientVector, load_sample, random_sample, save_sample
from .pipeline import PrimePolicy, ResultStore, analyze, batch, determine_rank, report

RESULTS_ENV = "K3PICARD_RESULTS"


def results_dir() -> Path:
    return Path(os.environ.get(RESULTS_ENV, "."))


def _resolve(path: str | None, default: str) -> Path:
    p = Path(path or default)
    return p if p.is_absolute() else results_dir() / p


def parse_primes(text: str) -> list[int]:
    """'5..50' or '23,31' or a single prime."""
    if ".." in text:
        lo, hi = text.split("..")
        return primes_between(int(lo), int(hi))
    return [int(x) for x in text.split(",") if x]


def _coeffs(text: str) -> CoefficientVector:
    return CoefficientVector.parse(text)


def cmd_sample(args) -> int:
    vectors = random_sample(args.count, args.seed, args.bound)
    out = _resolve(args.out, "sample.json")
    save_sample(vectors, out)
    print(f"wrote {len(vectors)} vectors to {out}")
    return 0


def cmd_analyze(args) -> int:
    store = ResultStore(_resolve(args.out, "results.jsonl"))
    cv = _coeffs(args.coeffs)
    for p in parse_primes(args.primes):
        rec = analyze(cv, p, args.max_ext, store, args.method)
        if rec.good:
            print(f"p={p:3d} bound={rec.bound} classes={rec.disc_classes} cycle={rec.cycle_type}"
                  f"{' ambiguous' if rec.ambiguous else ''}")
        else:
            print(f"p={p:3d} bad reduction: {rec.reason}")
    return 0


def cmd_batch(args) -> int:
    path = _resolve(args.out, "results.jsonl")
    if path.exists() and not args.resume:
        print(f"{path} exists; pass --resume to extend it", file=sys.stderr)
        return 2
    store = ResultStore(path)
    vectors = load_sample(_resolve(args.sample, "sample.json"))
    n = batch(vectors, parse_primes(args.primes), store, args.max_ext, args.jobs, args.method)
    print(f"computed {n} new records; {len(store)} in {path}")
    return 0


def cmd_rank(args) -> int:
    store = ResultStore(_resolve(args.out, "results.jsonl")) if args.out else None
    verdict = determine_rank(_coeffs(args.coeffs), PrimePolicy(cap=args.prime_cap, max_k=args.max_ext), store)
    print(json.dumps(verdict.to_dict(), indent=2))
    return 0


def cmd_report(args) -> int:
    store = ResultStore(_resolve(args.inp, "results.jsonl"))
    sys.stdout.write(report(store, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="k3picard", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="draw random admissible coefficient vectors")
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--bound", type=int, default=20)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    a = sub.add_parser("analyze", help="rank bounds of one surface at given primes")
    a.add_argument("--coeffs", required=True)
    a.add_argument("--primes", default="5..50")
    a.add_argument("--max-ext", type=int, default=3)
    a.add_argument("--method", default="auto")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("batch", help="analyze a sample over a prime range")
    b.add_argument("--sample")
    b.add_argument("--primes", default="5..50")
    b.add_argument("--max-ext", type=int, default=3)
    b.add_argument("--method", default="auto")
    b.add_argument("--resume", action="store_true")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out")
    b.set_defaults(func=cmd_batch)

    r = sub.add_parser("rank", help="determine the Picard rank of one surface")
    r.add_argument("--coeffs", required=True)
    r.add_argument("--prime-cap", type=int, default=103)
    r.add_argument("--max-ext", type=int, default=3)
    r.add_argument("--out")
    r.set_defaults(func=cmd_rank)

    rp = sub.add_parser("report", help="progress table, bound-16 CSV and class histogram")
    rp.add_argument("--in", dest="inp")
    rp.add_argument("--format", choices=("table", "csv"), default="table")
    rp.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except ConsistencyError as exc:
        print(f"consistency failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
