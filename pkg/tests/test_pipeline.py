import itertools
import json

import pytest

from k3picard.errors import ConsistencyError
from k3picard.pipeline import (PrimePolicy, PrimeRecord, ResultStore, analyze, batch, bound16_fractions,
                               determine_rank, disc_histogram, distinguish_surfaces, progress_table, report)
from k3picard.tate import combine_primes


def _rec(cv, p, us, classes, good=True):
    return PrimeRecord(list(cv), p, 3, good=good, us=list(us), bound=15 + max(us) if good else None,
                       disc_classes=sorted(set(c for c in classes if c is not None)),
                       candidate_classes=list(classes), ambiguous=len(us) > 1)


def test_record_round_trip(examples, tmp_path):
    rec = analyze(examples["S5"], 23)
    assert rec.good and rec.bound == 18 and rec.disc_classes == [-3]
    again = PrimeRecord.from_json(rec.to_json())
    assert again == rec
    assert json.loads(rec.to_json())["cv"] == [1, 1, 1, -1, -13, 0, 11, -11]


def test_bad_prime_recorded(examples):
    rec = analyze(examples["S2"], 23)
    assert not rec.good and rec.bound is None and rec.reason


def test_resume_computes_nothing(examples, tmp_path):
    path = tmp_path / "r.jsonl"
    vectors = [examples["S5"], examples["S1"]]
    assert batch(vectors, [5, 7], ResultStore(path)) == 4
    lines = path.read_text().splitlines()
    store = ResultStore(path)
    assert len(store) == 4
    assert batch(vectors, [5, 7], store) == 0
    assert path.read_text().splitlines() == lines
    assert batch(vectors, [5, 7, 11], store) == 2


def test_determine_rank_s5(examples, tmp_path):
    store = ResultStore(tmp_path / "r.jsonl")
    v = determine_rank(examples["S5"], PrimePolicy(cap=30), store)
    assert v.resolved and v.rank == 18 and v.lattice_class == -3
    assert v.primes_used[-1] == 23
    assert json.loads(json.dumps(v.to_dict()))["resolved"]


def test_combination_independent_of_order(examples, tmp_path):
    store = ResultStore(tmp_path / "r.jsonl")
    bounds = [r.rank_bound() for p in (5, 7, 11, 13) if (r := analyze(examples["S1"], p, 3, store)).good]
    results = {(c.upper, c.incompatible is None) for perm in itertools.permutations(bounds)
               for c in [combine_primes(list(perm))]}
    assert len(results) == 1


def test_upper_below_lower_raises(examples):
    with pytest.raises(ConsistencyError):
        determine_rank(examples["S5"], PrimePolicy(start=23, cap=23), lower=(19, None, {}))


def test_distinguish_trivial_cases():
    a, b = (1,) * 8, (2,) * 8
    w = distinguish_surfaces([_rec(a, 7, [1], [-1]), _rec(b, 7, [1], [-2])])
    assert w[(a, b)] == 7
    w = distinguish_surfaces([_rec(a, 7, [1], [-1]), _rec(a + (0,), 7, [1], [-1])])
    assert list(w.values()) == [None]
    assert distinguish_surfaces([_rec(a, 7, [1], [-1]), _rec(a, 7, [1], [-1])]) == {}


def test_distinguish_with_ambiguity():
    a, b = (1,) * 8, (2,) * 8
    # one candidate of a agrees with b, so p = 7 proves nothing
    recs = [_rec(a, 7, [1, 1], [-1, -2]), _rec(b, 7, [1], [-2])]
    assert distinguish_surfaces(recs)[(a, b)] is None
    recs += [_rec(a, 11, [1, 3], [-1, -5]), _rec(b, 11, [1], [-2])]
    assert distinguish_surfaces(recs)[(a, b)] == 11


def test_bad_primes_never_witness():
    a, b = (1,) * 8, (2,) * 8
    assert distinguish_surfaces([_rec(a, 7, [1], [-1]), _rec(b, 7, [1], [-2], good=False)]) == {}


def test_reports():
    assert report([]).startswith("prime")
    assert report([], "csv").strip() == "p,good,bound16"
    a, b = (1,) * 8, (2,) * 8
    recs = [_rec(a, 5, [3], [7]), _rec(a, 7, [1], [-1]), _rec(b, 5, [1], [-2]), _rec(b, 7, [1], [-1])]
    assert bound16_fractions(recs) == [(5, 2, 1), (7, 2, 2)]
    assert disc_histogram(recs) == {-1: 1, -2: 1}
    assert progress_table(recs) == [(7, 1, 1)]
    assert progress_table(recs, {a: 16}) == [(7, 2, 0)]
    text = report(recs)
    assert "bound16" in text and "class" in text
    with pytest.raises(ValueError):
        report(recs, "xml")
