"""Acceptance checks, one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``.
"""

import functools
import itertools
import time
from pathlib import Path

import pytest

from decset.dataset import binarize, parse_csv, resolve_consistency
from decset.enumerator import build_encoding, enumerate_terms
from decset.learner import learn, training_disagreements
from decset.oracle import all_irreducible_terms, min_cover_bruteforce
from decset.setcover import CoverMatrix, build_matrix, solve_exact

from synth import binary_map, bits, planted, random_binary, random_matrix

DATE = (Path(__file__).parent / "data" / "date.csv").read_text()
N_DATASETS = 200
_record = None


@pytest.fixture(autouse=True)
def _recorder(record_property):
    global _record
    _record = record_property
    yield
    _record = None


def report(key, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} criterion {key}: {detail}"
    if _record is not None:
        _record("acceptance", line)
    else:
        print(line, flush=True)
    assert ok, line


# -- shared runs -----------------------------------------------------------


@functools.lru_cache(maxsize=None)
def date():
    return binarize(parse_csv(DATE))


@functools.lru_cache(maxsize=None)
def dataset(i):
    return random_binary(1000 + i, max_k=8, max_m=32)


@functools.lru_cache(maxsize=None)
def enumeration(i, cls, sb):
    ds = dataset(i)
    sp = resolve_consistency(ds, cls)
    return sp, enumerate_terms(sp.positives, sp.negatives, ds.K, symmetry_breaking=sb, cls=cls)


@functools.lru_cache(maxsize=None)
def learned(i, objective, sb):
    ds = dataset(i)
    return learn(ds, binary_map(ds.K), objective=objective, symmetry_breaking=sb)[0]


def _lits(ts):
    return {t.literals for t in ts}


def _sorted_sizes(ts):
    sizes = [t.size for t in ts]
    return sizes == sorted(sizes)


# -- criteria --------------------------------------------------------------


def test_criterion_1_date_enumeration():
    t0 = time.perf_counter()
    data, _ = date()
    yes, no = resolve_consistency(data, 1), resolve_consistency(data, 0)
    off_yes = enumerate_terms(yes.positives, yes.negatives, 4, False)
    off_no = enumerate_terms(no.positives, no.negatives, 4, False)
    on_yes = enumerate_terms(yes.positives, yes.negatives, 4, True)
    on_no = enumerate_terms(no.positives, no.negatives, 4, True)
    dt = time.perf_counter() - t0
    ok = (_lits(off_yes) == {((1, 0), (3, 0)), ((1, 0), (2, 1)), ((0, 1), (3, 0)), ((0, 1), (2, 1))}
          and _lits(off_no) == {((3, 1),), ((2, 0),), ((1, 1),), ((0, 0),)}
          and (len(on_yes), len(on_no)) == (1, 2) and dt < 1.0)
    report("1", ok, f"T+ {len(off_yes)} terms, T- {len(off_no)} terms; with symmetry breaking "
                    f"{len(on_yes)} and {len(on_no)}; {dt:.3f}s")


def _date_models():
    data, bmap = date()
    return {obj: learn(data, bmap, objective=obj) for obj in ("rules", "literals")}


def test_criterion_2_date_cover_costs():
    t0 = time.perf_counter()
    models = _date_models()
    dt = time.perf_counter() - t0
    costs = {obj: (m.stats["per_class"]["Yes"]["cover_cost"], m.stats["per_class"]["No"]["cover_cost"])
             for obj, (m, _) in models.items()}
    ok = costs == {"rules": (1, 2), "literals": (2, 2)} and dt < 1.0
    report("2a", ok, f"(+, -) costs rules={costs['rules']} literals={costs['literals']}; {dt:.3f}s")


def test_criterion_2_date_equivalence():
    model, _ = _date_models()["literals"]
    target = {
        0: lambda f: f[3] == 1 or f[0] == 0,
        1: lambda f: f[3] == 0 and f[0] == 1,
    }
    bad = []
    for f in itertools.product((0, 1), repeat=4):
        for cls, phi in target.items():
            fires = any(r.term.agrees(f) for r in model.rules_for(cls))
            if fires != phi(f):
                bad.append((f, model.classes[cls]))
    report("2b", not bad, f"literals model vs reference DNFs: {len(bad)} disagreements over 16 inputs; "
                          f"learned {' ; '.join(model.render().splitlines())}")


def test_criterion_3_encoding_size():
    t0 = time.perf_counter()
    bad = 0
    for i in range(50):
        ds = random_binary(500 + i, max_k=10, max_m=40)
        sp = resolve_consistency(ds, 0)
        inst, _ = build_encoding(sp.positives, sp.negatives, ds.K)
        K, P, N = ds.K, len(sp.positives), len(sp.negatives)
        if (inst.nvars, len(inst.hard), len(inst.soft)) != (2 * K + P, K + N + P * (K + 1) + 1, 2 * K):
            bad += 1
    dt = time.perf_counter() - t0
    report("3", bad == 0 and dt < 10, f"{50 - bad}/50 encodings have the predicted size; {dt:.2f}s")


def test_criterion_4_enumeration_oracle():
    t0 = time.perf_counter()
    bad = 0
    for i in range(N_DATASETS):
        ds = dataset(i)
        for cls in (0, 1):
            sp, ts = enumeration(i, cls, False)
            if _lits(ts) != all_irreducible_terms(sp.positives, sp.negatives, ds.K):
                bad += 1
    dt = time.perf_counter() - t0
    report("4", bad == 0 and dt < 60, f"{2 * N_DATASETS - bad}/{2 * N_DATASETS} class splits match the oracle; {dt:.2f}s")


def test_criterion_5_cover_oracle():
    t0 = time.perf_counter()
    bad = 0
    for s in range(N_DATASETS):
        M, cols, sizes = random_matrix(2000 + s, max_cols=20, max_rows=12)
        m = CoverMatrix(M, cols, sizes)
        for obj in ("rules", "literals"):
            want = min_cover_bruteforce([bits(c) for c in cols], M, m.weights(obj))
            got = {b: solve_exact(m, obj, b).cost for b in ("bnb", "maxsat")}
            if got["bnb"] != want or got["maxsat"] != want:
                bad += 1
    dt = time.perf_counter() - t0
    report("5", bad == 0 and dt < 60, f"{2 * N_DATASETS - bad}/{2 * N_DATASETS} cover problems at the oracle optimum "
                                      f"on both backends; {dt:.2f}s")


def test_criterion_6_symmetry_breaking_preserves_optimum():
    t0 = time.perf_counter()
    bad = 0
    on_total = off_total = 0
    for i in range(N_DATASETS):
        for cls in (0, 1):
            _, off = enumeration(i, cls, False)
            _, on = enumeration(i, cls, True)
            on_total += len(on)
            off_total += len(off)
            if len(on) > len(off):
                bad += 1
                continue
            for obj in ("rules", "literals"):
                if solve_exact(build_matrix(on), obj).cost != solve_exact(build_matrix(off), obj).cost:
                    bad += 1
    dt = time.perf_counter() - t0
    report("6", bad == 0 and dt < 120, f"{bad} violations; terms enumerated {off_total} -> {on_total}; {dt:.2f}s")


def test_criterion_7_nondecreasing_sizes():
    data, _ = date()
    runs = []
    for cls in (0, 1):
        sp = resolve_consistency(data, cls)
        for sb in (False, True):
            runs.append(enumerate_terms(sp.positives, sp.negatives, 4, sb))
    for i in range(N_DATASETS):
        for cls in (0, 1):
            runs.append(enumeration(i, cls, False)[1])
    bad = sum(1 for ts in runs if not _sorted_sizes(ts))
    report("7", bad == 0, f"{len(runs) - bad}/{len(runs)} runs emit terms in nondecreasing size")


def test_criterion_8_objective_dominance():
    bad = 0
    for i in range(N_DATASETS):
        r = learned(i, "rules", True).stats
        l = learned(i, "literals", True).stats
        if not (l["literal_count"] <= r["literal_count"] and r["rule_count"] <= l["rule_count"]):
            bad += 1
    report("8", bad == 0, f"{N_DATASETS - bad}/{N_DATASETS} dataset pairs satisfy both inequalities")


def test_criterion_9_training_agreement():
    data, bmap = date()
    models = [(data, m) for m, _ in _date_models().values()]
    for i in range(N_DATASETS):
        for obj in ("rules", "literals"):
            models.append((dataset(i), learned(i, obj, True)))
    bad = sum(1 for d, m in models if training_disagreements(m, d))
    strays = sum(1 for d, m in models for v, _ in d.examples if m.predict(v).status != "class")
    report("9", bad == 0 and strays == 0, f"{len(models) - bad}/{len(models)} models agree with every training row")


def test_criterion_10_determinism():
    data, bmap = date()
    pairs = []
    for seed in (0, 5):
        for obj in ("rules", "literals"):
            pairs.append((learn(data, bmap, objective=obj, seed=seed)[0].dumps(),
                          learn(data, bmap, objective=obj, seed=seed)[0].dumps()))
    for i in range(0, N_DATASETS, 20):
        ds = dataset(i)
        pairs.append((learn(ds, binary_map(ds.K), seed=3)[0].dumps(), learn(ds, binary_map(ds.K), seed=3)[0].dumps()))
    same = sum(1 for a, b in pairs if a == b)
    report("10", same == len(pairs), f"{same}/{len(pairs)} repeated runs give byte-identical model JSON")


@pytest.mark.slow
def test_performance_smoke():
    data, bmap = planted(M=500, seed=7)
    assert data.K == 20
    t0 = time.perf_counter()
    try:
        model, rep = learn(data, bmap, timeout_s=300)
        detail = ", ".join(f"class {c.name}: {c.terms} terms" for c in rep.classes)
        ok = not training_disagreements(model, data)
    except TimeoutError as e:
        ok, detail = False, str(e)
    dt = time.perf_counter() - t0
    report("perf", ok and dt < 300, f"K=20 M=500 learn in {dt:.1f}s ({detail})")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
