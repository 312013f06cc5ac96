"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

from __future__ import annotations

import time

import numpy as np
import pytest

from cfporecon.a5 import (
    ORBIT_SIZES,
    brute_force_a5_subgroups,
    build_no60_counterexample,
    comm,
    coset_pair_on_star30,
    find_a5_tuples,
    fixed_points,
    regular_on_star60,
    relisted,
    split_orbit_30,
    star,
    support_of,
    tuple_orbits,
)
from cfporecon.cfpo import from_spec, gen_star
from cfporecon.lemmas import A5_SUITE, FAIL, PASS, Settings, run_lemma
from cfporecon.perm import automorphism_group


@pytest.fixture
def report(capsys):
    def emit(i: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\ncriterion {i}: {'PASS' if ok else 'FAIL'} {detail}")
    return emit


def failing(rep) -> list[str]:
    return [c.name for c in rep.checks if c.status != PASS]


def test_criterion_1_star5_census(report):
    inst = gen_star(5, 0)
    G = automorphism_group(inst)
    t = time.perf_counter()
    census = find_a5_tuples(G, inst)
    elapsed = time.perf_counter() - t
    oracle = brute_force_a5_subgroups(G)
    found = {frozenset(tuple(map(int, r)) for r in census.subgroups[0].base.entries)} if census.subgroups else set()
    ok = len(census.subgroups) == 1 and len(census) == 120 and found == oracle and elapsed < 10
    report(1, ok, f"subgroups={len(census.subgroups)} listings={len(census)} oracle={len(oracle)} seconds={elapsed:.2f}")
    assert ok


@pytest.fixture(scope="module")
def suite_tuples():
    out = []
    for spec in A5_SUITE:
        inst = from_spec(spec)
        census = find_a5_tuples(automorphism_group(inst, enumerate_elements=False), inst)
        for sub in census.subgroups:
            for k in range(census.listings_per_subgroup):
                out.append((spec, relisted(sub.base, k) if k else sub.base))
    return out


def test_criterion_2_fixed_points(report, suite_tuples):
    bad = [spec for spec, t in suite_tuples if not fixed_points(t)]
    report(2, not bad, f"tuples={len(suite_tuples)} without fixed point={len(bad)}")
    assert not bad


def test_criterion_3_orbit_sizes(report, suite_tuples):
    bad = [spec for spec, t in suite_tuples if not {len(o) for o in tuple_orbits(t)} <= ORBIT_SIZES]
    report(3, not bad, f"tuples={len(suite_tuples)} with inadmissible orbit={len(bad)}")
    assert not bad


def test_criterion_4_30_split(report):
    inst, f, (G, H) = coset_pair_on_star30()
    g, h = split_orbit_30(f, 1, inst)
    equal = star(g, h).entries == f.entries
    ok = (len(G), len(H)) == (12, 10) and comm(g, h) and bool(equal.all())
    report(4, ok, f"|G|={len(G)} |H|={len(H)} comm={comm(g, h)} equal entries={int(equal.all(axis=1).sum())}/60")
    assert ok


def test_criterion_5_no60(report):
    inst, g = regular_on_star60()
    h, x = build_no60_counterexample(g, inst)
    f = star(g, h)
    a, b, c = comm(g, h), x in support_of(g) and x in support_of(h), bool(np.all(f.entries[:, x] == x))
    report(5, a and b and c, f"comm={a} leaf {x} in both supports={b} leaf fixed by product={c}")
    assert a and b and c


def test_criterion_6_backend_agreement(report):
    rep = {}
    for name in ("indec", "disjbehaves", "FormalSubsetsEq", "SamePDBehaves", "RepPoint", "EqRepPoint"):
        r = run_lemma(name)
        rep.update({c.name: c for c in r.checks if "backends agree" in c.name})
    total = sum(c.detail["discrepancies"] for c in rep.values())
    bad = {k: c.detail["discrepancies"] for k, c in rep.items() if c.status != PASS}
    report(6, not bad, f"checks={len(rep)} discrepancies={total} failing={bad}")
    assert rep and not bad


def test_criterion_7_tautology_equivalence(report):
    r = run_lemma("FormalSubsetsEq")
    stated = [c for c in r.checks if "as stated" in c.name]
    contra = [c for c in r.checks if "contrapositive" in c.name]
    n = sum(c.detail["evaluated"] for c in stated)
    miss = sum(c.detail["mismatches"] for c in stated)
    miss_c = sum(c.detail["mismatches"] for c in contra)
    ok = bool(stated) and miss == 0
    report(7, ok, f"evaluated={n} stated-form mismatches={miss} contrapositive-form mismatches={miss_c}")
    assert ok


def test_criterion_8_betweenness_interpretation(report):
    s = Settings(instances=("alt:5,5,2", "chain-dec:5,5,3,2"))
    reps = [run_lemma(name, s) for name in ("Temp-lemmas", "Related", "B")]
    bad = [n for r in reps for n in failing(r)]
    vacuous = sorted({c.name.split(":")[0] for r in reps for c in r.checks if c.detail.get("vacuous")})
    report(8, not bad, f"checks={sum(len(r.checks) for r in reps)} failing={bad} vacuous on={vacuous}")
    assert not bad


def test_criterion_9_faithfulness(report):
    r = run_lemma("faithful")
    bad = failing(r)
    report(9, not bad, f"instances={len(r.checks)} failing={bad}")
    assert not bad


def test_criterion_10_order_recovery(report):
    r = run_lemma("orderOmega")
    cumulative = [c for c in r.checks if "printed step" not in c.name]
    printed = {c.name.split(" ")[0]: c.detail["false_negative"] for c in r.checks if "printed step" in c.name}
    on_alt = [c for c in cumulative if c.name.startswith("alt:5,5,2")]
    bad = [c.name for c in cumulative if c.status != PASS]
    ok = bool(on_alt) and not bad
    report(10, ok, f"cumulative-step checks={len(cumulative)} failing={bad}; printed-step false negatives={printed}")
    assert ok


def test_criterion_11_commuting_pair_properties(report):
    reps = [run_lemma(name) for name in ("nocancellingorbits", "noflipping", "longorbits")]
    bad = {r.lemma: failing(r) for r in reps if r.status == FAIL}
    report(11, not bad, f"fixtures={[len(r.checks) for r in reps]} failing={bad}")
    assert not bad
