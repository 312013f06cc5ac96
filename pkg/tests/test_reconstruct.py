from __future__ import annotations

from functools import lru_cache

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from cfporecon.betweenness import compare_with_truth, truth_tables
from cfporecon.cfpo import from_spec
from cfporecon.groups import EnumeratedPermGroup, cyclic_table
from cfporecon.perm import automorphism_group
from cfporecon.reconstruct import (
    compare_up_to_iso,
    find_isomorphism,
    order_table,
    reconstruct_abstract,
    reconstruct_semi_abstract,
    reconstruction_report,
    report_to_json,
    representable_points,
)


@lru_cache(maxsize=None)
def semi(spec: str):
    inst = from_spec(spec)
    return inst, reconstruct_semi_abstract(inst)


def test_star5_and_abelian_tables_give_empty_structures():
    rec = reconstruct_abstract(EnumeratedPermGroup(automorphism_group(from_spec("star:5,0"))))
    assert rec.n_classes == 0
    assert compare_up_to_iso(rec, from_spec("star:5,0")).ok
    assert reconstruct_abstract(cyclic_table(12)).n_classes == 0


def test_double_star_classes_bounded_by_its_two_centres():
    rec = reconstruct_abstract(EnumeratedPermGroup(automorphism_group(from_spec("dstar:5"))))
    assert rec.n_classes <= 2


def test_alt_5_5_r_has_no_representable_points():
    for r in range(1, 4):
        assert representable_points(from_spec(f"alt:5,5,{r}")) == []
    assert len(representable_points(from_spec("alt:6,6,2"))) > 0


def test_ball_betweenness_matches_truth_and_is_isomorphic():
    inst, rec = semi("ball:6,6,2")
    assert rec.n_classes == len(representable_points(inst)) == 13
    cmp = compare_with_truth(rec.interpretation, truth_tables(inst, rec.points))
    assert all(v["mismatches"] == 0 for v in cmp.values())
    assert compare_up_to_iso(rec, inst, "betweenness").ok


def test_betweenness_symmetry_and_endpoints():
    _, rec = semi("ball:6,6,2")
    B, R = rec.betweenness, rec.relation("related")
    assert np.array_equal(B, B.transpose(0, 2, 1))
    n = rec.n_classes
    for x in range(n):
        for y in range(n):
            if R[x, y]:
                assert B[x, x, y] and B[y, x, y]


def test_order_iso_and_reversal():
    # ball:7,6,2 is not self-dual on its representable points, so the reversal is detectable
    inst, rec = semi("ball:7,6,2")
    pts = representable_points(inst)
    truth = order_table(inst, pts)
    assert compare_up_to_iso(rec, inst, "order", truth, pts).ok
    rev = compare_up_to_iso(rec, inst, "order", truth.T, pts)
    assert not rev.ok
    both = compare_up_to_iso(rec, inst, "order-or-reverse", truth.T, pts)
    assert both.ok and both.reversed


def test_semi_order_recovery_from_a_class_pair():
    inst, rec = semi("ball:6,6,2")
    truth = order_table(inst, list(rec.points))
    y1, y2 = map(int, np.argwhere(truth)[0])
    ev = rec.order_evaluator()
    assert np.array_equal(ev.levels(y1, y2, 6).order_iff(), truth)
    assert np.array_equal(ev.levels(y2, y1, 6).order_iff(), truth.T)


def test_report_is_deterministic():
    _, rec = semi("ball:6,6,2")
    a = report_to_json(reconstruction_report(rec))
    b = report_to_json(reconstruction_report(reconstruct_semi_abstract(from_spec("ball:6,6,2"))))
    assert a == b


@given(st.integers(1, 7).flatmap(lambda n: st.tuples(
    st.lists(st.booleans(), min_size=n * n, max_size=n * n),
    st.permutations(list(range(n))),
)))
def test_isomorphism_search_finds_a_relabelling(arg):
    bits, perm = arg
    n = len(perm)
    R = np.array(bits, dtype=bool).reshape(n, n)
    p = np.array(perm)
    S = np.zeros_like(R)
    S[np.ix_(p, p)] = R
    m = find_isomorphism([R], [S])
    assert m is not None
    assert np.array_equal(R, S[np.ix_(m, m)])
