from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings

from cfporecon.cfpo import CfpoInstance, from_spec
from cfporecon.order import (
    OrderEvaluator,
    alphas,
    lessdot,
    order0_positive_profiles,
    order0_table,
    order0_tensor,
)
from cfporecon.reconstruct import dense_truth
from strategies import trees


def evaluator(inst, **kw):
    t = dense_truth(inst)
    return t, OrderEvaluator(t.betweenness(True), t.betweenness(False), t.comparable, **kw)


def test_order0_profile_table():
    assert len(order0_table()) == 31
    assert len(order0_positive_profiles()) == 13


def test_order0_parameter_pair_relates_itself():
    t, ev = evaluator(from_spec("chain:4"))
    for y1, y2 in np.argwhere(t.less):
        assert ev.order0(y1, y2, y1, y2)
        assert not ev.order0(y2, y1, y1, y2)


def test_alpha2_fires_when_x2_lies_between_x1_and_y2():
    # x1 = 0 < x2 = 1 < y2 = 2 on a chain, y1 = 3 hangs below y2 on another branch, so not all four are Related
    inst = CfpoInstance((0, 1, 2, 3), ((0, 1), (1, 2), (3, 2)))
    t, ev = evaluator(inst)
    al = alphas(ev.bx, ev.related, 0, 1, 3, 2)
    assert al["alpha2"]
    assert not ev.order0(0, 1, 3, 2)
    assert ev.order1(0, 1, 3, 2)


def test_irreflexive_mask():
    t, ev = evaluator(from_spec("chain:3"))
    raw = OrderEvaluator(t.betweenness(True), t.betweenness(False), t.comparable, irreflexive=False)
    assert raw.order1(1, 1, 0, 2)  # endpoint-inclusive B makes α2 fire on x1 = x2
    assert not ev.order1(1, 1, 0, 2)


def test_levels_reach_three_and_are_exclusive():
    t, ev = evaluator(from_spec("alt:2,2,2"))
    deepest = 0
    for y1, y2 in np.argwhere(t.less):
        lv = ev.levels(int(y1), int(y2), int(t.dist.max()))
        first = lv.first_level()
        assert (np.sum(lv.levels, axis=0) <= 1).all()
        assert lv.stabilized
        deepest = max(deepest, int(first.max()))
    assert deepest >= 3


@pytest.mark.parametrize("spec", ["ball:2,2,2", "alt:2,2,2", "ball:2,1,3", "chain-dec:1,1,3,2"])
def test_order0_sound_on_ground_truth(spec):
    t, _ = evaluator(from_spec(spec))
    O0 = order0_tensor(t.betweenness(True), t.comparable)
    agree = t.less[:, :, None, None] == t.less[None, None, :, :]
    assert not np.any(O0 & ~agree)


@settings(max_examples=40)
@given(trees(min_size=2, max_size=12))
def test_order_recovered_from_any_comparable_pair(inst):
    t, ev = evaluator(inst)
    for y1, y2 in np.argwhere(t.less):
        got = ev.levels(int(y1), int(y2), len(t.points)).order_iff()
        assert np.array_equal(got, t.less)
        back = ev.levels(int(y2), int(y1), len(t.points)).order_iff()
        assert np.array_equal(back, t.less.T)


@settings(max_examples=40)
@given(trees(min_size=2, max_size=12))
def test_printed_step_reading_is_sound(inst):
    t, ev = evaluator(inst, step="printed")
    for y1, y2 in np.argwhere(t.less):
        for L in ev.levels(int(y1), int(y2), len(t.points)).levels:
            assert not np.any(L & ~t.less)


def test_printed_step_reading_misses_a_pair():
    # y1 = 1 < y2 = 5 on 0 < 1 < 5; x1 = 2 < x2 = 8 on 0 < 2 < 8; no level of the printed recursion reaches (2, 8)
    inst = CfpoInstance(tuple(range(9)), ((0, 1), (1, 5), (0, 2), (2, 8), (0, 3), (3, 4), (6, 1), (7, 2)))
    t, printed = evaluator(inst, step="printed")
    _, cumulative = evaluator(inst)
    i, j, a, b = (t.points.index(p) for p in (2, 8, 1, 5))
    assert t.less[i, j]
    assert not printed.levels(a, b, 8).order_iff()[i, j]
    assert cumulative.levels(a, b, 8).order_iff()[i, j]


def test_lessdot_is_reflexive_and_needs_relatedness():
    # on true relations of ball:7,6,2 with n = 6, every class satisfies x ⋖ x
    inst = from_spec("ball:7,6,2")
    centre = 0
    pts = [centre] + list(inst.upper[centre]) + list(inst.lower[centre])
    t = dense_truth(inst, pts)
    pb = t.on_path() & ~np.eye(len(pts), dtype=bool)[:, :, None] & ~np.eye(len(pts), dtype=bool)[:, None, :]
    got, _ = lessdot(t.comparable, pb, 6)
    assert got[0, 0]
    assert not np.any(got & ~t.comparable)
