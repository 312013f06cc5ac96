from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfporecon.cfpo import (
    DOWN,
    LOCAL_MAX,
    LOCAL_MIN,
    PASS_UP,
    UP,
    CfpoInstance,
    InstanceError,
    betweenness,
    comparable,
    cones,
    from_json,
    from_spec,
    gen_alternating_tree,
    gen_chain_decorated,
    gen_star,
    order_leq,
    path,
    path_between,
    ramification_orders,
    reverse_path,
    to_json,
    validate,
)
from cfporecon.reconstruct import dense_truth
from strategies import points_of, trees

CHAIN = CfpoInstance((0, 1, 2), ((0, 1), (1, 2)))  # a<b<c
VEE = CfpoInstance((0, 1, 2), ((2, 0), (2, 1)))  # x>z<y with z = 2


def test_validate_examples():
    assert validate(CHAIN) == []
    assert "multi-edge" in validate(CfpoInstance((0, 1), ((0, 1), (0, 1))))[0]
    assert "cycle" in validate(CfpoInstance((0, 1, 2, 3), ((0, 1), (0, 2), (1, 3), (2, 3))))[0]


def test_order_examples():
    assert order_leq(CHAIN, 0, 2)
    assert not order_leq(CHAIN, 2, 0)
    assert not comparable(VEE, 0, 1)


def test_path_examples():
    p = path(CHAIN, 0, 2)
    assert p.sequence == (0, 1, 2) and p.tag(1) == PASS_UP
    q = path(VEE, 0, 1)
    assert q.sequence == (0, 2, 1) and q.tag(2) == LOCAL_MIN
    assert path(CHAIN, 0, 0).sequence == (0,)


def test_betweenness_examples():
    assert betweenness(CHAIN, 1, 0, 2)
    assert not betweenness(VEE, 2, 0, 1)
    assert betweenness(CHAIN, 0, 0, 2)
    assert not betweenness(CHAIN, 0, 0, 2, strict=True)


def test_cones_examples():
    star5 = gen_star(5, 0)
    assert [c.members for c in cones(star5, 0, UP)] == [frozenset({i}) for i in range(1, 6)]
    assert cones(star5, 0, DOWN) == []
    assert [c.members for c in cones(CHAIN, 1, UP)] == [frozenset({2})]
    assert [c.members for c in cones(CHAIN, 1, DOWN)] == [frozenset({0})]


def test_ramification_examples():
    assert ramification_orders(gen_star(5, 0), 0) == (5, 0)
    assert ramification_orders(gen_alternating_tree(5, 5, 2), 0) == (5, 5)
    assert ramification_orders(gen_star(5, 0), 1) == (0, 1)
    assert ramification_orders(gen_alternating_tree(6, 5, 2), 0) == (6, 5)


def test_generator_sizes():
    assert len(gen_star(5, 0)) == 6 and len(gen_star(5, 0).edges) == 5
    assert len(gen_star(60, 0)) == 61
    assert len(gen_star(30, 0)) == 31
    assert len(gen_alternating_tree(5, 5, 0)) == 2


@pytest.mark.parametrize("r", range(0, 6))
def test_alt_1_1_closed_form(r):
    # each end of the base edge grows one new point per level
    inst = gen_alternating_tree(1, 1, r)
    assert len(inst) == 2 + 2 * r
    assert validate(inst) == []


def test_chain_decorated_has_monotone_chains():
    inst = gen_chain_decorated(1, 1, 3, 1)
    assert validate(inst) == []
    triples = [(a, b, c) for a in inst.points for b in inst.upper[a] for c in inst.upper[b]]
    assert triples
    a, b, c = triples[0]
    assert betweenness(inst, b, a, c)
    assert all(ramification_orders(inst, b) == (1, 1) for _, b, _ in triples)


def test_from_spec_errors():
    with pytest.raises(InstanceError):
        from_spec("star:0,0")
    with pytest.raises(InstanceError):
        from_spec("bogus:1")
    with pytest.raises(InstanceError):
        from_spec("alt:1,2")


@given(trees())
def test_generated_trees_are_valid_and_roundtrip(inst):
    assert validate(inst) == []
    assert from_json(to_json(inst)) == inst


@given(trees(min_size=3).flatmap(lambda t: st.tuples(st.just(t), points_of(t, 3))))
def test_order_is_a_partial_order(arg):
    inst, (x, y, z) = arg
    assert order_leq(inst, x, x)
    if order_leq(inst, x, y) and order_leq(inst, y, x):
        assert x == y
    if order_leq(inst, x, y) and order_leq(inst, y, z):
        assert order_leq(inst, x, z)


@given(trees(min_size=2).flatmap(lambda t: st.tuples(st.just(t), points_of(t, 3))))
def test_path_and_betweenness_symmetry(arg):
    inst, (x, y, z) = arg
    p = path(inst, x, y)
    assert p.sequence[0] == x and p.sequence[-1] == y
    assert reverse_path(p) == path(inst, y, x)
    assert betweenness(inst, z, x, y) == betweenness(inst, z, y, x)
    assert path_between(inst, z, x, y) == (z in p.interior)
    if comparable(inst, x, y):
        assert all(t not in (LOCAL_MAX, LOCAL_MIN) for t in p.turns)


@given(trees(min_size=2, max_size=10))
def test_dense_truth_matches_pointwise_oracles(inst):
    t = dense_truth(inst)
    pts = t.points
    for i, x in enumerate(pts):
        for j, y in enumerate(pts):
            assert t.leq[i, j] == order_leq(inst, x, y)
            for k, z in enumerate(pts):
                assert t.betweenness()[k, i, j] == betweenness(inst, z, x, y)
