from __future__ import annotations

from itertools import permutations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfporecon.a5 import natural_action, regular_on_star60, tuple_orbits
from cfporecon.cfpo import CfpoInstance, gen_star, gen_ball
from cfporecon.perm import (
    Perm,
    PermError,
    automorphism_group,
    brute_force_automorphisms,
    compose,
    conjugate,
    inverse,
    is_automorphism,
    orbits,
    restrict,
    support,
    support_tuple,
)
from strategies import trees


def perms(n: int):
    return st.permutations(list(range(n))).map(lambda p: Perm(tuple(p)))


@given(perms(7))
def test_identity_and_inverse(p):
    ident = Perm.identity(7)
    assert compose(p, ident) == p
    assert compose(p, inverse(p)) == ident
    assert conjugate(p, ident) == p


@given(perms(7), perms(7))
def test_conjugation_relabels_support(p, phi):
    assert support(conjugate(p, phi)) == frozenset(phi(x) for x in support(p))


@given(perms(6), perms(6), perms(6))
def test_composition_is_associative(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


def test_star5_products_match_direct_table():
    # leaves 1..5 of star-5; two 5-cycles, composed against an explicit dictionary product
    a = Perm.from_cycles(6, (1, 2, 3, 4, 5))
    b = Perm.from_cycles(6, (1, 3, 5, 2, 4))
    direct = {x: a.images[b.images[x]] for x in range(6)}
    assert compose(a, b).images == tuple(direct[x] for x in range(6))


def test_automorphism_group_orders():
    assert automorphism_group(gen_star(5, 0)).order == 120
    assert len(brute_force_automorphisms(gen_star(5, 0))) == 120
    chain = CfpoInstance((0, 1, 2), ((0, 1), (1, 2)))
    assert automorphism_group(chain).order == 1
    assert automorphism_group(gen_star(2, 2)).order == len(brute_force_automorphisms(gen_star(2, 2))) == 4


@given(trees(max_size=7))
def test_automorphism_group_matches_brute_force(inst):
    G = automorphism_group(inst)
    brute = {p.images for p in brute_force_automorphisms(inst)}
    assert G.order == len(brute)
    assert {tuple(map(int, r)) for r in G.elements} == brute


@given(trees(max_size=12))
def test_generators_are_automorphisms(inst):
    G = automorphism_group(inst, enumerate_elements=False)
    assert all(is_automorphism(g, inst) for g in G.generators)


def test_supports_and_orbits():
    assert support(Perm.identity(4)) == frozenset()
    assert support(Perm.from_cycles(6, (1, 2))) == frozenset({1, 2})
    nat = natural_action(6, [1, 2, 3, 4, 5])
    assert support_tuple(Perm.from_array(r) for r in nat.entries) == frozenset({1, 2, 3, 4, 5})
    assert orbits([Perm.identity(3)], 3) == [frozenset({0}), frozenset({1}), frozenset({2})]
    assert sorted(map(len, tuple_orbits(nat))) == [1, 5]
    _, reg = regular_on_star60()
    assert sorted(map(len, tuple_orbits(reg))) == [1, 60]


def test_conjugating_a_three_cycle():
    c = Perm.from_cycles(6, (1, 2, 3))
    t = Perm.from_cycles(6, (3, 4))
    assert conjugate(c, t) == Perm.from_cycles(6, (1, 2, 4))


def test_restrict_examples():
    inst = gen_star(5, 0)
    p = Perm.from_cycles(6, (1, 2))
    assert restrict(p, range(6)) == p
    assert restrict(p, []) == Perm.identity(6)
    assert restrict(p, [1, 2], inst) == p
    with pytest.raises(PermError):
        restrict(p, [1])


def test_enumeration_bound_flags_overflow():
    G = automorphism_group(gen_ball(3, 3, 2), bound=10)
    assert G.elements is None and G.overflow
    assert G.order > 10
