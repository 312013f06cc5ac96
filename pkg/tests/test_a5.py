from __future__ import annotations

import time
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfporecon.a5 import (
    CANONICAL_WORDS,
    ORBIT_SIZES,
    A5Error,
    A5Tuple,
    a5_check,
    brute_force_a5_subgroups,
    build_no60_counterexample,
    canonical_a5,
    census_from_json,
    census_to_json,
    comm,
    conj_tuple,
    coset_pair_on_star30,
    count_model_automorphisms,
    derive_words,
    entrywise_inverse,
    extended_components,
    find_a5_tuples,
    fixed_points,
    listing_maps,
    natural_action,
    regular_on_star60,
    relisted,
    restrict_tuple,
    split_orbit_30,
    star,
    subgroups_of_model,
    support_of,
    table_digest,
    tuple_image,
    tuple_orbits,
    twin_star_action,
)
from cfporecon.cfpo import from_spec, gen_alternating_tree, gen_star
from cfporecon.perm import Perm, PermGroup, automorphism_group

# frozen so that any change to the listing convention is caught
TABLE_DIGEST = "2eca7a756670853be0cd338ffad7401a77f8feaa0d98c2ece37c4fe572b018b5"
NAT5 = natural_action(6, [1, 2, 3, 4, 5])


def test_canonical_words_regression():
    assert len(CANONICAL_WORDS) == 60 and CANONICAL_WORDS[:4] == ("", "a", "b", "B")
    assert sorted(derive_words(), key=lambda w: (len(w), w)) == sorted(CANONICAL_WORDS, key=lambda w: (len(w), w))
    assert table_digest() == TABLE_DIGEST


def test_model_orders_and_identity():
    m = canonical_a5()
    assert Counter(m.orders.tolist()) == {1: 1, 2: 15, 3: 20, 5: 24}
    assert np.array_equal(m.table[0], np.arange(60))
    assert {len(s) for s in subgroups_of_model()} == {1, 2, 3, 4, 5, 6, 10, 12, 60}


def test_listings_are_the_model_automorphisms():
    assert len(listing_maps()) == count_model_automorphisms() == 120
    assert np.array_equal(listing_maps()[0], np.arange(60))


def test_a5_check_examples():
    assert not a5_check(A5Tuple(np.tile(np.arange(6), (60, 1))))
    assert a5_check(NAT5)
    swapped = NAT5.entries.copy()
    swapped[[1, 2]] = swapped[[2, 1]]
    assert not a5_check(A5Tuple(swapped))


@given(st.integers(0, 119))
def test_relisting_preserves_the_diagram(k):
    assert a5_check(relisted(NAT5, k))
    assert support_of(relisted(NAT5, k)) == support_of(NAT5)


def test_orbits_and_images():
    assert tuple_image(NAT5, 0) == frozenset({0})
    assert tuple_image(NAT5, 1) == frozenset({1, 2, 3, 4, 5})
    assert ORBIT_SIZES == {60, 30, 20, 15, 12, 10, 6, 5, 1}
    assert fixed_points(NAT5) == frozenset({0})
    with pytest.raises(A5Error):
        tuple_image(NAT5, 99)


def test_tuple_algebra():
    ident = A5Tuple(np.tile(np.arange(6), (60, 1)))
    assert star(NAT5, entrywise_inverse(NAT5)) == ident
    assert conj_tuple(NAT5, Perm.identity(6)) == NAT5
    assert not comm(NAT5, NAT5)
    g, h = natural_action(11, [1, 2, 3, 4, 5]), natural_action(11, [6, 7, 8, 9, 10])
    assert comm(g, h) and a5_check(star(g, h))


@given(st.permutations([1, 2, 3, 4, 5]))
def test_conjugating_by_an_automorphism_gives_an_a5_tuple(leaves):
    phi = Perm((0, *leaves))
    c = conj_tuple(NAT5, phi)
    assert a5_check(c) and support_of(c) == support_of(NAT5)


def test_census_on_star5():
    inst = gen_star(5, 0)
    G = automorphism_group(inst)
    t = time.perf_counter()
    census = find_a5_tuples(G, inst)
    elapsed = time.perf_counter() - t
    assert len(census.subgroups) == 1 and len(census) == 120
    assert elapsed < 10
    oracle = brute_force_a5_subgroups(G)
    found = {frozenset(tuple(map(int, r)) for r in census.subgroups[0].base.entries)}
    assert found == oracle


def test_census_roundtrip_and_trivial_group():
    G = automorphism_group(gen_star(6, 0))
    c = find_a5_tuples(G)
    back = census_from_json(census_to_json(c), complete=True)
    assert [s.base for s in back.subgroups] == [s.base for s in c.subgroups]
    trivial = PermGroup(3, [], 1, np.arange(3)[None, :])
    assert len(find_a5_tuples(trivial).subgroups) == 0


def test_support_of_cone_action_on_alt():
    # the base edge is 0 < 1; 0 has five isomorphic lower leaves, 1 five isomorphic upper leaves
    inst = gen_alternating_tree(5, 5, 1)
    census = find_a5_tuples(automorphism_group(inst), inst)
    supports = sorted(sorted(support_of(s.base)) for s in census.subgroups)
    assert supports == [sorted(inst.lower[0]), sorted(set(inst.upper[1]))]
    assert all(len(fixed_points(s.base)) == len(inst) - 5 for s in census.subgroups)


def test_ecc_examples():
    part = extended_components(NAT5, gen_star(5, 0))
    assert len(part.components) == 1 and part.components[0].attachment == 0
    inst, t = twin_star_action(2)
    assert len(extended_components(t, inst).components) == 2
    one = natural_action(11, [1, 2, 3, 4, 5])
    assert len(extended_components(one, gen_star(10, 0)).components) == 1


def test_restriction_examples():
    inst, t = twin_star_action(2)
    part = extended_components(t, inst)
    everything = frozenset().union(*(c.members for c in part.components))
    assert restrict_tuple(t, everything, inst) == t
    for c in part.components:
        assert a5_check(restrict_tuple(t, c.members, inst))
    with pytest.raises(A5Error):
        restrict_tuple(t, frozenset(), inst)


def test_30_split():
    inst, f, (G, H) = coset_pair_on_star30()
    assert (len(G), len(H)) == (12, 10)
    g, h = split_orbit_30(f, 1, inst)
    assert comm(g, h)
    assert np.array_equal(star(g, h).entries, f.entries)
    with pytest.raises(A5Error):
        split_orbit_30(natural_action(31, [1, 2, 3, 4, 5]), 1, gen_star(30, 0))


def test_no60_construction():
    inst, g = regular_on_star60()
    h, x = build_no60_counterexample(g, inst)
    assert comm(g, h)
    assert x in support_of(g) and x in support_of(h)
    assert x not in support_of(star(g, h))
    assert sorted(map(len, tuple_orbits(g))) == [1, 60]


@pytest.mark.parametrize("spec", ["star:5,0", "star:6,0", "alt:5,5,1", "chain-dec:5,5,3,1"])
def test_census_orbit_law(spec):
    inst = from_spec(spec)
    census = find_a5_tuples(automorphism_group(inst), inst)
    for sub in census.subgroups:
        assert fixed_points(sub.base)
        assert {len(o) for o in tuple_orbits(sub.base)} <= ORBIT_SIZES
