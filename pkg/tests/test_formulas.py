from __future__ import annotations

from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfporecon.a5 import A5Tuple, comm, coset_pair_on_star30, find_a5_tuples, natural_action, relisted, twin_star_action
from cfporecon.cfpo import from_spec, gen_ball, gen_star
from cfporecon.formulas import (
    LEAF_FORMULAS,
    EvaluationError,
    LiteralEvaluator,
    PointRep,
    SemanticEngine,
    SyntacticEngine,
    attachment_point,
    cross_check,
    represented_point,
    support_shape,
)
from cfporecon.groups import EnumeratedPermGroup
from cfporecon.perm import automorphism_group


@lru_cache(maxsize=None)
def engines(spec: str):
    inst = from_spec(spec)
    AG = EnumeratedPermGroup(automorphism_group(inst))
    syn = SyntacticEngine(AG)
    sem = SemanticEngine(inst, [A5Tuple(AG._elements[b]) for b in syn.census.bases])
    return inst, syn, sem


def test_comm_examples():
    f = natural_action(6, [1, 2, 3, 4, 5])
    assert not comm(f, f)
    assert comm(natural_action(11, [1, 2, 3, 4, 5]), natural_action(11, [6, 7, 8, 9, 10]))


def test_attachment_examples():
    assert attachment_point(natural_action(6, [1, 2, 3, 4, 5]), gen_star(5, 0)) == 0
    inst = from_spec("alt:5,5,1")
    census = find_a5_tuples(automorphism_group(inst), inst)
    points = sorted(attachment_point(s.base, inst) for s in census.subgroups)
    assert points == [0, 1]
    inst2, t = twin_star_action(2)
    with pytest.raises(EvaluationError):
        attachment_point(t, inst2)


def test_indec_examples():
    assert support_shape(natural_action(6, [1, 2, 3, 4, 5]), gen_star(5, 0)).indec
    inst, f, _ = coset_pair_on_star30()
    assert not support_shape(f, inst).indec
    inst2, t = twin_star_action(2)
    assert not support_shape(t, inst2).indec
    _, syn, _ = engines("star:5,0")
    assert syn.leaves().indec.tolist() == [True]


def test_disj_and_subseteq_on_star10():
    inst = gen_star(10, 0)
    g, h = natural_action(11, [1, 2, 3, 4, 5]), natural_action(11, [6, 7, 8, 9, 10])
    sem = SemanticEngine(inst, [g, h, relisted(g, 7)]).leaves()
    assert sem.disj[0, 1] and not sem.disj[0, 0] and not sem.disj[0, 2]
    assert sem.subseteq[0, 0] and not sem.subset[0, 0]
    assert not sem.subseteq[0, 1]
    assert sem.samepd[0, 0] and sem.samepd[0, 2]


def test_samepd_and_reppoint_directions():
    inst = gen_ball(6, 6, 2)
    census = find_a5_tuples(automorphism_group(inst, enumerate_elements=False), inst)
    tuples = [s.base for s in census.subgroups]
    sem = SemanticEngine(inst, tuples, complete=False)
    L = sem.leaves()
    att, dirs = sem.attachments(), sem.directions()
    centre_up = next(i for i in range(len(tuples)) if att[i] == 0 and dirs[i] == "up")
    centre_down = next(i for i in range(len(tuples)) if att[i] == 0 and dirs[i] == "down")
    other_up = next(i for i in range(len(tuples)) if att[i] == 0 and dirs[i] == "up" and i != centre_up)
    assert not L.samepd[centre_up, centre_down]
    assert L.reppoint[centre_up, centre_down]
    assert represented_point(PointRep(centre_up, centre_down), sem) == 0
    assert not L.reppoint[centre_up, other_up]
    assert L.eq_rep_point((centre_up, centre_down), (centre_down, centre_up))


def test_crosscheck_star5_all_formulas():
    _, syn, sem = engines("star:5,0")
    cc = cross_check(syn.leaves(), sem.leaves())
    assert set(cc) == set(LEAF_FORMULAS)
    assert all(r["discrepancies"] == 0 for r in cc.values())
    with pytest.raises(EvaluationError):
        cross_check(syn.leaves(), sem.leaves(), ("bogus",))


@pytest.mark.parametrize("spec", ["star:5,0", "star:6,0", "star:5,5", "dstar:5"])
def test_first_clause_contrapositive_is_a_tautology(spec):
    _, syn, _ = engines(spec)
    p = syn.subseteq_parts()
    assert np.array_equal(p["forall_1"], p["not_exists_1"])
    assert np.array_equal(p["forall_2"], p["not_exists_2"])


@settings(max_examples=15)
@given(st.integers(0, 11), st.integers(0, 119), st.integers(0, 11), st.integers(0, 119))
def test_indec_and_disj_do_not_depend_on_the_listing(s, k, t, j):
    _, syn, _ = engines("star:6,0")
    lit = LiteralEvaluator(syn)
    L = syn.leaves()
    f, g = lit.entries(s, k), lit.entries(t, j)
    assert lit.indec(f) == L.indec[s]
    assert lit.disj(f, g) == L.disj[s, t]


@settings(max_examples=5)
@given(st.integers(0, 119), st.integers(0, 119))
def test_subseteq_literal_matches_subgroup_level(k, j):
    _, syn, _ = engines("star:5,0")
    lit = LiteralEvaluator(syn)
    got = lit.subseteq(lit.entries(0, k), lit.entries(0, j))
    assert got["not_exists"] == bool(syn.leaves().subseteq[0, 0])
    assert got["forall"] == got["not_exists"]
