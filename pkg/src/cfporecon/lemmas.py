"""Every lemma as a pass/fail property suite over finite fixtures.

Each entry of ``REGISTRY`` maps a lemma label to a function that returns a
:class:`LemmaReport`.  A check is ``pass``, ``fail`` (a counterexample is in
its detail) or ``inconclusive`` (bounds prevented a verdict).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .a5 import (
    ORBIT_SIZES,
    A5Error,
    A5Tuple,
    Census,
    a5_check,
    comm,
    coset_pair_on_star30,
    build_no60_counterexample,
    extended_components,
    find_a5_tuples,
    fixed_points,
    natural_action,
    product_fixture,
    regular_on_star60,
    relisted,
    restrict_tuple,
    split_orbit_30,
    star,
    support_of,
    tuple_orbits,
    twin_star_action,
)
from .betweenness import TruthTables, check_equivalence, compare_with_truth, truth_tables
from .cfpo import CfpoInstance, from_spec, gen_star, order_leq, path, ramification_orders
from .formulas import (
    EvaluationError,
    PointRep,
    SemanticEngine,
    SyntacticEngine,
    _matrix_for,
    cross_check,
    represented_point,
    support_shape,
)
from .groups import EnumeratedPermGroup
from .order import LESSDOT_VARIANTS, OrderEvaluator, lessdot, order0_positive_profiles, order0_table, order0_tensor, order1_at, alphas
from .reconstruct import (
    DenseTruth,
    Reconstruction,
    compare_up_to_iso,
    dense_truth,
    reconstruct_abstract,
    reconstruct_semi_abstract,
    representable_points,
)
from .perm import DEFAULT_ORDER_BOUND, PermGroup, automorphism_group

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
EXIT_CODES = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}

A5_SUITE = ("star:5,0", "star:6,0", "alt:5,5,1", "alt:5,5,2", "chain-dec:5,5,3,1")
ENUMERABLE_SUITE = ("star:5,0", "star:6,0", "star:7,0", "star:5,5", "dstar:5")
BETWEENNESS_SUITE = ("alt:5,5,2", "chain-dec:5,5,3,2", "ball:6,6,2")
FAITHFUL_SUITE = ("star:5,5", "dstar:5", "ball:6,6,2", "alt:6,6,2", "ball:7,6,2")
LESSDOT_SUITE = (("ball:7,6,2", 6), ("ball:6,6,2", 5), ("alt:6,5,2", 5))
ORDER_TRUTH_SUITE = ("ball:2,2,2", "alt:2,2,2", "ball:2,1,3", "chain-dec:1,1,3,2")


@dataclass(frozen=True)
class Bounds:
    group_order: int = DEFAULT_ORDER_BOUND
    census: int = 0  # random trials added to a seeded census
    n_max: int | None = None


@dataclass(frozen=True)
class Settings:
    instances: tuple[str, ...] | None = None
    bounds: Bounds = Bounds()
    lessdot_variant: str = "as-written"
    alpha5: bool = True
    backend: str = "both"
    seed: int = 0
    step: str = "cumulative"  # reading of the <_n recursion, see order.STEP_READINGS


@dataclass
class Check:
    name: str
    status: str
    detail: dict = field(default_factory=dict)


def check(name: str, ok: bool | None, **detail) -> Check:
    return Check(name, INCONCLUSIVE if ok is None else (PASS if ok else FAIL), detail)


@dataclass
class LemmaReport:
    lemma: str
    checks: list[Check]
    notes: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        states = {c.status for c in self.checks}
        if FAIL in states:
            return FAIL
        if INCONCLUSIVE in states or not states:
            return INCONCLUSIVE
        return PASS

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def counts(self) -> dict[str, int]:
        return {s: sum(c.status == s for c in self.checks) for s in (PASS, FAIL, INCONCLUSIVE)}

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "status": self.status,
            "counts": self.counts(),
            "notes": self.notes,
            "checks": [{"name": c.name, "status": c.status, "detail": c.detail} for c in self.checks],
        }


def _plain(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "to_json"):
        return json.loads(obj.to_json())
    raise TypeError(f"not serialisable: {type(obj).__name__}")


def report_json(reports: list[LemmaReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], default=_plain, sort_keys=True, indent=1) + "\n"


# -- shared contexts -----------------------------------------------------------------


@dataclass
class Setting:
    spec: str
    instance: CfpoInstance
    group: PermGroup
    census: Census


@lru_cache(maxsize=32)
def load_setting(spec: str, group_order: int = DEFAULT_ORDER_BOUND, budget: int = 0, seed: int = 0) -> Setting:
    inst = from_spec(spec)
    group = automorphism_group(inst, group_order)
    return Setting(spec, inst, group, find_a5_tuples(group, inst, budget, seed))


def _setting(spec: str, s: Settings) -> Setting:
    return load_setting(spec, s.bounds.group_order, s.bounds.census, s.seed)


def _instances(s: Settings, default: tuple[str, ...]) -> tuple[str, ...]:
    return s.instances if s.instances else default


def _census_note(st: Setting) -> str:
    return f"{st.spec}: {len(st.census.subgroups)} subgroups, census {'complete' if st.census.complete else 'incomplete'} ({st.census.note})"


# -- fixtures for the commuting-pair lemmas ---------------------------------------------------


@dataclass
class PairFixture:
    name: str
    instance: CfpoInstance
    g: A5Tuple
    h: A5Tuple


@lru_cache(maxsize=1)
def commuting_fixtures() -> tuple[PairFixture, ...]:
    out = []
    inst = gen_star(10, 0)
    out.append(PairFixture("disjoint-naturals@star:10,0", inst, natural_action(11, [1, 2, 3, 4, 5]), natural_action(11, [6, 7, 8, 9, 10])))
    for left, right in (("5", "5"), ("5", "6"), ("6", "6")):
        inst, g, h = product_fixture(left, right)
        out.append(PairFixture(f"product-{left}x{right}", inst, g, h))
    inst, f, _ = coset_pair_on_star30()
    g, h = split_orbit_30(f, 1, inst)
    out.append(PairFixture("30-split@star:30,0", inst, g, h))
    inst, g = regular_on_star60()
    h, _ = build_no60_counterexample(g, inst)
    out.append(PairFixture("no60@star:60,0", inst, g, h))
    return tuple(out)


# -- a5-machinery lemmas ------------------------------------------------------------------


def lemma_a5behaves(s: Settings) -> LemmaReport:
    """Every census tuple fixes a point and has admissible orbit sizes."""
    checks, notes = [], []
    for spec in _instances(s, A5_SUITE):
        st = _setting(spec, s)
        notes.append(_census_note(st))
        n_tuples = 0
        bad_fixed, bad_orbit, bad_diagram = [], [], []
        for si, sub in enumerate(st.census.subgroups):
            if not a5_check(sub.base):
                bad_diagram.append(si)
            for k in range(st.census.listings_per_subgroup):
                t = relisted(sub.base, k) if k else sub.base
                n_tuples += 1
                if not fixed_points(t):
                    bad_fixed.append((si, k))
                sizes = {len(o) for o in tuple_orbits(t)}
                if not sizes <= ORBIT_SIZES:
                    bad_orbit.append(((si, k), sorted(sizes)))
        checks.append(check(f"{spec}: diagram", not bad_diagram, subgroups=len(st.census.subgroups), counterexamples=bad_diagram[:10]))
        checks.append(check(f"{spec}: fixed point", not bad_fixed, tuples=n_tuples, counterexamples=bad_fixed[:10]))
        checks.append(check(f"{spec}: orbit sizes", not bad_orbit, tuples=n_tuples, counterexamples=bad_orbit[:10]))
    return LemmaReport("A5Behaves", checks, notes)


def lemma_ecc(s: Settings) -> LemmaReport:
    """ECC partitions cover the support, are disjoint and action-closed, and meet the rest in one point."""
    checks, notes = [], []
    extra = [("twin-stars", *twin_star_action(2))]
    for spec in _instances(s, A5_SUITE):
        st = _setting(spec, s)
        notes.append(_census_note(st))
        extra.extend((f"{spec}#{i}", st.instance, sub.base) for i, sub in enumerate(st.census.subgroups))
    for name, inst, t in extra:
        try:
            part = extended_components(t, inst)
        except A5Error as exc:
            checks.append(check(f"{name}: partition", False, error=str(exc)))
            continue
        members = [c.members for c in part.components]
        disjoint = sum(len(m) for m in members) == len(frozenset().union(*members)) if members else True
        closed = all({int(x) for x in t.entries[:, sorted(m)].ravel()} <= m for m in members)
        checks.append(check(f"{name}: partition", not part.leftover and disjoint and closed,
                            components=len(members), leftover=sorted(part.leftover), disjoint=disjoint, closed=closed))
    return LemmaReport("ECC", checks, notes)


def lemma_restriction(s: Settings) -> LemmaReport:
    """Restricting to a union of ECCs gives an A5 tuple; restricting to all of them gives the tuple back."""
    checks = []
    inst, t = twin_star_action(2)
    part = extended_components(t, inst)
    for i, c in enumerate(part.components):
        r = restrict_tuple(t, c.members, inst)
        checks.append(check(f"twin-stars: ECC {i}", a5_check(r), support=sorted(support_of(r))))
    whole = restrict_tuple(t, frozenset().union(*(c.members for c in part.components)), inst)
    checks.append(check("twin-stars: all ECCs", np.array_equal(whole.entries, t.entries)))
    first = natural_action(11, [1, 2, 3, 4, 5])
    merged = star(first, natural_action(11, [6, 7, 8, 9, 10]))
    inst10 = gen_star(10, 0)
    part10 = extended_components(merged, inst10)
    checks.append(check("star:10,0 merged pair has two ECCs", len(part10.components) == 2, components=len(part10.components)))
    back = restrict_tuple(merged, frozenset({1, 2, 3, 4, 5}), inst10)
    checks.append(check("star:10,0 first five leaves recover the first action", np.array_equal(back.entries, first.entries)))
    try:
        restrict_tuple(t, frozenset(), inst)
        checks.append(check("empty set rejected", False))
    except A5Error:
        checks.append(check("empty set rejected", True))
    return LemmaReport("RestrictionSubgroups", checks)


def lemma_nocancelling(s: Settings) -> LemmaReport:
    """For commuting g, h with g*h an A5 tuple: supp(g) ∪ supp(h) ⊆ supp(g*h)."""
    checks, notes = [], []
    for fx in commuting_fixtures():
        f = star(fx.g, fx.h)
        if not (comm(fx.g, fx.h) and a5_check(f)):
            notes.append(f"{fx.name}: outside the hypothesis")
            continue
        lost = (support_of(fx.g) | support_of(fx.h)) - support_of(f)
        checks.append(check(fx.name, not lost, cancelled_points=sorted(lost)[:10], n_cancelled=len(lost)))
    return LemmaReport("nocancellingorbits", checks, notes)


def lemma_noflipping(s: Settings) -> LemmaReport:
    """Commuting tuples: intersecting ECCs are nested."""
    checks, notes = [], []
    for fx in commuting_fixtures():
        if not comm(fx.g, fx.h):
            notes.append(f"{fx.name}: outside the hypothesis")
            continue
        A = extended_components(fx.g, fx.instance).components
        B = extended_components(fx.h, fx.instance).components
        bad = [(i, j) for i, a in enumerate(A) for j, b in enumerate(B)
               if a.members & b.members and not (a.members <= b.members or b.members <= a.members)]
        checks.append(check(fx.name, not bad, flipped=bad[:10], n_flipped=len(bad)))
    return LemmaReport("noflipping", checks, notes)


def lemma_longorbits(s: Settings) -> LemmaReport:
    """Commuting tuples with meeting supports: g*h has a 20-orbit in the intersection, and then another nontrivial orbit."""
    checks, notes = [], []
    for fx in commuting_fixtures():
        inter = support_of(fx.g) & support_of(fx.h)
        if not comm(fx.g, fx.h) or not inter:
            notes.append(f"{fx.name}: outside the hypothesis")
            continue
        orbits = tuple_orbits(star(fx.g, fx.h))
        inside = sorted(len(o) for o in orbits if o <= inter)
        nontrivial = sorted({len(o) for o in orbits if len(o) > 1})
        has20 = 20 in inside
        other = any(k != 20 for k in nontrivial)
        checks.append(check(fx.name, has20 and other, orbit_lengths_in_intersection=inside, nontrivial_lengths=nontrivial))
    return LemmaReport("longorbits", checks, notes)


def lemma_no60(s: Settings) -> LemmaReport:
    """The right-multiplication construction on a regular 60-orbit, and the 60-orbit law on censuses."""
    checks = []
    inst, g = regular_on_star60()
    h, x = build_no60_counterexample(g, inst)
    f = star(g, h)
    checks.append(check("construction: Comm(g,h) on 3600 pairs", comm(g, h)))
    checks.append(check("construction: identity leaf in supp(g) ∩ supp(h)", x in support_of(g) and x in support_of(h), leaf=x))
    checks.append(check("construction: identity leaf fixed by g*h", bool(np.all(f.entries[:, x] == x)), leaf=x))
    checks.append(check("construction: g*h is an A5 tuple", a5_check(f)))
    notes = ["the finite star:60,0 carries the regular action itself, an A5 tuple with a 60-orbit"]
    for spec in _instances(s, A5_SUITE):
        st = _setting(spec, s)
        bad = [i for i, sub in enumerate(st.census.subgroups) if any(len(o) == 60 for o in tuple_orbits(sub.base))]
        checks.append(check(f"{spec}: no 60-orbit in census", not bad, counterexamples=bad[:10]))
    return LemmaReport("no60", checks, notes)


def lemma_30splits(s: Settings) -> LemmaReport:
    checks = []
    inst, f, (G, H) = coset_pair_on_star30()
    g, h = split_orbit_30(f, 1, inst)
    checks.append(check("coset pair sizes", len(G) == 12 and len(H) == 10, G=len(G), H=len(H)))
    checks.append(check("f is an A5 tuple with a 30-orbit", a5_check(f) and any(len(o) == 30 for o in tuple_orbits(f))))
    checks.append(check("g, h are A5 tuples", a5_check(g) and a5_check(h)))
    checks.append(check("Comm(g,h)", comm(g, h)))
    eq = star(g, h).entries == f.entries
    checks.append(check("g*h = f entrywise", bool(eq.all()), entries_equal=int(eq.all(axis=1).sum())))
    inst5, _, _ = product_fixture("5", "5")
    try:
        split_orbit_30(natural_action(len(inst5), [1, 2, 3, 4, 5]), 1, inst5)
        checks.append(check("5-orbit rejected", False))
    except A5Error:
        checks.append(check("5-orbit rejected", True))
    return LemmaReport("30splits", checks)


# -- formula lemmas: syntactic against semantic ---------------------------------------------


@dataclass
class BackendPair:
    spec: str
    instance: CfpoInstance
    syntactic: SyntacticEngine
    semantic: SemanticEngine


@lru_cache(maxsize=16)
def backend_pair(spec: str, group_order: int = DEFAULT_ORDER_BOUND) -> BackendPair | None:
    """Both engines on one census: the abstract census of Aut(spec), read back as permutations."""
    inst = from_spec(spec)
    group = automorphism_group(inst, group_order)
    if group.elements is None:
        return None
    AG = EnumeratedPermGroup(group)
    syn = SyntacticEngine(AG)
    tuples = [A5Tuple(AG._elements[b]) for b in syn.census.bases]
    return BackendPair(spec, inst, syn, SemanticEngine(inst, tuples, complete=syn.complete))


def _pairs_for(s: Settings) -> tuple[list[BackendPair], list[str]]:
    out, skipped = [], []
    for spec in _instances(s, ENUMERABLE_SUITE):
        bp = backend_pair(spec, s.bounds.group_order)
        if bp is None:
            skipped.append(spec)
        else:
            out.append(bp)
    return out, skipped


def _cross_checks(name: str, formulas: tuple[str, ...], s: Settings, label: str | None = None) -> LemmaReport:
    """Backend agreement per instance; a one-sided backend reports its own counts only."""
    checks, notes = [], []
    pairs, skipped = _pairs_for(s)
    for spec in skipped:
        checks.append(check(f"{spec}: group within bounds", None, group_order=s.bounds.group_order))
    for bp in pairs:
        syn, sem = bp.syntactic.leaves(), bp.semantic.leaves()
        notes.append(f"{bp.spec}: {syn.size} subgroups, census {'complete' if syn.complete else 'incomplete'}")
        if s.backend != "both":
            leaves = syn if s.backend == "syntactic" else sem
            for f in formulas:
                if f == "eqreppoint":
                    count = int(leaves.eq_rep_point_matrix(leaves.reppoint_pairs()).sum())
                else:
                    count = int(_matrix_for(leaves, f).sum())
                notes.append(f"{bp.spec}: {f} true on {count} arguments ({s.backend} only)")
            continue
        cc = cross_check(syn, sem, formulas)
        for f in formulas:
            r = cc[f]
            checks.append(check(f"{bp.spec}: {f} backends agree", r["discrepancies"] == 0, checked=r["checked"],
                                discrepancies=r["discrepancies"], examples=[v.to_json() for v in r["examples"][:5]]))
    return LemmaReport(label or name, checks, notes)


def lemma_indec(s: Settings) -> LemmaReport:
    rep = _cross_checks("indec", ("indec",), s)
    inst, t = twin_star_action(2)
    shape = support_shape(t, inst)
    part = extended_components(t, inst)
    halves = [restrict_tuple(t, c.members, inst) for c in part.components]
    split = len(halves) == 2 and comm(*halves) and np.array_equal(star(*halves).entries, t.entries)
    rep.checks.append(check("twin-stars: not Indec, split into commuting halves", not shape.indec and split, eccs=len(shape.eccs)))
    inst30, f, _ = coset_pair_on_star30()
    g, h = split_orbit_30(f, 1, inst30)
    split30 = comm(g, h) and np.array_equal(star(g, h).entries, f.entries)
    rep.checks.append(check("30-orbit tuple: not Indec, split witness", not support_shape(f, inst30).indec and split30))
    inst5 = gen_star(5, 0)
    rep.checks.append(check("natural action on star:5,0 is Indec", support_shape(natural_action(6, [1, 2, 3, 4, 5]), inst5).indec))
    return rep


def lemma_disjbehaves(s: Settings) -> LemmaReport:
    rep = _cross_checks("disj", ("disj",), s, "disjbehaves")
    g, h = natural_action(11, [1, 2, 3, 4, 5]), natural_action(11, [6, 7, 8, 9, 10])
    inst = gen_star(10, 0)
    sg, sh = support_shape(g, inst), support_shape(h, inst)
    rep.checks.append(check("star:10,0 disjoint naturals: Indec, commuting, disjoint supports",
                            sg.indec and sh.indec and comm(g, h) and not (sg.support & sh.support)))
    return rep


def lemma_formalsubsets(s: Settings) -> LemmaReport:
    """The ∀ rendering of supp ⊑ against the ¬∃ rendering, plus backend agreement."""
    rep = _cross_checks("subseteq", ("subseteq", "subset"), s, "FormalSubsetsEq")
    pairs, _ = _pairs_for(s)
    for bp in pairs:
        if s.backend == "semantic":
            break
        p = bp.syntactic.subseteq_parts()
        n = int(p["head"].size)
        contra = int((p["forall"] != p["not_exists"]).sum())
        printed = int((p["forall_printed"] != p["not_exists"]).sum())
        ex = [list(map(int, a)) for a in np.argwhere(p["forall_printed"] != p["not_exists"])[:5]]
        rep.checks.append(check(f"{bp.spec}: ∀ form with contrapositive second clause agrees with ¬∃ form",
                                contra == 0, evaluated=n, mismatches=contra))
        rep.checks.append(check(f"{bp.spec}: ∀ form as stated agrees with ¬∃ form", printed == 0,
                                evaluated=n, mismatches=printed, examples=ex))
    rep.notes.append("as stated, ∀φ(g^φ ≠ g → f^φ = f) is not the contrapositive of ¬∃φ(f^φ = f ∧ g^φ ≠ g); "
                     "the contrapositive is ∀φ(g^φ ≠ g → f^φ ≠ f), and the census evaluations use the ¬∃ form")
    return rep


def lemma_samepd(s: Settings) -> LemmaReport:
    rep = _cross_checks("samepd", ("samepd",), s, "SamePDBehaves")
    rep.notes.append("compared on pairs of semantically Indec subgroups, where same point and direction is defined")
    for bp in _pairs_for(s)[0]:
        sp = bp.syntactic.leaves().samepd
        ind = bp.syntactic.leaves().indec
        sub = sp[np.ix_(ind, ind)]
        eq = check_equivalence(sub)
        rep.checks.append(check(f"{bp.spec}: SamePD is an equivalence on Indec subgroups", eq.ok,
                                reflexive=eq.reflexive, symmetric=eq.symmetric, transitive=eq.transitive))
    return rep


def lemma_reppoint(s: Settings) -> LemmaReport:
    rep = _cross_checks("reppoint", ("reppoint",), s, "RepPoint")
    for bp in _pairs_for(s)[0]:
        sem = bp.semantic
        bad = []
        for a, b in sem.leaves().reppoint_pairs():
            try:
                represented_point(PointRep(a, b), sem)
            except EvaluationError:
                bad.append((a, b))
        rep.checks.append(check(f"{bp.spec}: every RepPoint pair has one attachment point", not bad,
                                pairs=len(sem.leaves().reppoint_pairs()), counterexamples=bad[:10]))
    return rep


def lemma_eqreppoint(s: Settings) -> LemmaReport:
    rep = _cross_checks("eqreppoint", ("eqreppoint",), s, "EqRepPoint")
    for bp in _pairs_for(s)[0]:
        L = bp.syntactic.leaves()
        E = L.eq_rep_point_matrix(L.reppoint_pairs())
        eq = check_equivalence(E)
        rep.checks.append(check(f"{bp.spec}: EqRepPoint is an equivalence on RepPoint pairs", eq.ok, pairs=len(E)))
    return rep


# -- betweenness lemmas ---------------------------------------------------------------------


@lru_cache(maxsize=16)
def semi_pipeline(spec: str, budget: int = 0, seed: int = 0) -> tuple[CfpoInstance, Reconstruction, TruthTables | None]:
    inst = from_spec(spec)
    rec = reconstruct_semi_abstract(inst, budget, seed)
    truth = truth_tables(inst, rec.points) if rec.n_classes else None
    return inst, rec, truth


def _truth_lemma(label: str, relations: tuple[str, ...], s: Settings) -> LemmaReport:
    checks, notes = [], []
    for spec in _instances(s, BETWEENNESS_SUITE):
        inst, rec, truth = semi_pipeline(spec, s.bounds.census, s.seed)
        reps = len(rec.interpretation.pairs)
        n_rep = len(representable_points(inst))
        checks.append(check(f"{spec}: classes match representable points", rec.n_classes == n_rep,
                            classes=rec.n_classes, representable=n_rep))
        if truth is None:
            notes.append(f"{spec}: no PointRep pairs, so every PointRep statement holds vacuously")
            for r in relations:
                checks.append(check(f"{spec}: {r}", True, point_reps=0, vacuous=True))
            continue
        cmp = compare_with_truth(rec.interpretation, truth)
        notes.append(f"{spec}: {reps} PointReps in {rec.n_classes} classes")
        for r in relations:
            checks.append(check(f"{spec}: {r}", cmp[r]["mismatches"] == 0, point_reps=reps, **cmp[r]))
    return LemmaReport(label, checks, notes)


def lemma_temp(s: Settings) -> LemmaReport:
    return _truth_lemma("Temp-lemmas", ("temp1", "temp2", "path_between"), s)


def lemma_related(s: Settings) -> LemmaReport:
    return _truth_lemma("Related", ("related",), s)


def lemma_b(s: Settings) -> LemmaReport:
    return _truth_lemma("B", ("b", "b_inclusive"), s)


def lemma_faithful(s: Settings) -> LemmaReport:
    """The reconstructed betweenness is isomorphic to the true one on representable points."""
    checks, notes = [], []
    for spec in _instances(s, FAITHFUL_SUITE):
        bp = backend_pair(spec, s.bounds.group_order) if s.backend != "semantic" else None
        if bp is not None:
            rec = reconstruct_abstract(bp.syntactic.group, bp.syntactic.census)
            inst = bp.instance
        else:
            inst, rec, _ = semi_pipeline(spec, s.bounds.census, s.seed)
        iso = compare_up_to_iso(rec, inst, "betweenness")
        checks.append(check(f"{spec} ({rec.mode}): betweenness isomorphism", iso.ok, classes=rec.n_classes,
                            representable=len(representable_points(inst)), reason=iso.reason))
    return LemmaReport("faithful", checks, notes)


# -- order lemmas --------------------------------------------------------------------------


def ramification_bounds(instance: CfpoInstance) -> tuple[int, int]:
    """Largest upward and downward ramification order over the instance."""
    ro = [ramification_orders(instance, p) for p in instance.points]
    return max(r[0] for r in ro), max(r[1] for r in ro)


def _up_cone_count(instance: CfpoInstance, x: int, candidates: list[int]) -> int:
    """Distinct upward cones at x holding some candidate above x."""
    firsts = set()
    for q in candidates:
        if q != x and order_leq(instance, x, q):
            pr = path(instance, x, q)
            firsts.add(pr.interior[0] if pr.interior else q)
    return len(firsts)


def lemma_lessdot(s: Settings) -> LemmaReport:
    checks, notes = [], []
    for spec, n in LESSDOT_SUITE if not s.instances else [(i, s.bounds.n_max or 5) for i in s.instances]:
        inst, rec, _ = semi_pipeline(spec, s.bounds.census, s.seed)
        up, down = ramification_bounds(inst)
        inside = down <= n < up
        if not rec.n_classes:
            checks.append(check(f"{spec} n={n}: no classes", None))
            continue
        R, PB = rec.relation("related"), rec.relation("path_between")
        got, wit = lessdot(R, PB, n, s.lessdot_variant)
        other, _ = lessdot(R, PB, n, [v for v in LESSDOT_VARIANTS if v != s.lessdot_variant][0])
        pts = [int(p) for p in rec.points]
        truth = dense_truth(inst, pts)
        leq, less = truth.leq, truth.less
        fp = np.argwhere(got & ~leq)
        fp_strict = np.argwhere(got & ~less)
        detail = dict(ro_up=up, ro_down=down, n=n, verdicts=int(got.sum()), variants_agree=bool(np.array_equal(got, other)))
        if not inside:
            notes.append(f"{spec} n={n}: outside the hypothesis (ro↓ ≤ n < ro↑ fails); "
                         f"{len(fp)} verdicts not ≤, {len(fp_strict)} not <, variants agree: {detail['variants_agree']}")
            continue
        checks.append(check(f"{spec} n={n}: x ⋖ y implies x ≤ y", not len(fp), **detail,
                            counterexamples=[(pts[a], pts[b]) for a, b in fp[:10]]))
        checks.append(check(f"{spec} n={n}: x ⋖ y implies x < y", not len(fp_strict), **detail,
                            counterexamples=[(pts[a], pts[b]) for a, b in fp_strict[:10]]))
        # completeness only where n + 1 witnesses above x are present among the representable points
        wide = np.array([_up_cone_count(inst, p, pts) >= n + 1 for p in pts])
        want = less & wide[:, None]
        fn = np.argwhere(want & ~got)
        checks.append(check(f"{spec} n={n}: x < y implies x ⋖ y where n+1 upward witnesses exist",
                            not len(fn), pairs=int(want.sum()), counterexamples=[(pts[a], pts[b]) for a, b in fn[:10]]))
        notes.append(f"{spec} n={n}: {int((less & ~wide[:, None]).sum())} pairs x < y lack n+1 representable upward witnesses")
    return LemmaReport("lessdot", checks, notes)


@lru_cache(maxsize=8)
def truth_evaluator(spec: str, alpha5: bool = True, step: str = "cumulative") -> tuple[CfpoInstance, DenseTruth, OrderEvaluator]:
    """Order formulas fed with true betweenness over every point of the instance."""
    inst = from_spec(spec)
    t = dense_truth(inst)
    return inst, t, OrderEvaluator(t.betweenness(True), t.betweenness(False), t.comparable, "inclusive", alpha5, True, step)


def _related_pairs(t: DenseTruth) -> np.ndarray:
    return np.argwhere(t.less)


def lemma_order0(s: Settings) -> LemmaReport:
    table = order0_table()
    checks = [check("profile table: 31 profiles, 13 force x1 < x2", len(table) == 31 and len(order0_positive_profiles()) == 13,
                    profiles=len(table), positive=len(order0_positive_profiles()))]
    for spec in _instances(s, ORDER_TRUTH_SUITE):
        inst, t, ev = truth_evaluator(spec, s.alpha5)
        O0 = order0_tensor(t.betweenness(True), t.comparable)
        # (x1 <_0 x2 ⇔ y1 < y2) claims x1 < x2 exactly when y1 < y2
        agree = t.less[:, :, None, None] == t.less[None, None, :, :]
        bad = np.argwhere(O0 & ~agree)
        checks.append(check(f"{spec}: sound on ground truth", not len(bad), verdicts=int(O0.sum()),
                            counterexamples=[list(map(int, b)) for b in bad[:5]]))
        P = _related_pairs(t)
        diag = O0[P[:, 0], P[:, 1], P[:, 0], P[:, 1]]
        checks.append(check(f"{spec}: parameter pair relates itself", bool(diag.all()), pairs=len(P)))
    return LemmaReport("order0", checks)


def lemma_order1(s: Settings) -> LemmaReport:
    checks, notes = [], []
    for spec in _instances(s, ORDER_TRUTH_SUITE):
        inst, t, ev = truth_evaluator(spec, s.alpha5)
        n = len(t.points)
        x1, x2 = np.indices((n, n))
        bad, total, with5, without5 = [], 0, 0, 0
        for y1, y2 in _related_pairs(t):
            L1 = ev.order1(x1, x2, y1, y2)
            total += int(L1.sum())
            with5 += int(order1_at(ev.b, ev.bx, ev.related, x1, x2, y1, y2, True).sum())
            without5 += int(order1_at(ev.b, ev.bx, ev.related, x1, x2, y1, y2, False).sum())
            for a, b in np.argwhere(L1 & ~t.less):
                bad.append((int(a), int(b), int(y1), int(y2)))
        checks.append(check(f"{spec}: sound on ground truth", not bad, verdicts=total, counterexamples=bad[:5]))
        notes.append(f"{spec}: <_1 verdicts with α5 {with5}, without α5 {without5}")
    # every α clause carries some verdict on its own
    inst, t, ev = truth_evaluator("alt:2,2,2", s.alpha5)
    n = len(t.points)
    x1, x2 = np.indices((n, n))
    solo = {k: None for k in ("alpha1", "alpha2", "alpha3", "alpha4", "alpha5")}
    for y1, y2 in _related_pairs(t):
        base = ev.order1(x1, x2, y1, y2)
        al = alphas(ev.bx, ev.related, x1, x2, y1, y2)
        for k in solo:
            if solo[k] is None:
                only = base & al[k] & ~np.any([al[j] for j in al if j != k], axis=0)
                hit = np.argwhere(only)
                if len(hit):
                    solo[k] = [t.points[int(hit[0][0])], t.points[int(hit[0][1])], t.points[int(y1)], t.points[int(y2)]]
    for k, ex in solo.items():
        if k == "alpha5" and not s.alpha5:
            continue
        checks.append(check(f"alt:2,2,2: {k} alone yields a true verdict", ex is not None, example=ex))
    return LemmaReport("order1", checks, notes)


def lemma_ordern(s: Settings) -> LemmaReport:
    checks, notes = [], []
    deepest = 0
    for spec in _instances(s, ORDER_TRUTH_SUITE):
        inst, t, ev = truth_evaluator(spec, s.alpha5, s.step)
        n_max = s.bounds.n_max or int(t.dist.max())
        unsound, overlap, unstable = [], [], []
        for y1, y2 in _related_pairs(t):
            lv = ev.levels(int(y1), int(y2), n_max)
            stack = np.sum(lv.levels, axis=0)
            for k, L in enumerate(lv.levels):
                if np.any(L & ~t.less):
                    unsound.append((int(y1), int(y2), k))
                if L.any():
                    deepest = max(deepest, k)
            if np.any(stack > 1):
                overlap.append((int(y1), int(y2)))
            if not lv.stabilized:
                unstable.append((int(y1), int(y2)))
        checks.append(check(f"{spec}: every level sound", not unsound, n_max=n_max, counterexamples=unsound[:5]))
        checks.append(check(f"{spec}: levels mutually exclusive", not overlap, counterexamples=overlap[:5]))
        checks.append(check(f"{spec}: levels stabilise within n_max", not unstable, n_max=n_max, counterexamples=unstable[:5]))
    checks.append(check("some verdict needs level 3 or more", deepest >= 3, deepest=deepest))
    return LemmaReport("orderN", checks, notes)


def _order_sweep(ev: OrderEvaluator, less: np.ndarray, params: list[tuple[int, int]], n_max: int) -> dict:
    """order_iff against the true order, and the swapped pair against its transpose."""
    wrong, swap_wrong, fp, fn = 0, 0, 0, 0
    examples = []
    for y1, y2 in params:
        got = ev.levels(y1, y2, n_max).order_iff()
        back = ev.levels(y2, y1, n_max).order_iff()
        bad = got != less
        wrong += int(bad.sum())
        fp += int((got & ~less).sum())
        fn += int((~got & less).sum())
        swap_wrong += int((back != got.T).sum())
        if bad.any() and len(examples) < 5:
            a, b = np.argwhere(bad)[0]
            examples.append({"params": [y1, y2], "pair": [int(a), int(b)], "got": bool(got[a, b])})
    return {"parameter_pairs": len(params), "mismatches": wrong, "false_positive": fp, "false_negative": fn,
            "swap_mismatches": swap_wrong, "examples": examples}


def _sample_pairs(t: DenseTruth, k: int, seed: int) -> list[tuple[int, int]]:
    """Every edge-adjacent comparable pair first, then a seeded sample of the rest, up to k."""
    P = [tuple(map(int, p)) for p in _related_pairs(t)]
    edges = [p for p in P if t.dist[p] == 1]
    rest = [p for p in P if t.dist[p] != 1]
    rng = np.random.default_rng(seed)
    pick = [rest[i] for i in sorted(rng.choice(len(rest), size=min(len(rest), max(0, k - 1)), replace=False))]
    return edges[:1] + pick


def lemma_orderomega(s: Settings) -> LemmaReport:
    checks, notes = [], []
    for spec in _instances(s, ORDER_TRUTH_SUITE):
        for step in ("cumulative", "printed"):
            inst, t, ev = truth_evaluator(spec, s.alpha5, step)
            params = [tuple(map(int, p)) for p in _related_pairs(t)]
            r = _order_sweep(ev, t.less, params, s.bounds.n_max or int(t.dist.max()))
            checks.append(check(f"{spec} ({step} step): order recovered from every parameter pair",
                                r["mismatches"] == 0 and r["swap_mismatches"] == 0, **r))
    for step in ("cumulative", "printed"):
        inst, t, ev = truth_evaluator("alt:5,5,2", s.alpha5, step)
        r = _order_sweep(ev, t.less, _sample_pairs(t, 5, s.seed), s.bounds.n_max or int(t.dist.max()))
        checks.append(check(f"alt:5,5,2 ({step} step): sampled parameter pairs on all points",
                            r["mismatches"] == 0 and r["swap_mismatches"] == 0, **r))
    notes.append("alt:5,5,2 has no representable points, so its PointRep order statement is vacuous; "
                 "the ground-truth feed exercises the same formulas on every point")
    inst, rec, _ = semi_pipeline("ball:6,6,2", s.bounds.census, s.seed)
    if rec.n_classes:
        t = dense_truth(inst, [int(p) for p in rec.points])
        ev = rec.order_evaluator("inclusive", s.alpha5, step=s.step)
        r = _order_sweep(ev, t.less, [tuple(map(int, p)) for p in _related_pairs(t)], s.bounds.n_max or int(t.dist.max()))
        checks.append(check(f"ball:6,6,2 (semi-abstract, {s.step} step): order recovered on every class pair",
                            r["mismatches"] == 0 and r["swap_mismatches"] == 0, classes=rec.n_classes, **r))
    return LemmaReport("orderOmega", checks, notes)


REGISTRY: dict[str, Callable[[Settings], LemmaReport]] = {
    "A5Behaves": lemma_a5behaves,
    "ECC": lemma_ecc,
    "RestrictionSubgroups": lemma_restriction,
    "nocancellingorbits": lemma_nocancelling,
    "noflipping": lemma_noflipping,
    "longorbits": lemma_longorbits,
    "no60": lemma_no60,
    "30splits": lemma_30splits,
    "indec": lemma_indec,
    "disjbehaves": lemma_disjbehaves,
    "FormalSubsetsEq": lemma_formalsubsets,
    "SamePDBehaves": lemma_samepd,
    "RepPoint": lemma_reppoint,
    "EqRepPoint": lemma_eqreppoint,
    "Temp-lemmas": lemma_temp,
    "Related": lemma_related,
    "B": lemma_b,
    "faithful": lemma_faithful,
    "lessdot": lemma_lessdot,
    "order0": lemma_order0,
    "order1": lemma_order1,
    "orderN": lemma_ordern,
    "orderOmega": lemma_orderomega,
}


def run_lemma(name: str, settings: Settings | None = None) -> LemmaReport:
    if name not in REGISTRY:
        raise KeyError(f"unknown lemma {name!r}")
    return REGISTRY[name](settings or Settings())
