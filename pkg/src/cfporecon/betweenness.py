"""Points, paths and betweenness recovered from point representatives.

A point representative (PointRep) is an ordered pair of subgroups satisfying
RepPoint.  Everything in this layer sees the pairs only through ¬disj between
their components and through EqRepPoint, so two pairs with the same class and
the same ¬disj rows are interchangeable: swapping them is an automorphism of
the structure all formulas are evaluated in.  Formulas are therefore computed
once per such *type*, quantifiers still range over every type, and results
are reported with multiplicities so counts refer to individual PointReps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cfpo import CfpoInstance, betweenness, comparable, path
from .formulas import LeafMatrices, _bmatmul


class InterpretationError(ValueError):
    pass


@dataclass
class EquivalenceCheck:
    reflexive: bool
    symmetric: bool
    transitive: bool

    @property
    def ok(self) -> bool:
        return self.reflexive and self.symmetric and self.transitive


def check_equivalence(E: np.ndarray) -> EquivalenceCheck:
    if not len(E):
        return EquivalenceCheck(True, True, True)
    refl = bool(np.all(np.diag(E)))
    sym = bool(np.array_equal(E, E.T))
    trans = bool(not np.any(_bmatmul(E, E) & ~E))
    return EquivalenceCheck(refl, sym, trans)


def _classes(E: np.ndarray) -> np.ndarray:
    """Connected components of E, numbered by least member."""
    n = len(E)
    label = -np.ones(n, dtype=np.int64)
    c = 0
    for i in range(n):
        if label[i] >= 0:
            continue
        stack = [i]
        label[i] = c
        while stack:
            j = stack.pop()
            for k in np.flatnonzero(E[j] | E[:, j]):
                if label[k] < 0:
                    label[k] = c
                    stack.append(k)
        c += 1
    return label


def _row_types(rows: np.ndarray) -> np.ndarray:
    _, inv = np.unique(rows, axis=0, return_inverse=True)
    return inv.ravel()


@dataclass
class Interpretation:
    """The recovered structure: classes of PointReps with Temp1PB, Temp2PB, Related and B."""

    pairs: list[tuple[int, int]]
    equivalence: EquivalenceCheck
    rep_class: np.ndarray  # class of each PointRep
    rep_type: np.ndarray  # type of each PointRep
    type_class: np.ndarray
    type_weight: np.ndarray  # PointReps per type
    type_first: np.ndarray  # one PointRep per type
    temp1: np.ndarray  # (T, T, T) [g, h, k]
    temp2: np.ndarray
    phi: np.ndarray
    related: np.ndarray  # (T, T)
    complete: bool = True
    class_level: dict = field(default_factory=dict)
    congruent: dict = field(default_factory=dict)
    temp2_reading: str = "class"

    @property
    def n_classes(self) -> int:
        return int(self.rep_class.max()) + 1 if len(self.rep_class) else 0

    @property
    def n_types(self) -> int:
        return len(self.type_class)

    @property
    def path_between(self) -> np.ndarray:
        return self.temp1 | self.temp2

    @property
    def b(self) -> np.ndarray:
        r = self.related
        return self.path_between & r[None, :, :] & r[:, :, None] & r[:, None, :]

    @property
    def b_inclusive(self) -> np.ndarray:
        """B plus the endpoint cases B(x; x, y) and B(y; x, y) for Related x, y."""
        c = self.type_class
        ends = (c[:, None, None] == c[None, :, None]) | (c[:, None, None] == c[None, None, :])
        return self.b | (ends & self.related[None, :, :])

    def class_representatives(self) -> np.ndarray:
        """Least PointRep of each class."""
        out = np.full(self.n_classes, -1, dtype=np.int64)
        for i in range(len(self.rep_class) - 1, -1, -1):
            out[self.rep_class[i]] = i
        return out


TEMP2_READINGS = ("class", "literal")


def interpret(leaves: LeafMatrices, pairs: list[tuple[int, int]] | None = None, temp2_reading: str = "class") -> Interpretation:
    """Run the betweenness formulas over every PointRep the leaf tables admit.

    ``temp2_reading`` picks how the configuration φ(g; h, k) inside Temp2PB
    treats g.  "literal" asks it of g itself, which depends on which of the
    cones at x_g the chosen pair happens to act on.  "class" asks it of some
    pair EqRepPoint to g, the same closure Temp1PB applies through its ∃l.
    """
    if temp2_reading not in TEMP2_READINGS:
        raise InterpretationError(f"unknown Temp2PB reading {temp2_reading!r}")
    if pairs is None:
        pairs = leaves.reppoint_pairs()
    pairs = [tuple(map(int, p)) for p in pairs]
    if not pairs:
        z3 = np.zeros((0, 0, 0), dtype=bool)
        e = np.zeros(0, dtype=np.int64)
        return Interpretation([], EquivalenceCheck(True, True, True), e, e, e, e, e, z3, z3, z3,
                              np.zeros((0, 0), dtype=bool), leaves.complete)
    P = np.array(pairs)
    E = leaves.eq_rep_point_matrix(pairs)
    eq = check_equivalence(E)
    if not eq.ok:
        raise InterpretationError(f"EqRepPoint is not an equivalence relation: {eq}")
    rep_class = _classes(E)

    # subgroup types: identical ¬disj rows over the component universe
    universe = np.unique(P.ravel())
    nd = ~leaves.disj[np.ix_(universe, universe)]
    sub_type = _row_types(nd)
    where = {int(s): i for i, s in enumerate(universe)}
    t0 = np.array([sub_type[where[a]] for a, _ in pairs])
    t1 = np.array([sub_type[where[b]] for _, b in pairs])
    sig = np.stack([rep_class, t0, t1], axis=1)
    uniq, first, rep_type = np.unique(sig, axis=0, return_index=True, return_inverse=True)
    rep_type = rep_type.ravel()
    type_class, tau0, tau1 = uniq[:, 0], uniq[:, 1], uniq[:, 2]
    weight = np.bincount(rep_type, minlength=len(uniq))
    T = len(uniq)
    n_sub = int(sub_type.max()) + 1
    ND = np.zeros((n_sub, n_sub), dtype=bool)
    ND[sub_type[:, None], sub_type[None, :]] = nd

    # Meet[σ, t]: subgroup type σ fails disj with both components of type t
    meet = ND[:, tau0] & ND[:, tau1]
    apart = ~ND[:, tau0] & ~ND[:, tau1]
    side = (tau0, tau1)
    M = [meet[side[s]] for s in (0, 1)]  # M[s][g, t]: side s of g meets both tuples of t
    diff = type_class[:, None] != type_class[None, :]
    A = [meet[side[s]] & apart[side[1 - s]] & diff for s in (0, 1)]

    n_cls = int(type_class.max()) + 1
    T1c = np.zeros((n_cls, T, T), dtype=bool)
    for c in range(n_cls):
        L = type_class == c
        T1c[c] = _bmatmul(M[0][L].T, M[1][L])
    temp1 = T1c[type_class]

    phi = (A[0][:, :, None] & A[0][:, None, :]) | (A[1][:, :, None] & A[1][:, None, :])
    phi &= diff[None, :, :]
    # E_c[h, k]: some l outside class c with φ(l; h, k) and ¬(Temp1(g; l, k) ∧ Temp1(g; l, h))
    Ec = np.zeros((n_cls, T, T), dtype=bool)
    for c in range(n_cls):
        outside = (type_class != c)[:, None]
        bad = ~T1c[c]
        for s in (0, 1):
            a = A[s] & outside
            Ec[c] |= _bmatmul(a.T, A[s] & bad) | _bmatmul((a & bad).T, A[s])
    Ec &= diff[None, :, :]
    if temp2_reading == "class":
        onehot = np.zeros((T, n_cls), dtype=bool)
        onehot[np.arange(T), type_class] = True
        some = _bmatmul(onehot.T, phi.reshape(T, -1)).reshape(n_cls, T, T)
        phi = some[type_class]
    temp2 = phi & ~Ec[type_class]
    related = ~np.any(temp2 & ~temp1, axis=0)

    out = Interpretation(pairs, eq, rep_class, rep_type, type_class, weight, first, temp1, temp2, phi, related,
                         leaves.complete)
    out.temp2_reading = temp2_reading
    _lift_to_classes(out)
    return out


def _lift_to_classes(it: Interpretation) -> None:
    """Class-level relations, checking every relation is constant on class tuples."""
    c = it.type_class
    n = it.n_classes
    onehot = np.zeros((len(c), n), dtype=np.float32)
    onehot[np.arange(len(c)), c] = 1
    rels = {
        "temp1": it.temp1,
        "temp2": it.temp2,
        "path_between": it.path_between,
        "related": it.related,
        "b": it.b,
        "b_inclusive": it.b_inclusive,
    }
    for name, X in rels.items():
        def any_of(Y):
            Y = Y.astype(np.float32)
            for axis in range(Y.ndim):
                Y = np.moveaxis(np.tensordot(Y, onehot, axes=([axis], [0])), -1, axis)
            return Y > 0.5

        some = any_of(X)
        every = ~any_of(~X)
        it.class_level[name] = some
        it.congruent[name] = bool(np.array_equal(some, every))


# -- ground truth --------------------------------------------------------------------


def class_points(it: Interpretation, attachments: np.ndarray) -> np.ndarray:
    """Represented point of each class, from the first component's attachment."""
    reps = it.class_representatives()
    return np.array([int(attachments[it.pairs[r][0]]) for r in reps], dtype=np.int64)


@dataclass
class TruthTables:
    points: np.ndarray
    interior: np.ndarray  # [g, h, k]: x_g interior to path(x_h, x_k)
    pass_through: np.ndarray  # interior with a pass-through tag
    turning: np.ndarray  # interior with a local-max/min tag
    comparable: np.ndarray
    between: np.ndarray  # inclusive betweenness
    between_strict: np.ndarray
    less: np.ndarray  # [a, b]: x_a < x_b


def truth_tables(instance: CfpoInstance, points: np.ndarray) -> TruthTables:
    from .cfpo import LOCAL_MAX, LOCAL_MIN, order_leq

    n = len(points)
    pts = [int(p) for p in points]
    interior = np.zeros((n, n, n), dtype=bool)
    through = np.zeros_like(interior)
    turning = np.zeros_like(interior)
    btw = np.zeros_like(interior)
    btw_s = np.zeros_like(interior)
    comp = np.zeros((n, n), dtype=bool)
    less = np.zeros((n, n), dtype=bool)
    pos = {p: i for i, p in enumerate(pts)}
    for h, ph in enumerate(pts):
        for k, pk in enumerate(pts):
            comp[h, k] = comparable(instance, ph, pk)
            less[h, k] = ph != pk and order_leq(instance, ph, pk)
            pr = path(instance, ph, pk)
            for q, tag in zip(pr.interior, pr.turns):
                g = pos.get(q)
                if g is None:
                    continue
                interior[g, h, k] = True
                if tag in (LOCAL_MAX, LOCAL_MIN):
                    turning[g, h, k] = True
                else:
                    through[g, h, k] = True
            for g, pg in enumerate(pts):
                btw[g, h, k] = betweenness(instance, pg, ph, pk)
                btw_s[g, h, k] = betweenness(instance, pg, ph, pk, strict=True)
    return TruthTables(points, interior, through, turning, comp, btw, btw_s, less)


def compare_with_truth(it: Interpretation, truth: TruthTables) -> dict:
    """Mismatch counts over every PointRep triple (pairs for Related), weighted by type multiplicity."""
    c = it.type_class
    w = it.type_weight.astype(np.int64)
    w3 = w[:, None, None] * w[None, :, None] * w[None, None, :]
    w2 = w[:, None] * w[None, :]

    def lift(X):
        return X[np.ix_(c, c, c)] if X.ndim == 3 else X[np.ix_(c, c)]

    checks = {
        "temp1": (it.temp1, lift(truth.pass_through), "iff"),
        "temp2": (it.temp2, lift(truth.turning), "only-if"),
        "path_between": (it.path_between, lift(truth.interior), "iff"),
        "related": (it.related, lift(truth.comparable), "iff"),
        "b": (it.b, lift(truth.between_strict), "iff"),
        "b_inclusive": (it.b_inclusive, lift(truth.between), "iff"),
    }
    out = {}
    for name, (got, want, mode) in checks.items():
        bad = (got & ~want) if mode == "only-if" else (got != want)
        ww = w3 if got.ndim == 3 else w2
        out[name] = {
            "mode": mode,
            "checked": int(ww.sum()),
            "mismatches": int((ww * bad).sum()),
            "false_positive": int((ww * (got & ~want)).sum()),
            "false_negative": int((ww * (~got & want)).sum()) if mode == "iff" else 0,
        }
    return out
