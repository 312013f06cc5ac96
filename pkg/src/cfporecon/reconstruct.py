"""End-to-end reconstruction: from a group to points, betweenness and order.

Abstract mode sees only a multiplication oracle.  Semi-abstract mode is for
groups too large to enumerate: the instance is consulted to seed the A5
census and to evaluate the support formulas semantically, after which the
betweenness and order formulas run on the resulting tables alone.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .a5 import find_a5_seeded
from .betweenness import Interpretation, class_points, interpret
from .cfpo import DOWN, UP, CfpoInstance
from .formulas import LeafMatrices, SemanticEngine, SyntacticEngine
from .groups import AbstractCensus, AbstractGroup
from .order import OrderEvaluator, OrderLevels
from .perm import RootedView

ABSTRACT = "abstract"
SEMI_ABSTRACT = "semi-abstract"
WHICH = ("betweenness", "order", "order-or-reverse")


@dataclass
class Reconstruction:
    mode: str
    leaves: LeafMatrices
    interpretation: Interpretation
    complete: bool
    points: np.ndarray | None = None  # represented point of each class, semi-abstract only
    notes: list[str] = field(default_factory=list)

    @property
    def n_classes(self) -> int:
        return self.interpretation.n_classes

    def relation(self, name: str) -> np.ndarray:
        n = self.n_classes
        if n == 0:
            return np.zeros((0,) * (2 if name == "related" else 3), dtype=bool)
        return self.interpretation.class_level[name]

    @property
    def betweenness(self) -> np.ndarray:
        return self.relation("b_inclusive")

    def order_evaluator(self, b_mode: str = "inclusive", alpha5: bool = True, irreflexive: bool = True,
                        step: str = "cumulative") -> OrderEvaluator:
        return OrderEvaluator(self.relation("b"), self.relation("b_inclusive"), self.relation("related"),
                              b_mode, alpha5, irreflexive, step)


def reconstruct_abstract(group: AbstractGroup, census: AbstractCensus | None = None, temp2_reading: str = "class") -> Reconstruction:
    """Only ``group.mul`` and ``group.inv`` are consulted."""
    syn = SyntacticEngine(group, census)
    leaves = syn.leaves()
    it = interpret(leaves, temp2_reading=temp2_reading)
    notes = [] if leaves.complete else ["census incomplete: verdicts are relative to the census found"]
    return Reconstruction(ABSTRACT, leaves, it, leaves.complete, None, notes)


def reconstruct_semi_abstract(instance: CfpoInstance, random_budget: int = 0, seed: int = 0,
                              temp2_reading: str = "class") -> Reconstruction:
    census = find_a5_seeded(instance, None, random_budget, seed)
    sem = SemanticEngine(instance, [s.base for s in census.subgroups], complete=False)
    leaves = sem.leaves()
    it = interpret(leaves, temp2_reading=temp2_reading)
    pts = class_points(it, sem.attachments()) if it.n_classes else np.zeros(0, dtype=np.int64)
    notes = [census.note, "support formulas evaluated semantically on a seeded census"]
    return Reconstruction(SEMI_ABSTRACT, leaves, it, False, pts, notes)


# -- ground truth ------------------------------------------------------------------


def representable_points(instance: CfpoInstance, minimum: int = 5) -> list[int]:
    """Points with at least ``minimum`` isomorphic cones upward and as many downward."""
    out = []
    for p in instance.points:
        view = RootedView(instance, p)
        ok = {UP: False, DOWN: False}
        for cls in view.classes(p):
            if len(cls) >= minimum:
                ok[view.direction(cls[0])] = True
        if all(ok.values()):
            out.append(p)
    return out


@dataclass
class DenseTruth:
    """Ground-truth relations over a point list as arrays, from one BFS per point."""

    points: list[int]
    dist: np.ndarray  # tree distance
    leq: np.ndarray  # order_leq

    @property
    def comparable(self) -> np.ndarray:
        return self.leq | self.leq.T

    @property
    def less(self) -> np.ndarray:
        return self.leq & ~np.eye(len(self.points), dtype=bool)

    def on_path(self) -> np.ndarray:
        """[z, x, y]: z lies on the path from x to y, endpoints included."""
        d = self.dist
        return d[None, :, :] == d.T[:, :, None] + d[:, None, :]

    def betweenness(self, strict: bool = False) -> np.ndarray:
        C = self.comparable
        out = self.on_path() & C[None, :, :] & C[:, :, None] & C[:, None, :]
        if strict:
            n = len(self.points)
            z, x, y = np.indices((n, n, n))
            out &= (z != x) & (z != y)
        return out


def dense_truth(instance: CfpoInstance, points: list[int] | None = None) -> DenseTruth:
    pts = list(instance.points) if points is None else [int(p) for p in points]
    pos = {p: i for i, p in enumerate(pts)}
    n = len(pts)
    dist = np.zeros((n, n), dtype=np.int64)
    ups = np.zeros((n, n), dtype=np.int64)
    for i, src in enumerate(pts):
        seen = {src: (0, 0)}
        queue = deque([src])
        while queue:
            p = queue.popleft()
            d, u = seen[p]
            for q in instance.neighbours[p]:
                if q not in seen:
                    seen[q] = (d + 1, u + instance.is_up_edge(p, q))
                    queue.append(q)
        for q, j in pos.items():
            dist[i, j], ups[i, j] = seen[q]
    return DenseTruth(pts, dist, ups == dist)


def betweenness_table(instance: CfpoInstance, points: list[int], strict: bool = False) -> np.ndarray:
    return dense_truth(instance, points).betweenness(strict)


def order_table(instance: CfpoInstance, points: list[int]) -> np.ndarray:
    return dense_truth(instance, points).less


# -- isomorphism search ----------------------------------------------------------------


def _signature(rels: list[np.ndarray], i: int) -> tuple:
    sig = []
    for R in rels:
        for axis in range(R.ndim):
            sig.append(int(np.take(R, i, axis=axis).sum()))
    return tuple(sig)


def find_isomorphism(left: list[np.ndarray], right: list[np.ndarray]) -> list[int] | None:
    """A bijection m with left[r][i, j, ...] == right[r][m[i], m[j], ...] for every relation r."""
    n = len(left[0]) if left else 0
    if any(len(R) != n for R in right):
        return None
    if n == 0:
        return []
    lsig = [_signature(left, i) for i in range(n)]
    rsig = [_signature(right, i) for i in range(n)]
    if sorted(lsig) != sorted(rsig):
        return None
    order = sorted(range(n), key=lambda i: (sum(s == lsig[i] for s in lsig), i))
    image = [-1] * n
    used = [False] * n

    def consistent(i: int) -> bool:
        done = [a for a in order if image[a] >= 0]
        idx = np.array(done)
        img = np.array([image[a] for a in done])
        for L, R in zip(left, right):
            if L.ndim == 2:
                if not (np.array_equal(L[i, idx], R[image[i], img]) and np.array_equal(L[idx, i], R[img, image[i]])):
                    return False
            else:
                for a in range(3):
                    Li = np.take(L, i, axis=a)[np.ix_(idx, idx)]
                    Ri = np.take(R, image[i], axis=a)[np.ix_(img, img)]
                    if not np.array_equal(Li, Ri):
                        return False
        return True

    def extend(pos: int) -> bool:
        if pos == n:
            return True
        i = order[pos]
        for p in range(n):
            if used[p] or rsig[p] != lsig[i]:
                continue
            image[i] = p
            used[p] = True
            if consistent(i) and extend(pos + 1):
                return True
            image[i] = -1
            used[p] = False
        return False

    return list(image) if extend(0) else None


@dataclass
class IsoResult:
    which: str
    mapping: dict[int, int] | None
    reversed: bool = False
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.mapping is not None


def compare_up_to_iso(rec: Reconstruction, instance: CfpoInstance, which: str = "betweenness",
                      order: np.ndarray | None = None, points: list[int] | None = None) -> IsoResult:
    """Match the reconstruction against the instance restricted to representable points."""
    if which not in WHICH:
        raise ValueError(f"unknown comparison {which!r}")
    pts = representable_points(instance) if points is None else list(points)
    if rec.n_classes != len(pts):
        return IsoResult(which, None, False, f"{rec.n_classes} classes vs {len(pts)} representable points")
    if which == "betweenness":
        m = find_isomorphism([rec.betweenness], [betweenness_table(instance, pts)])
        return IsoResult(which, None if m is None else {i: pts[p] for i, p in enumerate(m)}, False,
                         "" if m is not None else "no betweenness isomorphism")
    if order is None:
        raise ValueError("order comparison needs a reconstructed order")
    truth = order_table(instance, pts)
    m = find_isomorphism([order], [truth])
    if m is not None:
        return IsoResult(which, {i: pts[p] for i, p in enumerate(m)}, False)
    if which == "order-or-reverse":
        m = find_isomorphism([order], [truth.T])
        if m is not None:
            return IsoResult(which, {i: pts[p] for i, p in enumerate(m)}, True)
    return IsoResult(which, None, False, "no order isomorphism")


# -- reports -------------------------------------------------------------------------


def reconstruction_report(rec: Reconstruction, iso: IsoResult | None = None, levels: OrderLevels | None = None) -> dict:
    it = rec.interpretation
    doc = {
        "mode": rec.mode,
        "complete": rec.complete,
        "notes": rec.notes,
        "subgroups": int(rec.leaves.size),
        "point_reps": len(it.pairs),
        "classes": rec.n_classes,
        "types": it.n_types,
        "eqreppoint_equivalence": it.equivalence.ok,
        "congruent": it.congruent,
        "temp2_reading": it.temp2_reading,
        "class_members": [[list(it.pairs[i]) for i in np.flatnonzero(it.rep_class == c)[:3]] for c in range(rec.n_classes)],
        "betweenness": [list(map(int, t)) for t in np.argwhere(rec.betweenness)] if rec.n_classes else [],
    }
    if rec.points is not None:
        doc["class_points"] = [int(p) for p in rec.points]
    if iso is not None:
        doc["comparison"] = {
            "which": iso.which,
            "isomorphic": iso.ok,
            "reversed": iso.reversed,
            "mapping": None if iso.mapping is None else {str(k): v for k, v in sorted(iso.mapping.items())},
            "reason": iso.reason,
        }
    if levels is not None:
        doc["order"] = {
            "params": list(levels.params),
            "stabilized": levels.stabilized,
            "options": levels.options,
            "pairs": [list(map(int, p)) for p in np.argwhere(levels.order_iff())],
        }
    return doc


def report_to_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True) + "\n"
