"""The support formulas on A5 tuples, evaluated two ways.

SYNTACTIC evaluation sees only an :class:`AbstractGroup` and its A5 census and
follows the quantifiers literally.  SEMANTIC evaluation reads the structural
characterisation off the tree (supports, extended components, attachment
points).

Every formula here is invariant under relisting its arguments through an
automorphism of A5, so both engines work on subgroups: a value for subgroup s
is the value for every one of its 120 listings.  :class:`LiteralEvaluator`
checks that claim directly on tuples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .a5 import (
    A5Error,
    A5Tuple,
    canonical_a5,
    extended_components,
    listing_maps,
    support_of,
    tuple_orbits,
)
from .cfpo import CfpoInstance
from .groups import AbstractCensus, AbstractGroup, find_a5_abstract

SYNTACTIC = "syntactic"
SEMANTIC = "semantic"
BOTH = "both"

LEAF_FORMULAS = ("indec", "disj", "subseteq", "subset", "samepd", "reppoint", "eqreppoint")


class EvaluationError(ValueError):
    pass


@dataclass
class Verdict:
    formula: str
    args: tuple
    backend: str
    value: bool | None
    witness: Any = None
    complete: bool = True
    discrepancy: bool = False

    def to_json(self) -> dict:
        return {
            "formula": self.formula,
            "args": [list(a) if isinstance(a, tuple) else a for a in self.args],
            "backend": self.backend,
            "value": self.value,
            "witness": self.witness,
            "complete": self.complete,
            "discrepancy": self.discrepancy,
        }


@dataclass
class LeafMatrices:
    """Subgroup-level truth tables of the support formulas."""

    backend: str
    indec: np.ndarray  # (S,)
    comm: np.ndarray  # (S, S)
    disj: np.ndarray
    subseteq: np.ndarray  # [s, t] = supp(s) ⊑ supp(t)
    samepd: np.ndarray
    reppoint: np.ndarray
    complete: bool = True
    extra: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.indec)

    @property
    def subset(self) -> np.ndarray:
        return self.subseteq & ~self.subseteq.T

    def reppoint_pairs(self) -> list[tuple[int, int]]:
        return [tuple(map(int, p)) for p in np.argwhere(self.reppoint)]

    def eq_rep_point(self, f: tuple[int, int], g: tuple[int, int]) -> bool:
        sp = self.samepd
        return bool(
            self.reppoint[f]
            and self.reppoint[g]
            and ((sp[f[0], g[0]] and sp[f[1], g[1]]) or (sp[f[0], g[1]] and sp[f[1], g[0]]))
        )

    def eq_rep_point_matrix(self, pairs: Sequence[tuple[int, int]]) -> np.ndarray:
        if not len(pairs):
            return np.zeros((0, 0), dtype=bool)
        p = np.asarray(pairs)
        sp = self.samepd
        rp = self.reppoint[p[:, 0], p[:, 1]]
        straight = sp[p[:, 0]][:, p[:, 0]] & sp[p[:, 1]][:, p[:, 1]]
        crossed = sp[p[:, 0]][:, p[:, 1]] & sp[p[:, 1]][:, p[:, 0]]
        return rp[:, None] & rp[None, :] & (straight | crossed)


def _bmatmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean matrix product: out[i, j] = any_k a[i, k] & b[k, j]."""
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0.5


def _samepd_from_subset(sub: np.ndarray) -> np.ndarray:
    """SamePD[f, g] = for all h: sub[h, f] == sub[h, g]."""
    cols = sub.T
    return np.all(cols[:, None, :] == cols[None, :, :], axis=2)


def _reppoint_from(disj: np.ndarray, samepd: np.ndarray) -> np.ndarray:
    """disj(f0, f1) and every g has some h with ¬disj(g, h) and SamePD(f0 or f1, h)."""
    nd = ~disj
    reach = _bmatmul(nd, samepd.T)  # reach[g, s] = exists h: ¬disj(g,h) & SamePD(s,h)
    covered = np.all(reach[:, :, None] | reach[:, None, :], axis=0)
    return disj & covered


# -- syntactic engine ----------------------------------------------------------


def _bmul(group: AbstractGroup, a, b) -> np.ndarray:
    a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
    if a.size == 0:
        return np.zeros(a.shape, dtype=np.int64)
    return np.asarray(group.mul(a.ravel(), b.ravel())).reshape(a.shape)


class SyntacticEngine:
    """Quantifiers over the census and over every group element; only ``mul``/``inv`` are used."""

    def __init__(self, group: AbstractGroup, census: AbstractCensus | None = None, chunk: int = 4096):
        self.group = group
        self.census = census if census is not None else find_a5_abstract(group)
        self.complete = self.census.complete
        self.chunk = chunk
        model = canonical_a5()
        self.maps = listing_maps()
        B = self.census.bases
        self.S = len(B)
        self.gen_a = model.gen_a
        self.gen_b = model.gen_b
        self.A = B[:, model.gen_a] if self.S else np.zeros(0, dtype=np.int64)
        self.Bg = B[:, model.gen_b] if self.S else np.zeros(0, dtype=np.int64)
        self._cache: dict[str, Any] = {}

    # group helpers
    def mul(self, a, b):
        return _bmul(self.group, a, b)

    # -- Comm and Indec --------------------------------------------------------

    def comm(self) -> np.ndarray:
        if "comm" not in self._cache:
            S = self.S
            ok = np.ones((S, S), dtype=bool)
            for x in (self.A, self.Bg):
                for y in (self.A, self.Bg):
                    xy = self.mul(x[:, None], y[None, :])
                    yx = self.mul(y[None, :], x[:, None])
                    ok &= xy == yx
            self._cache["comm"] = ok
        return self._cache["comm"]

    def decompositions(self) -> dict[int, tuple[int, int]]:
        """For each decomposable subgroup F a commuting pair (G, H) with F inside GH, F not G or H."""
        if "decomp" in self._cache:
            return self._cache["decomp"]
        out: dict[int, tuple[int, int]] = {}
        c = self.comm()
        B = self.census.bases
        sets = [np.sort(b) for b in B]
        for g, h in np.argwhere(np.triu(c, 1)):
            prod = np.unique(self.mul(B[g][:, None], B[h][None, :]).ravel())
            for f in range(self.S):
                if f in out or f in (g, h):
                    continue
                if np.all(np.isin(sets[f], prod, assume_unique=True)):
                    out[f] = (int(g), int(h))
        self._cache["decomp"] = out
        return out

    def indec(self) -> np.ndarray:
        dec = self.decompositions()
        return np.array([s not in dec for s in range(self.S)], dtype=bool)

    def split_witness(self, s: int, k: int = 0) -> tuple[tuple[int, int], tuple[int, int]] | None:
        """Census listings (g, h) with g * h = listing k of s and Comm(g, h), or None."""
        pair = self.decompositions().get(s)
        if pair is None:
            return None
        G, H = pair
        B = self.census.bases
        prod = self.mul(B[G][:, None], B[H][None, :])
        where = {int(v): (i, j) for (i, j), v in np.ndenumerate(prod)}
        f = B[s][self.maps[k]]
        gi = np.array([B[G][where[int(v)][0]] for v in f])
        hi = np.array([B[H][where[int(v)][1]] for v in f])
        return self.locate(gi), self.locate(hi)

    def disj(self) -> np.ndarray:
        ind = self.indec()
        return ind[:, None] & ind[None, :] & self.comm()

    # -- listings and conjugation ---------------------------------------------

    def _listing_index(self):
        if "listing_index" not in self._cache:
            N = self.group.order
            B = self.census.bases
            la = B[:, self.maps[:, self.gen_a]]  # (S, 120)
            lb = B[:, self.maps[:, self.gen_b]]
            keys = (la * N + lb).ravel()
            order = np.argsort(keys)
            self._cache["listing_index"] = (keys[order], order)
        return self._cache["listing_index"]

    def _lookup_pairs(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Flat (s * 120 + k) index of the listing with these generator images; -1 if absent."""
        keys, order = self._listing_index()
        q = a * self.group.order + b
        pos = np.searchsorted(keys, q)
        pos_c = np.minimum(pos, len(keys) - 1)
        hit = (pos < len(keys)) & (keys[pos_c] == q)
        return np.where(hit, order[pos_c], -1)

    def locate(self, entries: np.ndarray) -> tuple[int, int]:
        """(subgroup, listing) of a 60-tuple of element ids; raises when not in the census."""
        flat = int(self._lookup_pairs(np.array([entries[self.gen_a]]), np.array([entries[self.gen_b]]))[0])
        if flat < 0:
            raise EvaluationError("tuple not in the census")
        s, k = divmod(flat, len(self.maps))
        if not np.array_equal(self.census.bases[s][self.maps[k]], entries):
            raise EvaluationError("generator images match but the tuple differs")
        return s, k

    def conjugation(self) -> tuple[np.ndarray, np.ndarray]:
        """R[phi, s], K[phi, s]: base listing of s conjugated by phi is listing K of subgroup R."""
        if "conj" not in self._cache:
            N, S = self.group.order, self.S
            R = np.empty((N, S), dtype=np.int64)
            K = np.empty((N, S), dtype=np.int64)
            for lo in range(0, N, self.chunk):
                phi = np.arange(lo, min(N, lo + self.chunk))[:, None]
                pinv = np.asarray(self.group.inv(phi.ravel())).reshape(phi.shape)
                ca = self.mul(self.mul(phi, self.A[None, :]), pinv)
                cb = self.mul(self.mul(phi, self.Bg[None, :]), pinv)
                flat = self._lookup_pairs(ca, cb)
                if np.any(flat < 0):
                    self.complete = False
                R[lo : lo + len(phi)] = np.where(flat < 0, -1, flat // len(self.maps))
                K[lo : lo + len(phi)] = np.where(flat < 0, -1, flat % len(self.maps))
            self._cache["conj"] = (R, K)
        return self._cache["conj"]

    def _phi_tables(self):
        R, K = self.conjugation()
        d = self.disj()
        cols = np.arange(self.S)[None, :]
        safe = np.maximum(R, 0)
        DJ = np.where(R >= 0, d[safe, cols], False)  # disj(f^phi, f)
        Cz = (R == cols) & (K == 0)  # f^phi = f entrywise
        return DJ, Cz

    # -- the support order -------------------------------------------------------

    def subseteq_parts(self) -> dict[str, np.ndarray]:
        """Clauses of supp(s) ⊑ supp(t); rows are s (left), columns t (right)."""
        if "subseteq" in self._cache:
            return self._cache["subseteq"]
        ind = self.indec()
        d = self.disj()
        DJ, Cz = self._phi_tables()
        head = ind[:, None] & ind[None, :] & ~d
        # ¬∃φ [¬disj(f^φ, f) ∧ disj(g^φ, g)]
        e1 = _bmatmul((~DJ).T, DJ)
        # ¬∃φ (f^φ = f ∧ g^φ ≠ g)
        e2 = _bmatmul(Cz.T, ~Cz)
        # ∀ renderings, evaluated by an independent all-reduction over φ
        f1 = np.ones_like(head)
        f2 = np.ones_like(head)
        printed = np.ones_like(head)
        N = len(DJ)
        step = max(1, self.chunk // max(1, self.S))
        for lo in range(0, N, step):
            dj, cz = DJ[lo : lo + step], Cz[lo : lo + step]
            # ∀φ [disj(g^φ, g) → disj(f^φ, f)]
            f1 &= np.all(~dj[:, None, :] | dj[:, :, None], axis=0)
            # ∀φ (g^φ ≠ g → f^φ ≠ f), the contrapositive of the ¬∃ clause
            f2 &= np.all(cz[:, None, :] | ~cz[:, :, None], axis=0)
            # ∀φ (g^φ ≠ g → f^φ = f), the clause exactly as printed in the ∀ statement
            printed &= np.all(cz[:, None, :] | cz[:, :, None], axis=0)
        parts = {
            "head": head,
            "not_exists_1": ~e1,
            "not_exists_2": ~e2,
            "forall_1": f1,
            "forall_2": f2,
            "forall_2_printed": printed,
        }
        parts["not_exists"] = head & ~e1 & ~e2
        parts["forall"] = head & f1 & f2
        parts["forall_printed"] = head & f1 & printed
        self._cache["subseteq"] = parts
        return parts

    def subseteq_witness(self, s: int, t: int) -> dict | None:
        """Why supp(s) ⊑ supp(t) fails, with the least φ when a quantifier is to blame."""
        parts = self.subseteq_parts()
        if parts["not_exists"][s, t]:
            return None
        if not parts["head"][s, t]:
            return {"clause": "indec/disj"}
        DJ, Cz = self._phi_tables()
        hit = np.flatnonzero(~DJ[:, s] & DJ[:, t])
        if len(hit):
            return {"clause": "exists-disj", "phi": int(hit[0])}
        hit = np.flatnonzero(Cz[:, s] & ~Cz[:, t])
        return {"clause": "exists-centraliser", "phi": int(hit[0])}

    def leaves(self) -> LeafMatrices:
        if "leaves" not in self._cache:
            parts = self.subseteq_parts()
            sub = parts["not_exists"]
            d = self.disj()
            spd = _samepd_from_subset(sub & ~sub.T)
            rp = _reppoint_from(d, spd)
            self._cache["leaves"] = LeafMatrices(
                SYNTACTIC, self.indec(), self.comm(), d, sub, spd, rp, self.complete,
                {"subseteq_forall": parts["forall"], "subseteq_forall_printed": parts["forall_printed"]},
            )
        return self._cache["leaves"]


# -- semantic engine -------------------------------------------------------------


@dataclass(frozen=True)
class SupportShape:
    """What the tree says about one subgroup: support, components, largest orbit."""

    support: frozenset[int]
    eccs: tuple
    max_orbit: int
    anomaly: str = ""

    @property
    def indec(self) -> bool:
        return not self.anomaly and len(self.eccs) == 1 and self.max_orbit < 30

    @property
    def attachment(self) -> int | None:
        return self.eccs[0].attachment if self.indec else None

    @property
    def direction(self) -> str | None:
        return self.eccs[0].direction if self.indec else None


def support_shape(t: A5Tuple, instance: CfpoInstance) -> SupportShape:
    supp = support_of(t)
    orbit = max(len(o) for o in tuple_orbits(t))
    try:
        part = extended_components(t, instance)
    except A5Error as exc:
        return SupportShape(supp, (), orbit, str(exc))
    return SupportShape(supp, part.components, orbit, "leftover" if part.leftover else "")


def attachment_point(t: A5Tuple, instance: CfpoInstance) -> int:
    shape = support_shape(t, instance)
    if len(shape.support) == len(instance):
        raise EvaluationError("support is every point")
    if shape.anomaly or len(shape.eccs) != 1:
        raise EvaluationError("attachment point needs exactly one extended component")
    return shape.eccs[0].attachment


class SemanticEngine:
    """Structural characterisations read from supports on the instance."""

    def __init__(self, instance: CfpoInstance, tuples: Sequence[A5Tuple], complete: bool = True):
        self.instance = instance
        self.shapes = [support_shape(t, instance) for t in tuples]
        self.S = len(self.shapes)
        self.complete = complete
        n = len(instance)
        self.supp = np.zeros((self.S, n), dtype=bool)
        for i, sh in enumerate(self.shapes):
            self.supp[i, list(sh.support)] = True
        self._leaves: LeafMatrices | None = None

    def indec(self) -> np.ndarray:
        return np.array([sh.indec for sh in self.shapes], dtype=bool)

    def attachments(self) -> np.ndarray:
        return np.array([-1 if sh.attachment is None else sh.attachment for sh in self.shapes], dtype=np.int64)

    def directions(self) -> list[str | None]:
        return [sh.direction for sh in self.shapes]

    def leaves(self) -> LeafMatrices:
        if self._leaves is not None:
            return self._leaves
        ind = self.indec()
        both = ind[:, None] & ind[None, :]
        F = self.supp.astype(np.float32)
        meet = (F @ F.T) > 0.5
        inside = (F @ (1 - F).T) < 0.5  # supp(s) ⊆ supp(t)
        disjoint_comm = ~meet  # disjoint supports always commute
        disj = both & ~meet
        sub = both & meet & inside
        att = self.attachments()
        dirs = np.array([d or "" for d in self.directions()])
        same_pt = (att[:, None] == att[None, :]) & both
        same_dir = dirs[:, None] == dirs[None, :]
        spd = same_pt & same_dir
        rp = disj & same_pt & ~same_dir
        self._leaves = LeafMatrices(SEMANTIC, ind, disjoint_comm, disj, sub, spd, rp, self.complete)
        return self._leaves


# -- point representatives -------------------------------------------------------


@dataclass(frozen=True)
class PointRep:
    """An ordered pair of census subgroups (listing 0 each) satisfying RepPoint."""

    first: int
    second: int

    def pair(self) -> tuple[int, int]:
        return (self.first, self.second)


def represented_point(rep: PointRep, engine: SemanticEngine) -> int:
    a = engine.shapes[rep.first].attachment
    b = engine.shapes[rep.second].attachment
    if a is None or a != b:
        raise EvaluationError("pair does not represent a point")
    return a


# -- backend agreement -------------------------------------------------------------


def _matrix_for(leaves: LeafMatrices, name: str):
    return {
        "indec": leaves.indec,
        "disj": leaves.disj,
        "subseteq": leaves.subseteq,
        "subset": leaves.subset,
        "samepd": leaves.samepd,
        "reppoint": leaves.reppoint,
    }[name]


def cross_check(syn: LeafMatrices, sem: LeafMatrices, formulas: Sequence[str] = LEAF_FORMULAS, limit: int = 20) -> dict:
    """Compare the two backends argument by argument.

    samepd is compared on pairs where both subgroups are semantically Indec, the
    precondition of its structural reading.  eqreppoint is compared over every
    pair drawn from the union of both backends' RepPoint pairs; outside that
    union both backends are false by definition.
    """
    if syn.size != sem.size:
        raise EvaluationError("backends evaluated different censuses")
    out: dict[str, dict] = {}
    for name in formulas:
        if name not in LEAF_FORMULAS:
            raise EvaluationError(f"unknown formula {name!r}")
        if name == "eqreppoint":
            pairs = sorted(set(syn.reppoint_pairs()) | set(sem.reppoint_pairs()))
            a = syn.eq_rep_point_matrix(pairs)
            b = sem.eq_rep_point_matrix(pairs)
            bad = np.argwhere(a != b)
            disc = [
                Verdict(name, (pairs[i], pairs[j]), BOTH, None, {"syntactic": bool(a[i, j]), "semantic": bool(b[i, j])}, True, True)
                for i, j in bad[:limit]
            ]
            out[name] = {"checked": int(a.size), "discrepancies": int(len(bad)), "examples": disc}
            continue
        a = _matrix_for(syn, name)
        b = _matrix_for(sem, name)
        mask = np.ones(a.shape, dtype=bool)
        if name == "samepd":
            mask = sem.indec[:, None] & sem.indec[None, :]
        bad = np.argwhere((a != b) & mask)
        disc = [
            Verdict(name, tuple(int(v) for v in idx), BOTH, None,
                    {"syntactic": bool(a[tuple(idx)]), "semantic": bool(b[tuple(idx)])}, True, True)
            for idx in bad[:limit]
        ]
        out[name] = {"checked": int(mask.sum()), "discrepancies": int(len(bad)), "examples": disc}
    return out


def verdict(leaves: LeafMatrices, name: str, args: tuple) -> Verdict:
    if name == "eqreppoint":
        f, g = args
        value = leaves.eq_rep_point(tuple(f), tuple(g))
    else:
        value = bool(_matrix_for(leaves, name)[tuple(args)])
    return Verdict(name, tuple(args), leaves.backend, value, None, leaves.complete)


def verdicts_to_json(vs: Sequence[Verdict]) -> str:
    return json.dumps([v.to_json() for v in vs], sort_keys=True) + "\n"


# -- literal tuple-level evaluation ---------------------------------------------------


class LiteralEvaluator:
    """Formulas on individual listings, with no subgroup-level shortcut.

    Used to confirm that values do not depend on the listing; quadratic in the
    census and linear in the group, so meant for small groups.
    """

    def __init__(self, engine: SyntacticEngine, table_limit: int = 2048):
        self.engine = engine
        self.group = engine.group
        self.table = None
        if self.group.order <= table_limit:
            ids = np.arange(self.group.order)
            self.table = engine.mul(ids[:, None], ids[None, :])
        B = engine.census.bases
        self.tuples = B[:, engine.maps].reshape(-1, 60) if engine.S else np.zeros((0, 60), dtype=np.int64)
        self.inv_tuples = np.asarray(self.group.inv(self.tuples.ravel())).reshape(self.tuples.shape)
        self._indec: dict[bytes, bool] = {}

    def entries(self, s: int, k: int) -> np.ndarray:
        return self.tuples[s * len(self.engine.maps) + k]

    def mul(self, a, b) -> np.ndarray:
        if self.table is not None:
            a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
            return self.table[a, b]
        return self.engine.mul(a, b)

    def comm(self, f: np.ndarray, g: np.ndarray) -> bool:
        return bool(np.array_equal(self.mul(f[:, None], g[None, :]), self.mul(g[None, :], f[:, None])))

    def indec(self, f: np.ndarray) -> bool:
        key = f.tobytes()
        if key not in self._indec:
            H = self.mul(self.inv_tuples, f[None, :])  # h_i = g_i^-1 f_i, so g * h = f
            flat = self.engine._lookup_pairs(H[:, self.engine.gen_a], H[:, self.engine.gen_b])
            ok = True
            for j in np.flatnonzero(flat >= 0):
                if np.array_equal(self.tuples[flat[j]], H[j]) and self.comm(self.tuples[j], H[j]):
                    ok = False
                    break
            self._indec[key] = ok
        return self._indec[key]

    def disj(self, f: np.ndarray, g: np.ndarray) -> bool:
        return self.indec(f) and self.indec(g) and self.comm(f, g)

    def conj_all(self, f: np.ndarray) -> np.ndarray:
        """f^phi for every phi, shape (order, 60)."""
        phi = np.arange(self.group.order)[:, None]
        pinv = np.asarray(self.group.inv(phi.ravel()))[:, None]
        return self.mul(self.mul(phi, f[None, :]), pinv)

    def subseteq(self, f: np.ndarray, g: np.ndarray) -> dict[str, bool]:
        head = self.indec(f) and self.indec(g) and not self.disj(f, g)
        F, G = self.conj_all(f), self.conj_all(g)
        dj_f = np.array([self.disj(x, f) for x in F])
        dj_g = np.array([self.disj(x, g) for x in G])
        fix_f = np.all(F == f[None, :], axis=1)
        fix_g = np.all(G == g[None, :], axis=1)
        not_exists = head and not np.any(~dj_f & dj_g) and not np.any(fix_f & ~fix_g)
        forall = head and bool(np.all(~dj_g | dj_f)) and bool(np.all(fix_g | ~fix_f))
        printed = head and bool(np.all(~dj_g | dj_f)) and bool(np.all(fix_g | fix_f))
        return {"not_exists": not_exists, "forall": forall, "forall_printed": printed}
