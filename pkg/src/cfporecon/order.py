"""Recovering the order from betweenness, with and without a parameter pair.

Everything here works on class-level relations: ``b[z, x, y]`` (strict),
``b_incl[z, x, y]`` (endpoints allowed), ``related[x, y]`` and
``path_between[z, x, y]`` over the reconstructed points.  Four-index
arrays are indexed ``[x1, x2, y1, y2]``: the formula with parameter
pair (y1, y2) holds of (x1, x2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product

import numpy as np

ROLES = ("x1", "x2", "y1", "y2")
_PAIRS = tuple(combinations(range(4), 2))
_TRIPLES = tuple((z, a, b) for z in range(4) for a, b in _PAIRS if z not in (a, b))
B_MODES = ("inclusive", "strict")
STEP_READINGS = ("printed", "cumulative")
LESSDOT_VARIANTS = ("as-written", "disjunctive")


def _profile_bits(eq, btw) -> int:
    """Pack equality of the six role pairs and strict betweenness of the twelve role triples."""
    key = 0
    for i, (a, b) in enumerate(_PAIRS):
        key |= int(eq(a, b)) << i
    for i, (z, a, b) in enumerate(_TRIPLES):
        key |= int(btw(z, a, b)) << (6 + i)
    return key


def _weak_orders(n: int):
    for ranks in product(range(n), repeat=n):
        used = sorted(set(ranks))
        if used == list(range(len(used))):
            yield ranks


@lru_cache(maxsize=None)
def order0_table() -> dict[int, bool]:
    """Profile -> (x1 < x2) over every placement of four points on a chain with y1 < y2.

    Pairwise Related points of a CFPO lie on one chain, so these weak orders
    are every configuration the figure can depict.  A profile never occurs
    with both answers; that is checked here.
    """
    table: dict[int, bool] = {}
    for r in _weak_orders(4):
        if not r[2] < r[3]:
            continue

        def btw(z, a, b):
            return min(r[a], r[b]) < r[z] < max(r[a], r[b])

        key = _profile_bits(lambda a, b: r[a] == r[b], btw)
        value = r[0] < r[1]
        if table.setdefault(key, value) != value:
            raise AssertionError("order profile is ambiguous")
    return table


def order0_positive_profiles() -> list[int]:
    return sorted(k for k, v in order0_table().items() if v)


def order0_at(b: np.ndarray, related: np.ndarray, x1, x2, y1, y2) -> np.ndarray:
    """(x1 <_0 x2 ⇔ y1 < y2) on broadcast index arrays: all four Related and the profile forces x1 < x2."""
    v = np.broadcast_arrays(np.asarray(x1), np.asarray(x2), np.asarray(y1), np.asarray(y2))
    key = np.zeros(v[0].shape, dtype=np.int64)
    for i, (a, c) in enumerate(_PAIRS):
        key |= (v[a] == v[c]).astype(np.int64) << i
    for i, (z, a, c) in enumerate(_TRIPLES):
        key |= b[v[z], v[a], v[c]].astype(np.int64) << (6 + i)
    allrel = np.ones(v[0].shape, dtype=bool)
    for a, c in _PAIRS:
        allrel &= related[v[a], v[c]]
    return allrel & np.isin(key, order0_positive_profiles())


def order0_tensor(b: np.ndarray, related: np.ndarray) -> np.ndarray:
    """O0[x1, x2, y1, y2] in full; n^4 memory, for small structures."""
    n = len(related)
    if n == 0:
        return np.zeros((0, 0, 0, 0), dtype=bool)
    return order0_at(b, related, *np.indices((n, n, n, n)))


def alphas(bx: np.ndarray, related: np.ndarray, x1, x2, y1, y2) -> dict[str, np.ndarray]:
    """α1..α5 on broadcast index arrays."""
    R = related
    r12 = R[x1, x2]
    return {
        "alpha1": bx[y2, y1, x2] & r12,
        "alpha2": bx[x2, x1, y2],
        "alpha3": bx[y1, x1, y2] & r12,
        "alpha4": bx[x1, y1, x2],
        "alpha5": R[x1, y2] & R[x2, y1] & ~R[x1, y1] & ~R[x2, y2] & r12,
    }


def order1_at(b: np.ndarray, bx: np.ndarray, related: np.ndarray, x1, x2, y1, y2,
              alpha5: bool = True, irreflexive: bool = True) -> np.ndarray:
    """(x1 <_1 x2 ⇔ y1 < y2): neither <_0 orientation holds and some α does."""
    al = alphas(bx, related, x1, x2, y1, y2)
    any_alpha = al["alpha1"] | al["alpha2"] | al["alpha3"] | al["alpha4"]
    if alpha5:
        any_alpha = any_alpha | al["alpha5"]
    out = ~order0_at(b, related, x2, x1, y1, y2) & ~order0_at(b, related, x1, x2, y1, y2) & any_alpha
    if irreflexive:
        # endpoint-inclusive B lets α2/α4 fire on x1 = x2; a strict order never relates x to itself
        out = out & (np.asarray(x1) != np.asarray(x2))
    return out


@dataclass
class OrderLevels:
    """Truth tables of (x1 <_n x2 ⇔ y1 < y2) for n = 0..n_max at one parameter pair."""

    params: tuple[int, int]
    levels: list[np.ndarray]
    stabilized: bool
    options: dict = field(default_factory=dict)

    def order_iff(self, n_max: int | None = None) -> np.ndarray:
        lv = self.levels if n_max is None else self.levels[: n_max + 1]
        out = np.zeros_like(lv[0])
        for L in lv:
            out |= L
        return out

    def first_level(self) -> np.ndarray:
        """Least n with x1 <_n x2, or -1."""
        out = np.full(self.levels[0].shape, -1, dtype=np.int64)
        for n, L in enumerate(self.levels):
            out[(out < 0) & L] = n
        return out


class OrderEvaluator:
    """The parameter-pair order formulas over one reconstructed structure."""

    def __init__(self, b: np.ndarray, b_incl: np.ndarray, related: np.ndarray,
                 b_mode: str = "inclusive", alpha5: bool = True, irreflexive: bool = True,
                 step: str = "cumulative"):
        if b_mode not in B_MODES:
            raise ValueError(f"unknown B mode {b_mode!r}")
        if step not in STEP_READINGS:
            raise ValueError(f"unknown step reading {step!r}")
        self.n = len(related)
        self.related = related
        self.b = b
        self.bx = b_incl if b_mode == "inclusive" else b
        self.b_mode = b_mode
        self.alpha5 = alpha5
        self.irreflexive = irreflexive
        self.step = step
        n = self.n
        x1, x2, w = (a.astype(np.intp) for a in np.indices((n, n, n)))
        # clauses 3 and 4 compare x1 <_1 x2 against a fresh parameter pair; this does not depend on (y1, y2).
        # "cumulative" also admits <_0 there, which is needed when x1 (or x2) is itself comparable to w
        self.up = self._step(x1, x2, x1, w)  # up[x1, x2, w] = (x1 <_1 x2 ⇔ x1 < w)
        self.down = self._step(x1, x2, w, x2)  # down[x1, x2, w] = (x1 <_1 x2 ⇔ w < x2)

    def order0(self, x1, x2, y1, y2) -> np.ndarray:
        return order0_at(self.b, self.related, x1, x2, y1, y2)

    def order1(self, x1, x2, y1, y2) -> np.ndarray:
        return order1_at(self.b, self.bx, self.related, x1, x2, y1, y2, self.alpha5, self.irreflexive)

    def _step(self, x1, x2, y1, y2) -> np.ndarray:
        out = self.order1(x1, x2, y1, y2)
        if self.step == "cumulative":
            out = out | self.order0(x1, x2, y1, y2)
        return out

    def levels(self, y1: int, y2: int, n_max: int) -> OrderLevels:
        """Levels 0..n_max; stabilized when level n_max + 1 is empty, after which all are."""
        X1, X2 = np.indices((self.n, self.n))
        L = [self.order0(X1, X2, y1, y2), self.order1(X1, X2, y1, y2)]
        while len(L) < n_max + 2:
            n = len(L)
            prev = L[n - 1]
            c1 = np.ones_like(prev)
            for i in range(n - 1):
                c1 &= ~L[i].any(axis=1)[:, None] & ~L[i].any(axis=0)[None, :]
            r = prev.any(axis=1)  # x1 <_{n-1} z for some z
            q = prev.any(axis=0)  # z <_{n-1} x2 for some z
            c2 = (r[:, None] & ~q[None, :]) | (q[None, :] & ~r[:, None])
            c3 = q[None, :] | np.any(prev[:, None, :] & self.up, axis=2)
            c4 = r[:, None] | np.any(prev.T[None, :, :] & self.down, axis=2)
            L.append(c1 & c2 & c3 & c4)
        stabilized = not L[n_max + 1].any()
        options = {"b_mode": self.b_mode, "alpha5": self.alpha5, "irreflexive": self.irreflexive, "step": self.step}
        return OrderLevels((y1, y2), L[: n_max + 1], stabilized, options)


# -- the first-order route: ⋖_n ---------------------------------------------------------


def _cliques_containing(adj: np.ndarray, start: int, size: int, pool: np.ndarray) -> list[int] | None:
    """A clique of ``size`` vertices from ``pool`` containing ``start``, by backtracking."""
    chosen = [start]
    cand = [int(v) for v in pool if v != start and adj[start, v]]

    def extend(cands: list[int]) -> bool:
        if len(chosen) == size:
            return True
        if len(chosen) + len(cands) < size:
            return False
        for i, v in enumerate(cands):
            chosen.append(v)
            if extend([u for u in cands[i + 1 :] if adj[v, u]]):
                return True
            chosen.pop()
        return False

    return list(chosen) if extend(cand) else None


def _any_clique(adj: np.ndarray, size: int, pool: np.ndarray) -> list[list[int]]:
    """Every clique of ``size`` vertices from ``pool``."""
    out: list[list[int]] = []
    verts = [int(v) for v in pool]

    def extend(chosen: list[int], cands: list[int]) -> None:
        if len(chosen) == size:
            out.append(list(chosen))
            return
        if len(chosen) + len(cands) < size:
            return
        for i, v in enumerate(cands):
            extend(chosen + [v], [u for u in cands[i + 1 :] if adj[v, u]])

    extend([], verts)
    return out


def lessdot(related: np.ndarray, path_between: np.ndarray, n: int, variant: str = "as-written") -> tuple[np.ndarray, dict]:
    """x ⋖_n y for every class pair, with one witness antichain per true pair."""
    if variant not in LESSDOT_VARIANTS:
        raise ValueError(f"unknown lessdot variant {variant!r}")
    m = len(related)
    out = np.zeros((m, m), dtype=bool)
    witness: dict[tuple[int, int], list[int]] = {}
    for x in range(m):
        pool = np.flatnonzero(related[x])
        adj = ~related & path_between[x]
        cliques = None if variant == "as-written" else _any_clique(adj, n + 1, pool)
        for y in range(m):
            if not related[x, y]:
                continue
            if variant == "as-written":
                for x0 in pool:
                    if path_between[x, y, x0]:
                        continue
                    c = _cliques_containing(adj, int(x0), n + 1, pool)
                    if c is not None:
                        out[x, y] = True
                        witness[(x, y)] = c
                        break
            else:
                for c in cliques:
                    if any(not path_between[x, y, v] for v in c):
                        out[x, y] = True
                        witness[(x, y)] = c
                        break
    return out, witness
