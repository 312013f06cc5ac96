"""Abstract groups: element ids with a multiplication oracle and nothing else.

The syntactic pipeline only ever sees an :class:`AbstractGroup`.  Two
implementations exist: a full Cayley table, and an enumerated permutation
group whose permutations stay private to the multiplication oracle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .a5 import IDENTITY as A5_IDENTITY, canonical_a5, listing_maps
from .perm import PermGroup, row_keys


class GroupInputError(ValueError):
    pass


class AbstractGroup:
    """Elements are 0..order-1; ``mul`` and ``inv`` accept and return id arrays."""

    order: int
    identity: int

    def mul(self, a, b) -> np.ndarray:
        raise NotImplementedError

    def inv(self, a) -> np.ndarray:
        raise NotImplementedError

    def conj(self, phi, x) -> np.ndarray:
        """phi x phi^-1."""
        return self.mul(self.mul(phi, x), self.inv(phi))

    def element_orders(self, cap: int = 60) -> np.ndarray:
        ids = np.arange(self.order)
        out = np.zeros(self.order, dtype=np.int64)
        power = ids.copy()
        for k in range(1, cap + 1):
            hit = (out == 0) & (power == self.identity)
            out[hit] = k
            if np.all(out):
                break
            power = self.mul(power, ids)
        return out


class TableGroup(AbstractGroup):
    def __init__(self, table):
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise GroupInputError("table must be square")
        n = t.shape[0]
        if n == 0 or t.min() < 0 or t.max() >= n:
            raise GroupInputError("table entries out of range")
        ident = [i for i in range(n) if np.array_equal(t[i], np.arange(n)) and np.array_equal(t[:, i], np.arange(n))]
        if len(ident) != 1:
            raise GroupInputError("table has no two-sided identity")
        self.table = t
        self.order = n
        self.identity = ident[0]
        inv = np.argmax(t == self.identity, axis=1)
        if not np.all(t[np.arange(n), inv] == self.identity):
            raise GroupInputError("some element has no inverse")
        self._inv = inv

    def mul(self, a, b):
        return self.table[a, b]

    def inv(self, a):
        return self._inv[a]

    def check_associative(self, sample: int | None = None, seed: int = 0) -> bool:
        if sample is None:
            return _assoc_full(self.table)
        rng = np.random.default_rng(seed)
        a, b, c = (rng.integers(0, self.order, sample) for _ in range(3))
        return bool(np.array_equal(self.mul(self.mul(a, b), c), self.mul(a, self.mul(b, c))))


def _assoc_full(t: np.ndarray) -> bool:
    # (ab)c == a(bc) for all triples
    left = t[t]  # left[a, b, c] = t[t[a, b], c]
    right = t[:, t]  # right[a, b, c] = t[a, t[b, c]]
    return bool(np.array_equal(left, right))


class EnumeratedPermGroup(AbstractGroup):
    """Multiplication oracle over an enumerated permutation group.

    Ids follow the sorted element list.  Only ``mul`` and ``inv`` touch the
    permutations; ``_elements`` is kept for the cross-check harness.
    """

    def __init__(self, group: PermGroup):
        if group.elements is None:
            raise GroupInputError("group is not enumerated")
        self._elements = np.ascontiguousarray(group.elements)
        self.order = len(self._elements)
        keys = row_keys(self._elements)
        if isinstance(keys[0], int):
            self._keys = np.array(keys, dtype=np.int64)
            self._sorter = np.argsort(self._keys)
            self._sorted = self._keys[self._sorter]
            self._dict = None
        else:
            self._dict = {k: i for i, k in enumerate(keys)}
        ident = np.arange(self._elements.shape[1])[None, :]
        self.identity = int(self._lookup(ident)[0])
        self._inv = self._lookup(np.argsort(self._elements, axis=1))

    def _lookup(self, rows: np.ndarray) -> np.ndarray:
        keys = row_keys(rows)
        if self._dict is not None:
            return np.array([self._dict[k] for k in keys], dtype=np.int64)
        k = np.array(keys, dtype=np.int64)
        pos = np.searchsorted(self._sorted, k)
        if np.any(pos >= len(self._sorted)) or np.any(self._sorted[np.minimum(pos, len(self._sorted) - 1)] != k):
            raise GroupInputError("product left the group")
        return self._sorter[pos]

    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        scalar = a.ndim == 0 and b.ndim == 0
        a, b = np.broadcast_arrays(np.atleast_1d(a), np.atleast_1d(b))
        rows = np.take_along_axis(self._elements[a], self._elements[b], axis=1)
        out = self._lookup(rows)
        return out[0] if scalar else out

    def inv(self, a):
        return self._inv[a]

    def table(self) -> np.ndarray:
        ids = np.arange(self.order)
        return np.stack([self.mul(np.full(self.order, i), ids) for i in ids])


# -- A5 census on an abstract group --------------------------------------------


@dataclass
class AbstractCensus:
    """Subgroups as 60 element ids in canonical listing order (listing 0)."""

    bases: np.ndarray  # (S, 60)
    complete: bool = True

    def __len__(self):
        return len(self.bases)

    def listing(self, s: int, k: int) -> np.ndarray:
        return self.bases[s][listing_maps()[k]]


def listing_from_pair(group: AbstractGroup, x: int, y: int) -> np.ndarray:
    model = canonical_a5()
    gens = (x, y, int(group.inv(np.array(y))))
    out = np.empty(60, dtype=np.int64)
    out[0] = group.identity
    for k in range(1, 60):
        out[k] = group.mul(np.array(out[model.parent[k]]), np.array(gens[model.letter[k]]))
    return out


def find_a5_abstract(group: AbstractGroup) -> AbstractCensus:
    """Exhaustive scan over (order 2, order 3) pairs whose product has order 5."""
    orders = group.element_orders(6)
    invols = np.flatnonzero(orders == 2)
    threes = np.flatnonzero(orders == 3)
    model = canonical_a5()
    maps = listing_maps()
    seen: set[frozenset[int]] = set()
    covered: set[tuple[int, int]] = set()
    bases = []
    for x in invols:
        if not len(threes):
            break
        xy = group.mul(np.full(len(threes), x), threes)
        p = xy
        for _ in range(4):
            p = group.mul(p, xy)
        good = (p == group.identity) & (xy != group.identity)
        for y in threes[good]:
            if (int(x), int(y)) in covered:
                continue
            base = listing_from_pair(group, int(x), int(y))
            key = frozenset(base.tolist())
            if len(key) != 60:
                raise AssertionError("(2,3,5) pair failed to generate A5")
            if key in seen:
                continue
            seen.add(key)
            bases.append(base)
            for m in maps:
                lst = base[m]
                covered.add((int(lst[model.gen_a]), int(lst[model.gen_b])))
    bases.sort(key=lambda b: sorted(b.tolist()))
    arr = np.array(bases, dtype=np.int64).reshape(-1, 60)
    return AbstractCensus(arr, True)


# -- files --------------------------------------------------------------------


def load_table(path: str | Path) -> TableGroup:
    doc = json.loads(Path(path).read_text())
    t = np.asarray(doc["table"], dtype=np.int64)
    if "order" in doc and int(doc["order"]) != len(t):
        raise GroupInputError("declared order does not match the table")
    return TableGroup(t)


def table_to_json(group: AbstractGroup) -> str:
    t = group.table if isinstance(group, TableGroup) else group.table()
    return json.dumps({"order": int(group.order), "table": np.asarray(t).tolist()}) + "\n"


def cyclic_table(n: int) -> TableGroup:
    i = np.arange(n)
    return TableGroup((i[:, None] + i[None, :]) % n)


def a5_table() -> TableGroup:
    return TableGroup(canonical_a5().table)
