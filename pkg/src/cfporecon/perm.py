"""Permutations of an instance's point set and orientation-preserving tree automorphisms.

Points are the dense ids ``0..n-1``; a :class:`Perm` stores the image of each id.
Composition applies the right factor first, so ``compose(a, b)(x) == a(b(x))``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import factorial
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .cfpo import UP, DOWN, CfpoInstance

DEFAULT_ORDER_BOUND = 10**6


class PermError(ValueError):
    pass


@dataclass(frozen=True)
class Perm:
    images: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(tuple(range(n)))

    @classmethod
    def from_array(cls, arr) -> "Perm":
        return cls(tuple(int(v) for v in arr))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Perm":
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a] = b
        return cls(tuple(img))

    def __len__(self):
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def array(self) -> np.ndarray:
        return np.asarray(self.images, dtype=np.int64)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    def order(self) -> int:
        p, k = self, 1
        ident = Perm.identity(len(self))
        while p != ident:
            p = compose(self, p)
            k += 1
        return k


def _same_size(a: Perm, b: Perm) -> None:
    if len(a) != len(b):
        raise PermError(f"mismatched point sets ({len(a)} vs {len(b)})")


def compose(a: Perm, b: Perm) -> Perm:
    _same_size(a, b)
    ai = a.images
    return Perm(tuple(ai[i] for i in b.images))


def inverse(a: Perm) -> Perm:
    inv = [0] * len(a)
    for i, v in enumerate(a.images):
        inv[v] = i
    return Perm(tuple(inv))


def conjugate(p: Perm, phi: Perm) -> Perm:
    """phi p phi^-1."""
    return compose(compose(phi, p), inverse(phi))


def support(p: Perm) -> frozenset[int]:
    return frozenset(i for i, v in enumerate(p.images) if i != v)


def support_tuple(t: Iterable[Perm]) -> frozenset[int]:
    out: set[int] = set()
    for p in t:
        out |= support(p)
    return frozenset(out)


def is_automorphism(p: Perm, instance: CfpoInstance) -> bool:
    if len(p) != len(instance):
        return False
    if sorted(p.images) != list(range(len(p))):
        return False
    edges = instance.edge_set
    return all((p.images[a], p.images[b]) in edges for a, b in instance.edges)


def orbits(perms: Iterable[Perm], n: int) -> list[frozenset[int]]:
    """Orbit partition of range(n) under the group generated by ``perms``."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for i, v in enumerate(p.images):
            ri, rv = find(i), find(v)
            if ri != rv:
                parent[max(ri, rv)] = min(ri, rv)
    groups: dict[int, set[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), set()).add(i)
    return [frozenset(groups[r]) for r in sorted(groups)]


def restrict(p: Perm, X: Iterable[int], instance: CfpoInstance | None = None) -> Perm:
    """Act as p on X and as the identity elsewhere."""
    xs = set(X)
    if {p.images[x] for x in xs} != xs:
        raise PermError("set is not preserved by the permutation")
    img = tuple(p.images[i] if i in xs else i for i in range(len(p)))
    out = Perm(img)
    if instance is not None and not is_automorphism(out, instance):
        raise PermError("restriction is not an automorphism")
    return out


# -- keys for fast membership ------------------------------------------------


def row_keys(rows: np.ndarray) -> list:
    """Hashable keys for the rows of an (m, n) image array."""
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    m, n = rows.shape
    if n <= 15:
        weights = np.array([n**k for k in range(n)], dtype=np.int64)
        return (rows @ weights).tolist()
    small = rows.astype(np.uint8 if n <= 256 else np.uint16)
    return [r.tobytes() for r in small]


# -- rooted views and canonical labels ----------------------------------------


@dataclass
class RootedView:
    """The instance rooted at ``root`` with canonical subtree labels."""

    instance: CfpoInstance
    root: int
    parent: dict[int, int | None] = field(default_factory=dict)
    children: dict[int, list[tuple[str, int]]] = field(default_factory=dict)
    label: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        inst = self.instance
        order = [self.root]
        self.parent = {self.root: None}
        for p in order:
            kids = []
            for q in inst.neighbours[p]:
                if q not in self.parent:
                    self.parent[q] = p
                    kids.append((UP if inst.is_up_edge(p, q) else DOWN, q))
                    order.append(q)
            self.children[p] = kids
        interned: dict[tuple, int] = {}
        for p in reversed(order):
            key = tuple(sorted((d, self.label[q]) for d, q in self.children[p]))
            self.label[p] = interned.setdefault(key, len(interned))
        for p in order:
            self.children[p].sort(key=lambda dq: (dq[0], self.label[dq[1]], dq[1]))

    def classes(self, p: int) -> list[list[int]]:
        """Children of p grouped by (direction, isomorphism type), in canonical order."""
        out: dict[tuple[str, int], list[int]] = {}
        for d, q in self.children[p]:
            out.setdefault((d, self.label[q]), []).append(q)
        return list(out.values())

    def direction(self, q: int) -> str:
        p = self.parent[q]
        return UP if self.instance.is_up_edge(p, q) else DOWN

    def subtree(self, q: int) -> list[int]:
        out, stack = [], [q]
        while stack:
            p = stack.pop()
            out.append(p)
            stack.extend(c for _, c in self.children[p])
        return out

    def iso(self, u: int, v: int, out: dict[int, int] | None = None) -> dict[int, int]:
        """Canonical isomorphism from the subtree at u onto the isomorphic subtree at v."""
        if out is None:
            out = {}
        if self.label[u] != self.label[v]:
            raise PermError("subtrees are not isomorphic")
        stack = [(u, v)]
        while stack:
            a, b = stack.pop()
            out[a] = b
            for (_, ca), (_, cb) in zip(self.children[a], self.children[b]):
                stack.append((ca, cb))
        return out

    def permute_subtrees(self, mapping: dict[int, int]) -> Perm:
        """Automorphism sending subtree(c) onto subtree(mapping[c]) for sibling roots c."""
        img = list(range(len(self.instance)))
        for c, d in mapping.items():
            for a, b in self.iso(c, d).items():
                img[a] = b
        return Perm(tuple(img))


def centers(instance: CfpoInstance) -> list[int]:
    deg = {p: len(instance.neighbours[p]) for p in instance.points}
    remaining = set(instance.points)
    layer = [p for p in remaining if deg[p] <= 1]
    while len(remaining) > 2:
        nxt = []
        for p in layer:
            remaining.discard(p)
            for q in instance.neighbours[p]:
                if q in remaining:
                    deg[q] -= 1
                    if deg[q] == 1:
                        nxt.append(q)
        layer = nxt
    return sorted(remaining)


# -- groups -------------------------------------------------------------------


@dataclass
class PermGroup:
    n: int
    generators: list[Perm]
    order: int | None = None
    elements: np.ndarray | None = None
    overflow: bool = False

    @property
    def enumerated(self) -> bool:
        return self.elements is not None

    def perms(self) -> list[Perm]:
        if self.elements is None:
            raise PermError("group is not enumerated")
        return [Perm.from_array(r) for r in self.elements]

    def index_of(self) -> dict:
        if self.elements is None:
            raise PermError("group is not enumerated")
        return {k: i for i, k in enumerate(row_keys(self.elements))}


def enumerate_group(generators: Sequence[Perm], n: int, bound: int = DEFAULT_ORDER_BOUND) -> np.ndarray | None:
    """All elements of <generators> as a sorted (order, n) array; None past ``bound``."""
    ident = np.arange(n, dtype=np.int64)[None, :]
    gens = [g.array() for g in generators if not g.is_identity()]
    seen = set(row_keys(ident))
    chunks = [ident]
    frontier = ident
    while len(frontier):
        new_rows = []
        for g in gens:
            cand = frontier[:, g]  # x -> f(g(x))
            keys = row_keys(cand)
            fresh = []
            for i, k in enumerate(keys):
                if k not in seen:
                    seen.add(k)
                    fresh.append(i)
            if fresh:
                new_rows.append(cand[fresh])
            if len(seen) > bound:
                return None
        frontier = np.concatenate(new_rows) if new_rows else np.empty((0, n), dtype=np.int64)
        chunks.append(frontier)
    allrows = np.concatenate(chunks)
    order = np.lexsort(allrows.T[::-1])
    return allrows[order]


def automorphism_group(
    instance: CfpoInstance, bound: int = DEFAULT_ORDER_BOUND, enumerate_elements: bool = True
) -> PermGroup:
    """Generators, order and (within ``bound``) the elements of Aut(instance).

    Every automorphism fixes the centre set of the tree; two centres cannot be
    swapped because that would reverse the edge between them, so rooting at a
    centre loses nothing.
    """
    if list(instance.points) != list(range(len(instance))):
        raise PermError("automorphism_group needs dense point ids 0..n-1")
    n = len(instance)
    view = RootedView(instance, centers(instance)[0])
    gens: list[Perm] = []
    order = 1
    for p in view.children:
        for cls in view.classes(p):
            m = len(cls)
            if m < 2:
                continue
            order *= factorial(m)
            gens.append(view.permute_subtrees({cls[0]: cls[1], cls[1]: cls[0]}))
            if m > 2:
                gens.append(view.permute_subtrees({c: cls[(i + 1) % m] for i, c in enumerate(cls)}))
    group = PermGroup(n, gens, order)
    if enumerate_elements:
        if order > bound:
            group.overflow = True
        else:
            group.elements = enumerate_group(gens, n, bound)
    return group


def brute_force_automorphisms(instance: CfpoInstance) -> list[Perm]:
    """Every automorphism by checking all bijections; only for tiny instances."""
    from itertools import permutations

    n = len(instance)
    return [Perm(p) for p in permutations(range(n)) if is_automorphism(Perm(p), instance)]


# -- serialisation ------------------------------------------------------------


def perm_to_json(p: Perm) -> dict:
    return {"images": list(p.images)}


def perm_from_json(doc: dict) -> Perm:
    return Perm(tuple(int(v) for v in doc["images"]))


def group_to_json(g: PermGroup) -> str:
    return json.dumps({"generators": [perm_to_json(p) for p in g.generators]}) + "\n"


def group_from_json(text: str) -> PermGroup:
    gens = [perm_from_json(d) for d in json.loads(text)["generators"]]
    n = len(gens[0]) if gens else 0
    return PermGroup(n, gens)


def save_group(g: PermGroup, path: str | Path) -> None:
    Path(path).write_text(group_to_json(g))
