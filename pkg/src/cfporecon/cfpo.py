"""Finite cycle-free partial orders stored as edge-oriented trees.

A :class:`CfpoInstance` is a tree whose edges are covering pairs
``(lower, upper)``.  Every order question reduces to walking the unique tree
path between two points, so the instance caches adjacency and a rooted
parent table on first use.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable

UP = "up"
DOWN = "down"

PASS_UP = "pass-through-up"
PASS_DOWN = "pass-through-down"
LOCAL_MAX = "local-max"
LOCAL_MIN = "local-min"

_SWAP_TAG = {PASS_UP: PASS_DOWN, PASS_DOWN: PASS_UP, LOCAL_MAX: LOCAL_MAX, LOCAL_MIN: LOCAL_MIN}


class UnknownPointError(KeyError):
    pass


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class CfpoInstance:
    points: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(sorted(self.points)))
        object.__setattr__(self, "edges", tuple(sorted((int(a), int(b)) for a, b in self.edges)))

    def __len__(self):
        return len(self.points)

    @cached_property
    def index(self) -> dict[int, int]:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def upper(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {p: [] for p in self.points}
        for a, b in self.edges:
            out[a].append(b)
        return {p: tuple(sorted(v)) for p, v in out.items()}

    @cached_property
    def lower(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {p: [] for p in self.points}
        for a, b in self.edges:
            out[b].append(a)
        return {p: tuple(sorted(v)) for p, v in out.items()}

    @cached_property
    def neighbours(self) -> dict[int, tuple[int, ...]]:
        return {p: tuple(sorted(self.upper[p] + self.lower[p])) for p in self.points}

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    @cached_property
    def _rooting(self) -> tuple[dict[int, int | None], dict[int, int]]:
        root = self.points[0]
        parent: dict[int, int | None] = {root: None}
        depth = {root: 0}
        queue = deque([root])
        while queue:
            p = queue.popleft()
            for q in self.neighbours[p]:
                if q not in parent:
                    parent[q] = p
                    depth[q] = depth[p] + 1
                    queue.append(q)
        return parent, depth

    def check_point(self, *pts: int) -> None:
        for p in pts:
            if p not in self.index:
                raise UnknownPointError(p)

    def is_up_edge(self, a: int, b: int) -> bool:
        """True when the step a -> b goes from a lower to an upper point."""
        return (a, b) in self.edge_set


@dataclass(frozen=True)
class PathResult:
    sequence: tuple[int, ...]
    turns: tuple[str, ...]

    @property
    def interior(self) -> tuple[int, ...]:
        return self.sequence[1:-1]

    def tag(self, point: int) -> str | None:
        for p, t in zip(self.interior, self.turns):
            if p == point:
                return t
        return None


@dataclass(frozen=True)
class Cone:
    apex: int
    direction: str
    members: frozenset[int] = field(default_factory=frozenset)


# -- validation ---------------------------------------------------------------


def validate(instance: CfpoInstance) -> list[str]:
    """Return diagnostics; an empty list means the instance is a valid CFPO."""
    pts = list(instance.points)
    if len(set(pts)) != len(pts):
        return ["duplicate point identifiers"]
    if not pts:
        return ["empty point set"]
    known = set(pts)
    seen: set[frozenset[int]] = set()
    for a, b in instance.edges:
        if a not in known or b not in known:
            return [f"edge ({a},{b}) references an unknown point"]
        if a == b:
            return [f"self-loop at {a}"]
        key = frozenset((a, b))
        if key in seen:
            return [f"multi-edge between {a} and {b}"]
        seen.add(key)
    # union-find to detect the first undirected cycle
    parent = {p: p for p in pts}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for a, b in instance.edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return [f"undirected cycle through edge ({a},{b})"]
        parent[ra] = rb
    roots = {find(p) for p in pts}
    if len(roots) > 1:
        return [f"disconnected: {len(roots)} components"]
    return []


# -- order and paths ----------------------------------------------------------


def _raw_path(instance: CfpoInstance, x: int, y: int) -> list[int]:
    parent, depth = instance._rooting
    left, right = [x], [y]
    a, b = x, y
    while depth[a] > depth[b]:
        a = parent[a]
        left.append(a)
    while depth[b] > depth[a]:
        b = parent[b]
        right.append(b)
    while a != b:
        a = parent[a]
        b = parent[b]
        left.append(a)
        right.append(b)
    right.pop()
    return left + right[::-1]


def path(instance: CfpoInstance, x: int, y: int) -> PathResult:
    instance.check_point(x, y)
    seq = _raw_path(instance, x, y)
    turns = []
    for i in range(1, len(seq) - 1):
        arrived_up = instance.is_up_edge(seq[i - 1], seq[i])
        leaves_up = instance.is_up_edge(seq[i], seq[i + 1])
        if arrived_up and leaves_up:
            turns.append(PASS_UP)
        elif not arrived_up and not leaves_up:
            turns.append(PASS_DOWN)
        elif arrived_up:
            turns.append(LOCAL_MAX)
        else:
            turns.append(LOCAL_MIN)
    return PathResult(tuple(seq), tuple(turns))


def reverse_path(p: PathResult) -> PathResult:
    return PathResult(p.sequence[::-1], tuple(_SWAP_TAG[t] for t in p.turns[::-1]))


def order_leq(instance: CfpoInstance, x: int, y: int) -> bool:
    instance.check_point(x, y)
    seq = _raw_path(instance, x, y)
    return all(instance.is_up_edge(a, b) for a, b in zip(seq, seq[1:]))


def comparable(instance: CfpoInstance, x: int, y: int) -> bool:
    return order_leq(instance, x, y) or order_leq(instance, y, x)


def betweenness(instance: CfpoInstance, z: int, x: int, y: int, strict: bool = False) -> bool:
    """z lies on the path from x to y and x, y, z are pairwise comparable.

    With ``strict`` the endpoints are excluded, i.e. z must differ from x and y.
    """
    instance.check_point(z, x, y)
    if strict and z in (x, y):
        return False
    if z not in _raw_path(instance, x, y):
        return False
    return comparable(instance, x, y) and comparable(instance, x, z) and comparable(instance, y, z)


def path_between(instance: CfpoInstance, z: int, x: int, y: int) -> bool:
    """z is an interior point of the path from x to y."""
    instance.check_point(z, x, y)
    return z in _raw_path(instance, x, y)[1:-1]


def path_length(instance: CfpoInstance, x: int, y: int) -> int:
    return len(_raw_path(instance, x, y)) - 1


# -- cones --------------------------------------------------------------------


def _component(instance: CfpoInstance, start: int, removed: int) -> frozenset[int]:
    seen = {start}
    stack = [start]
    while stack:
        p = stack.pop()
        for q in instance.neighbours[p]:
            if q != removed and q not in seen:
                seen.add(q)
                stack.append(q)
    return frozenset(seen)


def cones(instance: CfpoInstance, x: int, direction: str) -> list[Cone]:
    instance.check_point(x)
    if direction not in (UP, DOWN):
        raise ValueError(f"direction must be {UP!r} or {DOWN!r}")
    starts = instance.upper[x] if direction == UP else instance.lower[x]
    return [Cone(x, direction, _component(instance, s, x)) for s in starts]


def cone_of(instance: CfpoInstance, x: int, y: int) -> tuple[str, frozenset[int]]:
    """Direction and member set of the cone of x containing y (y != x)."""
    seq = _raw_path(instance, x, y)
    if len(seq) < 2:
        raise ValueError("a point does not lie in its own cones")
    d = UP if instance.is_up_edge(x, seq[1]) else DOWN
    return d, _component(instance, seq[1], x)


def ramification_orders(instance: CfpoInstance, x: int) -> tuple[int, int]:
    instance.check_point(x)
    return len(instance.upper[x]), len(instance.lower[x])


# -- generators ---------------------------------------------------------------


class _Builder:
    def __init__(self):
        self.n = 0
        self.edges: list[tuple[int, int]] = []

    def new(self) -> int:
        self.n += 1
        return self.n - 1


def gen_star(n_up: int, n_down: int) -> CfpoInstance:
    if n_up < 0 or n_down < 0 or n_up + n_down < 1:
        raise InstanceError("gen_star needs n_up + n_down >= 1")
    b = _Builder()
    c = b.new()
    for _ in range(n_up):
        b.edges.append((c, b.new()))
    for _ in range(n_down):
        b.edges.append((b.new(), c))
    return CfpoInstance(tuple(range(b.n)), tuple(b.edges), f"star:{n_up},{n_down}")


def gen_double_star(n: int = 5) -> CfpoInstance:
    """One edge x<y; x gets n extra lower leaves, y gets n extra upper leaves."""
    b = _Builder()
    x, y = b.new(), b.new()
    b.edges.append((x, y))
    for _ in range(n):
        b.edges.append((b.new(), x))
    for _ in range(n):
        b.edges.append((y, b.new()))
    return CfpoInstance(tuple(range(b.n)), tuple(b.edges), f"dstar:{n}")


def _grow(b_up: int, b_down: int, radius: int, from_edge: bool = True) -> tuple[int, list[tuple[int, int]], dict[int, int]]:
    """Grow from the base edge 0<1 (or the single point 0); points at distance < radius get full ramification."""
    b = _Builder()
    if from_edge:
        x, y = b.new(), b.new()
        b.edges.append((x, y))
        ups = {x: 1, y: 0}
        downs = {x: 0, y: 1}
        dist = {x: 0, y: 0}
        queue = deque([x, y])
    else:
        x = b.new()
        ups, downs, dist = {x: 0}, {x: 0}, {x: 0}
        queue = deque([x])
    while queue:
        p = queue.popleft()
        if dist[p] >= radius:
            continue
        while ups[p] < b_up:
            q = b.new()
            b.edges.append((p, q))
            ups[p] += 1
            ups[q], downs[q], dist[q] = 0, 1, dist[p] + 1
            queue.append(q)
        while downs[p] < b_down:
            q = b.new()
            b.edges.append((q, p))
            downs[p] += 1
            ups[q], downs[q], dist[q] = 1, 0, dist[p] + 1
            queue.append(q)
    return b.n, b.edges, dist


def gen_alternating_tree(b_up: int, b_down: int, radius: int) -> CfpoInstance:
    if b_up < 1 or b_down < 1 or radius < 0:
        raise InstanceError("gen_alternating_tree needs b_up, b_down >= 1 and radius >= 0")
    n, edges, _ = _grow(b_up, b_down, radius)
    return CfpoInstance(tuple(range(n)), tuple(edges), f"alt:{b_up},{b_down},{radius}")


def gen_ball(b_up: int, b_down: int, radius: int) -> CfpoInstance:
    """Like the alternating tree but grown from one centre point instead of an edge."""
    if b_up < 1 or b_down < 1 or radius < 0:
        raise InstanceError("gen_ball needs b_up, b_down >= 1 and radius >= 0")
    n, edges, _ = _grow(b_up, b_down, radius, from_edge=False)
    return CfpoInstance(tuple(range(n)), tuple(edges), f"ball:{b_up},{b_down},{radius}")


def gen_chain_decorated(b_up: int, b_down: int, chain_len: int, radius: int) -> CfpoInstance:
    """Alternating tree whose branching points are blown up into monotone chains."""
    if chain_len < 3:
        raise InstanceError("chain_len must be at least 3")
    if b_up < 1 or b_down < 1 or radius < 0:
        raise InstanceError("gen_chain_decorated needs b_up, b_down >= 1 and radius >= 0")
    n, edges, dist = _grow(b_up, b_down, radius)
    b = _Builder()
    bottom: dict[int, int] = {}
    top: dict[int, int] = {}
    for p in range(n):
        if dist[p] < radius:
            chain = [b.new() for _ in range(chain_len)]
            b.edges.extend(zip(chain, chain[1:]))
            bottom[p], top[p] = chain[0], chain[-1]
        else:
            bottom[p] = top[p] = b.new()
    for lo, hi in edges:
        b.edges.append((top[lo], bottom[hi]))
    return CfpoInstance(
        tuple(range(b.n)), tuple(b.edges), f"chain-dec:{b_up},{b_down},{chain_len},{radius}"
    )


def gen_chain(length: int) -> CfpoInstance:
    if length < 1:
        raise InstanceError("chain needs at least one point")
    return CfpoInstance(tuple(range(length)), tuple((i, i + 1) for i in range(length - 1)), f"chain:{length}")


def from_spec(spec: str) -> CfpoInstance:
    """Parse generator strings such as ``star:5,0`` or ``alt:5,5,2``."""
    try:
        kind, _, args = spec.partition(":")
        nums = [int(a) for a in args.split(",")] if args else []
    except ValueError as exc:
        raise InstanceError(f"malformed instance spec {spec!r}") from exc
    makers = {
        "star": (gen_star, 2),
        "alt": (gen_alternating_tree, 3),
        "ball": (gen_ball, 3),
        "chain-dec": (gen_chain_decorated, 4),
        "dstar": (gen_double_star, 1),
        "chain": (gen_chain, 1),
    }
    if kind not in makers or len(nums) != makers[kind][1]:
        raise InstanceError(f"malformed instance spec {spec!r}")
    return makers[kind][0](*nums)


# -- serialisation ------------------------------------------------------------


def to_json(instance: CfpoInstance) -> str:
    doc = {"name": instance.name, "points": list(instance.points), "edges": [list(e) for e in instance.edges]}
    return json.dumps(doc) + "\n"


def from_json(text: str) -> CfpoInstance:
    doc = json.loads(text)
    return CfpoInstance(tuple(doc["points"]), tuple(tuple(e) for e in doc["edges"]), doc.get("name", ""))


def save(instance: CfpoInstance, path_: str | Path) -> None:
    Path(path_).write_text(to_json(instance))


def load(path_: str | Path) -> CfpoInstance:
    return from_json(Path(path_).read_text())


def all_triples(points: Iterable[int]):
    pts = list(points)
    for z in pts:
        for x, y in combinations(pts, 2):
            yield z, x, y
