"""A5-shaped 60-tuples: the fixed listing, diagram checks, censuses and constructions.

The fixed listing comes from the presentation <a, b | a^2, b^3, (ab)^5>.  Each
element is named by its shortlex-least word over ``a < b < B`` (``B`` is
b^-1); the words are prefix closed, so entry ``k`` of a listing is entry
``PARENT[k]`` times generator ``LETTER[k]``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .cfpo import UP, DOWN, CfpoInstance, gen_star
from .perm import Perm, PermError, PermGroup, RootedView, compose, inverse, orbits as perm_orbits, row_keys

CANONICAL_WORDS: tuple[str, ...] = (
    "", "a", "b", "B", "ab", "aB", "ba", "Ba", "aba", "aBa", "bab", "baB", "Bab", "BaB",
    "abab", "abaB", "aBab", "aBaB", "baba", "baBa", "Baba", "BaBa", "ababa", "abaBa",
    "aBaba", "aBaBa", "babaB", "baBab", "baBaB", "Babab", "BabaB", "BaBab", "abaBab",
    "abaBaB", "aBabab", "aBabaB", "babaBa", "baBaba", "BabaBa", "BaBaba", "abaBaba",
    "aBabaBa", "babaBab", "babaBaB", "baBabab", "baBabaB", "BabaBab", "BabaBaB",
    "BaBabab", "BaBabaB", "abaBabab", "abaBabaB", "aBabaBab", "aBabaBaB", "baBabaBa",
    "BabaBaba", "abaBabaBa", "aBabaBaba", "baBabaBab", "abaBabaBab",
)

ORBIT_SIZES = frozenset({1, 5, 6, 10, 12, 15, 20, 30, 60})
IDENTITY = 0


class A5Error(ValueError):
    pass


# -- the model ----------------------------------------------------------------


def _s5_generators() -> tuple[Perm, Perm]:
    a = Perm.from_cycles(5, (0, 1), (2, 3))
    for p in permutations(range(5)):
        b = Perm(p)
        if b.order() == 3 and compose(a, b).order() == 5:
            return a, b
    raise AssertionError("no (2,3,5) pair in Sym(5)")


def derive_words() -> list[str]:
    """Shortlex normal forms by breadth-first search in a faithful permutation model."""
    a, b = _s5_generators()
    letters = {"a": a, "b": b, "B": inverse(b)}
    ident = Perm.identity(5)
    words = {ident: ""}
    queue = [ident]
    for g in queue:
        for c in "abB":
            h = compose(g, letters[c])
            if h not in words:
                words[h] = words[g] + c
                queue.append(h)
    return [words[g] for g in queue]


@dataclass(frozen=True)
class A5Model:
    words: tuple[str, ...]
    table: np.ndarray
    inverse: np.ndarray
    orders: np.ndarray
    parent: np.ndarray
    letter: np.ndarray  # 0 = a, 1 = b, 2 = B
    identity: int = IDENTITY

    def __len__(self):
        return 60

    @property
    def gen_a(self) -> int:
        return self.words.index("a")

    @property
    def gen_b(self) -> int:
        return self.words.index("b")


@lru_cache(maxsize=None)
def canonical_a5() -> A5Model:
    a, b = _s5_generators()
    letters = [a, b, inverse(b)]
    index = {w: i for i, w in enumerate(CANONICAL_WORDS)}
    parent = np.array([index[w[:-1]] if w else 0 for w in CANONICAL_WORDS])
    letter = np.array(["abB".index(w[-1]) if w else -1 for w in CANONICAL_WORDS])
    elems: list[Perm] = []
    for k, w in enumerate(CANONICAL_WORDS):
        elems.append(Perm.identity(5) if not w else compose(elems[parent[k]], letters[letter[k]]))
    pos = {p: i for i, p in enumerate(elems)}
    if len(pos) != 60:
        raise AssertionError("canonical words do not name 60 distinct elements")
    table = np.array([[pos[compose(x, y)] for y in elems] for x in elems], dtype=np.int64)
    inv = np.array([pos[inverse(x)] for x in elems], dtype=np.int64)
    orders = np.array([x.order() for x in elems], dtype=np.int64)
    for arr in (table, inv, orders, parent, letter):
        arr.setflags(write=False)
    return A5Model(CANONICAL_WORDS, table, inv, orders, parent, letter)


def table_digest(model: A5Model | None = None) -> str:
    import hashlib

    model = model or canonical_a5()
    return hashlib.sha256(model.table.astype(np.int64).tobytes()).hexdigest()


def evaluate_words(model: A5Model, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Listing determined by generator images x (for a) and y (for b).

    ``x`` and ``y`` are image arrays of one shape (n,); returns (60, n).
    """
    n = len(x)
    gens = [np.asarray(x), np.asarray(y), np.argsort(y)]
    out = np.empty((60, n), dtype=np.int64)
    out[0] = np.arange(n)
    for k in range(1, 60):
        out[k] = out[model.parent[k]][gens[model.letter[k]]]
    return out


def subgroups_of_model(model: A5Model | None = None) -> list[frozenset[int]]:
    """Every subgroup of the model as an index set, by closing all pairs."""
    model = model or canonical_a5()
    found: set[frozenset[int]] = set()
    for i in range(60):
        for j in range(i, 60):
            elems = {IDENTITY, i, j}
            frontier = list(elems)
            while frontier:
                nxt = []
                for u in frontier:
                    for v in (i, j):
                        w = int(model.table[u, v])
                        if w not in elems:
                            elems.add(w)
                            nxt.append(w)
                frontier = nxt
            found.add(frozenset(elems))
    return sorted(found, key=lambda s: (len(s), sorted(s)))


@lru_cache(maxsize=None)
def listing_maps() -> np.ndarray:
    """The 120 automorphisms of the model as index maps, identity first.

    Row k sends canonical index w to the index of the word w evaluated at the
    k-th generating pair (x of order 2, y of order 3, xy of order 5).
    """
    model = canonical_a5()
    pairs = [
        (i, j)
        for i in range(60)
        for j in range(60)
        if model.orders[i] == 2 and model.orders[j] == 3 and model.orders[model.table[i, j]] == 5
    ]
    pairs.sort(key=lambda p: (p != (model.gen_a, model.gen_b), p))
    rows = []
    for i, j in pairs:
        m = np.empty(60, dtype=np.int64)
        m[0] = IDENTITY
        for k in range(1, 60):
            g = (i, j, int(model.inverse[j]))[model.letter[k]]
            m[k] = model.table[m[model.parent[k]], g]
        rows.append(m)
    out = np.array(rows)
    out.setflags(write=False)
    return out


# -- tuples -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class A5Tuple:
    """60 permutations of one point set, entry k listed against canonical word k."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != 60:
            raise A5Error("a 60-tuple needs exactly 60 entries")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    def perm(self, i: int) -> Perm:
        return Perm.from_array(self.entries[i])

    def perms(self) -> list[Perm]:
        return [self.perm(i) for i in range(60)]

    def key(self) -> bytes:
        return self.entries.tobytes()

    def __eq__(self, other):
        return isinstance(other, A5Tuple) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.key())

    @classmethod
    def from_perms(cls, perms: Sequence[Perm]) -> "A5Tuple":
        if len(perms) != 60:
            raise A5Error("a 60-tuple needs exactly 60 entries")
        return cls(np.array([p.images for p in perms]))

    @classmethod
    def from_generators(cls, x: Perm, y: Perm) -> "A5Tuple":
        return cls(evaluate_words(canonical_a5(), x.array(), y.array()))


def a5_check(t: A5Tuple) -> bool:
    """All 3600 product equations hold and the entries are pairwise distinct."""
    E = t.entries
    if E.shape[0] != 60:
        raise A5Error("wrong arity")
    if len(set(row_keys(E))) != 60:
        return False
    model = canonical_a5()
    prods = E[:, E]  # prods[i, j, x] = E[i, E[j, x]]
    return bool(np.array_equal(prods, E[model.table]))


def _shared(f: A5Tuple, g: A5Tuple) -> None:
    if f.n != g.n:
        raise A5Error("tuples live on different instances")


def star(f: A5Tuple, g: A5Tuple) -> A5Tuple:
    """Entrywise product f_i g_i."""
    _shared(f, g)
    return A5Tuple(np.take_along_axis(f.entries, g.entries, axis=1))


def conj_tuple(f: A5Tuple, phi: Perm) -> A5Tuple:
    """(phi f_i phi^-1)."""
    p = phi.array()
    if len(p) != f.n:
        raise A5Error("automorphism lives on a different instance")
    return A5Tuple(p[f.entries[:, np.argsort(p)]])


def lmul(phi: Perm, f: A5Tuple) -> A5Tuple:
    return A5Tuple(phi.array()[f.entries])


def rmul(f: A5Tuple, phi: Perm) -> A5Tuple:
    return A5Tuple(f.entries[:, phi.array()])


def entrywise_inverse(f: A5Tuple) -> A5Tuple:
    return A5Tuple(np.argsort(f.entries, axis=1))


def relisted(f: A5Tuple, k: int) -> A5Tuple:
    """The same subgroup read through the k-th automorphism of the model."""
    return A5Tuple(f.entries[listing_maps()[k]])


def comm_arrays(F: np.ndarray, G: np.ndarray) -> bool:
    """Every entry of F commutes with every entry of G."""
    # only generators matter, but all 3600 pairs are cheap and literal
    fg = F[:, G]  # fg[i, j, x] = F[i, G[j, x]]
    gf = G[:, F].transpose(1, 0, 2)  # gf[i, j, x] = G[j, F[i, x]]
    return bool(np.array_equal(fg, gf))


def comm(f: A5Tuple, g: A5Tuple) -> bool:
    _shared(f, g)
    return a5_check(f) and a5_check(g) and comm_arrays(f.entries, g.entries)


# -- orbits, support, fixed points -------------------------------------------


def support_of(t: A5Tuple) -> frozenset[int]:
    moved = np.any(t.entries != np.arange(t.n)[None, :], axis=0)
    return frozenset(np.flatnonzero(moved).tolist())


def fixed_points(t: A5Tuple) -> frozenset[int]:
    return frozenset(range(t.n)) - support_of(t)


def tuple_image(t: A5Tuple, x: int) -> frozenset[int]:
    if not 0 <= x < t.n:
        raise A5Error(f"unknown point {x}")
    return frozenset(t.entries[:, x].tolist())


def tuple_orbits(t: A5Tuple) -> list[frozenset[int]]:
    model = canonical_a5()
    return perm_orbits([t.perm(model.gen_a), t.perm(model.gen_b)], t.n)


# -- extended connected components --------------------------------------------


@dataclass(frozen=True)
class Ecc:
    members: frozenset[int]
    attachment: int
    direction: str  # side of the attachment point on which the members lie


@dataclass(frozen=True)
class EccPartition:
    components: tuple[Ecc, ...]
    leftover: frozenset[int] = field(default_factory=frozenset)


def support_components(instance: CfpoInstance, supp: frozenset[int]) -> list[frozenset[int]]:
    seen: set[int] = set()
    out = []
    for s in sorted(supp):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            p = stack.pop()
            for q in instance.neighbours[p]:
                if q in supp and q not in comp:
                    comp.add(q)
                    stack.append(q)
        seen |= comp
        out.append(frozenset(comp))
    return out


def boundary(instance: CfpoInstance, X: Iterable[int]) -> set[int]:
    xs = set(X)
    return {q for p in xs for q in instance.neighbours[p] if q not in xs}


def extended_components(t: A5Tuple, instance: CfpoInstance) -> EccPartition:
    """ECCs of the support.

    The least set meeting the closure conditions is the tuple-orbit of one
    support component: any admissible set containing a component contains its
    whole orbit, and the orbit itself is admissible with no joining point.  The
    shared outside neighbour of the orbit is reported as the attachment.
    """
    if t.n != len(instance):
        raise A5Error("tuple and instance sizes differ")
    supp = support_of(t)
    comps = support_components(instance, supp)
    where = {p: i for i, c in enumerate(comps) for p in c}
    model = canonical_a5()
    gens = (t.entries[model.gen_a], t.entries[model.gen_b])
    parent = list(range(len(comps)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, c in enumerate(comps):
        rep = min(c)
        for g in gens:
            j = where[int(g[rep])]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    classes: dict[int, set[int]] = {}
    for i, c in enumerate(comps):
        classes.setdefault(find(i), set()).update(c)
    eccs = []
    for r in sorted(classes):
        members = frozenset(classes[r])
        b = boundary(instance, members)
        if len(b) != 1:
            raise A5Error(f"component boundary is not a singleton: {sorted(b)}")
        (e,) = b
        m = next(p for p in instance.neighbours[e] if p in members)
        eccs.append(Ecc(members, e, UP if instance.is_up_edge(e, m) else DOWN))
    covered = frozenset().union(*(c.members for c in eccs)) if eccs else frozenset()
    return EccPartition(tuple(eccs), supp - covered)


def restrict_entries(E: np.ndarray, X: Iterable[int]) -> np.ndarray:
    xs = np.zeros(E.shape[1], dtype=bool)
    xs[list(X)] = True
    ident = np.broadcast_to(np.arange(E.shape[1]), E.shape)
    return np.where(xs[None, :], E, ident)


def restrict_tuple(t: A5Tuple, X: Iterable[int], instance: CfpoInstance) -> A5Tuple:
    xs = frozenset(X)
    part = extended_components(t, instance)
    chosen = [c for c in part.components if c.members & xs]
    if any(not c.members <= xs for c in chosen) or xs != frozenset().union(*(c.members for c in chosen) or [frozenset()]):
        raise A5Error("set is not a union of extended connected components")
    if not xs:
        raise A5Error("restriction to the empty set is not an A5 tuple")
    return A5Tuple(restrict_entries(t.entries, xs))


# -- censuses -----------------------------------------------------------------


@dataclass
class Subgroup:
    base: A5Tuple  # listing 0
    origin: str = ""

    def listing(self, k: int) -> A5Tuple:
        return relisted(self.base, k)

    def element_keys(self) -> frozenset:
        return frozenset(row_keys(self.base.entries))


@dataclass
class Census:
    n: int
    subgroups: list[Subgroup]
    complete: bool
    note: str = ""

    @property
    def listings_per_subgroup(self) -> int:
        return len(listing_maps())

    def __len__(self):
        return len(self.subgroups) * self.listings_per_subgroup

    def tuple(self, s: int, k: int) -> A5Tuple:
        return self.subgroups[s].listing(k)

    def all_tuples(self):
        for s in range(len(self.subgroups)):
            for k in range(self.listings_per_subgroup):
                yield (s, k), self.tuple(s, k)


def _orders(rows: np.ndarray, cap: int = 60) -> np.ndarray:
    """Element orders (0 when above ``cap``)."""
    m, n = rows.shape
    ident = np.arange(n)
    out = np.zeros(m, dtype=np.int64)
    power = rows.copy()
    for k in range(1, cap + 1):
        done = (out == 0) & np.all(power == ident, axis=1)
        out[done] = k
        power = np.take_along_axis(rows, power, axis=1)
    return out


def _add_subgroup(found: list[Subgroup], seen: set, x: np.ndarray, y: np.ndarray, origin: str) -> bool:
    base = A5Tuple(evaluate_words(canonical_a5(), x, y))
    key = frozenset(row_keys(base.entries))
    if key in seen:
        return False
    if not a5_check(base):
        raise AssertionError("a (2,3,5) pair failed to generate A5")
    seen.add(key)
    found.append(Subgroup(base, origin))
    return True


def find_a5_exhaustive(group: PermGroup) -> Census:
    """Every A5 subgroup of a fully enumerated group, by scanning (2,3,5) pairs.

    Any x of order 2 and y of order 3 with xy of order 5 generate a quotient of
    the (2,3,5) triangle group, which is A5 itself, so the pair scan is exact.
    """
    if group.elements is None:
        raise A5Error("exhaustive census needs an enumerated group")
    E = group.elements
    n = group.n
    orders = _orders(E, 6)
    invols = E[orders == 2]
    threes = E[orders == 3]
    found: list[Subgroup] = []
    seen: set = set()
    covered: set = set()
    ident = np.arange(n)
    for x in invols:
        if not len(threes):
            break
        xy = x[threes]
        p5 = xy
        for _ in range(4):
            p5 = np.take_along_axis(xy, p5, axis=1)
        good = np.all(p5 == ident, axis=1) & ~np.all(xy == ident, axis=1)
        xk = row_keys(x[None, :])[0]
        for y in threes[good]:
            pair = (xk, row_keys(y[None, :])[0])
            if pair in covered:
                continue
            if _add_subgroup(found, seen, x, y, "scan"):
                lst = found[-1]
                for k in range(len(listing_maps())):
                    t = lst.listing(k).entries
                    m = canonical_a5()
                    covered.add((row_keys(t[m.gen_a][None, :])[0], row_keys(t[m.gen_b][None, :])[0]))
    found.sort(key=lambda s: s.base.entries.tobytes())
    return Census(n, found, True, "exhaustive pair scan")


def brute_force_a5_subgroups(group: PermGroup) -> set[frozenset]:
    """Oracle: close every pair of elements, keep the order-60 closures with A5's order profile."""
    if group.elements is None:
        raise A5Error("oracle needs an enumerated group")
    perms = group.perms()
    result: set[frozenset] = set()
    visited: set[frozenset] = set()
    for i, x in enumerate(perms):
        for y in perms[i + 1 :]:
            elems = {x, y}
            frontier = [x, y]
            too_big = False
            while frontier and not too_big:
                nxt = []
                for u in frontier:
                    for v in (x, y):
                        w = compose(u, v)
                        if w not in elems:
                            elems.add(w)
                            nxt.append(w)
                if len(elems) > 60:
                    too_big = True
                frontier = nxt
            if too_big or len(elems) != 60:
                continue
            key = frozenset(elems)
            if key in visited:
                continue
            visited.add(key)
            profile = sorted(p.order() for p in elems)
            if profile == [1] + [2] * 15 + [3] * 20 + [5] * 24:
                result.add(frozenset(tuple(p.images) for p in elems))
    return result


def count_model_automorphisms() -> int:
    """Oracle: images (i, j) of the generators that extend to automorphisms."""
    model = canonical_a5()
    count = 0
    for i in range(60):
        for j in range(60):
            m = np.empty(60, dtype=np.int64)
            m[0] = IDENTITY
            for k in range(1, 60):
                g = (i, j, int(model.inverse[j]))[model.letter[k]]
                m[k] = model.table[m[model.parent[k]], g]
            if len(set(m.tolist())) != 60:
                continue
            if np.array_equal(m[model.table], model.table[m][:, m]):
                count += 1
    return count


@lru_cache(maxsize=None)
def _six_point_generators() -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """One (2,3,5) generating pair for each transitive A5 inside Sym(6)."""
    perms6 = [Perm(p) for p in permutations(range(6))]
    invols = [p for p in perms6 if p.order() == 2]
    threes = [p for p in perms6 if p.order() == 3]
    seen: set = set()
    out = []
    for x in invols:
        for y in threes:
            if compose(x, y).order() != 5:
                continue
            if len(perm_orbits([x, y], 6)) != 1:
                continue
            elems = evaluate_words(canonical_a5(), x.array(), y.array())
            key = frozenset(row_keys(elems))
            if key not in seen:
                seen.add(key)
                out.append((x.images, y.images))
    return out


def _lift(view: RootedView, cones: Sequence[int], sigma: Sequence[int]) -> np.ndarray:
    """Automorphism sending cone cones[s] to cones[sigma[s]] via canonical isomorphisms."""
    return view.permute_subtrees({cones[s]: cones[sigma[s]] for s in range(len(cones))}).array()


def find_a5_seeded(instance: CfpoInstance, group: PermGroup | None = None, random_budget: int = 0, seed: int = 0) -> Census:
    """A5 subgroups that permute whole isomorphic cones at one point.

    For every point, direction and class of at least five isomorphic cones,
    each 5-subset carries the natural action and each 6-subset carries every
    transitive action on six letters.  Optional random search adds more.
    The result is flagged incomplete.
    """
    a5x, a5y = _s5_generators()
    six = _six_point_generators()
    found: list[Subgroup] = []
    seen: set = set()
    for p in instance.points:
        view = RootedView(instance, p)
        for cls in view.classes(p):
            if len(cls) < 5:
                continue
            for sub in combinations(cls, 5):
                _add_subgroup(found, seen, _lift(view, sub, a5x.images), _lift(view, sub, a5y.images), f"cones@{p}")
            for sub in combinations(cls, 6):
                for x6, y6 in six:
                    _add_subgroup(found, seen, _lift(view, sub, x6), _lift(view, sub, y6), f"cones6@{p}")
    if random_budget and group is not None and group.generators:
        _random_pairs(group, random_budget, seed, found, seen)
    return Census(len(instance), found, False, "seeded cone actions" + (f" + {random_budget} random trials" if random_budget else ""))


def _random_pairs(group: PermGroup, budget: int, seed: int, found: list, seen: set) -> None:
    """Product-replacement random elements; powers of them give candidate involutions and 3-elements."""
    rng = random.Random(seed)
    n = group.n
    pool = [g.array() for g in group.generators] * 2
    if len(pool) < 10:
        pool = (pool * 10)[:10]
    ident = np.arange(n)

    def rand_elem():
        i, j = rng.sample(range(len(pool)), 2)
        pool[i] = pool[i][pool[j]] if rng.random() < 0.5 else pool[j][pool[i]]
        return pool[i]

    def power_to(elem, want):
        o = int(_orders(elem[None, :], 10**4)[0]) if n < 2000 else 0
        if o == 0 or o % want:
            return None
        p = ident.copy()
        for _ in range(o // want):
            p = elem[p]
        return p

    for _ in range(budget):
        x = power_to(rand_elem(), 2)
        y = power_to(rand_elem(), 3)
        if x is None or y is None:
            continue
        xy = x[y]
        if int(_orders(xy[None, :], 5)[0]) == 5:
            _add_subgroup(found, seen, x, y, "random")


def find_a5_tuples(group: PermGroup, instance: CfpoInstance | None = None, budget: int = 0, seed: int = 0) -> Census:
    if group.elements is not None:
        return find_a5_exhaustive(group)
    if instance is None:
        return Census(group.n, [], False, "group not enumerated and no instance for seeding")
    return find_a5_seeded(instance, group, budget, seed)


def census_to_json(c: Census) -> str:
    doc = [
        {
            "elements": c.subgroups[s].base.entries.tolist(),
            "origin": c.subgroups[s].origin,
            "listings": listing_maps().tolist(),
        }
        for s in range(len(c.subgroups))
    ]
    return json.dumps(doc) + "\n"


def census_from_json(text: str, complete: bool = False) -> Census:
    doc = json.loads(text)
    subs = [Subgroup(A5Tuple(np.array(d["elements"])), d.get("origin", "")) for d in doc]
    n = subs[0].base.n if subs else 0
    return Census(n, subs, complete, "loaded")


# -- fixtures -----------------------------------------------------------------


def natural_action(n: int, symbols: Sequence[int]) -> A5Tuple:
    """A5 on five chosen points of range(n) via the model's own permutation rep."""
    a, b = _s5_generators()
    x = np.arange(n)
    y = np.arange(n)
    for s, t in zip(range(5), symbols):
        x[t] = symbols[a(s)]
        y[t] = symbols[b(s)]
    return A5Tuple(evaluate_words(canonical_a5(), x, y))


def left_regular(n: int, symbols: Sequence[int]) -> A5Tuple:
    """A5 acting on 60 points labelled by its own elements, symbols[k] = element k."""
    model = canonical_a5()
    E = np.tile(np.arange(n), (60, 1))
    for i in range(60):
        for k in range(60):
            E[i, symbols[k]] = symbols[model.table[i, k]]
    return A5Tuple(E)


def coset_action(n: int, symbols: Sequence[int], cosets: Sequence[frozenset[int]]) -> A5Tuple:
    """A5 acting by left multiplication on a list of left cosets; symbols[c] labels coset c."""
    model = canonical_a5()
    where = {}
    for c, cos in enumerate(cosets):
        for g in cos:
            where[g] = c
    E = np.tile(np.arange(n), (60, 1))
    for i in range(60):
        for c, cos in enumerate(cosets):
            E[i, symbols[c]] = symbols[where[int(model.table[i, min(cos)])]]
    return A5Tuple(E)


def left_cosets(sub: frozenset[int]) -> list[frozenset[int]]:
    model = canonical_a5()
    out, seen = [], set()
    for g in range(60):
        if g in seen:
            continue
        cos = frozenset(int(model.table[g, h]) for h in sub)
        seen |= cos
        out.append(cos)
    return out


def subgroups_of_order(k: int) -> list[frozenset[int]]:
    return [s for s in subgroups_of_model() if len(s) == k]


def coset_pair_groups() -> tuple[frozenset[int], frozenset[int]]:
    """First (G, H) with |G| = 12, |H| = 10 and |G ∩ H| = 2."""
    for G in subgroups_of_order(12):
        for H in subgroups_of_order(10):
            if len(G & H) == 2:
                return G, H
    raise AssertionError("no admissible coset pair")


def coset_pair_on_star30() -> tuple[CfpoInstance, A5Tuple, tuple[frozenset[int], frozenset[int]]]:
    """Diagonal action on (A5/G) x (A5/H), one upper leaf of star-30 per pair."""
    G, H = coset_pair_groups()
    cg, ch = left_cosets(G), left_cosets(H)
    inst = gen_star(30, 0)
    model = canonical_a5()
    wg = {g: i for i, c in enumerate(cg) for g in c}
    wh = {g: i for i, c in enumerate(ch) for g in c}
    E = np.tile(np.arange(31), (60, 1))
    for i in range(60):
        for p, cp in enumerate(cg):
            for q, cq in enumerate(ch):
                E[i, 1 + 6 * p + q] = 1 + 6 * wg[int(model.table[i, min(cp)])] + wh[int(model.table[i, min(cq)])]
    return inst, A5Tuple(E), (G, H)


def regular_on_star60() -> tuple[CfpoInstance, A5Tuple]:
    inst = gen_star(60, 0)
    return inst, left_regular(61, list(range(1, 61)))


def product_fixture(left: str = "5", right: str = "5", twist: int = 0) -> tuple[CfpoInstance, A5Tuple, A5Tuple]:
    """Commuting pair on star-(m*r): g moves the first coordinate, h the second.

    ``left``/``right`` pick the transitive action ("5", "6", or a subgroup
    order such as "12" for cosets of that subgroup); ``twist`` relists h
    through an automorphism of the model.
    """

    def action_cosets(kind: str) -> list[frozenset[int]]:
        if kind == "5":
            return left_cosets(subgroups_of_order(12)[0])
        if kind == "6":
            return left_cosets(subgroups_of_order(10)[0])
        return left_cosets(subgroups_of_order(60 // int(kind))[0])

    cl, cr = action_cosets(left), action_cosets(right)
    m, r = len(cl), len(cr)
    inst = gen_star(m * r, 0)
    n = m * r + 1
    g_rows = np.tile(np.arange(n), (60, 1))
    h_rows = np.tile(np.arange(n), (60, 1))
    L = coset_action(m, list(range(m)), cl).entries
    R = coset_action(r, list(range(r)), cr).entries
    R = R[listing_maps()[twist]]
    for i in range(60):
        for p in range(m):
            for q in range(r):
                g_rows[i, 1 + r * p + q] = 1 + r * L[i, p] + q
                h_rows[i, 1 + r * p + q] = 1 + r * p + R[i, q]
    return inst, A5Tuple(g_rows), A5Tuple(h_rows)


def twin_stars(gap: int = 2, leaves: int = 5) -> CfpoInstance:
    """Two centres joined by an upward chain of ``gap`` edges, each with ``leaves`` upper leaves."""
    pts = list(range(gap + 1))
    edges = [(i, i + 1) for i in range(gap)]
    nxt = gap + 1
    for c in (0, gap):
        for _ in range(leaves):
            edges.append((c, nxt))
            pts.append(nxt)
            nxt += 1
    return CfpoInstance(tuple(pts), tuple(edges), f"twin-stars:{gap},{leaves}")


def twin_star_action(gap: int = 2) -> tuple[CfpoInstance, A5Tuple]:
    """One tuple acting naturally on both leaf clusters at once."""
    inst = twin_stars(gap)
    n = len(inst)
    first = natural_action(n, list(range(gap + 1, gap + 6)))
    second = natural_action(n, list(range(gap + 6, gap + 11)))
    return inst, star(first, second)


# -- the constructive lemmas ---------------------------------------------------


def _component_transport(
    instance: CfpoInstance, f: A5Tuple, orbit_points: Sequence[int], label_map: dict[int, int]
) -> tuple[dict[int, frozenset[int]], np.ndarray]:
    """Support component of each orbit point, and a transport index.

    ``transport[a, b]`` is the least entry index j with f_j(a) = b (over the orbit).
    """
    supp = support_of(f)
    comps = support_components(instance, supp)
    comp_of = {}
    for z in orbit_points:
        comp_of[z] = next(c for c in comps if z in c)
    if len({comp_of[z] for z in orbit_points}) != len(orbit_points):
        raise A5Error("orbit not cone-aligned: a component holds two orbit points")
    E = f.entries
    for z in orbit_points:
        stab = [i for i in range(60) if E[i, z] == z]
        for i in stab:
            if any(E[i, p] != p for p in comp_of[z]):
                raise A5Error("orbit not cone-aligned: a stabiliser moves points inside its component")
    return comp_of, E


def _move_component(img: np.ndarray, E: np.ndarray, comp: frozenset[int], src: int, dst: int) -> None:
    j = next(i for i in range(60) if E[i, src] == dst)
    for p in comp:
        img[p] = E[j, p]


def split_orbit_30(f: A5Tuple, x: int, instance: CfpoInstance) -> tuple[A5Tuple, A5Tuple]:
    """Factor f as g * h with g acting on the G-coordinate and h on the H-coordinate.

    The 30-orbit of x is identified with (A5/G) x (A5/H) via f_a(x) -> (aG, aH),
    where G (order 12) and H (order 10) meet in the stabiliser of x.
    """
    model = canonical_a5()
    E = f.entries
    orbit = tuple_image(f, x)
    if len(orbit) != 30:
        raise A5Error("no 30-orbit at this point")
    stab = frozenset(i for i in range(60) if E[i, x] == x)
    pair = next(
        ((G, H) for G in subgroups_of_order(12) for H in subgroups_of_order(10) if G & H == stab),
        None,
    )
    if pair is None:
        raise AssertionError("stabiliser lies in no A4/D5 pair")
    G, H = pair
    cg, ch = left_cosets(G), left_cosets(H)
    wg = {g: i for i, c in enumerate(cg) for g in c}
    wh = {g: i for i, c in enumerate(ch) for g in c}
    label = {}
    point_of = {}
    for a in range(60):
        z = int(E[a, x])
        lab = (wg[a], wh[a])
        label[z] = lab
        point_of[lab] = z
    comp_of, _ = _component_transport(instance, f, sorted(orbit), label)
    X = frozenset().union(*comp_of.values())
    n = f.n
    g_rows = np.empty_like(E)
    h_rows = np.empty_like(E)
    outside = np.array([p not in X for p in range(n)])
    for i in range(60):
        gi = np.where(outside, E[i], np.arange(n))
        hi = np.arange(n).copy()
        for z in orbit:
            p, q = label[z]
            gp = wg[int(model.table[i, min(cg[p])])]
            hq = wh[int(model.table[i, min(ch[q])])]
            _move_component(gi, E, comp_of[z], z, point_of[(gp, q)])
            _move_component(hi, E, comp_of[z], z, point_of[(p, hq)])
        g_rows[i] = gi
        h_rows[i] = hi
    return A5Tuple(g_rows), A5Tuple(h_rows)


def build_no60_counterexample(g: A5Tuple, instance: CfpoInstance) -> tuple[A5Tuple, int]:
    """Right multiplication h_i: g_k(x) -> g_k g_i^-1 (x) on a regular orbit.

    Returns h and the identity-labelled point x.
    """
    model = canonical_a5()
    E = g.entries
    x = next((p for p in range(g.n) if len(set(E[:, p].tolist())) == 60), None)
    if x is None:
        raise A5Error("no regular 60-orbit")
    point = [int(E[k, x]) for k in range(60)]
    comp_of, _ = _component_transport(instance, g, point, {})
    n = g.n
    rows = np.tile(np.arange(n), (60, 1))
    for i in range(60):
        inv_i = int(model.inverse[i])
        for k in range(60):
            _move_component(rows[i], E, comp_of[point[k]], point[k], point[int(model.table[k, inv_i])])
    return A5Tuple(rows), x
