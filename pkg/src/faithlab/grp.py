"""Finite groups on abstract element indices.

A :class:`FiniteGroup` is a set ``range(order)`` with identity ``0`` and a
multiplication table (materialized when ``order <= TABLE_LIMIT``).  Concrete
carriers (permutations, matrix/vector pairs, cosets) only exist while a group
is being built by :func:`group_from_realization`.

Subgroups are dense boolean masks over the element indices.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, LimitExceeded, NotNormal, OrderCapExceeded, TrivialGroup

TABLE_LIMIT = 8192
DEFAULT_MAX_ORDER = 50000


def default_max_order() -> int:
    return int(os.environ.get("FAITHLAB_MAX_ORDER", DEFAULT_MAX_ORDER))


class FiniteGroup:
    """A finite group with elements ``0 .. order-1`` and identity ``0``.

    ``table[a, b]`` is the index of ``a*b``.  ``gens`` is a generating tuple
    (used for module actions and closures); ``labels`` optionally names some
    elements; ``carriers`` keeps the concrete objects when they are known.
    """

    def __init__(
        self,
        table: np.ndarray | None,
        gens: Sequence[int],
        name: str = "",
        labels: dict[int, str] | None = None,
        carriers: list[Any] | None = None,
        mul_rule: Callable[[Any, Any], Any] | None = None,
        right_mult: np.ndarray | None = None,
        order: int | None = None,
    ):
        if table is not None:
            self.table = np.ascontiguousarray(table, dtype=np.int32)
            self.order = int(self.table.shape[0])
        else:
            if carriers is None or mul_rule is None:
                raise ValueError("a group without a table needs carriers and a mul_rule")
            self.table = None
            self.order = int(order if order is not None else len(carriers))
        self.gens = tuple(int(g) for g in gens)
        self.name = name
        self.labels = dict(labels or {})
        self.carriers = carriers
        self._mul_rule = mul_rule
        self._right_mult = right_mult
        self._index = None
        self.extras: dict[str, Any] = {}

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    @property
    def identity(self) -> int:
        return 0

    @property
    def has_table(self) -> bool:
        return self.table is not None

    def require_table(self) -> np.ndarray:
        if self.table is None:
            raise BudgetExceeded(
                f"order {self.order} exceeds the multiplication-table limit {TABLE_LIMIT}"
            )
        return self.table

    def _lookup(self, carrier) -> int:
        if self._index is None:
            self._index = {c: i for i, c in enumerate(self.carriers)}
        return self._index[carrier]

    def mul(self, a: int, b: int) -> int:
        if self.table is not None:
            return int(self.table[a, b])
        return self._lookup(self._mul_rule(self.carriers[a], self.carriers[b]))

    @cached_property
    def inv(self) -> np.ndarray:
        if self.table is not None:
            return np.argmax(self.table == 0, axis=1).astype(np.int32)
        out = np.zeros(self.order, dtype=np.int32)
        for a in range(self.order):
            x, prev = a, 0
            while x != 0:
                prev, x = x, self.mul(x, a)
            out[a] = prev
        return out

    def conj(self, g, x):
        """``x g x^-1``; broadcasts over numpy index arrays when a table exists."""
        t = self.require_table()
        return t[t[x, g], self.inv[x]]

    def comm(self, a, b):
        """``a^-1 b^-1 a b``."""
        t = self.require_table()
        inv = self.inv
        return t[t[inv[a], inv[b]], t[a, b]]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = int(self.inv[a]), -k
        r = 0
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            k >>= 1
        return r

    @cached_property
    def element_orders(self) -> np.ndarray:
        t = self.require_table()
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        idx = np.arange(n)
        cur = idx.copy()
        k = 1
        while True:
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            if (orders > 0).all():
                return orders
            cur = t[cur, idx]
            k += 1

    @cached_property
    def exponent(self) -> int:
        e = 1
        for o in np.unique(self.element_orders):
            e = e * int(o) // gcd(e, int(o))
        return e

    def label(self, a: int) -> str:
        return self.labels.get(a, str(a))

    # -- subgroup helpers -----------------------------------------------------

    def whole(self) -> "SubgroupSet":
        return SubgroupSet(np.ones(self.order, dtype=bool), self.gens)

    def trivial(self) -> "SubgroupSet":
        m = np.zeros(self.order, dtype=bool)
        m[0] = True
        return SubgroupSet(m, ())

    def subgroup(self, elems: Iterable[int]) -> "SubgroupSet":
        """The subgroup generated by ``elems``."""
        return generate(self, elems)

    @cached_property
    def classes(self) -> "ConjClasses":
        return conjugacy_classes(self)


@dataclass(frozen=True, eq=False)
class SubgroupSet:
    """A subgroup as a boolean membership mask plus a small generating witness."""

    mask: np.ndarray
    gens: tuple[int, ...] = field(default=())

    @cached_property
    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @cached_property
    def key(self) -> bytes:
        return np.packbits(self.mask).tobytes()

    def __len__(self) -> int:
        return int(self.mask.sum())

    @property
    def order(self) -> int:
        return len(self)

    def __contains__(self, g) -> bool:
        return bool(self.mask[int(g)])

    def __eq__(self, other) -> bool:
        return isinstance(other, SubgroupSet) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __le__(self, other: "SubgroupSet") -> bool:
        return bool(not (self.mask & ~other.mask).any())

    def __lt__(self, other: "SubgroupSet") -> bool:
        return self <= other and len(self) < len(other)

    def is_trivial(self) -> bool:
        return len(self) == 1

    def __repr__(self) -> str:
        return f"SubgroupSet(order={len(self)})"


def _from_mask(mask: np.ndarray, gens: Iterable[int] = ()) -> SubgroupSet:
    return SubgroupSet(mask, tuple(int(g) for g in gens))


def generate(G: FiniteGroup, elems: Iterable[int], start: SubgroupSet | None = None) -> SubgroupSet:
    """Closure of ``start`` (default trivial) together with ``elems``."""
    t = G.require_table()
    mask = start.mask.copy() if start is not None else G.trivial().mask.copy()
    gens: list[int] = []
    if start is not None:
        gens = list(start.gens) if start.gens or start.is_trivial() else _small_gens(G, start.elements)
    for g in elems:
        g = int(g)
        if mask[g]:
            continue
        gens.append(g)
        all_gens = np.array(gens)
        frontier = np.flatnonzero(mask)
        while frontier.size:
            new = np.unique(t[np.ix_(frontier, all_gens)])
            new = new[~mask[new]]
            mask[new] = True
            frontier = new
    return _from_mask(mask, gens)


def group_from_realization(
    gen_elems: Sequence[Hashable],
    mul_rule: Callable[[Any, Any], Any],
    identity: Hashable,
    name: str = "",
    max_order: int | None = None,
    labels: dict[Hashable, str] | None = None,
) -> FiniteGroup:
    """Breadth-first closure of concrete generators under ``mul_rule``.

    Element indices follow discovery order: identity 0, then the generators,
    then the breadth-first frontier.  A full table is built for orders up to
    ``TABLE_LIMIT``.
    """
    cap = default_max_order() if max_order is None else max_order
    carriers: list[Any] = [identity]
    index: dict[Any, int] = {identity: 0}
    gen_idx = []
    for g in gen_elems:
        if g not in index:
            index[g] = len(carriers)
            carriers.append(g)
        gen_idx.append(index[g])
    gens = [i for i in dict.fromkeys(gen_idx) if i != 0]
    gen_car = [carriers[i] for i in gens]
    right: list[list[int]] = [[] for _ in gens]
    parent: list[tuple[int, int]] = [(-1, -1)] * len(carriers)
    for k, gi in enumerate(gens):
        parent[gi] = (0, k)
    pos = 0
    while pos < len(carriers):
        x = carriers[pos]
        for k, g in enumerate(gen_car):
            y = mul_rule(x, g)
            j = index.get(y)
            if j is None:
                j = len(carriers)
                if j >= cap:
                    raise OrderCapExceeded(f"closure of {name or 'group'} exceeds {cap} elements")
                index[y] = j
                carriers.append(y)
                parent.append((pos, k))
            right[k].append(j)
        pos += 1
    n = len(carriers)
    right_mult = np.array(right, dtype=np.int32).reshape(len(gens), n)
    lab = {index[c]: s for c, s in (labels or {}).items() if c in index}
    if n > TABLE_LIMIT:
        G = FiniteGroup(None, gens, name, lab, carriers, mul_rule, right_mult, order=n)
        G._index = index
        return G
    # column b = column parent(b) followed by right multiplication with a generator
    table = np.empty((n, n), dtype=np.int32)
    table[:, 0] = np.arange(n)
    for b in range(1, n):
        pb, k = parent[b]
        table[:, b] = right_mult[k][table[:, pb]]
    G = FiniteGroup(table, gens, name, lab, carriers, mul_rule, right_mult)
    G._index = index
    return G


def from_table(table, gens: Sequence[int] | None = None, name: str = "", labels=None) -> FiniteGroup:
    """Wrap an existing multiplication table (identity must be index 0)."""
    table = np.asarray(table, dtype=np.int32)
    n = table.shape[0]
    if not (table[0] == np.arange(n)).all() or not (table[:, 0] == np.arange(n)).all():
        raise ValueError("index 0 must be the identity")
    G = FiniteGroup(table, (), name, labels)
    if gens is None:
        gens = _greedy_gens(G)
    G.gens = tuple(int(g) for g in gens)
    return G


def _greedy_gens(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    H = G.trivial()
    for g in range(G.order):
        if g not in H:
            H = generate(G, [g], H)
            gens.append(g)
        if len(H) == G.order:
            break
    return gens


def check_group_axioms(G: FiniteGroup, samples: int | None = 2000, seed: int = 0) -> bool:
    """Latin-square property plus associativity (exhaustive if ``samples`` is None)."""
    t = G.require_table()
    n = G.order
    ar = np.arange(n)
    if not (np.sort(t, axis=1) == ar).all() or not (np.sort(t, axis=0) == ar[:, None]).all():
        return False
    if samples is None:
        for a in range(n):
            if not (t[t[a][:, None], ar[None, :]] == t[a][t]).all():
                return False
        return True
    rng = np.random.default_rng(seed)
    a, b, c = rng.integers(0, n, size=(3, samples))
    return bool((t[t[a, b], c] == t[a, t[b, c]]).all())


# -- conjugacy ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ConjClasses:
    class_of: np.ndarray  # class id per element
    reps: np.ndarray
    sizes: np.ndarray
    inverse_class: np.ndarray
    members: tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.reps)


def conjugacy_classes(G: FiniteGroup) -> ConjClasses:
    """Orbits of conjugation, sorted by (size, minimal element index)."""
    t = G.require_table()
    n = G.order
    seen = np.zeros(n, dtype=bool)
    orbits = []
    xs = np.arange(n)
    inv = G.inv
    for g in range(n):
        if seen[g]:
            continue
        orb = np.unique(t[t[xs, g], inv])
        seen[orb] = True
        orbits.append(orb)
    orbits.sort(key=lambda o: (len(o), int(o[0])))
    class_of = np.empty(n, dtype=np.int64)
    for i, o in enumerate(orbits):
        class_of[o] = i
    reps = np.array([int(o[0]) for o in orbits])
    sizes = np.array([len(o) for o in orbits])
    inverse_class = class_of[inv[reps]]
    return ConjClasses(class_of, reps, sizes, inverse_class, tuple(orbits))


# -- normal subgroup machinery ----------------------------------------------

def normal_closure(G: FiniteGroup, S: Iterable[int] | SubgroupSet) -> SubgroupSet:
    elems = S.elements if isinstance(S, SubgroupSet) else np.asarray(list(S), dtype=np.int64)
    cls = G.classes
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    H = _from_mask(mask)
    for g in elems:
        if int(g) not in H:
            # closing over the full class keeps the result normal
            H = generate(G, cls.members[cls.class_of[int(g)]], H)
    return H


def is_normal(G: FiniteGroup, H: SubgroupSet) -> bool:
    t = G.require_table()
    gens = np.array(G.gens or [0])
    h = H.elements
    conj = t[t[np.ix_(gens, h)], G.inv[gens][:, None]]
    return bool(H.mask[conj].all())


def is_abelian(G: FiniteGroup, H: SubgroupSet | None = None) -> bool:
    t = G.require_table()
    h = H.elements if H is not None else np.arange(G.order)
    gens = np.array(H.gens) if H is not None and H.gens else h
    block = t[np.ix_(gens, gens)]
    return bool((block == block.T).all())


def center(G: FiniteGroup) -> SubgroupSet:
    t = G.require_table()
    gens = np.array(G.gens or [0])
    mask = (t[:, gens] == t[gens, :].T).all(axis=1)
    return _from_mask(mask, _small_gens(G, np.flatnonzero(mask)))


def centralizer(G: FiniteGroup, S: Iterable[int]) -> SubgroupSet:
    t = G.require_table()
    s = np.asarray(list(S), dtype=np.int64)
    if s.size == 0:
        return G.whole()
    mask = (t[:, s] == t[s, :].T).all(axis=1)
    return _from_mask(mask)


def _small_gens(G: FiniteGroup, elems: np.ndarray) -> list[int]:
    H = G.trivial()
    out = []
    for g in elems:
        if int(g) not in H:
            H = generate(G, [int(g)], H)
            out.append(int(g))
    return out


def commutator_subgroup(G: FiniteGroup, A: SubgroupSet, B: SubgroupSet) -> SubgroupSet:
    """``[A, B]``, generated by all commutators."""
    a, b = A.elements, B.elements
    comms = np.unique(G.comm(a[:, None], b[None, :]))
    return generate(G, comms)


def derived_series(G: FiniteGroup, H: SubgroupSet | None = None) -> list[SubgroupSet]:
    cur = H if H is not None else G.whole()
    series = [cur]
    while True:
        nxt = commutator_subgroup(G, cur, cur)
        if len(nxt) == len(cur):
            return series
        series.append(nxt)
        cur = nxt


def lower_central_series(G: FiniteGroup, H: SubgroupSet | None = None) -> list[SubgroupSet]:
    H = H if H is not None else G.whole()
    cur = H
    series = [cur]
    while True:
        nxt = commutator_subgroup(G, cur, H)
        if len(nxt) == len(cur):
            return series
        series.append(nxt)
        cur = nxt


def is_soluble(G: FiniteGroup, H: SubgroupSet | None = None) -> bool:
    return derived_series(G, H)[-1].is_trivial()


def is_nilpotent(G: FiniteGroup, H: SubgroupSet | None = None) -> bool:
    return lower_central_series(G, H)[-1].is_trivial()


def is_elementary_abelian(G: FiniteGroup, H: SubgroupSet) -> int | None:
    """The prime p if H is a nontrivial elementary abelian p-group, else None."""
    if H.is_trivial() or not is_abelian(G, H):
        return None
    orders = np.unique(G.element_orders[H.elements])
    orders = orders[orders > 1]
    if len(orders) == 1 and _is_prime(int(orders[0])):
        return int(orders[0])
    return None


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % f for f in range(2, int(n**0.5) + 1))


@dataclass
class Quotient:
    group: FiniteGroup
    projection: np.ndarray  # element of G -> coset index
    reps: np.ndarray  # coset index -> minimal-index representative in G


def quotient(G: FiniteGroup, N: SubgroupSet) -> Quotient:
    """``G/N`` with cosets ordered by their minimal representative."""
    if not is_normal(G, N):
        raise NotNormal("quotient by a non-normal subgroup")
    t = G.require_table()
    n = G.order
    proj = np.full(n, -1, dtype=np.int64)
    reps = []
    nel = N.elements
    for g in range(n):
        if proj[g] < 0:
            proj[t[g, nel]] = len(reps)
            reps.append(g)
    reps = np.array(reps)
    qt = proj[t[np.ix_(reps, reps)]]
    qgens = [int(x) for x in dict.fromkeys(proj[list(G.gens)].tolist()) if x != 0]
    labels = {int(proj[g]): s for g, s in G.labels.items()}
    Q = FiniteGroup(qt, qgens, f"{G.name}/N", labels)
    return Quotient(Q, proj, reps)


def preimage(G: FiniteGroup, q: Quotient, H: SubgroupSet) -> SubgroupSet:
    return _from_mask(H.mask[q.projection])


def image(q: Quotient, H: SubgroupSet) -> SubgroupSet:
    mask = np.zeros(q.group.order, dtype=bool)
    mask[q.projection[H.elements]] = True
    return _from_mask(mask)


def _class_closures(G: FiniteGroup) -> list[SubgroupSet]:
    cls = G.classes
    return [normal_closure(G, [int(r)]) for r in cls.reps[1:]]


def minimal_normal_subgroups(G: FiniteGroup) -> list[SubgroupSet]:
    """Inclusion-minimal normal closures of single nontrivial elements."""
    if G.order == 1:
        raise TrivialGroup("the trivial group has no minimal normal subgroups")
    cands = list({c.key: c for c in _class_closures(G)}.values())
    cands.sort(key=lambda c: (len(c), c.elements.tolist()))
    out: list[SubgroupSet] = []
    for c in cands:
        if not any(m <= c for m in out):
            out.append(c)
    return out


def join(G: FiniteGroup, A: SubgroupSet, B: SubgroupSet) -> SubgroupSet:
    """Product of two normal subgroups."""
    if B <= A:
        return A
    if A <= B:
        return B
    t = G.require_table()
    mask = A.mask.copy()
    a = A.elements
    for b in B.elements:
        if not mask[b]:
            mask[t[a, b]] = True
    gens = A.gens + B.gens if (A.gens or A.is_trivial()) and (B.gens or B.is_trivial()) else ()
    return _from_mask(mask, gens)


def join_all(G: FiniteGroup, subs: Iterable[SubgroupSet]) -> SubgroupSet:
    H = G.trivial()
    for S in subs:
        H = generate(G, S.gens or S.elements, H) if not (S <= H) else H
    return H


@dataclass
class SocleData:
    socle: SubgroupSet
    abelian_part: SubgroupSet
    semisimple_part: SubgroupSet
    feet: list[tuple[SubgroupSet, str, int | None]]  # (foot, "abelian"|"nonabelian", prime)


def socle_decomposition(G: FiniteGroup) -> SocleData:
    if G.order == 1:
        triv = G.trivial()
        return SocleData(triv, triv, triv, [])
    feet = []
    ab, nab = [], []
    for N in minimal_normal_subgroups(G):
        p = is_elementary_abelian(G, N)
        if p is not None:
            feet.append((N, "abelian", p))
            ab.append(N)
        else:
            feet.append((N, "nonabelian", None))
            nab.append(N)
    A = join_all(G, ab)
    H = join_all(G, nab)
    S = join_all(G, [A, H])
    if len(A) * len(H) != len(S) or (A.mask & H.mask).sum() != 1:
        raise AssertionError("socle is not the direct product of its abelian and semisimple parts")
    t = G.require_table()
    a, h = A.elements, H.elements
    if not (t[np.ix_(a, h)] == t[np.ix_(h, a)].T).all():
        raise AssertionError("abelian and semisimple socle parts do not commute")
    return SocleData(S, A, H, feet)


def abelian_socle_prime_part(G: FiniteGroup, p: int) -> SubgroupSet:
    parts = [N for N, kind, q in socle_decomposition(G).feet if kind == "abelian" and q == p]
    return join_all(G, parts)


def soluble_radical(G: FiniteGroup) -> SubgroupSet:
    """Largest soluble normal subgroup, built up from abelian minimal normal
    subgroups of successive quotients."""
    R = G.trivial()
    while True:
        if len(R) == G.order:
            return R
        q = quotient(G, R)
        Q = q.group
        ab = [N for N in minimal_normal_subgroups(Q) if is_abelian(Q, N)]
        if not ab:
            return R
        R = preimage(G, q, join_all(Q, ab))


def normal_subgroups(G: FiniteGroup, limit: int = 100000) -> list[SubgroupSet]:
    """All normal subgroups: joins of class closures, closed under join and
    intersection."""
    closures = list({c.key: c for c in _class_closures(G)}.values())
    found: dict[bytes, SubgroupSet] = {}
    triv = G.trivial()
    found[triv.key] = triv
    queue = deque([triv])
    for c in closures:
        if c.key not in found:
            found[c.key] = c
            queue.append(c)
    while queue:
        N = queue.popleft()
        for c in closures:
            if c <= N:
                continue
            J = join(G, N, c)
            if J.key not in found:
                found[J.key] = J
                queue.append(J)
                if len(found) > limit:
                    raise LimitExceeded(f"more than {limit} normal subgroups")
    # joins of class closures already give every normal subgroup; intersections
    # are re-checked as a consistency guard
    subs = list(found.values())
    for i in range(len(subs)):
        for j in range(i + 1, len(subs)):
            key = np.packbits(subs[i].mask & subs[j].mask).tobytes()
            if key not in found:
                raise AssertionError("normal subgroup lattice not closed under intersection")
    subs.sort(key=lambda s: (len(s), s.elements.tolist()))
    return subs


@dataclass
class DirectProduct:
    group: FiniteGroup
    proj1: np.ndarray
    proj2: np.ndarray
    embed1: np.ndarray
    embed2: np.ndarray


def direct_product(G1: FiniteGroup, G2: FiniteGroup, max_order: int | None = None) -> DirectProduct:
    """Componentwise product; element (a, b) has index ``a * |G2| + b``."""
    cap = default_max_order() if max_order is None else max_order
    n1, n2 = G1.order, G2.order
    n = n1 * n2
    if n > cap:
        raise OrderCapExceeded(f"|G1 x G2| = {n} exceeds {cap}")
    if n > TABLE_LIMIT:
        raise BudgetExceeded(f"direct products above {TABLE_LIMIT} elements are not materialized")
    t1, t2 = G1.require_table().astype(np.int64), G2.require_table().astype(np.int64)
    a = np.arange(n) // n2
    b = np.arange(n) % n2
    table = t1[a[:, None], a[None, :]] * n2 + t2[b[:, None], b[None, :]]
    gens = [g * n2 for g in G1.gens] + [h for h in G2.gens]
    labels = {}
    for g, s in G1.labels.items():
        labels[g * n2] = f"({s},e)"
    for h, s in G2.labels.items():
        labels[h] = f"(e,{s})"
    P = FiniteGroup(table, gens, f"{G1.name}x{G2.name}", labels)
    return DirectProduct(P, a, b, np.arange(n1) * n2, np.arange(n2))
