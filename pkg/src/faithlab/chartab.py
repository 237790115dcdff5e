"""Exact character tables by Dixon's modular method.

Character values are stored as root-of-unity multiplicity vectors:
``values[i, c, s]`` is the multiplicity of the eigenvalue zeta_e^s of a
representative of class ``c`` under the i-th irreducible representation,
so that chi_i(c) = sum_s values[i, c, s] * zeta_e^s.
"""
from __future__ import annotations

import json
import math
import os
import weakref
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
import numpy as np

from . import gf
from .errors import BudgetExceeded, SplitFailure
from .grp import (
    ConjClasses,
    FiniteGroup,
    SubgroupSet,
    _from_mask,
    center,
    is_abelian,
    normal_subgroups,
    quotient,
)

DEFAULT_BUDGET = 2048
DEFAULT_SEED = 0x5EED
MAX_RESEEDS = 32
MAX_VALUE_ENTRIES = 50_000_000


# -- cyclotomic integers ----------------------------------------------------

def _poly_divexact(a: list[int], b: list[int]) -> list[int]:
    """Quotient of integer polynomials (low -> high) when ``b`` is monic and divides ``a``."""
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1]
        out[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low -> high) of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divexact(num, list(cyclotomic_poly(d)))
    return tuple(num)


def cyclotomic_reduce(vec, e: int) -> np.ndarray:
    """Remainder of sum_s vec[..., s] x^s modulo Phi_e (last axis)."""
    v = np.array(vec, dtype=np.int64)
    phi = np.array(cyclotomic_poly(e), dtype=np.int64)
    deg = len(phi) - 1
    for s in range(v.shape[-1] - 1, deg - 1, -1):
        c = v[..., s].copy()
        v[..., s - deg : s + 1] -= c[..., None] * phi
    return v[..., :deg]


def cyclotomic_is_zero(vec, e: int) -> bool:
    return not cyclotomic_reduce(vec, e).any()


def cyclic_product(a, b) -> np.ndarray:
    """Product in Z[x]/(x^e - 1) along the last axis."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    e = a.shape[-1]
    idx = (np.arange(e)[None, :] - np.arange(e)[:, None]) % e  # idx[s, u] = u - s
    return np.einsum("...s,...su->...u", a, b[..., idx])


def conjugate(vec) -> np.ndarray:
    v = np.asarray(vec)
    e = v.shape[-1]
    return v[..., (-np.arange(e)) % e]


# -- table ------------------------------------------------------------------

@dataclass(eq=False)
class CharacterTable:
    group: FiniteGroup
    classes: ConjClasses
    exponent: int
    degrees: np.ndarray  # (k,)
    values: np.ndarray  # (k, k, e) multiplicities
    modulus: int = 0  # Dixon prime, 0 on the abelian path

    def __len__(self) -> int:
        return len(self.degrees)

    @cached_property
    def kernels(self) -> list[SubgroupSet]:
        out = []
        cls = self.classes.class_of
        for i, d in enumerate(self.degrees):
            # chi(g) = chi(1) exactly when every eigenvalue of g is 1
            diff = cyclotomic_reduce(self.values[i] - self._scalar(d), self.exponent)
            at_id = ~diff.any(axis=1)
            out.append(_from_mask(at_id[cls]))
        return out

    def _scalar(self, d: int) -> np.ndarray:
        v = np.zeros(self.exponent, dtype=np.int64)
        v[0] = d
        return v

    def check(self) -> None:
        """Exact consistency checks; raises AssertionError on failure."""
        k = len(self.classes)
        assert len(self.degrees) == k, "character count differs from class count"
        assert int((self.degrees.astype(np.int64) ** 2).sum()) == self.group.order, "sum of squared degrees"
        assert (self.values.sum(axis=2) == self.degrees[:, None]).all(), "multiplicities do not sum to the degree"
        col = np.tensordot(self.degrees, self.values, axes=1)  # (k, e)
        for c in range(1, k):
            assert cyclotomic_is_zero(col[c], self.exponent), f"column orthogonality fails at class {c}"
        inter = np.ones(self.group.order, dtype=bool)
        for K in self.kernels:
            inter &= K.mask
        assert inter.sum() == 1, "kernels intersect nontrivially"

    def inner_product(self, i: int, j: int) -> np.ndarray:
        """sum_c |C_c| chi_i(c) conj(chi_j(c)) reduced modulo Phi_e."""
        prod = cyclic_product(self.values[i], conjugate(self.values[j]))
        tot = (self.classes.sizes[:, None] * prod).sum(axis=0)
        return cyclotomic_reduce(tot, self.exponent)

    def to_dict(self) -> dict:
        return {
            "order": self.group.order,
            "exponent": self.exponent,
            "modulus": self.modulus,
            "class_sizes": self.classes.sizes.tolist(),
            "class_reps": self.classes.reps.tolist(),
            "degrees": self.degrees.tolist(),
            "values": self.values.tolist(),
            "kernels": [K.elements.tolist() for K in self.kernels],
        }

    @classmethod
    def from_dict(cls, G: FiniteGroup, data: dict) -> "CharacterTable":
        C = G.classes
        if (data["order"] != G.order or data["class_sizes"] != C.sizes.tolist()
                or data["class_reps"] != C.reps.tolist()):
            raise ValueError("cached table does not match this group")
        return cls(G, C, int(data["exponent"]), np.array(data["degrees"], dtype=np.int64),
                   np.array(data["values"], dtype=np.int64), int(data["modulus"]))


def _power_classes(G: FiniteGroup, C: ConjClasses, e: int) -> np.ndarray:
    t = G.require_table()
    out = np.empty((len(C), e), dtype=np.int64)
    cur = np.zeros(len(C), dtype=np.int64)
    for s in range(e):
        out[:, s] = C.class_of[cur]
        cur = t[cur, C.reps]
    return out


def _abelian_table(G: FiniteGroup, C: ConjClasses, e: int) -> CharacterTable:
    """Dual group: extend homomorphisms G -> Z/e along a generator chain."""
    t = G.require_table()
    n = G.order
    chars = [np.full(n, -1, dtype=np.int64)]
    chars[0][0] = 0
    H = np.array([0])
    for g in G.gens:
        if chars[0][g] >= 0:
            continue
        pw = [0]
        while True:
            nxt = int(t[pw[-1], g])
            if chars[0][nxt] >= 0:
                break
            pw.append(nxt)
        idx = len(pw)  # g^idx lies in the current subgroup
        gt = int(t[pw[-1], g])
        newH = np.concatenate([t[H, x] for x in pw])
        ext = []
        for lam in chars:
            target = int(lam[gt])
            a0 = next(a for a in range(e) if (idx * a - target) % e == 0)
            for j in range(idx):
                a = (a0 + j * (e // idx)) % e
                mu = lam.copy()
                for c, x in enumerate(pw):
                    mu[t[H, x]] = (lam[H] + c * a) % e
                ext.append(mu)
        chars = ext
        H = newH
    if len(H) != n:
        raise AssertionError("generators do not generate the group")
    lam = np.array(chars)[:, C.reps]  # (k, k) exponents
    vals = np.zeros((n, n, e), dtype=np.int64)
    ii, cc = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    vals[ii, cc, lam] = 1
    return CharacterTable(G, C, e, np.ones(n, dtype=np.int64), vals, 0)


def dixon_prime(order: int, exponent: int) -> int:
    bound = 2 * math.isqrt(order)
    r = exponent + 1
    while r <= bound or not gf.is_prime(r):
        r += exponent
    return r


def class_matrices(G: FiniteGroup, C: ConjClasses) -> np.ndarray:
    """A[j, l, i] = #{x in C_j : x^-1 z_i in C_l} for the representative z_i of C_i."""
    t = G.require_table()
    k = len(C)
    A = np.zeros((k, k, k), dtype=np.int64)
    inv = G.inv
    for i, z in enumerate(C.reps):
        y = t[inv, z]
        np.add.at(A, (C.class_of, C.class_of[y], np.full(G.order, i)), 1)
    return A


def _eigenspaces(B: np.ndarray, X: np.ndarray, r: int) -> list[np.ndarray]:
    d = B.shape[0]
    piv = [int(np.flatnonzero(row)[0]) for row in B]
    R = ((B @ X.T) % r)[:, piv].T
    parts = []
    found = 0
    eye = np.eye(d, dtype=np.int64)
    for lam in range(r):
        N = gf.nullspace((R - lam * eye) % r, r)
        if N.shape[0]:
            parts.append(gf.row_space(N @ B, r))
            found += N.shape[0]
            if found == d:
                break
    if found != d:
        raise SplitFailure("class matrix not diagonalizable over the modular field")
    return parts


def _split(A: np.ndarray, r: int, rng: np.random.Generator) -> list[np.ndarray]:
    k = A.shape[0]
    pending = [np.eye(k, dtype=np.int64)]
    done = []
    while pending:
        B = pending.pop()
        if B.shape[0] == 1:
            done.append(B[0])
            continue
        cands = [np.tensordot(rng.integers(0, r, size=k), A, axes=1) % r for _ in range(2)]
        cands += [A[j] for j in range(1, k)]
        for X in cands:
            parts = _eigenspaces(B, X, r)
            if len(parts) > 1:
                pending.extend(parts)
                break
        else:
            raise SplitFailure("no class matrix splits a common eigenspace")
    return done


def _dixon_table(G: FiniteGroup, C: ConjClasses, e: int, seed: int) -> CharacterTable:
    n = G.order
    k = len(C)
    r = dixon_prime(n, e)
    A = class_matrices(G, C) % r
    for attempt in range(MAX_RESEEDS):
        try:
            vecs = _split(A, r, np.random.default_rng(seed + attempt))
            break
        except SplitFailure:
            continue
    else:
        raise SplitFailure(f"eigenspace splitting failed after {MAX_RESEEDS} seeds")
    if len(vecs) != k:
        raise SplitFailure(f"found {len(vecs)} central characters for {k} classes")
    sizes = C.sizes.astype(np.int64)
    inv_sizes = np.array([pow(int(s), -1, r) for s in sizes])
    gen = next(g for g in range(2, r) if all(pow(g, (r - 1) // f, r) != 1 for f in _prime_factors(r - 1))) if r > 2 else 1
    z = pow(gen, (r - 1) // e, r)
    zinv = pow(z, -1, r)
    Z = np.array([[pow(zinv, s * tt, r) for s in range(e)] for tt in range(e)], dtype=np.int64)
    einv = pow(e, -1, r)
    pc = _power_classes(G, C, e)
    degrees, values = [], []
    root = math.isqrt(n)
    for w in vecs:
        w = w * pow(int(w[0]), -1, r) % r
        S = int((w * w[C.inverse_class] % r * inv_sizes).sum() % r)
        d2 = n * pow(S, -1, r) % r
        d = next((d for d in range(1, root + 1) if d * d % r == d2), None)
        if d is None:
            raise SplitFailure("no integral degree fits the central character")
        chi = w * d % r * inv_sizes % r
        m = (chi[pc] @ Z) % r * einv % r  # (k, e)
        if (m > d).any() or (m.sum(axis=1) != d).any():
            raise SplitFailure("modular Fourier inversion gave non-multiplicities")
        degrees.append(d)
        values.append(m)
    return CharacterTable(G, C, e, np.array(degrees, dtype=np.int64), np.array(values, dtype=np.int64), r)


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _sorted(T: CharacterTable) -> CharacterTable:
    # degree ascending; within a degree, multiplicity vectors in descending
    # lexicographic order so the trivial character comes first
    order = sorted(range(len(T)), key=lambda i: (int(T.degrees[i]), tuple((-T.values[i]).ravel().tolist())))
    return CharacterTable(T.group, T.classes, T.exponent, T.degrees[order], T.values[order], T.modulus)


def character_table(G: FiniteGroup, budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED) -> CharacterTable:
    if G.order > budget:
        raise BudgetExceeded(f"|G| = {G.order} exceeds the character-table budget {budget}")
    C = G.classes
    e = G.exponent
    if len(C) * len(C) * e > MAX_VALUE_ENTRIES:
        raise BudgetExceeded(f"{len(C)} classes with exponent {e} exceed the value-storage budget")
    if len(C) == G.order:
        T = _abelian_table(G, C, e)
    else:
        T = _dixon_table(G, C, e, seed)
    T = _sorted(T)
    T.check()
    return T


# -- kernels ----------------------------------------------------------------

@dataclass
class KernelFamily:
    kernels: list[SubgroupSet]  # distinct, sorted by (order, elements)
    minimal: list[SubgroupSet]
    by_character: list[int] = field(default_factory=list)  # character -> index into kernels

    @property
    def has_trivial(self) -> bool:
        return any(K.is_trivial() for K in self.kernels)


def kernel_family(T: CharacterTable) -> KernelFamily:
    uniq: dict[bytes, SubgroupSet] = {}
    for K in T.kernels:
        uniq.setdefault(K.key, K)
    kernels = sorted(uniq.values(), key=lambda K: (len(K), K.elements.tolist()))
    pos = {K.key: i for i, K in enumerate(kernels)}
    minimal = [K for K in kernels if not any(L < K for L in kernels)]
    return KernelFamily(kernels, minimal, [pos[K.key] for K in T.kernels])


def _is_cyclic_subgroup(G: FiniteGroup, H: SubgroupSet) -> bool:
    orders = G.element_orders[H.elements]
    return int(orders.max()) == len(H)


def verify_abelian_normal_criterion(G: FiniteGroup, budget: int = 512) -> bool:
    """True iff Z(G/N) is non-cyclic for every abelian normal subgroup N."""
    if G.order > budget:
        raise BudgetExceeded(f"|G| = {G.order} exceeds {budget}")
    for N in normal_subgroups(G):
        if not is_abelian(G, N):
            continue
        Q = quotient(G, N).group
        if _is_cyclic_subgroup(Q, center(Q)):
            return False
    return True


_TABLES: "weakref.WeakKeyDictionary[FiniteGroup, CharacterTable]" = weakref.WeakKeyDictionary()


def cached_character_table(G: FiniteGroup, budget: int = DEFAULT_BUDGET, cache_dir: str | None = None,
                           key: str | None = None, seed: int = DEFAULT_SEED) -> CharacterTable:
    """``character_table`` memoized per group object, optionally backed by a JSON file."""
    if G in _TABLES:
        return _TABLES[G]
    path = None
    if cache_dir is not None and key is not None:
        path = os.path.join(cache_dir, f"chartab-{key}.json")
        if os.path.exists(path):
            with open(path) as fh:
                try:
                    T = CharacterTable.from_dict(G, json.load(fh))
                    T.check()
                    _TABLES[G] = T
                    return T
                except (ValueError, KeyError, AssertionError):
                    pass
    T = character_table(G, budget, seed)
    _TABLES[G] = T
    if path is not None:
        os.makedirs(cache_dir, exist_ok=True)
        with open(path, "w") as fh:
            json.dump(T.to_dict(), fh)
    return T
