"""F_p[G]-modules carried by elementary abelian normal subgroups.

A module is a vector space F_p^dim with one action matrix per group
generator (``v -> A @ v`` on column vectors).  Submodules are stored by
their reduced echelon basis (rows), which doubles as their identity.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import gf
from .errors import (
    DimTooLarge,
    NotAField,
    NotElementaryAbelian,
    NotNormal,
    NotSemisimple,
    NotSimple,
    OracleMismatch,
)
from .grp import FiniteGroup, SubgroupSet, generate, is_elementary_abelian, is_normal

MAX_ENUM_DIM = 24
BRUTE_CYCLIC_DIM = 12
BRUTE_CYCLIC_VECTORS = 1 << 16


@dataclass(eq=False)
class FpGModule:
    p: int
    dim: int
    action: tuple[np.ndarray, ...]
    group: FiniteGroup | None = None
    basis_elems: tuple[int, ...] = ()
    code_to_elem: np.ndarray | None = None  # base-p vector code -> group element
    elem_to_code: np.ndarray | None = None  # group element -> code, -1 outside

    def __post_init__(self):
        self.action = tuple(np.asarray(a, dtype=np.int64) % self.p for a in self.action)

    @cached_property
    def weights(self) -> np.ndarray:
        return self.p ** np.arange(self.dim, dtype=np.int64)

    def code(self, v) -> int:
        return int(np.asarray(v, dtype=np.int64) @ self.weights)

    def vector(self, code: int) -> np.ndarray:
        return gf.unpack(code, self.p, self.dim)

    def element_of(self, v) -> int:
        if self.code_to_elem is None:
            raise ValueError("module is not attached to a group")
        return int(self.code_to_elem[self.code(v)])

    def vector_of(self, g: int) -> np.ndarray:
        if self.elem_to_code is None or self.elem_to_code[g] < 0:
            raise ValueError(f"element {g} is not in the module")
        return self.vector(int(self.elem_to_code[g]))

    def whole(self) -> "Submodule":
        return Submodule(self, np.eye(self.dim, dtype=np.int64))

    def zero(self) -> "Submodule":
        return Submodule(self, np.zeros((0, self.dim), dtype=np.int64))

    def __repr__(self) -> str:
        return f"FpGModule(p={self.p}, dim={self.dim}, gens={len(self.action)})"


@dataclass(eq=False)
class Submodule:
    ambient: FpGModule
    basis: np.ndarray  # reduced row echelon, no zero rows

    def __post_init__(self):
        self.basis = gf.row_space(np.asarray(self.basis).reshape(-1, self.ambient.dim), self.ambient.p)

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @cached_property
    def pivots(self) -> list[int]:
        return [int(np.flatnonzero(row)[0]) for row in self.basis]

    @cached_property
    def key(self) -> bytes:
        return self.basis.astype(np.int16).tobytes() + bytes([self.dim])

    def __eq__(self, other) -> bool:
        return isinstance(other, Submodule) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def reduce(self, v) -> np.ndarray:
        """Residue of ``v`` (or of each row of a 2-D array) modulo the span."""
        v = np.asarray(v, dtype=np.int64) % self.ambient.p
        if self.dim == 0:
            return v
        return (v - v[..., self.pivots] @ self.basis) % self.ambient.p

    def __contains__(self, v) -> bool:
        return not self.reduce(v).any()

    def __le__(self, other: "Submodule") -> bool:
        return not other.reduce(self.basis).any()

    def __add__(self, other: "Submodule") -> "Submodule":
        return Submodule(self.ambient, np.vstack([self.basis, other.basis]))

    def intersect(self, other: "Submodule") -> "Submodule":
        p = self.ambient.p
        if self.dim == 0 or other.dim == 0:
            return self.ambient.zero()
        # a @ B1 = b @ B2  <=>  [a, -b] in the left kernel of [B1; B2]
        k = gf.nullspace(np.vstack([self.basis, -other.basis]).T, p)
        return Submodule(self.ambient, (k[:, : self.dim] @ self.basis) % p)

    def vectors(self) -> np.ndarray:
        """All p^dim vectors of the submodule."""
        coeffs = gf.all_vectors(self.ambient.p, self.dim)
        return (coeffs @ self.basis) % self.ambient.p

    def nonzero_projective(self) -> np.ndarray:
        """One vector per 1-dimensional F_p-subspace."""
        coeffs = gf.projective_points(self.ambient.p, self.dim)
        return (coeffs @ self.basis) % self.ambient.p

    def is_submodule(self) -> bool:
        return all(not self.reduce(self.basis @ a.T).any() for a in self.ambient.action)

    def coords(self, v) -> np.ndarray:
        return np.asarray(v, dtype=np.int64)[..., self.pivots] % self.ambient.p

    def as_module(self) -> FpGModule:
        """The restricted action in the coordinates of ``basis``."""
        M = self.ambient
        acts = tuple(((self.basis @ a.T) % M.p)[:, self.pivots].T for a in M.action)
        code_to_elem = None
        if M.code_to_elem is not None:
            code_to_elem = M.code_to_elem[self.vectors() @ M.weights]
        elems = ()
        if M.code_to_elem is not None:
            elems = tuple(int(M.code_to_elem[M.code(b)]) for b in self.basis)
        return FpGModule(M.p, self.dim, acts, M.group, elems, code_to_elem, None)

    def elements(self) -> np.ndarray:
        """Group elements of the submodule (ambient must be attached to a group)."""
        M = self.ambient
        return M.code_to_elem[self.vectors() @ M.weights]

    def __repr__(self) -> str:
        return f"Submodule(dim={self.dim})"


# -- construction -----------------------------------------------------------------

def module_of(G: FiniteGroup, U: SubgroupSet, gens: Sequence[int] | None = None) -> FpGModule:
    """``U`` (normal, elementary abelian) as an F_p[G]-module under conjugation."""
    if U.is_trivial():
        raise NotElementaryAbelian("trivial subgroup")
    p = is_elementary_abelian(G, U)
    if p is None:
        raise NotElementaryAbelian(f"subgroup of order {len(U)} is not elementary abelian")
    if not is_normal(G, U):
        raise NotNormal("module_of needs a normal subgroup")
    t = G.require_table()
    gens = list(G.gens if gens is None else gens)
    basis: list[int] = []
    span = G.trivial()
    for u in U.elements:
        if int(u) not in span:
            basis.append(int(u))
            span = generate(G, [int(u)], span)
        if len(span) == len(U):
            break
    dim = len(basis)
    c2e = np.zeros(1, dtype=np.int64)
    for b in basis:
        pw = [0]
        for _ in range(p - 1):
            pw.append(int(t[pw[-1], b]))
        c2e = np.concatenate([t[c2e, pw[c]] for c in range(p)])
    e2c = np.full(G.order, -1, dtype=np.int64)
    e2c[c2e] = np.arange(p**dim)
    acts = []
    bs = np.array(basis)
    for g in gens:
        imgs = G.conj(bs, g)
        cols = np.array([gf.unpack(int(e2c[x]), p, dim) for x in imgs]).T
        acts.append(cols.reshape(dim, dim))
    return FpGModule(p, dim, tuple(acts), G, tuple(basis), c2e, e2c)


def direct_sum(*mods: FpGModule) -> FpGModule:
    p = mods[0].p
    ngens = len(mods[0].action)
    if any(M.p != p or len(M.action) != ngens for M in mods):
        raise ValueError("direct sum needs a common prime and generator list")
    dim = sum(M.dim for M in mods)
    acts = []
    for g in range(ngens):
        A = np.zeros((dim, dim), dtype=np.int64)
        off = 0
        for M in mods:
            A[off : off + M.dim, off : off + M.dim] = M.action[g]
            off += M.dim
        acts.append(A)
    return FpGModule(p, dim, tuple(acts))


def summand(M: FpGModule, index: int, sizes: Sequence[int]) -> Submodule:
    """The ``index``-th block of a module built by :func:`direct_sum`."""
    off = sum(sizes[:index])
    B = np.zeros((sizes[index], M.dim), dtype=np.int64)
    B[:, off : off + sizes[index]] = np.eye(sizes[index], dtype=np.int64)
    return Submodule(M, B)


# -- submodules ---------------------------------------------------------------

def submodule_generated(M: FpGModule, vecs) -> Submodule:
    """Smallest submodule containing ``vecs``."""
    p = M.p
    vecs = np.asarray(vecs, dtype=np.int64).reshape(-1, M.dim) % p
    S = gf.row_space(vecs, p) if vecs.size else np.zeros((0, M.dim), dtype=np.int64)
    while S.shape[0]:
        imgs = np.vstack([S] + [(S @ a.T) % p for a in M.action])
        S2 = gf.row_space(imgs, p)
        if S2.shape[0] == S.shape[0]:
            break
        S = S2
    return Submodule(M, S)


def simple_submodules(M: FpGModule, within: Submodule | None = None) -> list[Submodule]:
    """All simple submodules, by minimal-closure search over projective points.

    Each result is checked simple: every nonzero vector in it generates it.
    """
    space = within if within is not None else M.whole()
    if space.dim > MAX_ENUM_DIM:
        raise DimTooLarge(f"dimension {space.dim} exceeds the enumeration budget {MAX_ENUM_DIM}")
    w = M.weights
    covered = np.zeros(M.p**M.dim, dtype=bool)
    out: list[Submodule] = []
    cache: dict[int, Submodule] = {}

    def closure(v) -> Submodule:
        c = int(v @ w)
        if c not in cache:
            cache[c] = submodule_generated(M, v)
        return cache[c]

    for v in space.nonzero_projective():
        if covered[int(v @ w)]:
            continue
        C = closure(v)
        simple = all(closure(u).dim == C.dim for u in C.nonzero_projective())
        if simple:
            out.append(C)
            covered[C.vectors() @ w] = True
    out.sort(key=lambda S: S.basis.tolist())
    return out


def count_simple_submodules(q: int, ell: int) -> int:
    """Number of simple submodules of W^(ell+1) when End(W) has order q."""
    return (q ** (ell + 1) - 1) // (q - 1)


def quotient_module(M: FpGModule, B: Submodule) -> FpGModule:
    """``M / B`` in the coordinates of the non-pivot positions of ``B``."""
    p = M.p
    free = [j for j in range(M.dim) if j not in set(B.pivots)]
    acts = []
    for a in M.action:
        cols = B.reduce(a[:, free].T)  # rows: images of the free basis vectors
        acts.append(cols[:, free].T.reshape(len(free), len(free)))
    return FpGModule(p, len(free), tuple(acts))


# -- homomorphisms, isomorphism, centralizer field --------------------------------

def hom_space(W1: FpGModule, W2: FpGModule) -> list[np.ndarray]:
    """Basis of Hom_{F_p[G]}(W1, W2) as d2 x d1 matrices X with X A1 = A2 X."""
    if W1.p != W2.p or len(W1.action) != len(W2.action):
        raise ValueError("modules over different groups or primes")
    p, d1, d2 = W1.p, W1.dim, W2.dim
    if d1 == 0 or d2 == 0:
        return []
    rows = []
    for a1, a2 in zip(W1.action, W2.action):
        rows.append(np.kron(np.eye(d2, dtype=np.int64), a1.T) - np.kron(a2, np.eye(d1, dtype=np.int64)))
    if not rows:
        ker = np.eye(d1 * d2, dtype=np.int64)
    else:
        ker = gf.nullspace(np.vstack(rows) % p, p)
    return [k.reshape(d2, d1) for k in ker]


def hom_space_dim(W1: FpGModule, W2: FpGModule) -> int:
    return len(hom_space(W1, W2))


def is_isomorphic(W1: FpGModule, W2: FpGModule, seed: int = 0x5EED) -> bool:
    """Some intertwiner is invertible.

    Small Hom spaces are enumerated; larger ones are sampled, which is exact
    for simple modules (any nonzero intertwiner is then invertible).
    """
    if W1.dim != W2.dim:
        return False
    basis = hom_space(W1, W2)
    if not basis:
        return W1.dim == 0
    p, h = W1.p, len(basis)
    B = np.array(basis)
    if p**h <= 4096:
        combos = gf.all_vectors(p, h)[1:]
    else:
        combos = np.random.default_rng(seed).integers(0, p, size=(512, h))
    for c in combos:
        X = np.tensordot(c, B, axes=1) % p
        if gf.rank(X, p) == W1.dim:
            return True
    return False


@dataclass
class CentralizerField:
    p: int
    e: int
    m: int
    basis: tuple[np.ndarray, ...]  # F_p-basis of End_{F_p[G]}(W)

    @property
    def q(self) -> int:
        return self.p**self.e

    def elements(self) -> list[np.ndarray]:
        B = np.array(self.basis)
        return [np.tensordot(c, B, axes=1) % self.p for c in gf.all_vectors(self.p, self.e)]


def is_simple(W: FpGModule) -> bool:
    if W.dim == 0:
        return False
    return all(submodule_generated(W, v).dim == W.dim for v in W.whole().nonzero_projective())


def centralizer_field(W: FpGModule, check_simple: bool = True) -> CentralizerField:
    if check_simple and not is_simple(W):
        raise NotSimple("centralizer_field needs a simple module")
    p = W.p
    basis = hom_space(W, W)
    e = len(basis)
    span = Submodule(FpGModule(p, W.dim * W.dim, ()), np.array([b.reshape(-1) for b in basis]))
    for x in basis:
        for y in basis:
            xy = (x @ y) % p
            if not (xy.reshape(-1) in span) or not ((xy - (y @ x)) % p == 0).all():
                raise NotAField("commutant is not a commutative algebra")
    k = CentralizerField(p, e, 0, tuple(basis))
    for X in k.elements()[1:]:
        if gf.rank(X, p) != W.dim:
            raise NotAField("commutant has a nonzero singular element")
    if W.dim % e:
        raise NotAField(f"dim {W.dim} not divisible by field degree {e}")
    k.m = W.dim // e
    return k


# -- isotypic decomposition and cyclicity --------------------------------------------

@dataclass
class IsotypicComponent:
    simple: Submodule  # representative simple submodule
    multiplicity: int
    component: Submodule
    field: CentralizerField
    members: list[Submodule] = field(default_factory=list)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def m(self) -> int:
        return self.field.m


def isotypic_decomposition(M: FpGModule) -> list[IsotypicComponent]:
    simples = simple_submodules(M)
    total = M.zero()
    for S in simples:
        total = total + S
    if total.dim != M.dim:
        raise NotSemisimple(f"simple submodules span {total.dim} of {M.dim} dimensions")
    classes: list[tuple[FpGModule, list[Submodule]]] = []
    for S in simples:
        Sm = S.as_module()
        for rep, members in classes:
            if rep.dim == Sm.dim and hom_space_dim(Sm, rep) > 0:
                members.append(S)
                break
        else:
            classes.append((Sm, [S]))
    out = []
    dims = 0
    for rep, members in classes:
        comp = M.zero()
        for S in members:
            comp = comp + S
        k = centralizer_field(rep, check_simple=False)
        out.append(IsotypicComponent(members[0], comp.dim // rep.dim, comp, k, members))
        dims += comp.dim
    if dims != M.dim:
        raise NotSemisimple("isotypic components do not form a direct sum")
    return out


@dataclass
class CyclicVerdict:
    cyclic: bool
    witness: np.ndarray | None
    brute_checked: bool

    def __bool__(self) -> bool:
        return self.cyclic


def _brute_cyclic_witness(M: FpGModule) -> np.ndarray | None:
    for v in M.whole().nonzero_projective():
        if submodule_generated(M, v).dim == M.dim:
            return v
    return None


def is_cyclic(M: FpGModule, seed: int = 0x5EED) -> CyclicVerdict:
    """Cyclicity from multiplicities (cyclic iff every isotypic component
    has multiplicity <= m), cross-checked by generator search on small modules."""
    if M.dim == 0:
        return CyclicVerdict(True, np.zeros(0, dtype=np.int64), True)
    comps = isotypic_decomposition(M)
    structural = all(c.multiplicity <= c.m for c in comps)
    brute = M.dim <= BRUTE_CYCLIC_DIM and M.p**M.dim <= BRUTE_CYCLIC_VECTORS
    witness = None
    if brute:
        witness = _brute_cyclic_witness(M)
        if (witness is not None) != structural:
            raise OracleMismatch(
                f"structural cyclic={structural} but generator search found {witness is not None}"
            )
    elif structural:
        rng = np.random.default_rng(seed)
        for _ in range(256):
            v = rng.integers(0, M.p, size=M.dim)
            if submodule_generated(M, v).dim == M.dim:
                witness = v
                break
    return CyclicVerdict(structural, witness, brute)


def complement(M: FpGModule, B: Submodule) -> Submodule:
    """A submodule C with B + C = M and B & C = 0, built greedily from simples."""
    C = M.zero()
    for S in simple_submodules(M):
        if (B + C).intersect(S).dim == 0:
            C = C + S
    if (B + C).dim != M.dim or B.intersect(C).dim != 0:
        raise NotSemisimple("no complement found")
    return C


def independent_copies(comp: IsotypicComponent, count: int) -> Submodule:
    """Sum of ``count`` members of an isotypic component whose sum is direct."""
    amb = comp.component.ambient
    V = amb.zero()
    used = 0
    for S in comp.members:
        if V.intersect(S).dim == 0:
            V = V + S
            used += 1
            if used == count:
                return V
    raise ValueError(f"component has fewer than {count} independent copies")
