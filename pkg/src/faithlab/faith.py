"""P(n)/Q(n) thresholds: structural computation from the abelian socle and
exact brute-force oracles over irreducible kernels.

A threshold is the smallest n at which the property fails, ``INF`` when it
never fails (the group has a faithful irreducible representation).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import chartab, pmod
from .errors import BudgetExceeded, NotAbelian, OracleMismatch
from .grp import (
    FiniteGroup,
    SubgroupSet,
    abelian_socle_prime_part,
    center,
    is_abelian,
    join_all,
    socle_decomposition,
)

INF = math.inf
Q_ORACLE_BUDGET = 512
DEFAULT_Q_MAX_N = 6


@dataclass(frozen=True)
class LowerBound:
    """Q-threshold known only to be at least ``n``."""

    n: int

    def to_json(self) -> dict:
        return {"lower_bound": self.n}


def threshold_json(t) -> int | str | dict:
    if isinstance(t, LowerBound):
        return t.to_json()
    return "inf" if t == INF else int(t)


def threshold_from_json(v):
    if isinstance(v, dict):
        return LowerBound(int(v["lower_bound"]))
    return INF if v == "inf" else int(v)


@dataclass
class OffenderDatum:
    p: int
    q: int
    m: int
    multiplicity: int
    component: pmod.IsotypicComponent
    module: pmod.FpGModule

    @property
    def n(self) -> int:
        return pmod.count_simple_submodules(self.q, self.m)

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "m": self.m, "L": self.multiplicity, "n": self.n}


# -- Gaschutz and structural P-threshold -----------------------------------------

@dataclass
class SocleModules:
    socle_a: SubgroupSet
    modules: dict[int, pmod.FpGModule]
    components: dict[int, list[pmod.IsotypicComponent]]


def socle_modules(G: FiniteGroup) -> SocleModules:
    """Per-prime parts of the abelian socle as modules, with isotypic decompositions."""
    if "socle_modules" in G.extras:
        return G.extras["socle_modules"]
    data = socle_decomposition(G)
    primes = sorted({p for _, kind, p in data.feet if kind == "abelian"})
    mods, comps = {}, {}
    for p in primes:
        M = pmod.module_of(G, abelian_socle_prime_part(G, p))
        mods[p] = M
        comps[p] = pmod.isotypic_decomposition(M)
    out = SocleModules(data.abelian_part, mods, comps)
    G.extras["socle_modules"] = out
    return out


def gaschutz_faithful(G: FiniteGroup) -> bool:
    """True iff every prime part of the abelian socle is a cyclic module."""
    sm = socle_modules(G)
    return all(pmod.is_cyclic(M).cyclic for M in sm.modules.values())


def offenders(G: FiniteGroup) -> list[OffenderDatum]:
    sm = socle_modules(G)
    out = []
    for p, comps in sm.components.items():
        for c in comps:
            if c.multiplicity >= c.m + 1:
                out.append(OffenderDatum(p, c.q, c.m, c.multiplicity, c, sm.modules[p]))
    out.sort(key=lambda o: (o.n, o.p, o.q, o.m))
    return out


def p_threshold_structural(G: FiniteGroup) -> tuple[int | float, list[OffenderDatum]]:
    offs = offenders(G)
    return (min(o.n for o in offs) if offs else INF), offs


def unfaithful_witness(G: FiniteGroup, offender: OffenderDatum) -> list[int]:
    """One nontrivial element from each simple submodule of a W^(m+1) inside the offending component."""
    V = pmod.independent_copies(offender.component, offender.m + 1)
    M = offender.module
    simples = pmod.simple_submodules(M, within=V)
    return sorted(M.element_of(S.basis[0]) for S in simples)


# -- Q-threshold from the structural side ---------------------------------------------

def q_threshold_structural(p_threshold) -> int | float | LowerBound:
    """Q-threshold implied by the P-threshold where the equivalences
    Q(3)<=>P(3), Q(4)<=>P(6), Q(5)<=>P(9) decide it."""
    if p_threshold == INF:
        return INF
    p = int(p_threshold)
    if p <= 3:
        return 3
    if p <= 6:
        return 4
    if p <= 9:
        return 5
    # Q(5) holds; P(C(n,2)) implies Q(n) pushes the bound further for large p
    n = 2
    while math.comb(n, 2) < p:
        n += 1
    return LowerBound(max(6, n))


def abelian_threshold(G: FiniteGroup) -> int | float:
    """1 + the smallest prime p with p-rank >= 2, for abelian G."""
    if not is_abelian(G):
        raise NotAbelian("abelian_threshold needs an abelian group")
    orders = G.element_orders
    for p in _prime_divisors(G.order):
        if int((orders == p).sum()) + 1 >= p * p:
            return p + 1
    return INF


def _prime_divisors(n: int) -> list[int]:
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


def central_elementary_threshold(G: FiniteGroup) -> int | float:
    """1 + the smallest prime p such that the centre contains C_p x C_p."""
    Z = center(G)
    orders = G.element_orders[Z.elements]
    for p in _prime_divisors(len(Z)):
        if int((orders == p).sum()) + 1 >= p * p:
            return p + 1
    return INF


# -- oracles over the kernel family ---------------------------------------------------

def kernel_family(G: FiniteGroup, budget: int = chartab.DEFAULT_BUDGET) -> chartab.KernelFamily:
    if "kernel_family" not in G.extras:
        G.extras["kernel_family"] = chartab.kernel_family(chartab.cached_character_table(G, budget))
    return G.extras["kernel_family"]


def subset_faithful(G: FiniteGroup, F: Iterable[int]) -> bool:
    """Some irreducible kernel meets F only in the identity."""
    idx = [int(f) for f in F if int(f) != 0]
    return any(not K.mask[idx].any() for K in kernel_family(G).kernels)


def _differences(G: FiniteGroup, F: Sequence[int]) -> np.ndarray:
    t = G.require_table()
    F = np.asarray(list(F), dtype=np.int64)
    d = t[G.inv[F][:, None], F[None, :]].ravel()
    return np.unique(d[d != 0])


def subset_injective(G: FiniteGroup, F: Iterable[int]) -> bool:
    """Some irreducible kernel avoids every nontrivial quotient x^-1 y of F."""
    d = _differences(G, list(dict.fromkeys(int(f) for f in F)))
    return any(not K.mask[d].any() for K in kernel_family(G).kernels)


def _signatures(G: FiniteGroup, kernels: Sequence[SubgroupSet]) -> list[int]:
    """Bitmask per element: which of ``kernels`` contain it."""
    sig = [0] * G.order
    for b, K in enumerate(kernels):
        for g in K.elements.tolist():
            sig[g] |= 1 << b
    sig[0] = 0
    return sig


@dataclass
class OracleResult:
    threshold: int | float
    witness: list[int] = field(default_factory=list)


def _min_cover(full: int, sets: list[int]) -> list[int] | None:
    """Indices of a minimum family of ``sets`` whose union is ``full``."""
    if full == 0:
        return []
    if not sets:
        return None
    covering = {}
    for b in range(full.bit_length()):
        if full >> b & 1:
            covering[b] = [i for i, s in enumerate(sets) if s >> b & 1]
            if not covering[b]:
                return None
    biggest = max(s.bit_count() for s in sets)

    def search(unc: int, k: int) -> list[int] | None:
        if unc == 0:
            return []
        if k == 0 or unc.bit_count() > k * biggest:
            return None
        b = min((b for b in covering if unc >> b & 1), key=lambda b: (len(covering[b]), b))
        for i in covering[b]:
            rest = search(unc & ~sets[i], k - 1)
            if rest is not None:
                return [i] + rest
        return None

    for k in range(1, len(covering) + 1):
        sol = search(full, k)
        if sol is not None:
            return sol
    return None


def p_threshold_oracle(G: FiniteGroup) -> OracleResult:
    """Minimum hitting set of nontrivial elements over the minimal kernels."""
    fam = kernel_family(G)
    if fam.has_trivial:
        return OracleResult(INF)
    sig = _signatures(G, fam.minimal)
    full = (1 << len(fam.minimal)) - 1
    rep: dict[int, int] = {}
    for g in range(1, G.order):
        if sig[g]:
            rep.setdefault(sig[g], g)
    # drop signatures dominated by a strictly larger one
    keys = sorted(rep, key=lambda s: (-s.bit_count(), s))
    maximal = [s for i, s in enumerate(keys) if not any((s | o) == o for o in keys[:i])]
    cover = _min_cover(full, maximal)
    if cover is None:
        return OracleResult(INF)
    return OracleResult(len(cover), sorted(rep[maximal[i]] for i in cover))


def q_threshold_oracle(G: FiniteGroup, max_n: int = DEFAULT_Q_MAX_N,
                       budget: int = Q_ORACLE_BUDGET) -> OracleResult:
    """Smallest |F| such that every irreducible kernel meets F^-1 F - {e}.

    ``INF`` when the group is irreducibly faithful or no such F has size <= max_n.
    F fails iff each minimal kernel K has two elements of F in one coset of K.
    The search normalizes F to contain e and an element of the smallest
    minimal kernel K0 (translate by the first element of a K0-collision),
    taken up to conjugacy, and keeps F inside the join of the minimal kernels
    (cosets of the join never interact).
    """
    if G.order > budget:
        raise BudgetExceeded(f"|G| = {G.order} exceeds the Q-search budget {budget}")
    fam = kernel_family(G)
    if fam.has_trivial:
        return OracleResult(INF)
    mins = fam.minimal
    nK = len(mins)
    full = (1 << nK) - 1
    sig = _signatures(G, mins)
    cmax = max(sig).bit_count()
    t = G.require_table()
    inv = G.inv
    N = join_all(G, mins)
    K0 = min(mins, key=lambda K: (len(K), K.elements.tolist()))
    cls = G.classes
    first = sorted({int(cls.reps[cls.class_of[g]]) for g in K0.elements if g != 0})
    nwords = (nK + 63) // 64
    words = np.zeros((G.order, nwords), dtype=np.uint64)
    for g, s in enumerate(sig):
        for w in range(nwords):
            words[g, w] = (s >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    full_words = np.array([(full >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(nwords)], dtype=np.uint64)

    def to_words(mask: int) -> np.ndarray:
        return np.array([(mask >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(nwords)], dtype=np.uint64)

    def search(n: int) -> list[int] | None:
        total_pairs = math.comb(n, 2)
        for f1 in first:
            cands = np.array([g for g in N.elements.tolist() if g not in (0, f1)], dtype=np.int64)
            found = dfs(n, [0, f1], sig[f1], cands, 0, total_pairs)
            if found is not None:
                return found
        return None

    def dfs(n, F, mask, cands, start, total_pairs):
        if mask == full:
            return F + cands[start : start + n - len(F)].tolist() if len(F) + len(cands) - start >= n else None
        rem = n - len(F)
        if rem == 0:
            return None
        if rem == 1:
            c = cands[start:]
            acc = np.broadcast_to(to_words(mask), (len(c), nwords)).copy()
            for x in F:
                acc |= words[t[inv[x], c]]
            ok = np.flatnonzero((acc == full_words).all(axis=1))
            return F + [int(c[ok[0]])] if ok.size else None
        left = total_pairs - math.comb(len(F) + 1, 2)
        for i in range(start, len(cands) - rem + 1):
            f = int(cands[i])
            m2 = mask
            for x in F:
                m2 |= sig[t[inv[x], f]]
            if (full & ~m2).bit_count() > left * cmax:
                continue
            r = dfs(n, F + [f], m2, cands, i + 1, total_pairs)
            if r is not None:
                return r
        return None

    for n in range(2, max_n + 1):
        if nK > math.comb(n, 2) * cmax:
            continue
        found = search(n)
        if found is not None:
            return OracleResult(n, sorted(found))
    return OracleResult(INF)


# -- aggregate report --------------------------------------------------------------

@dataclass
class FaithReport:
    name: str
    order: int
    gaschutz_faithful: bool
    p_threshold: int | float
    q_threshold: int | float | LowerBound
    offenders: list[OffenderDatum]
    witness: list[int] | None
    socle_a_order: int
    oracle_p_threshold: int | float | None = None
    oracle_q_threshold: int | float | None = None
    oracle_trivial_kernel: bool | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        oracle = {}
        if self.oracle_p_threshold is not None:
            oracle["p_threshold"] = threshold_json(self.oracle_p_threshold)
        if self.oracle_q_threshold is not None:
            oracle["q_threshold"] = threshold_json(self.oracle_q_threshold)
        if self.oracle_trivial_kernel is not None:
            oracle["trivial_kernel"] = self.oracle_trivial_kernel
        return {
            "name": self.name,
            "order": self.order,
            "gaschutz": self.gaschutz_faithful,
            "p_threshold": threshold_json(self.p_threshold),
            "q_threshold": threshold_json(self.q_threshold),
            "offenders": [o.to_json() for o in self.offenders],
            "witness": self.witness,
            "socle_a_order": self.socle_a_order,
            "oracle": oracle,
            "notes": self.notes,
        }


def analyze(G: FiniteGroup, oracle: bool | None = None, q_oracle: bool = False,
            q_max_n: int = DEFAULT_Q_MAX_N) -> FaithReport:
    """Structural analysis, cross-checked against the kernel oracles.

    ``oracle=None`` runs the P oracle when the character table is in budget.
    """
    sm = socle_modules(G)
    gas = gaschutz_faithful(G)
    p_thr, offs = p_threshold_structural(G)
    q_thr = q_threshold_structural(p_thr)
    witness = unfaithful_witness(G, offs[0]) if offs else None
    rep = FaithReport(G.name, G.order, gas, p_thr, q_thr, offs, witness, len(sm.socle_a))
    if gas != (p_thr == INF):
        raise OracleMismatch("Gaschutz verdict disagrees with the offender scan")
    if isinstance(q_thr, LowerBound):
        rep.notes.append(f"Q-threshold undetermined beyond the proven range; at least {q_thr.n}")
    run = oracle if oracle is not None else G.order <= chartab.DEFAULT_BUDGET
    if run:
        fam = kernel_family(G)
        rep.oracle_trivial_kernel = fam.has_trivial
        if fam.has_trivial != gas:
            raise OracleMismatch("Gaschutz verdict disagrees with the kernel family")
        orc = p_threshold_oracle(G)
        rep.oracle_p_threshold = orc.threshold
        if orc.threshold != p_thr:
            raise OracleMismatch(f"structural P-threshold {p_thr} != oracle {orc.threshold}")
        if witness is not None and subset_faithful(G, witness):
            raise OracleMismatch("structural witness is irreducibly faithful")
        if q_oracle and G.order <= Q_ORACLE_BUDGET:
            qo = q_threshold_oracle(G, q_max_n)
            rep.oracle_q_threshold = qo.threshold
            if not isinstance(q_thr, LowerBound) and q_thr <= q_max_n and qo.threshold != q_thr:
                raise OracleMismatch(f"structural Q-threshold {q_thr} != oracle {qo.threshold}")
    return rep
