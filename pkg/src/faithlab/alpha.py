"""Difference covers of the line system of W^(m+1), W = GF(q)^m.

alpha(q, m) is the smallest |F| with F in W^(m+1) such that F - F contains a
nonzero vector of every line S_lam = {(lam_0 x, ..., lam_m x) : x in W}.

Vectors are packed as base-q codes over their m(m+1) GF(q)-coordinates,
coordinate ``i*m + k`` holding component i, entry k (first coordinate least
significant), which matches ``G.extras["v_code"]`` of :func:`build.gqm`.
"""
from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import gf as gflib
from .errors import BudgetExceeded, LimitExceeded

VECTOR_BUDGET = 1 << 24
DIFF_TABLE_LIMIT = 4096


@dataclass(eq=False)
class LineSystem:
    q: int
    m: int
    field: gflib.FieldSpec
    points: np.ndarray  # (n_lines, m+1) projective representatives
    coords: np.ndarray  # (N, D) GF(q) coordinates per vector code
    line_of: np.ndarray  # (N,) line id, -1 for 0 and for vectors on no line
    lines: tuple[np.ndarray, ...]  # nonzero vector codes per line

    @property
    def dim(self) -> int:
        return self.m * (self.m + 1)

    @property
    def size(self) -> int:
        return len(self.line_of)

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    def code(self, v) -> int:
        flat = _flatten(v, self.m)
        if len(flat) != self.dim:
            raise ValueError(f"vector has {len(flat)} coordinates, expected {self.dim}")
        return gflib.pack(flat, self.q)

    def vector(self, code: int) -> tuple:
        c = self.coords[code].tolist()
        if self.m == 1:
            return tuple(c)
        return tuple(tuple(c[i * self.m : (i + 1) * self.m]) for i in range(self.m + 1))

    def __post_init__(self):
        w = self.q ** np.arange(self.dim, dtype=np.int64)
        self._weights = w
        self._diff_lines = None
        if self.size <= DIFF_TABLE_LIMIT:
            self._diff_lines = self.diff_lines(np.arange(self.size)[:, None], np.arange(self.size)[None, :])

    def diff(self, a, b) -> np.ndarray:
        """Codes of a - b (broadcasting over code arrays)."""
        a, b = np.asarray(a), np.asarray(b)
        k = self.field
        c = k.add_table[self.coords[a], k.neg_table[self.coords[b]]]
        return c @ self._weights

    def diff_lines(self, a, b) -> np.ndarray:
        if self._diff_lines is not None:
            return self._diff_lines[a, b]
        return self.line_of[self.diff(a, b)]


def _flatten(v, m: int) -> list[int]:
    out = []
    for x in v:
        if isinstance(x, (tuple, list, np.ndarray)):
            out.extend(int(c) for c in x)
        else:
            out.append(int(x))
    return out


@lru_cache(maxsize=16)
def line_system(q: int, m: int = 1) -> LineSystem:
    if m < 1:
        raise ValueError("m must be >= 1")
    k = gflib.gf(q)
    dim = m * (m + 1)
    if q**dim > VECTOR_BUDGET:
        raise BudgetExceeded(f"q^(m(m+1)) = {q**dim} exceeds the vector budget")
    coords = gflib.all_vectors(q, dim)
    points = gflib.projective_points(q, m + 1)
    W = gflib.all_vectors(q, m)[1:]  # nonzero x in W
    weights = q ** np.arange(dim, dtype=np.int64)
    line_of = np.full(q**dim, -1, dtype=np.int64)
    lines = []
    mul = k.mul_table
    for i, lam in enumerate(points):
        # component j of (lam_0 x, ..., lam_m x) is lam_j * x
        vecs = np.concatenate([mul[lam[j], W] for j in range(m + 1)], axis=1)
        codes = vecs @ weights
        if (line_of[codes] >= 0).any():
            raise AssertionError("lines intersect outside 0")
        line_of[codes] = i
        lines.append(np.sort(codes))
    return LineSystem(q, m, k, points, coords, line_of, tuple(lines))


# -- coverage ---------------------------------------------------------------

@dataclass
class Coverage:
    covered: list[bool]
    missing: list[int]

    @property
    def ok(self) -> bool:
        return not self.missing


def verify_witness(sys: LineSystem, F: Iterable) -> Coverage:
    codes = [f if isinstance(f, (int, np.integer)) else sys.code(f) for f in F]
    codes = np.array(sorted(set(int(c) for c in codes)), dtype=np.int64)
    hit = np.zeros(sys.n_lines, dtype=bool)
    if len(codes) > 1:
        L = sys.diff_lines(codes[:, None], codes[None, :]).ravel()
        hit[L[L >= 0]] = True
    return Coverage(hit.tolist(), np.flatnonzero(~hit).tolist())


def upper_witness(q: int, m: int = 1) -> list[int]:
    """A covering set of size (q^(m+1)-1)/(q-1): 0, the graph {(lam x, x, 0, ...)}
    of a fixed x, and one point on each line outside the first two components."""
    sys = line_system(q, m)
    k = sys.field
    x = np.zeros(m, dtype=np.int64)
    x[0] = 1
    F = {0}
    for lam in range(q):
        v = [0] * sys.dim
        v[0:m] = k.mul_table[lam, x]
        v[m : 2 * m] = x
        F.add(gflib.pack(v, q))
    for pt in sys.points:
        if not pt[2:].any():
            continue
        v = np.concatenate([k.mul_table[pt[j], x] for j in range(m + 1)])
        F.add(gflib.pack(v, q))
    out = sorted(F)
    if len(out) != (q ** (m + 1) - 1) // (q - 1) or not verify_witness(sys, out).ok:
        raise AssertionError("upper witness construction failed")
    return out


# -- search -----------------------------------------------------------------

@dataclass
class AlphaResult:
    q: int
    m: int
    alpha: int
    witness: list[int]
    nodes: int
    elapsed: float
    lower_bound: int
    witness_vectors: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "m": self.m,
            "alpha": self.alpha,
            "witness": [list(_flatten(v, self.m)) for v in self.witness_vectors],
            "witness_codes": self.witness,
            "nodes": self.nodes,
            "elapsed": round(self.elapsed, 6),
            "lower_bound": self.lower_bound,
        }


class _Budget:
    def __init__(self, limit: int | None):
        self.limit = limit
        self.nodes = 0

    def tick(self, n: int = 1):
        self.nodes += n
        if self.limit is not None and self.nodes > self.limit:
            raise LimitExceeded(f"node limit {self.limit} exceeded")


def lower_bound(n_lines: int) -> int:
    t = 1
    while math.comb(t, 2) < n_lines:
        t += 1
    return t


def _extend(sys: LineSystem, t: int, F: list[int], covered: int, start: int, budget: _Budget) -> list[int] | None:
    """Depth-first completion of F (sorted codes, 0 first) to size t."""
    full = (1 << sys.n_lines) - 1
    unc = full & ~covered
    if unc == 0:
        return F
    rem = t - len(F)
    if rem <= 0 or unc.bit_count() > math.comb(t, 2) - math.comb(len(F), 2):
        return None
    N = sys.size
    if rem == 1:
        if unc.bit_count() > len(F):
            return None
        c = np.arange(start, N)
        budget.tick(len(c))
        L = sys.diff_lines(np.array(F)[:, None], c[None, :])  # (|F|, nc)
        ok = np.ones(len(c), dtype=bool)
        for b in range(sys.n_lines):
            if unc >> b & 1:
                ok &= (L == b).any(axis=0)
        hits = np.flatnonzero(ok)
        return F + [int(c[hits[0]])] if hits.size else None
    Farr = np.array(F)
    for v in range(start, N - rem + 1):
        budget.tick()
        new = sys.diff_lines(Farr, v)
        cov = covered
        for b in new[new >= 0].tolist():
            cov |= 1 << b
        r = _extend(sys, t, F + [v], cov, v + 1, budget)
        if r is not None:
            return r
    return None


def _branch(args) -> tuple[list[int] | None, int]:
    q, m, t, v, limit = args
    sys = line_system(q, m)
    budget = _Budget(limit)
    lo = sys.diff_lines(0, v)
    cov = (1 << int(lo)) if lo >= 0 else 0
    return _extend(sys, t, [0, v], cov, v + 1, budget), budget.nodes


def search_size(sys: LineSystem, t: int, node_limit: int | None = None, threads: int = 1) -> tuple[list[int] | None, int]:
    """First covering set of size t in canonical order, or None if none exists."""
    if t <= 1:
        return (None, 0) if sys.n_lines else ([0], 0)
    if threads <= 1:
        budget = _Budget(node_limit)
        return _extend(sys, t, [0], 0, 1, budget), budget.nodes
    # first-level branches in parallel; the lowest successful branch wins
    args = [(sys.q, sys.m, t, v, node_limit) for v in range(1, sys.size - t + 2)]
    nodes = 0
    with ProcessPoolExecutor(max_workers=threads) as ex:
        results = list(ex.map(_branch, args, chunksize=max(1, len(args) // (4 * threads))))
    for found, n in results:
        nodes += n
    for found, _ in results:
        if found is not None:
            return found, nodes
    return None, nodes


def alpha_search(q: int, m: int = 1, upper_hint: Sequence[int] | None = None, node_limit: int | None = None,
                 threads: int = 1) -> AlphaResult:
    """alpha(q, m) by iterative deepening from the pair-count lower bound.

    Every size below the result is exhausted; the witness is the first
    covering set in canonical (code-sorted, index-monotone) order.
    """
    t0 = time.perf_counter()
    sys = line_system(q, m)
    upper = list(upper_hint) if upper_hint is not None else upper_witness(q, m)
    if not verify_witness(sys, upper).ok:
        raise ValueError("upper_hint does not cover every line")
    lo = lower_bound(sys.n_lines)
    nodes = 0
    for t in range(lo, len(set(upper)) + 1):
        found, n = search_size(sys, t, node_limit=None if node_limit is None else node_limit - nodes,
                               threads=threads)
        nodes += n
        if found is not None:
            return AlphaResult(q, m, t, found, nodes, time.perf_counter() - t0, lo,
                               [sys.vector(c) for c in found])
    raise AssertionError("search failed to reproduce the upper witness size")


def brute_force_alpha_exists(sys: LineSystem, t: int) -> bool:
    """Unpruned enumeration of all t-sets containing 0 (independent oracle)."""
    for rest in itertools.combinations(range(1, sys.size), t - 1):
        if verify_witness(sys, (0,) + rest).ok:
            return True
    return False


def count_accepting(sys: LineSystem, t: int) -> int:
    """Number of t-sets containing 0 that cover every line, by exhaustive enumeration."""
    return sum(verify_witness(sys, (0,) + rest).ok for rest in itertools.combinations(range(1, sys.size), t - 1))
