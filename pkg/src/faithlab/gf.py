"""Finite fields GF(p^d) and exact linear algebra over F_p.

Field elements are plain integers in ``[0, q)`` packing the coefficient
vector ``c_0 + c_1 p + ... + c_{d-1} p^{d-1}`` of a polynomial in ``x``
reduced modulo the field's modulus.  Every operation takes the
:class:`FieldSpec` explicitly; elements carry no reference to their field.

Matrices over F_p are ``numpy`` integer arrays with entries in ``[0, p)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import DivisionByZero, NotPrime, NotPrimePower, ReducibleModulus


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, d)`` with ``q == p**d``; raise NotPrimePower otherwise."""
    if q < 2:
        raise NotPrimePower(q)
    for p in range(2, q + 1):
        if q % p == 0:
            break
    d, r = 0, q
    while r % p == 0:
        r //= p
        d += 1
    if r != 1:
        raise NotPrimePower(q)
    return p, d


def is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except NotPrimePower:
        return False
    return True


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.flatnonzero(sieve)


# -- polynomials over F_p, coefficient lists low to high ---------------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = [c % p for c in a]
    _poly_trim(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _poly_trim(a)
    return a


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    d = len(modulus) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    for k in range(1, d // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            if not _poly_mod(modulus, list(low) + [1], p):
                return False
    return True


# Fixed moduli for the small extension fields, low-to-high coefficients; the
# reference covering sets are written in these coordinates.
BUILTIN_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),     # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),  # x^3 + x + 1
    (3, 2): (2, 2, 1),     # x^2 - x - 1
}


def _first_irreducible(p: int, d: int) -> tuple[int, ...]:
    # lexicographic order on (c_{d-1}, ..., c_0)
    for high in itertools.product(range(p), repeat=d):
        cand = tuple(reversed(high)) + (1,)
        if cand[0] != 0 and is_irreducible(cand, p):
            return cand
    raise ReducibleModulus((p, d))  # pragma: no cover - irreducibles always exist


@dataclass(frozen=True)
class FieldSpec:
    p: int
    d: int
    modulus: tuple[int, ...] = field(default=())

    @property
    def q(self) -> int:
        return self.p**self.d

    # tables are cheap for the field sizes in scope (q <= a few hundred)
    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        q, p, d = self.q, self.p, self.d
        coeffs = np.array([self.coeffs(a) for a in range(q)], dtype=np.int64).reshape(q, d)
        weights = p ** np.arange(d, dtype=np.int64)
        add = ((coeffs[:, None, :] + coeffs[None, :, :]) % p) @ weights
        neg = ((-coeffs) % p) @ weights
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                mul[a, b] = mul[b, a] = self._mul_slow(a, b)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.flatnonzero(mul[a] == 1)[0])
        return add, neg, mul, inv

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.d):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def element(self, coeffs: Sequence[int]) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.d:
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def _mul_slow(self, a: int, b: int) -> int:
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.d - 1)
        for i, x in enumerate(ca):
            for j, y in enumerate(cb):
                prod[i + j] += x * y
        if self.d == 1:
            return prod[0] % self.p
        return self.element(_poly_mod(prod, self.modulus, self.p))

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    @property
    def x(self) -> int:
        """The class of the polynomial variable (a primitive root only by luck)."""
        return self.p if self.d > 1 else 0

    def add(self, a: int, b: int) -> int:
        return int(self._tables[0][a, b])

    def neg(self, a: int) -> int:
        return int(self._tables[1][a])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        return int(self._tables[2][a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return int(self._tables[3][a])

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        r = 1
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            k >>= 1
        return r

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))

    def mult_order(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no multiplicative order")
        k, r = 1, a
        while r != 1:
            r = self.mul(r, a)
            k += 1
        return k

    @cached_property
    def primitive_element(self) -> int:
        return next(a for a in range(1, self.q) if self.mult_order(a) == self.q - 1)

    @property
    def add_table(self) -> np.ndarray:
        return self._tables[0]

    @property
    def neg_table(self) -> np.ndarray:
        return self._tables[1]

    @property
    def mul_table(self) -> np.ndarray:
        return self._tables[2]

    @property
    def inv_table(self) -> np.ndarray:
        return self._tables[3]

    def mul_matrix(self, a: int) -> np.ndarray:
        """The d x d F_p-matrix of ``y -> a*y`` on coefficient columns."""
        cols = [self.coeffs(self.mul(a, self.p**j)) for j in range(self.d)]
        return np.array(cols, dtype=np.int64).T.reshape(self.d, self.d)

    def __str__(self) -> str:
        if self.d == 1:
            return f"GF({self.p})"
        return f"GF({self.q})=F_{self.p}[x]/({_fmt_poly(self.modulus)})"


def _fmt_poly(c: Sequence[int]) -> str:
    terms = []
    for i in reversed(range(len(c))):
        if not c[i]:
            continue
        mon = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if not mon:
            terms.append(str(c[i]))
        else:
            terms.append(mon if c[i] == 1 else f"{c[i]}{mon}")
    return " + ".join(terms) or "0"


def field_make(p: int, d: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Build GF(p^d).

    Without ``modulus`` the built-in table is used for GF(4), GF(8) and GF(9);
    other fields get the first irreducible polynomial in lexicographic order.
    """
    if not is_prime(p):
        raise NotPrime(p)
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    if d == 1:
        return FieldSpec(p, 1, ())
    if modulus is None:
        mod = BUILTIN_MODULI.get((p, d)) or _first_irreducible(p, d)
    else:
        mod = tuple(int(c) % p for c in modulus)
    if len(mod) != d + 1 or mod[-1] != 1:
        raise ReducibleModulus(f"modulus must be monic of degree {d}: {mod}")
    if not is_irreducible(mod, p):
        raise ReducibleModulus(mod)
    return FieldSpec(p, d, mod)


def gf(q: int) -> FieldSpec:
    p, d = prime_power(q)
    return field_make(p, d)


# -- linear algebra over F_p ------------------------------------------------

def as_matrix(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p and the pivot columns.

    Pivots are taken column by column, using the first row with a nonzero
    entry at or below the current position.
    """
    m = as_matrix(a, p).copy()
    if m.ndim != 2:
        raise ValueError("rref expects a 2-D array")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        col = m[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            m[nzr] = (m[nzr] - np.outer(col[nzr], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Basis (as rows) of ``{x : a @ x = 0}`` over F_p."""
    a = as_matrix(a, p)
    rows, cols = a.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    r, piv = rref(a, p)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, pc in enumerate(piv):
            basis[i, pc] = (-r[j, f]) % p
    return basis


def row_space(a, p: int) -> np.ndarray:
    """Canonical (reduced echelon) basis of the row space, zero rows dropped."""
    a = np.asarray(a)
    if a.size == 0:
        return np.zeros((0, a.shape[-1] if a.ndim == 2 else 0), dtype=np.int64)
    r, piv = rref(a, p)
    return r[: len(piv)]


def inverse(a, p: int) -> np.ndarray:
    a = as_matrix(a, p)
    n = a.shape[0]
    r, piv = rref(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise DivisionByZero("singular matrix")
    return r[:, n:]


def matmul(a, b, p: int) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


@dataclass(frozen=True)
class LinearSolution:
    rank: int
    consistent: bool
    particular: np.ndarray | None
    kernel: np.ndarray  # rows span the null space of A


def solve_linear(a, b, p: int) -> LinearSolution:
    """Solve ``a @ x = b`` over F_p.

    Inconsistency is reported through ``consistent`` rather than raised.
    """
    a = as_matrix(a, p)
    b = as_matrix(b, p).reshape(-1)
    rows, cols = a.shape
    if b.shape[0] != rows:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    aug, piv = rref(np.hstack([a, b[:, None]]), p)
    kern = nullspace(a, p)
    if cols in piv:
        return LinearSolution(len(piv) - 1, False, None, kern)
    x = np.zeros(cols, dtype=np.int64)
    for j, pc in enumerate(piv):
        x[pc] = aug[j, cols]
    return LinearSolution(len(piv), True, x, kern)


def pack(vec, p: int) -> int:
    """Base-p integer code of a coordinate vector (first coordinate least significant)."""
    out = 0
    for c in reversed(list(vec)):
        out = out * p + int(c)
    return out


def unpack(code: int, p: int, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        code, out[i] = divmod(code, p)
    return out


def all_vectors(p: int, n: int) -> np.ndarray:
    """All p^n vectors as rows, row i being ``unpack(i)``."""
    idx = np.arange(p**n, dtype=np.int64)
    return (idx[:, None] // (p ** np.arange(n, dtype=np.int64))[None, :]) % p


def projective_points(p: int, n: int) -> np.ndarray:
    """Representatives of the projective points: first nonzero coordinate is 1."""
    vecs = all_vectors(p, n)[1:]
    first = vecs[np.arange(len(vecs)), (vecs != 0).argmax(axis=1)]
    return vecs[first == 1]
