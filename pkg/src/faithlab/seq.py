"""Integers of the form q^m + ... + q + 1 (q a prime power, m >= 1), their gaps,
and coincidences of repunits in two different bases."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import LimitExceeded
from .gf import is_prime_power, primes_up_to

SEQ_LIMIT = 10**7


@dataclass
class SeqTerm:
    n: int
    representations: list[tuple[int, int]] = field(default_factory=list)  # (q, m), sorted by q

    def to_json(self) -> dict:
        return {"n": self.n, "representations": [list(r) for r in self.representations]}


def repunit(q: int, m: int) -> int:
    """q^m + ... + q + 1, exactly."""
    return (q ** (m + 1) - 1) // (q - 1)


def prime_powers_up_to(n: int) -> list[int]:
    out = []
    for p in primes_up_to(n).tolist():
        x = p
        while x <= n:
            out.append(x)
            x *= p
    return sorted(out)


def generate(limit: int) -> list[SeqTerm]:
    """All terms <= limit, ascending, each with its (q, m) representations."""
    if limit > SEQ_LIMIT:
        raise LimitExceeded(f"limit {limit} exceeds {SEQ_LIMIT}")
    terms: dict[int, list[tuple[int, int]]] = {}
    # q + 1 <= limit bounds q
    for q in prime_powers_up_to(max(limit - 1, 1)):
        m = 1
        while (n := repunit(q, m)) <= limit:
            terms.setdefault(n, []).append((q, m))
            m += 1
    return [SeqTerm(n, sorted(reps)) for n, reps in sorted(terms.items())]


def is_term(n: int) -> bool:
    return any(t.n == n for t in generate(n))


@dataclass
class GapReport:
    gaps: list[tuple[int, int]]
    largest: tuple[int, int] | None
    largest_index: int | None  # 1-based index of the lower endpoint

    def to_json(self) -> dict:
        return {"gaps": [list(g) for g in self.gaps],
                "largest": list(self.largest) if self.largest else None,
                "largest_index": self.largest_index}


def gaps(limit: int) -> GapReport:
    """Consecutive-term gaps among terms <= limit; the first largest gap wins ties."""
    ns = [t.n for t in generate(limit)]
    pairs = list(zip(ns, ns[1:]))
    if not pairs:
        return GapReport([], None, None)
    i = max(range(len(pairs)), key=lambda j: (pairs[j][1] - pairs[j][0], -j))
    return GapReport(pairs, pairs[i], i + 1)


def density(k: int) -> float:
    """R(k)/k, the proportion of integers <= k that are terms."""
    return len(generate(k)) / k


@dataclass
class Coincidence:
    value: int
    first: tuple[int, int]  # (x, M) with value = (x^M - 1)/(x - 1)
    second: tuple[int, int]

    def to_json(self) -> dict:
        return {"value": self.value, "first": list(self.first), "second": list(self.second)}


def goormaghtigh(x_max: int, exp_max: int) -> list[Coincidence]:
    """Solutions of (x^M-1)/(x-1) = (y^N-1)/(y-1), 2 <= x < y <= x_max, 3 <= M, N <= exp_max."""
    if x_max > 10**4 or exp_max > 64:
        raise LimitExceeded("goormaghtigh bounds are x <= 10^4, exponent <= 64")
    seen: dict[int, list[tuple[int, int]]] = {}
    for x in range(2, x_max + 1):
        for M in range(3, exp_max + 1):
            seen.setdefault((x**M - 1) // (x - 1), []).append((x, M))
    out = []
    for v, reps in sorted(seen.items()):
        bases = {}
        for x, M in reps:
            bases.setdefault(x, (x, M))
        if len(bases) > 1:
            items = sorted(bases.values())
            for i in range(len(items)):
                for j in range(i + 1, len(items)):
                    out.append(Coincidence(v, items[i], items[j]))
    return out


def all_prime_powers(reps: list[tuple[int, int]]) -> bool:
    return all(is_prime_power(q) for q, _ in reps)
