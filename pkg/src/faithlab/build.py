"""Named groups: the semidirect products G_(q,m), small standard groups, the
order-256 central product of three dihedral groups, and the test corpus."""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Any, Callable

import numpy as np

from . import grp
from .errors import NotPrimePower, OrderCapExceeded, ParseError, UnknownBuilder
from .gf import FieldSpec, gf, is_prime_power, prime_power
from .grp import FiniteGroup, SubgroupSet, direct_product, group_from_realization, quotient


# -- G_(q,m) = GL_m(q) x| (GF(q)^m)^(m+1) -------------------------------------

def _mat_mul(k: FieldSpec, A, B):
    m = len(A)
    mul, add = k.mul_table, k.add_table
    out = []
    for i in range(m):
        row = []
        for j in range(m):
            s = 0
            for t in range(m):
                s = add[s, mul[A[i][t], B[t][j]]]
            row.append(int(s))
        out.append(tuple(row))
    return tuple(out)


def _mat_vec(k: FieldSpec, A, v):
    m = len(A)
    mul, add = k.mul_table, k.add_table
    out = []
    for i in range(m):
        s = 0
        for t in range(m):
            s = add[s, mul[A[i][t], v[t]]]
        out.append(int(s))
    return out


def _act_blocks(k: FieldSpec, A, v):
    m = len(A)
    out = []
    for b in range(0, len(v), m):
        out.extend(_mat_vec(k, A, v[b : b + m]))
    return tuple(out)


def gl_generators(k: FieldSpec, m: int) -> list[tuple[tuple[int, ...], ...]]:
    """diag(alpha, 1, ..., 1) with alpha primitive, plus the transvections
    I + beta*E_ij for beta running over an F_p-basis of k."""
    eye = [[int(i == j) for j in range(m)] for i in range(m)]
    gens = []
    d = [row[:] for row in eye]
    d[0][0] = k.primitive_element
    gens.append(tuple(map(tuple, d)))
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            for e in range(k.d):
                t = [row[:] for row in eye]
                t[i][j] = k.p**e
                gens.append(tuple(map(tuple, t)))
    return gens


def gl_order(q: int, m: int) -> int:
    out = 1
    for i in range(m):
        out *= q**m - q**i
    return out


def gqm_order(q: int, m: int) -> int:
    return gl_order(q, m) * q ** (m * (m + 1))


def gqm(q: int, m: int = 1, max_order: int | None = None) -> FiniteGroup:
    """The semidirect product GL(W) x| V with W = GF(q)^m and V = W^(m+1).

    Element ``(A, v)`` multiplies as ``(A, v)(B, w) = (AB, v + A.w)``, ``A``
    acting on each of the m+1 blocks of ``v``.  ``G.extras`` carries the field,
    the distinguished normal subgroup ``V`` and, for elements of V, the base-q
    code of their coordinate vector.
    """
    if not is_prime_power(q):
        raise NotPrimePower(q)
    if m < 1:
        raise ValueError("m must be >= 1")
    cap = grp.default_max_order() if max_order is None else max_order
    n = gqm_order(q, m)
    if n > cap:
        raise OrderCapExceeded(f"|G_({q},{m})| = {n} exceeds {cap}")
    k = gf(q)
    dim = m * (m + 1)
    add = k.add_table

    def mul(x, y):
        A, v = x
        B, w = y
        Aw = _act_blocks(k, A, w)
        return (_mat_mul(k, A, B), tuple(int(add[a, b]) for a, b in zip(v, Aw)))

    eye = tuple(tuple(int(i == j) for j in range(m)) for i in range(m))
    zero = (0,) * dim
    gens = [(A, zero) for A in gl_generators(k, m)]
    labels = {}
    for c in range(dim):
        for e in range(k.d):
            v = [0] * dim
            v[c] = k.p**e
            gens.append((eye, tuple(v)))
            labels[(eye, tuple(v))] = f"v[{c // m}][{c % m}]={k.p**e}"
    G = group_from_realization(gens, mul, (eye, zero), name=f"G({q},{m})", max_order=cap, labels=labels)
    assert G.order == n, (G.order, n)
    in_v = np.array([c[0] == eye for c in G.carriers])
    codes = np.full(G.order, -1, dtype=np.int64)
    weights = q ** np.arange(dim, dtype=np.int64)
    for i in np.flatnonzero(in_v):
        codes[i] = int(np.dot(G.carriers[i][1], weights))
    G.extras.update(field=k, q=q, m=m, V=SubgroupSet(in_v, ()), v_code=codes)
    return G


# -- standard groups -----------------------------------------------------------

def cyclic(n: int) -> FiniteGroup:
    return group_from_realization([1 % n], lambda a, b: (a + b) % n, 0, name=f"C{n}")


def elementary_abelian(p: int, r: int) -> FiniteGroup:
    zero = (0,) * r
    gens = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    return group_from_realization(
        gens, lambda a, b: tuple((x + y) % p for x, y in zip(a, b)), zero, name=f"C{p}^{r}"
    )


def abelian(*invariants: int) -> FiniteGroup:
    """Direct product of cyclic groups of the given orders."""
    zero = (0,) * len(invariants)
    gens = [tuple(int(i == j) for j in range(len(invariants))) for i in range(len(invariants))]
    name = "x".join(f"C{n}" for n in invariants)
    return group_from_realization(
        gens, lambda a, b: tuple((x + y) % n for x, y, n in zip(a, b, invariants)), zero, name=name
    )


def dihedral(order: int) -> FiniteGroup:
    """Dihedral group of the given order 2n: rotation r = (1, 0), reflection s = (0, 1)."""
    if order % 2 or order < 2:
        raise ValueError("dihedral order must be even")
    n = order // 2

    def mul(a, b):
        k1, f1 = a
        k2, f2 = b
        return ((k1 + (k2 if f1 == 0 else -k2)) % n, (f1 + f2) % 2)

    gens = [(1 % n, 0), (0, 1)]
    labels = {(1 % n, 0): "r", (0, 1): "s"}
    if n % 2 == 0:
        labels[(n // 2, 0)] = "z"
    return group_from_realization(gens, mul, (0, 0), name=f"D{order}", labels=labels)


def _qmul(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def quaternion8() -> FiniteGroup:
    i, j = (0, 1, 0, 0), (0, 0, 1, 0)
    return group_from_realization([i, j], _qmul, (1, 0, 0, 0), name="Q8", labels={i: "i", j: "j"})


def _pmul(a, b):
    # apply a, then b
    return tuple(b[x] for x in a)


def permutation_group(degree: int, gens, name: str = "") -> FiniteGroup:
    gens = [tuple(int(x) for x in g) for g in gens]
    for g in gens:
        if sorted(g) != list(range(degree)):
            raise ValueError(f"not a permutation of {degree} points: {g}")
    return group_from_realization(gens, _pmul, tuple(range(degree)), name=name or f"Perm{degree}")


def _cycle(degree: int, *pts: int) -> tuple[int, ...]:
    img = list(range(degree))
    for a, b in zip(pts, pts[1:] + pts[:1]):
        img[a] = b
    return tuple(img)


def symmetric(n: int) -> FiniteGroup:
    if n < 2:
        return permutation_group(max(n, 1), [], name=f"S{n}")
    gens = [_cycle(n, 0, 1)] + ([_cycle(n, *range(n))] if n > 2 else [])
    return permutation_group(n, gens, name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    gens = [_cycle(n, 0, 1, k) for k in range(2, n)]
    return permutation_group(max(n, 1), gens, name=f"A{n}")


def heisenberg27() -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over F_3, as (a, b, c) for
    [[1, a, c], [0, 1, b], [0, 0, 1]]; x = (1,0,0), y = (0,1,0), z = [x, y]."""

    def mul(u, v):
        a, b, c = u
        a2, b2, c2 = v
        return ((a + a2) % 3, (b + b2) % 3, (c + c2 + a * b2) % 3)

    labels = {(1, 0, 0): "x", (0, 1, 0): "y", (0, 0, 1): "z"}
    return group_from_realization([(1, 0, 0), (0, 1, 0)], mul, (0, 0, 0), name="Heis27", labels=labels)


def product(*groups: FiniteGroup) -> FiniteGroup:
    out = groups[0]
    for H in groups[1:]:
        name = f"{out.name}x{H.name}"
        out = direct_product(out, H).group
        out.name = name
    return out


def d8_central_product() -> FiniteGroup:
    """``(D8 x D8 x D8) / <z1 z2 z3>``, order 256.

    Labels ``r1, s1, z1, ...`` name the images of the three dihedral factors'
    rotation, reflection and central involution; ``G.extras['factors']`` holds
    the three embedded D8 subgroups.
    """
    D = dihedral(8)
    z = next(i for i, s in D.labels.items() if s == "z")
    r = next(i for i, s in D.labels.items() if s == "r")
    s = next(i for i, s in D.labels.items() if s == "s")
    P = direct_product(direct_product(D, D).group, D).group
    idx = lambda a, b, c: (a * 8 + b) * 8 + c  # noqa: E731
    zzz = idx(z, z, z)
    N = grp.generate(P, [zzz])
    qt = quotient(P, N)
    G = qt.group
    G.name = "D8^3/Z"
    labels = {}
    factors = []
    for i, emb in enumerate([lambda x: idx(x, 0, 0), lambda x: idx(0, x, 0), lambda x: idx(0, 0, x)], 1):
        labels[int(qt.projection[emb(r)])] = f"r{i}"
        labels[int(qt.projection[emb(s)])] = f"s{i}"
        labels[int(qt.projection[emb(z)])] = f"z{i}"
        mask = np.zeros(G.order, dtype=bool)
        mask[qt.projection[[emb(x) for x in range(8)]]] = True
        factors.append(SubgroupSet(mask, ()))
    G.labels = labels
    G.extras["factors"] = factors
    return G


appendix_a_group = d8_central_product  # name kept for API compatibility


def element_by_label(G: FiniteGroup, label: str) -> int:
    for i, s in G.labels.items():
        if s == label:
            return i
    raise KeyError(label)


# -- descriptors and registry -------------------------------------------------------

BUILDERS: dict[str, Callable[..., FiniteGroup]] = {
    "gqm": lambda q, m=1: gqm(q, m),
    "cyclic": lambda n: cyclic(n),
    "elementary_abelian": lambda p, r: elementary_abelian(p, r),
    "abelian": lambda invariants: abelian(*invariants),
    "dihedral": lambda n: dihedral(n),
    "quaternion8": lambda: quaternion8(),
    "symmetric": lambda n: symmetric(n),
    "alternating": lambda n: alternating(n),
    "heisenberg27": lambda: heisenberg27(),
    "d8_central_product": lambda: d8_central_product(),
    "appendix_a": lambda: d8_central_product(),
}


def standard(name: str, **params: Any) -> FiniteGroup:
    if name == "product":
        return product(*(from_descriptor(f) for f in params["factors"]))
    try:
        builder = BUILDERS[name]
    except KeyError:
        raise UnknownBuilder(name) from None
    if name in ("symmetric", "alternating") and params.get("n", 0) > 6:
        raise OrderCapExceeded(f"{name} is limited to n <= 6")
    return builder(**params)


def from_descriptor(desc: dict) -> FiniteGroup:
    """Build a group from ``{"builder": {"name": ..., **params}}`` or
    ``{"perm": {"degree": d, "gens": [[...], ...]}}`` (0-indexed images)."""
    if not isinstance(desc, dict):
        raise ParseError(f"group descriptor must be an object, got {desc!r}")
    try:
        if "builder" in desc:
            params = dict(desc["builder"])
            name = params.pop("name")
            return standard(name, **params)
        if "perm" in desc:
            spec = desc["perm"]
            degree = int(spec["degree"])
            gens = [list(map(int, g)) for g in spec["gens"]]
            if any(sorted(g) != list(range(degree)) for g in gens):
                raise ParseError("permutation images must be bijections of 0..degree-1")
            return permutation_group(degree, gens, name=spec.get("name", ""))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad group descriptor {desc!r}: {exc}") from None
    raise ParseError(f"unrecognized group descriptor: {desc!r}")


CORPUS_VERSION = 1


@lru_cache(maxsize=None)
def corpus() -> tuple[tuple[str, FiniteGroup], ...]:
    """The frozen property-test corpus (version ``CORPUS_VERSION``)."""
    out: list[tuple[str, FiniteGroup]] = []
    for n in range(2, 13):
        out.append((f"C{n}", cyclic(n)))
    for p, r in itertools.product((2, 3, 5), (2, 3)):
        out.append((f"C{p}^{r}", elementary_abelian(p, r)))
    out += [
        ("C2xC4", abelian(2, 4)),
        ("D8", dihedral(8)),
        ("Q8", quaternion8()),
        ("S3", symmetric(3)),
        ("S4", symmetric(4)),
        ("A4", alternating(4)),
        ("A5", alternating(5)),
        ("Heis27", heisenberg27()),
    ]
    for q in (2, 3, 4, 5):
        out.append((f"G({q},1)", gqm(q, 1)))
    out.append(("G(2,2)", gqm(2, 2)))
    out.append(("D8^3/Z", d8_central_product()))
    out.append(("D8xC2", product(dihedral(8), cyclic(2))))
    out.append(("G(2,1)xC3", product(gqm(2, 1), cyclic(3))))
    for name, G in out:
        G.name = name
    return tuple(out)


def corpus_group(name: str) -> FiniteGroup:
    return dict(corpus())[name]
