import json

import numpy as np
import pytest

from faithlab import build, grp
from faithlab.errors import NotPrimePower, OrderCapExceeded, ParseError, UnknownBuilder

# Reference order table for G(q,1). Its entries for q = 9 and 11 (649, 1110)
# contradict |G(q,1)| = (q-1) q^2; they are reported, not asserted.
TABLE_ORDERS = {2: 4, 3: 18, 4: 48, 5: 100, 7: 294, 8: 448, 9: 649, 11: 1110}
FORMULA_ORDERS = {2: 4, 3: 18, 4: 48, 5: 100, 7: 294, 8: 448, 9: 648, 11: 1210}


@pytest.mark.parametrize("q", sorted(FORMULA_ORDERS))
def test_gqm1_orders(q):
    G = build.gqm(q, 1)
    assert G.order == FORMULA_ORDERS[q] == build.gqm_order(q, 1)
    if TABLE_ORDERS[q] != G.order:
        print(f"order table discrepancy at q={q}: table {TABLE_ORDERS[q]}, constructed {G.order}")


def test_gqm_orders_m2():
    assert build.gqm(2, 2).order == 384
    assert build.gqm_order(3, 2) == 34992
    assert build.gl_order(3, 2) == 48
    with pytest.raises(OrderCapExceeded):
        build.gqm(2, 2, max_order=100)
    with pytest.raises(NotPrimePower):
        build.gqm(6, 1)


@pytest.mark.parametrize("q,m", [(2, 1), (3, 1), (4, 1), (5, 1), (2, 2)])
def test_gqm_distinguished_subgroup(q, m):
    G = build.gqm(q, m)
    V = G.extras["V"]
    assert V.order == q ** (m * (m + 1))
    assert grp.is_normal(G, V) and grp.is_elementary_abelian(G, V) is not None
    for N in grp.minimal_normal_subgroups(G):
        assert N <= V
    codes = G.extras["v_code"][V.elements]
    assert sorted(codes.tolist()) == list(range(V.order))
    assert (G.extras["v_code"][~V.mask] == -1).all()


def test_gqm21_is_klein():
    G = build.gqm(2, 1)
    assert G.order == 4 and grp.is_abelian(G) and G.exponent == 2


def test_standard_groups():
    D = build.dihedral(8)
    assert D.order == 8 and grp.center(D).order == 2
    H = build.heisenberg27()
    assert H.order == 27 and H.exponent == 3 and grp.center(H).order == 3
    assert not grp.is_abelian(H)
    V = build.elementary_abelian(2, 2)
    assert V.order == 4 and V.exponent == 2
    Q = build.quaternion8()
    assert Q.order == 8 and int((Q.element_orders == 2).sum()) == 1
    assert build.symmetric(5).order == 120 and build.alternating(6).order == 360
    assert build.abelian(2, 4).exponent == 4
    with pytest.raises(OrderCapExceeded):
        build.standard("symmetric", n=7)
    with pytest.raises(UnknownBuilder):
        build.standard("monster")


def test_d8_central_product():
    G = build.d8_central_product()
    assert build.appendix_a_group is build.d8_central_product
    assert build.standard("appendix_a").order == 256
    assert G.order == 256
    Z = grp.center(G)
    assert Z.order == 4 and G.element_orders[Z.elements].max() == 2
    assert grp.socle_decomposition(G).socle == Z
    z = [build.element_by_label(G, f"z{i}") for i in (1, 2, 3)]
    assert G.mul(G.mul(z[0], z[1]), z[2]) == G.identity
    F = G.extras["factors"]
    t = G.table
    for i in range(3):
        assert F[i].order == 8
        for j in range(i + 1, 3):
            a, b = F[i].elements, F[j].elements
            assert (t[np.ix_(a, b)] == t[np.ix_(b, a)].T).all()


def test_descriptors():
    G = build.from_descriptor({"builder": {"name": "gqm", "q": 3, "m": 1}})
    assert G.order == 18
    P = build.from_descriptor({"builder": {"name": "product", "factors": [
        {"builder": {"name": "cyclic", "n": 2}}, {"builder": {"name": "cyclic", "n": 3}}]}})
    assert P.order == 6 and grp.is_abelian(P)
    S = build.from_descriptor(json.loads('{"perm": {"degree": 4, "gens": [[1,2,3,0],[1,0,2,3]]}}'))
    assert S.order == 24
    for bad in [[], {"perm": {"degree": 3, "gens": [[0, 0, 1]]}}, {"builder": {"q": 3}},
                {"builder": {"name": "cyclic", "k": 3}}, {"nothing": 1}]:
        with pytest.raises(ParseError):
            build.from_descriptor(bad)


def test_corpus_registry(corpus):
    names = [n for n, _ in corpus]
    assert len(corpus) >= 25 and len(set(names)) == len(names)
    expected = {"D8": 8, "Q8": 8, "S3": 6, "S4": 24, "A4": 12, "A5": 60, "Heis27": 27, "C2xC4": 8,
                "G(2,1)": 4, "G(3,1)": 18, "G(4,1)": 48, "G(5,1)": 100, "G(2,2)": 384,
                "D8^3/Z": 256, "D8xC2": 16, "G(2,1)xC3": 12, "C5^3": 125, "C12": 12}
    orders = dict((n, G.order) for n, G in corpus)
    for n, o in expected.items():
        assert orders[n] == o, n
    assert max(orders.values()) <= 448
    assert build.corpus() is build.corpus()
