import itertools
import math

import numpy as np
import pytest

from faithlab import build, faith, grp, seq
from faithlab.errors import NotAbelian, OracleMismatch
from faithlab.faith import INF, LowerBound

SMALL = ["C2^2", "C2^3", "C3^2", "C2xC4", "D8", "Q8", "S3", "A4", "G(3,1)", "D8xC2", "G(2,1)xC3", "C6"]


def brute_p_threshold(G, n_max=5):
    """Smallest |F| of nontrivial elements that is not faithful, by enumeration."""
    for n in range(1, n_max + 1):
        for F in itertools.combinations(range(1, G.order), n):
            if not faith.subset_faithful(G, F):
                return n
    return INF


def brute_q_threshold(G, n_max=5):
    """Smallest |F| (with e in F, which loses nothing) that is not injective."""
    for n in range(2, n_max + 1):
        for rest in itertools.combinations(range(1, G.order), n - 1):
            if not faith.subset_injective(G, (0,) + rest):
                return n
    return INF


# -- examples ----------------------------------------------------------------------

def test_gaschutz_examples():
    assert all(faith.gaschutz_faithful(build.cyclic(n)) for n in (2, 6, 12))
    assert not faith.gaschutz_faithful(build.elementary_abelian(2, 2))
    G = build.gqm(3, 1)
    assert grp.center(G).order == 1 and not faith.gaschutz_faithful(G)


def test_structural_threshold_examples():
    assert faith.p_threshold_structural(build.elementary_abelian(2, 2))[0] == 3
    assert faith.p_threshold_structural(build.gqm(3, 1))[0] == 4
    thr, offs = faith.p_threshold_structural(build.gqm(2, 2))
    assert thr == 7 and [(o.p, o.q, o.m, o.multiplicity) for o in offs] == [(2, 2, 2, 3)]
    assert faith.p_threshold_structural(build.quaternion8())[0] == INF


def test_oracle_threshold_examples():
    r = faith.p_threshold_oracle(build.elementary_abelian(2, 2))
    assert r.threshold == 3 and len(r.witness) == 3
    assert faith.p_threshold_oracle(build.gqm(5, 1)).threshold == 6
    assert faith.p_threshold_oracle(build.quaternion8()).threshold == INF


def test_unfaithful_witness_examples():
    V4 = build.elementary_abelian(2, 2)
    _, offs = faith.p_threshold_structural(V4)
    assert faith.unfaithful_witness(V4, offs[0]) == [1, 2, 3]
    G = build.gqm(3, 1)
    _, offs = faith.p_threshold_structural(G)
    F = faith.unfaithful_witness(G, offs[0])
    V = G.extras["V"]
    assert len(F) == 4 and all(f in V for f in F)
    lines = {grp.generate(G, [f]).key for f in F}
    assert len(lines) == 4  # one element per line of F_3^2
    assert not faith.subset_faithful(G, F)


def test_subset_examples(corpus):
    for name, G in corpus:
        if G.order > 100:
            continue
        assert all(faith.subset_faithful(G, [g]) for g in range(G.order)), name
        for x, y in itertools.combinations(range(min(G.order, 12)), 2):
            assert faith.subset_injective(G, [x, y]), name
    assert not faith.subset_faithful(build.elementary_abelian(2, 2), [1, 2, 3])
    assert faith.subset_faithful(build.elementary_abelian(2, 2), [0, 1, 2])


def test_q_oracle_examples():
    assert faith.q_threshold_oracle(build.gqm(2, 1)).threshold == 3
    assert faith.q_threshold_oracle(build.gqm(3, 1)).threshold == 4
    assert faith.q_threshold_oracle(build.cyclic(12)).threshold == INF
    r = faith.q_threshold_oracle(build.gqm(4, 1))
    assert r.threshold == 4 and not faith.subset_injective(build.gqm(4, 1), r.witness)


def test_q_threshold_structural_mapping():
    assert faith.q_threshold_structural(3) == 3
    assert faith.q_threshold_structural(6) == 4
    assert faith.q_threshold_structural(9) == 5
    assert faith.q_threshold_structural(4) == 4 and faith.q_threshold_structural(5) == 4
    assert faith.q_threshold_structural(7) == 5
    assert faith.q_threshold_structural(INF) == INF
    assert faith.q_threshold_structural(13) == LowerBound(6)
    assert faith.q_threshold_structural(31) == LowerBound(9)  # C(8,2) = 28 < 31 <= C(9,2)


def test_abelian_threshold_examples():
    assert faith.abelian_threshold(build.elementary_abelian(2, 2)) == 3
    assert faith.abelian_threshold(build.abelian(2, 4)) == 3
    assert faith.abelian_threshold(build.cyclic(6)) == INF
    assert faith.abelian_threshold(build.elementary_abelian(5, 2)) == 6
    with pytest.raises(NotAbelian):
        faith.abelian_threshold(build.symmetric(3))


def test_analyze_examples():
    r = faith.analyze(build.d8_central_product())
    assert not r.gaschutz_faithful and r.p_threshold == 3 and r.oracle_p_threshold == 3
    assert [(o.p, o.q, o.m, o.multiplicity) for o in r.offenders] == [(2, 2, 1, 2)]
    r = faith.analyze(build.heisenberg27())
    assert r.gaschutz_faithful and r.p_threshold == INF and r.q_threshold == INF
    r = faith.analyze(build.gqm(4, 1), q_oracle=True)
    assert r.p_threshold == 5 and r.q_threshold == 4 and r.oracle_q_threshold == 4
    data = r.to_json()
    assert data["p_threshold"] == 5 and data["oracle"]["p_threshold"] == 5
    r = faith.analyze(build.elementary_abelian(5, 3), oracle=False)
    assert r.oracle_p_threshold is None and r.p_threshold == 6


def test_analyze_reports_mismatch(monkeypatch):
    G = build.gqm(3, 1)
    monkeypatch.setattr(faith, "p_threshold_oracle", lambda G: faith.OracleResult(5, []))
    with pytest.raises(OracleMismatch):
        faith.analyze(G)


def test_analyze_notes_undetermined_q():
    r = faith.analyze(build.elementary_abelian(13, 2), oracle=False)
    assert r.p_threshold == 14 and r.q_threshold == LowerBound(6)
    assert r.notes and r.to_json()["q_threshold"] == {"lower_bound": 6}


def test_threshold_json_roundtrip():
    for t in (3, 7, INF, LowerBound(6)):
        assert faith.threshold_from_json(faith.threshold_json(t)) == t


# -- independent oracles -------------------------------------------------------------

@pytest.mark.parametrize("name", SMALL)
def test_p_oracle_matches_enumeration(name):
    G = build.corpus_group(name)
    want = brute_p_threshold(G)
    assert faith.p_threshold_oracle(G).threshold == want
    assert faith.p_threshold_structural(G)[0] == want


@pytest.mark.parametrize("name", SMALL)
def test_q_oracle_matches_enumeration(name):
    G = build.corpus_group(name)
    assert faith.q_threshold_oracle(G, max_n=5).threshold == brute_q_threshold(G)


def test_injective_is_faithful_on_differences(corpus):
    rng = np.random.default_rng(7)
    for name, G in corpus:
        if G.order > 400:
            continue
        for _ in range(20):
            F = rng.choice(G.order, size=min(4, G.order), replace=False).tolist()
            E = {G.mul(G.inv[x], y) for x in F for y in F}
            assert faith.subset_injective(G, F) == faith.subset_faithful(G, E), name


# -- corpus properties ----------------------------------------------------------------

def test_report_invariants(corpus):
    for name, G in corpus:
        thr, offs = faith.p_threshold_structural(G)
        assert thr == INF or (thr >= 3 and seq.is_term(int(thr))), name
        for o in offs:
            assert o.multiplicity >= o.m + 1 and o.n >= 3
            p, e = o.p, 0
            while p ** (e + 1) <= o.q:
                e += 1
            assert p**e == o.q, name


def test_soluble_radical_reduction(corpus):
    rng = np.random.default_rng(11)
    for name, G in corpus:
        R = grp.soluble_radical(G)
        for _ in range(100):
            size = int(rng.integers(1, 6))
            F = rng.choice(G.order, size=min(size, G.order), replace=False).tolist()
            reduced = [f for f in F if f in R] + [0]
            assert faith.subset_faithful(G, F) == faith.subset_faithful(G, reduced), (name, F)


def test_threshold_inequalities(corpus):
    checked = 0
    for name, G in corpus:
        if G.order > 300:
            continue
        p = faith.p_threshold_oracle(G).threshold
        q = faith.q_threshold_oracle(G, max_n=5).threshold
        if p == INF:
            assert q == INF, name
            continue
        need = next(n for n in itertools.count(2) if math.comb(n, 2) >= p)
        assert p >= q or q == INF, name
        if q != INF:
            assert q >= need, name
        checked += 1
    assert checked >= 10


def test_nilpotent_threshold_from_centre(corpus):
    for name, G in corpus:
        if grp.is_nilpotent(G):
            assert faith.central_elementary_threshold(G) == faith.p_threshold_structural(G)[0], name


def test_all_minimal_witnesses_generate_socle_pieces():
    """Every minimum unfaithful set of a small group closes to an elementary abelian subgroup of SocA."""
    for name in ["C2^2", "C2^3", "C3^2", "G(3,1)", "C2xC4", "D8xC2", "G(2,1)xC3"]:
        G = build.corpus_group(name)
        n = faith.p_threshold_oracle(G).threshold
        soc = grp.socle_decomposition(G).abelian_part
        count = 0
        for F in itertools.combinations(range(1, G.order), n):
            if faith.subset_faithful(G, F):
                continue
            U = grp.normal_closure(G, F)
            assert grp.is_elementary_abelian(G, U) is not None and U <= soc, (name, F)
            count += 1
        assert count > 0
