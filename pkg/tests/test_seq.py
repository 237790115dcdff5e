import pytest
from hypothesis import given, strategies as st

from faithlab import build, faith, gf, seq
from faithlab.errors import LimitExceeded
from faithlab.verify import FIRST_TERMS


def naive_terms(limit):
    """Direct scan: n is a term iff n = 1 + q + ... + q^m for a prime power q and m >= 1."""
    out = []
    for n in range(3, limit + 1):
        for q in range(2, n):
            if not gf.is_prime_power(q):
                continue
            s, x = 1, 1
            while s < n:
                x *= q
                s += x
            if s == n:
                out.append(n)
                break
    return out


def test_first_terms():
    assert [t.n for t in seq.generate(40)] == FIRST_TERMS
    assert len(FIRST_TERMS) == 25


def test_matches_naive_scan():
    assert [t.n for t in seq.generate(1000)] == naive_terms(1000)


def test_31_has_two_representations():
    t = next(t for t in seq.generate(40) if t.n == 31)
    assert t.representations == [(2, 4), (5, 2)]
    multi = [t.n for t in seq.generate(10**4) if len(t.representations) > 1]
    assert multi == [31]


def test_gaps():
    g = seq.gaps(100)
    assert g.largest == (91, 98)
    assert g.largest_index == 45
    assert all(b > a for a, b in g.gaps)
    assert seq.gaps(3).largest is None


def test_limits():
    with pytest.raises(LimitExceeded):
        seq.generate(10**7 + 1)
    with pytest.raises(LimitExceeded):
        seq.goormaghtigh(10**5, 5)


def test_goormaghtigh():
    found = seq.goormaghtigh(100, 14)
    assert [(c.value, c.first, c.second) for c in found] == [(31, (2, 5), (5, 3)), (8191, (2, 13), (90, 3))]
    assert seq.goormaghtigh(10, 4) == []


def test_density():
    assert seq.density(40) == 25 / 40
    assert seq.density(10**5) < seq.density(10**3)


@given(st.integers(3, 5000))
def test_representations_are_exact(limit):
    for t in seq.generate(limit)[-3:]:
        assert seq.all_prime_powers(t.representations)
        for q, m in t.representations:
            assert sum(q**i for i in range(m + 1)) == t.n == seq.repunit(q, m)


def test_corpus_thresholds_are_terms(corpus):
    terms = {t.n for t in seq.generate(1000)}
    for name, G in corpus:
        thr, _ = faith.p_threshold_structural(G)
        if thr != faith.INF:
            assert thr in terms and seq.is_term(int(thr)), name
