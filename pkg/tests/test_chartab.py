import numpy as np
import pytest

from faithlab import build, chartab, grp
from faithlab.errors import BudgetExceeded


def complex_values(T):
    """Character values as complex numbers (for numerical cross-checks only)."""
    e = T.exponent
    z = np.exp(2j * np.pi * np.arange(e) / e)
    return T.values @ z


def test_cyclotomic_helpers():
    assert chartab.cyclotomic_poly(1) == (-1, 1)
    assert chartab.cyclotomic_poly(4) == (1, 0, 1)
    assert chartab.cyclotomic_poly(6) == (1, -1, 1)
    # 1 + z + z^2 = 0 for a primitive cube root of unity
    assert chartab.cyclotomic_is_zero([1, 1, 1], 3)
    assert not chartab.cyclotomic_is_zero([1, 1, 0], 3)
    # z^2 * z^3 = z^5 = z^1 in the cyclic group of order 4
    a = np.zeros(4, dtype=int); a[2] = 1
    b = np.zeros(4, dtype=int); b[3] = 1
    assert chartab.cyclic_product(a, b).tolist() == [0, 1, 0, 0]
    assert chartab.conjugate(b).tolist() == [0, 1, 0, 0]


def test_dixon_prime():
    r = chartab.dixon_prime(256, 4)
    assert r == 37 and r % 4 == 1 and r > 2 * 16
    r = chartab.dixon_prime(60, 30)
    assert r % 30 == 1 and r > 2 * 7


def test_small_examples():
    T = chartab.character_table(build.cyclic(2))
    assert T.degrees.tolist() == [1, 1]
    assert np.allclose(complex_values(T), [[1, 1], [1, -1]])
    T = chartab.character_table(build.symmetric(3))
    assert T.degrees.tolist() == [1, 1, 2]
    T = chartab.character_table(build.quaternion8())
    assert T.degrees.tolist() == [1, 1, 1, 1, 2]
    assert chartab.kernel_family(T).has_trivial
    T = chartab.character_table(build.alternating(5))
    assert T.degrees.tolist() == [1, 3, 3, 4, 5]


def test_s3_table_against_hand_values():
    S3 = build.symmetric(3)
    T = chartab.character_table(S3)
    orders = S3.element_orders[S3.classes.reps].tolist()
    cols = [orders.index(o) for o in (1, 2, 3)]
    rows = np.round(complex_values(T).real).astype(int)[:, cols]
    assert sorted(map(tuple, rows.tolist())) == [(1, -1, 1), (1, 1, 1), (2, 0, -1)]
    assert np.allclose(complex_values(T).imag, 0)


def test_d8_central_product_degrees_and_kernels():
    G = build.d8_central_product()
    T = chartab.character_table(G)
    deg, cnt = np.unique(T.degrees, return_counts=True)
    assert dict(zip(deg.tolist(), cnt.tolist())) == {1: 64, 4: 12}
    fam = chartab.kernel_family(T)
    assert not fam.has_trivial
    assert not any(grp.is_abelian(G, K) for K in fam.kernels)


def test_abelian_kernels_are_linear():
    G = build.abelian(2, 4)
    T = chartab.character_table(G)
    assert (T.degrees == 1).all() and T.modulus == 0
    # every subgroup with cyclic quotient is a kernel
    kers = {K.key for K in T.kernels}
    for N in grp.normal_subgroups(G):
        Q = grp.quotient(G, N).group
        if int(Q.element_orders.max()) == Q.order:
            assert N.key in kers


def test_abelian_criterion():
    assert chartab.verify_abelian_normal_criterion(build.d8_central_product())
    assert not chartab.verify_abelian_normal_criterion(build.cyclic(4))
    assert not chartab.verify_abelian_normal_criterion(build.elementary_abelian(2, 2))
    with pytest.raises(BudgetExceeded):
        chartab.verify_abelian_normal_criterion(build.gqm(2, 2), budget=100)


def test_budget():
    with pytest.raises(BudgetExceeded):
        chartab.character_table(build.gqm(2, 2), budget=100)


@pytest.mark.parametrize("name", ["C2xC4", "C3^2", "C12", "G(2,1)", "C5^2"])
def test_dixon_agrees_with_abelian_path(name):
    G = build.corpus_group(name)
    e = G.exponent
    A = chartab._sorted(chartab._abelian_table(G, G.classes, e))
    D = chartab._sorted(chartab._dixon_table(G, G.classes, e, chartab.DEFAULT_SEED))
    assert (A.degrees == D.degrees).all()
    assert (A.values == D.values).all()


@pytest.mark.parametrize("name", ["S4", "G(3,1)", "Heis27", "D8xC2", "A5"])
def test_seed_independence(name):
    G = build.corpus_group(name)
    T1 = chartab.character_table(G, seed=chartab.DEFAULT_SEED)
    T2 = chartab.character_table(G, seed=12345)
    assert T1.to_dict() == T2.to_dict()


@pytest.mark.parametrize("name", ["S3", "S4", "A4", "A5", "D8", "G(3,1)", "G(4,1)", "G(5,1)", "G(2,2)"])
def test_permutation_characters_decompose(name):
    """Coset-action characters must be nonnegative integer sums of irreducibles."""
    G = build.corpus_group(name)
    T = chartab.character_table(G)
    X = complex_values(T)
    C = G.classes
    t = G.table
    for H in [G.trivial(), grp.generate(G, [int(G.gens[0])]), grp.center(G)]:
        # fixed points of g on G/H: #{cosets xH : g x H = x H} = #{x : x^-1 g x in H} / |H|
        fix = np.array([sum(H.mask[t[t[G.inv[x], g], x]] for x in range(G.order)) // H.order
                        for g in C.reps])
        mult = (X.conj() * (C.sizes * fix)).sum(axis=1) / G.order
        assert np.allclose(mult.imag, 0, atol=1e-6)
        r = np.round(mult.real)
        assert np.allclose(mult.real, r, atol=1e-6) and (r >= 0).all()
        assert int((r * T.degrees).sum()) == G.order // H.order


def test_second_orthogonality():
    for name in ["S4", "Q8", "Heis27", "G(4,1)", "A5"]:
        G = build.corpus_group(name)
        T = chartab.character_table(G)
        X = complex_values(T)
        gram = X.conj().T @ X
        cent = G.order / G.classes.sizes
        assert np.allclose(gram, np.diag(cent), atol=1e-6)


def test_check_and_roundtrip(tmp_path):
    G = build.symmetric(4)
    T = chartab.character_table(G)
    T.check()
    U = chartab.CharacterTable.from_dict(G, T.to_dict())
    assert U.to_dict() == T.to_dict()
    with pytest.raises(ValueError):
        chartab.CharacterTable.from_dict(build.alternating(4), T.to_dict())
    H = build.symmetric(4)  # fresh object, so the in-memory memo misses
    T2 = chartab.cached_character_table(H, cache_dir=str(tmp_path), key="s4")
    assert (tmp_path / "chartab-s4.json").exists()
    H2 = build.symmetric(4)
    T3 = chartab.cached_character_table(H2, cache_dir=str(tmp_path), key="s4")
    assert T3.to_dict() == T2.to_dict() == T.to_dict()


def test_kernel_family_structure(corpus):
    for name, G in corpus:
        T = chartab.cached_character_table(G)
        fam = chartab.kernel_family(T)
        assert len({K.key for K in fam.kernels}) == len(fam.kernels)
        for K in fam.kernels:
            assert grp.is_normal(G, K), name
            assert any(M <= K for M in fam.minimal), name
        assert [fam.kernels[i] for i in fam.by_character] == T.kernels
        assert T.kernels[0] == G.whole()  # trivial character sorts first
