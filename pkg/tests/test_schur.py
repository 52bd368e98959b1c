import numpy as np
import pytest

from artifact.groups import construct_group
from artifact.norms import cb_norm
from artifact.schur import (block_pd_check, fourier_multiplier, gram_min_eig, herz_schur_lift, is_positive_definite,
                            pairing_lhs, pairing_rhs, random_pd_symbol, schur_superop, schur_symbol_of,
                            symbol_extraction)
from artifact.superop import identity_map, is_completely_positive, random_cp_map, random_superoperator
from artifact.symbols import BiSymbol, GroupSymbol, SymbolError
from artifact.norms import characters
from artifact.vn import lp_norm, random_vn_element, unit


def test_schur_examples():
    G = construct_group("Z3")
    assert schur_superop(BiSymbol(G, np.ones((3, 3)))).allclose(identity_map(3), 0)
    D = schur_superop(BiSymbol(G, np.eye(3)))
    x = np.arange(9.0).reshape(3, 3)
    assert np.abs(D.apply(x) - np.diag(np.diag(x))).max() == 0
    assert abs(cb_norm(D) - 1) < 1e-6


def test_schur_symbol_roundtrip():
    G = construct_group("S3")
    rng = np.random.default_rng(0)
    psi = BiSymbol(G, rng.standard_normal((6, 6)))
    assert schur_symbol_of(schur_superop(psi), G).allclose(psi, 0)
    with pytest.raises(SymbolError):
        schur_symbol_of(random_superoperator(6, rng), G)


def test_herz_schur_lift():
    G = construct_group("Z3")
    assert np.array_equal(herz_schur_lift(GroupSymbol(G, np.ones(3))).values, np.ones((3, 3)))
    assert np.array_equal(herz_schur_lift(GroupSymbol(G, [1, 0, 0])).values, np.eye(3))
    a, b, c = 2.0, 5.0, 7.0
    psi = herz_schur_lift(GroupSymbol(G, [a, b, c])).values
    for s in range(3):
        for t in range(3):
            assert psi[s, t] == [a, b, c][(s - t) % 3]
    assert herz_schur_lift(GroupSymbol(construct_group("D4"), np.arange(8.0))).is_herz_schur()


def test_lift_agrees_with_fourier_on_vn():
    G = construct_group("Q8")
    rng = np.random.default_rng(1)
    phi = GroupSymbol(G, rng.standard_normal(8) + 1j * rng.standard_normal(8))
    S = schur_superop(herz_schur_lift(phi))
    M = fourier_multiplier(phi)
    for _ in range(5):
        x = random_vn_element(G, rng).matrix
        assert np.abs(S.apply(x) - M.apply(x)).max() == 0


def test_positive_definite_examples():
    for spec in ("Z2", "Z5", "S3", "Q8"):
        G = construct_group(spec)
        delta = GroupSymbol(G, np.eye(G.order)[0])
        assert is_positive_definite(delta)
        assert np.abs(delta.gram() - np.eye(G.order)).max() == 0
    Z4 = construct_group("Z4")
    for chi in characters(Z4):
        assert is_positive_definite(GroupSymbol(Z4, chi))
    G = construct_group("Z2")
    phi = GroupSymbol(G, [1, 3])
    assert not is_positive_definite(phi)
    assert abs(gram_min_eig(phi.gram()) + 2) < 1e-12


def test_random_pd_is_pd():
    rng = np.random.default_rng(2)
    for spec in ("Z6", "D4", "S3"):
        assert is_positive_definite(random_pd_symbol(construct_group(spec), rng))


def test_block_pd_examples():
    G = construct_group("Z2")
    z = GroupSymbol(G, [0, 0])
    for t in (0.0, 1.0, 4.0):
        d = GroupSymbol(G, [t, 0])
        assert block_pd_check(d, z, d)
    one = GroupSymbol(G, [1, 1])
    assert block_pd_check(one, one, one)
    psi = GroupSymbol(G, [3, 1])
    assert block_pd_check(psi, GroupSymbol(G, [1, 3]), psi, tol=1e-10)
    # a diagonal below 3 cannot carry (1, 3)
    psi = GroupSymbol(G, [2.9, 1])
    assert not block_pd_check(psi, GroupSymbol(G, [1, 3]), psi)


def test_extraction_examples():
    G = construct_group("S3")
    e = unit(G)
    assert np.abs(symbol_extraction(e, e, identity_map(6)).values - 1).max() < 1e-12
    rng = np.random.default_rng(3)
    phi = GroupSymbol(G, rng.standard_normal(6) + 1j * rng.standard_normal(6))
    got = symbol_extraction(e, e, fourier_multiplier(phi))
    assert np.abs(got.values - herz_schur_lift(phi).values).max() < 1e-12


@pytest.mark.parametrize("spec", ["Z3", "S3"])
def test_pairing_identity(spec):
    G = construct_group(spec)
    n = G.order
    rng = np.random.default_rng(4)
    for _ in range(5):
        u = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        v = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        x, y = random_vn_element(G, rng), random_vn_element(G, rng)
        T = random_superoperator(n, rng)
        assert abs(pairing_lhs(u, v, x, y, T) - pairing_rhs(u, v, x, y, T)) < 1e-9


def test_extracted_symbol_cb_bound():
    G = construct_group("Z3")
    rng = np.random.default_rng(5)
    for _ in range(3):
        T = random_superoperator(3, rng)
        x, y = random_vn_element(G, rng), random_vn_element(G, rng)
        cS = cb_norm(schur_superop(symbol_extraction(x, y, T)))
        cT = cb_norm(T)
        for p, q in ((1, np.inf), (2, 2), (np.inf, 1)):
            assert cS <= cT * lp_norm(x, p) * lp_norm(y, q) + 1e-4


def test_extracted_symbol_cp():
    G = construct_group("S3")
    rng = np.random.default_rng(6)
    for _ in range(3):
        T = random_cp_map(6, rng)
        x, y = random_vn_element(G, rng, positive=True), random_vn_element(G, rng, positive=True)
        assert is_completely_positive(schur_superop(symbol_extraction(x, y, T)))[0]


def test_pd_schur_cb_is_max_diagonal():
    G = construct_group("Z4")
    rng = np.random.default_rng(7)
    V = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
    psi = BiSymbol(G, V @ V.conj().T)
    assert abs(cb_norm(schur_superop(psi)) - np.real(np.diag(psi.values)).max()) < 1e-6
