import numpy as np
import pytest

from artifact.groups import construct_group
from artifact.linalg import operator_norm
from artifact.norms import (NormError, bg_norm_abelian, bg_norm_product, bg_norm_sdp, bg_norm_sdp_result, cb_norm,
                            cb_norm_result, characters, dec_norm, dec_norm_result, dec_norm_selfadjoint,
                            jordan_bg_norm, map_norm_report, symbol_norm_report)
from artifact.schur import fourier_multiplier, herz_schur_lift, random_pd_symbol, schur_superop
from artifact.superop import (SuperOperator, circ_map, identity_map, random_cp_map, random_superoperator,
                              tensor_with_identity, transpose_map)
from artifact.symbols import BiSymbol, GroupSymbol
from artifact.verification import random_self_circ_symbol, random_symbol

TOL = 1e-4


def sym(spec, vals):
    return GroupSymbol(construct_group(spec), vals)


# ---------------------------------------------------------------------------
# frozen values
# ---------------------------------------------------------------------------

def test_cb_examples():
    assert abs(cb_norm(identity_map(3)) - 1) < 1e-6
    assert abs(cb_norm(transpose_map(2)) - 2) < 1e-6
    assert abs(cb_norm(fourier_multiplier(sym("Z2", [1, -1]))) - 1) < 1e-6
    assert abs(cb_norm(fourier_multiplier(sym("Z2", [1, -1])), reduce=False) - 1) < 1e-6


def test_transpose_lower_witness():
    # sum_kl E_kl (x) E_lk has norm 1; id_2 (x) transpose sends it to sum E_kl (x) E_kl, norm 2
    X = sum(np.kron(np.eye(2)[:, [k]] @ np.eye(2)[[l]], np.eye(2)[:, [l]] @ np.eye(2)[[k]])
            for k in range(2) for l in range(2))
    Y = tensor_with_identity(transpose_map(2), 2).apply(X)
    assert abs(operator_norm(X) - 1) < 1e-12
    assert abs(operator_norm(Y) - 2) < 1e-12
    assert operator_norm(Y) <= cb_norm(transpose_map(2)) + 1e-6


def test_dec_examples():
    assert abs(dec_norm(identity_map(2)) - 1) < 1e-6
    phi = sym("Z2", [1, 3])
    assert abs(dec_norm(fourier_multiplier(phi)) - 3) < TOL
    assert abs(dec_norm(fourier_multiplier(phi), reduce=False) - 3) < TOL
    assert abs(dec_norm(transpose_map(2)) - 2) < 1e-6


def test_dec_of_cp_is_norm_at_identity():
    rng = np.random.default_rng(0)
    for n in (2, 3):
        T = random_cp_map(n, rng)
        v = operator_norm(T.apply(np.eye(n)))
        assert abs(dec_norm(T) - v) < TOL
        assert abs(dec_norm_selfadjoint(T) - v) < TOL
        assert abs(cb_norm(T) - v) < TOL


def test_dec_selfadjoint_examples():
    assert abs(dec_norm_selfadjoint(-identity_map(2)) - 1) < 1e-6
    rng = np.random.default_rng(1)
    G = construct_group("S3")
    for _ in range(3):
        v = rng.standard_normal(6)
        phi = GroupSymbol(G, (v + v[G.inv]) / 2)
        M = fourier_multiplier(phi)
        assert abs(dec_norm_selfadjoint(M) - dec_norm(M)) < TOL


def test_bg_examples():
    for spec in ("Z2", "Z5", "S3", "Q8"):
        G = construct_group(spec)
        assert abs(bg_norm_sdp(GroupSymbol(G, np.eye(G.order)[0])) - 1) < TOL
        assert abs(bg_norm_sdp(GroupSymbol(G, np.ones(G.order))) - 1) < TOL
    Z4 = construct_group("Z4")
    for chi in characters(Z4):
        assert abs(bg_norm_sdp(GroupSymbol(Z4, chi)) - 1) < TOL
    assert abs(bg_norm_sdp(sym("Z2", [1, 3])) - 3) < TOL


def test_abelian_oracle_examples():
    assert abs(bg_norm_abelian(sym("Z3", [1, 1, 1])) - 1) < 1e-12
    assert abs(bg_norm_abelian(sym("Z2", [1, 3])) - 3) < 1e-12
    assert abs(bg_norm_abelian(sym("Z4", [1, 0, 0, 0])) - 1) < 1e-12
    with pytest.raises(NormError):
        characters(construct_group("S3"))


def test_characters_orthogonal():
    for spec in ("Z6", "Z8", "Z2*Z2", "Z2*Z4"):
        G = construct_group(spec)
        chi = characters(G)
        assert np.abs(chi @ chi.conj().T / G.order - np.eye(G.order)).max() < 1e-12
        for s in range(G.order):
            for t in range(G.order):
                assert np.abs(chi[:, G.mul(s, t)] - chi[:, s] * chi[:, t]).max() < 1e-12


def test_jordan_examples():
    assert abs(jordan_bg_norm(sym("Z2", [0, 1])) - 1) < TOL
    assert abs(jordan_bg_norm(sym("Z2", [1, 3])) - 3) < TOL
    rng = np.random.default_rng(2)
    phi = random_pd_symbol(construct_group("S3"), rng)
    phi = (phi + phi.circ()) * 0.5
    assert abs(jordan_bg_norm(phi) - np.real(phi.at_identity)) < TOL
    with pytest.raises(NormError):
        jordan_bg_norm(sym("Z3", [1, 1j, 0]))


def test_product_form_is_square():
    rng = np.random.default_rng(3)
    for k in range(20):
        G = construct_group(["Z2", "Z3", "Z4", "S3"][k % 4])
        phi = random_symbol(G, rng)
        t = bg_norm_sdp(phi)
        assert abs(bg_norm_product(phi) - t * t) < TOL * max(1, t * t)
    assert abs(bg_norm_product(sym("Z2", [1, 3])) - 9) < TOL


def test_zero_input():
    G = construct_group("Z3")
    assert cb_norm(SuperOperator(np.zeros((9, 9)), 3)) == 0
    assert dec_norm(SuperOperator(np.zeros((9, 9)), 3)) == 0
    assert bg_norm_sdp(GroupSymbol(G, np.zeros(3))) == 0


def test_size_caps():
    with pytest.raises(NormError):
        dec_norm(random_superoperator(9, np.random.default_rng(0)), reduce=False)


# ---------------------------------------------------------------------------
# cross checks
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("spec", ["Z3", "Z4", "S3", "Q8"])
def test_chain_and_collapse(spec):
    G = construct_group(spec)
    rng = np.random.default_rng(4)
    for phi in (random_symbol(G, rng), random_self_circ_symbol(G, rng), random_pd_symbol(G, rng)):
        M = fourier_multiplier(phi)
        c, d, b = cb_norm(M), dec_norm(M), bg_norm_sdp(phi)
        assert c <= d + TOL and d <= b + TOL
        assert abs(c - b) <= TOL * max(1, b)
        if G.is_abelian():
            assert abs(b - bg_norm_abelian(phi)) < TOL * max(1, b)


@pytest.mark.parametrize("spec", ["Z2", "Z3", "S3"])
def test_reduced_matches_general(spec):
    G = construct_group(spec)
    rng = np.random.default_rng(5)
    for _ in range(2):
        phi = random_symbol(G, rng)
        M = fourier_multiplier(phi)
        assert abs(cb_norm(M) - cb_norm(M, reduce=False)) < TOL
        assert abs(dec_norm(M) - dec_norm(M, reduce=False)) < TOL
        psi = BiSymbol(G, rng.standard_normal((G.order, G.order)))
        S = schur_superop(psi)
        assert abs(cb_norm(S) - cb_norm(S, reduce=False)) < TOL


def test_transference_same_cb():
    G = construct_group("D4")
    phi = random_symbol(G, np.random.default_rng(6))
    assert cb_norm(fourier_multiplier(phi)) == cb_norm(schur_superop(herz_schur_lift(phi)))


def test_dec_witness_certifies():
    rng = np.random.default_rng(7)
    for T in (random_superoperator(3, rng), fourier_multiplier(random_symbol(construct_group("S3"), rng))):
        r = dec_norm_result(T)
        v1, v2 = r.witness["v1"], r.witness["v2"]
        J = np.block([[v1.choi, T.choi], [circ_map(T).choi, v2.choi]])
        assert np.linalg.eigvalsh(J)[0] >= -1e-6 * max(1, r.value)
        n = T.dim
        bound = max(operator_norm(v1.apply(np.eye(n))), operator_norm(v2.apply(np.eye(n))))
        assert abs(bound - r.value) < 1e-5 * max(1, r.value)
        assert r.lower <= r.value + 1e-8


def test_dec_submultiplicative():
    rng = np.random.default_rng(8)
    for n in (2, 3):
        for _ in range(3):
            S, T = random_superoperator(n, rng), random_superoperator(n, rng)
            assert dec_norm(S.compose(T)) <= dec_norm(S) * dec_norm(T) + TOL


def test_dec_amplification():
    rng = np.random.default_rng(9)
    for _ in range(3):
        T = random_superoperator(2, rng)
        assert dec_norm(tensor_with_identity(T, 2)) <= dec_norm(T) + TOL


def test_cb_dual_and_status():
    r = cb_norm_result(random_superoperator(3, np.random.default_rng(10)))
    assert r.stats["status"] in ("optimal", "near-optimal")
    assert r.lower <= r.value + 1e-8
    assert float(r) == r.value


def test_pd_witness_and_norm():
    rng = np.random.default_rng(11)
    phi = random_pd_symbol(construct_group("Q8"), rng)
    r = bg_norm_sdp_result(phi)
    assert abs(r.value - np.real(phi.at_identity)) < TOL


def test_reports():
    rep = symbol_norm_report(sym("Z2", [1, 3]))
    d = rep.to_dict()
    for k in ("bg", "dec", "cb"):
        assert abs(d[k] - 3) < TOL
    assert d["oracle_values"]["bg_abelian"] == 3
    assert rep.max_discrepancy() < TOL
    rep = map_norm_report(random_cp_map(3, np.random.default_rng(12)))
    assert abs(rep.cb - rep.oracle_values["cp_norm_of_T1"]) < TOL
