import numpy as np
import pytest

from artifact.groups import centralizer, construct_group
from artifact.norms import bg_norm_sdp, cb_norm
from artifact.projections import (block_choi, dec_witness_roundtrip, fourier_projection_report, fourier_symbol,
                                  herz_schur_projection_report, matricial_project, project_fourier,
                                  project_fourier_literal, project_herz_schur)
from artifact.schur import fourier_multiplier, schur_superop, schur_symbol_of
from artifact.superop import (adjoint_map, conjugation_map, identity_map, is_completely_positive, random_cp_map,
                              random_superoperator)
from artifact.symbols import BiSymbol, GroupSymbol
from artifact.verification import herz_schur_defect, random_bisymbol, random_symbol
from artifact.vn import left_regular

GROUPS = ["Z3", "Z4", "S3", "Q8"]


def test_identity_projects_to_one():
    G = construct_group("S3")
    M, phi = project_fourier(identity_map(6), G)
    assert np.abs(phi.values - 1).max() < 1e-15


@pytest.mark.parametrize("spec", ["Z3", "S3", "Q8"])
def test_inner_automorphism_gives_centralizer(spec):
    G = construct_group(spec)
    for g in range(G.order):
        _, phi = project_fourier(conjugation_map(left_regular(G, g)), G)
        ind = np.zeros(G.order)
        ind[list(centralizer(G, g))] = 1
        assert np.abs(phi.values - ind).max() < 1e-15


@pytest.mark.parametrize("spec", GROUPS)
def test_fixes_fourier_multipliers(spec):
    G = construct_group(spec)
    rng = np.random.default_rng(0)
    for _ in range(3):
        phi = random_symbol(G, rng)
        M, out = project_fourier(fourier_multiplier(phi), G)
        assert np.abs(out.values - phi.values).max() < 1e-15
        assert np.abs(M.choi - fourier_multiplier(phi).choi).max() < 1e-15


@pytest.mark.parametrize("spec", GROUPS)
def test_literal_matches_fast(spec):
    G = construct_group(spec)
    T = random_superoperator(G.order, np.random.default_rng(1))
    c = project_fourier_literal(T, G)
    phi = fourier_symbol(T, G)
    assert np.abs(np.diag(c) - phi.values).max() < 1e-12
    assert np.abs(c - np.diag(np.diag(c))).max() < 1e-12


@pytest.mark.parametrize("spec", GROUPS)
def test_fourier_projection_properties(spec):
    G = construct_group(spec)
    rng = np.random.default_rng(2)
    T = random_superoperator(G.order, rng)
    P, phi = project_fourier(T, G)
    P2, phi2 = project_fourier(P, G)
    assert np.abs(P2.choi - P.choi).max() < 1e-15
    # the output is a Schur multiplier with a Herz-Schur symbol
    assert schur_symbol_of(P, G).is_herz_schur(1e-15)
    assert cb_norm(P) <= cb_norm(T) + 1e-4
    C = random_cp_map(G.order, rng)
    assert is_completely_positive(project_fourier(C, G)[0])[0]
    # trace duality: the adjoint map projects to phi(s^-1)
    assert np.abs(fourier_symbol(adjoint_map(T), G).values - phi.check().values).max() < 1e-15
    assert np.abs(fourier_symbol(adjoint_map(adjoint_map(T)), G).values - phi.values).max() == 0


def test_herz_schur_examples():
    G = construct_group("Z2")
    psi = BiSymbol(G, [[1, 0], [0, 0]])
    assert np.abs(project_herz_schur(psi).values - 0.5 * np.eye(2)).max() == 0
    phi = random_symbol(construct_group("S3"), np.random.default_rng(3))
    lifted = schur_symbol_of(fourier_multiplier(phi), phi.group)
    assert project_herz_schur(lifted).allclose(lifted, 1e-15)


@pytest.mark.parametrize("spec", GROUPS)
def test_herz_schur_projection_properties(spec):
    G = construct_group(spec)
    rng = np.random.default_rng(4)
    psi = random_bisymbol(G, rng)
    q = project_herz_schur(psi)
    assert herz_schur_defect(q) < 1e-14
    assert q.is_herz_schur(1e-14)
    assert project_herz_schur(q).allclose(q, 1e-14)
    assert cb_norm(schur_superop(q)) <= cb_norm(schur_superop(psi)) + 1e-4
    A = rng.standard_normal((G.order, G.order)) + 1j * rng.standard_normal((G.order, G.order))
    q = project_herz_schur(BiSymbol(G, A @ A.conj().T))
    assert is_completely_positive(schur_superop(q))[0]


def test_matricial_projection():
    G = construct_group("S3")
    rng = np.random.default_rng(5)
    fourier = [[fourier_multiplier(random_symbol(G, rng)) for _ in range(2)] for _ in range(2)]
    out = matricial_project(fourier, G)
    assert all(np.abs(out[i][j].choi - fourier[i][j].choi).max() < 1e-15 for i in range(2) for j in range(2))
    zero = random_cp_map(6, rng) * 0
    blocks = [[random_cp_map(6, rng), zero], [zero, random_cp_map(6, rng)]]
    assert np.linalg.eigvalsh(block_choi(matricial_project(blocks, G)))[0] >= -1e-8


@pytest.mark.parametrize("spec", ["Z2", "Z3", "S3"])
def test_dec_witness_roundtrip(spec):
    G = construct_group(spec)
    rng = np.random.default_rng(6)
    phi = random_symbol(G, rng)
    r = dec_witness_roundtrip(phi)
    assert r.certified
    assert abs(r.bound - bg_norm_sdp(phi)) < 1e-4 * max(1, r.bound)
    assert abs(r.bound - r.dec) < 1e-4 * max(1, r.bound)


def test_roundtrip_examples():
    G = construct_group("Z2")
    assert abs(dec_witness_roundtrip(GroupSymbol(G, [1, 0])).bound - 1) < 1e-4
    assert abs(dec_witness_roundtrip(GroupSymbol(G, [1, 3])).bound - 3) < 1e-4
    r = dec_witness_roundtrip(GroupSymbol(G, [1, 3]), reduce=False)
    assert r.certified and abs(r.bound - 3) < 1e-4


def test_reports():
    G = construct_group("Z3")
    rng = np.random.default_rng(7)
    rep = fourier_projection_report(random_cp_map(3, rng), G)
    assert rep.cp_before and rep.cp_preserved and rep.cb_after <= rep.cb_before + 1e-4
    d = rep.to_dict()
    assert len(d["output_symbol"]) == 3
    rep = herz_schur_projection_report(random_bisymbol(G, rng))
    assert not rep.fixed_point
    assert len(rep.to_dict()["output_symbol"]) == 3
