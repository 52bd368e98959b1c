import numpy as np

from artifact.choi_sdp import choi_block_lmi, solve_choi_block
from artifact.superop import adjoint_map, random_superoperator, transpose_map


def _both(Cm, dims, over, split):
    r = solve_choi_block(Cm, dims, over, split)
    v, _, sol = choi_block_lmi(Cm, dims, over, split).solve()
    return r, v, sol


def test_structured_matches_dense():
    rng = np.random.default_rng(0)
    for n in (2, 3):
        T = random_superoperator(n, rng)
        for over, split, C in (("first", False, T.choi), ("second", True, adjoint_map(T).choi)):
            r, v, sol = _both(C, (n, n), over, split)
            assert r.status in ("optimal", "near-optimal")
            assert sol.status in ("optimal", "near-optimal")
            assert abs(r.value - v) < 1e-6 * max(1, v)
            assert r.lower <= r.value + 1e-8


def test_transpose_value():
    r = solve_choi_block(transpose_map(2).choi, (2, 2), "first")
    assert abs(r.value - 2) < 1e-6


def test_certificate_is_feasible():
    rng = np.random.default_rng(1)
    T = random_superoperator(4, rng)
    r = solve_choi_block(T.choi, (4, 4), "first")
    N = 16
    M = np.block([[r.A, T.choi], [T.choi.conj().T, r.B]])
    assert np.linalg.eigvalsh(M)[0] >= -1e-7 * max(1, r.value)
    for X in (r.A, r.B):
        tr = np.einsum("abac->bc", X.reshape(4, 4, 4, 4))
        assert np.linalg.eigvalsh(r.t[0] * np.eye(4) - tr)[0] >= -1e-7 * max(1, r.value)
