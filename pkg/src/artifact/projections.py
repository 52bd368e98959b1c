"""Projections onto Fourier and Herz-Schur multipliers, exact for finite groups."""
from dataclasses import dataclass

import numpy as np

from .schur import apply_id_tensor, block_gram, fourier_multiplier, gram_min_eig, schur_superop
from .superop import is_completely_positive
from .symbols import BiSymbol, GroupSymbol, SymbolError
from .vn import coproduct, lambda_, regular_stack


def _check_dim(T, G):
    if T.dim != G.order:
        raise SymbolError(f"map acts on M_{T.dim}, group has order {G.order}")


def fourier_symbol(T, G):
    """phi(s) = tau(lambda_s^-1 T(lambda_s))"""
    _check_dim(T, G)
    L = regular_stack(G)
    TL = T.apply_many(L.astype(complex))
    # lambda_s^-1 = lambda_s^T for permutation matrices
    return GroupSymbol(G, np.einsum("sba,sba->s", L, TL) / G.order)


def project_fourier(T, G):
    """(M_phi, phi) with phi = fourier_symbol(T, G)."""
    phi = fourier_symbol(T, G)
    return fourier_multiplier(phi), phi


def project_fourier_literal(T, G):
    """The same projection assembled as Delta^* o (id (x) T) o Delta on the lambda basis.

    Returns the |G| x |G| coefficient matrix c[r, u] of the image of lambda_u
    along lambda_r; it is diagonal with diagonal phi.  Cost O(|G|^6).
    """
    _check_dim(T, G)
    n = G.order
    deltas = np.array([coproduct(lambda_(G, s)) for s in range(n)])      # real permutations
    c = np.zeros((n, n), dtype=complex)
    for u in range(n):
        X = apply_id_tensor(T, deltas[u].astype(complex), n)
        # (tau (x) tau)(X Delta(lambda_r)^*) for every r at once
        c[:, u] = np.einsum("ab,rab->r", X, deltas) / (n * n)
    return c


def project_herz_schur(psi):
    """psi'(s, t) = (1/|G|) sum_r psi(sr, tr)"""
    G = psi.group
    m = G.mult
    return BiSymbol(G, psi.values[m[:, None, :], m[None, :, :]].mean(axis=2))


def matricial_project(blocks, G):
    """Apply project_fourier to each entry of a 2 x 2 array of maps."""
    return [[project_fourier(blocks[i][j], G)[0] for j in range(2)] for i in range(2)]


def block_choi(blocks):
    """Compressed Choi matrix of a 2 x 2 block map; PSD iff the block map is CP."""
    return np.block([[blocks[i][j].choi for j in range(2)] for i in range(2)])


@dataclass
class Roundtrip:
    psi1: GroupSymbol
    psi2: GroupSymbol
    bound: float
    dec: float
    block_min_eig: float

    @property
    def certified(self):
        return self.block_min_eig >= -1e-8


def dec_witness_roundtrip(phi, reduce=True):
    """dec witness (v1, v2) of M_phi -> Fourier projection -> symbols psi1, psi2.

    The projected block map [[M_psi1, M_phi], [M_phi°, M_psi2]] stays CP, so the
    block Gram matrix of (psi1, phi, psi2) is PSD and max(psi1(e), psi2(e))
    bounds the B(G) norm of phi from above.
    """
    from .norms import dec_norm_result

    G = phi.group
    M = fourier_multiplier(phi)
    r = dec_norm_result(M, reduce=reduce)
    v1, v2 = r.witness["v1"], r.witness["v2"]
    _, psi1 = project_fourier(v1, G)
    _, psi2 = project_fourier(v2, G)
    w = gram_min_eig(block_gram(psi1, phi, psi2))
    bound = max(float(np.real(psi1.at_identity)), float(np.real(psi2.at_identity)))
    return Roundtrip(psi1, psi2, bound, r.value, w)


@dataclass
class ProjectionReport:
    subject: str
    output_symbol: object
    cb_before: float
    cb_after: float
    cp_before: bool
    cp_preserved: bool
    fixed_point: bool

    def to_dict(self):
        sym = self.output_symbol
        vals = sym.to_dict()["values"] if isinstance(sym, GroupSymbol) else sym.to_list()
        return {"subject": self.subject, "output_symbol": vals, "cb_before": self.cb_before,
                "cb_after": self.cb_after, "cp_before": self.cp_before,
                "cp_preserved": self.cp_preserved, "fixed_point": self.fixed_point}


def fourier_projection_report(T, G, subject="map", cp_tol=1e-8):
    from .norms import cb_norm

    M, phi = project_fourier(T, G)
    cp_in = is_completely_positive(T, cp_tol)[0]
    cp_out = is_completely_positive(M, cp_tol)[0]
    return ProjectionReport(subject, phi, cb_norm(T), cb_norm(M), cp_in, cp_out or not cp_in,
                            M.allclose(T, 1e-12))


def herz_schur_projection_report(psi, subject="bisymbol", cp_tol=1e-8):
    from .norms import cb_norm

    S = schur_superop(psi)
    out = project_herz_schur(psi)
    Q = schur_superop(out)
    cp_in = is_completely_positive(S, cp_tol)[0]
    cp_out = is_completely_positive(Q, cp_tol)[0]
    return ProjectionReport(subject, out, cb_norm(S), cb_norm(Q), cp_in, cp_out or not cp_in,
                            out.allclose(psi, 1e-12))

