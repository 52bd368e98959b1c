"""Schur multipliers on M_|G|, Herz-Schur lifts and positive definiteness."""
import numpy as np

from .linalg import is_hermitian
from .superop import SuperOperator
from .symbols import BiSymbol, GroupSymbol, SymbolError, same_group

PD_TOL = 1e-10


def schur_superop(psi, tag=None):
    """x -> [psi(s, t) x(s, t)]"""
    n = psi.group.order
    J = np.zeros((n, n, n, n), dtype=complex)
    k = np.arange(n)
    J[k[:, None], k[:, None], k[None, :], k[None, :]] = psi.values
    return SuperOperator(J.reshape(n * n, n * n), n, tag or ("schur", psi))


def schur_symbol_of(T, G, tol=1e-10):
    """Recover psi from a Schur multiplier's Choi matrix, or raise."""
    n = G.order
    if T.dim != n:
        raise SymbolError("map does not act on M_|G|")
    J = T.choi4
    k = np.arange(n)
    psi = J[k[:, None], k[:, None], k[None, :], k[None, :]]
    if not schur_superop(BiSymbol(G, psi)).allclose(T, tol):
        raise SymbolError("map is not a Schur multiplier")
    return BiSymbol(G, psi)


def herz_schur_lift(phi):
    """psi(s, t) = phi(s t^-1)"""
    G = phi.group
    return BiSymbol(G, phi.values[G.mult[:, G.inv]])


def fourier_multiplier(phi):
    """M_phi, realized on all of M_|G| as the Schur multiplier of the Herz-Schur lift.

    On VN(G) it sends lambda_s to phi(s) lambda_s.
    """
    return schur_superop(herz_schur_lift(phi), tag=("fourier", phi))


def is_herz_schur(psi, tol=0.0):
    return psi.is_herz_schur(tol)


def gram_min_eig(M):
    if not is_hermitian(M, 1e-10 * max(1.0, np.abs(M).max())):
        return -np.inf
    return float(np.linalg.eigvalsh((M + M.conj().T) / 2)[0])


def is_positive_definite(phi, tol=PD_TOL):
    """Gram matrix [phi(s^-1 t)] is PSD up to ``tol``."""
    return gram_min_eig(phi.gram()) >= -tol


def block_gram(psi1, phi, psi2):
    """[[G(psi1), G(phi)], [G(phi°), G(psi2)]] with G(f)[s, t] = f(s^-1 t)."""
    same_group(psi1, phi, psi2)
    return np.block([[psi1.gram(), phi.gram()], [phi.circ().gram(), psi2.gram()]])


def block_pd_check(psi1, phi, psi2, tol=PD_TOL):
    return gram_min_eig(block_gram(psi1, phi, psi2)) >= -tol


def random_pd_symbol(G, rng, rank=None):
    """phi(s) = <xi, lambda_s xi> style construction: phi = conj(f~) * f, PD by construction."""
    f = rng.standard_normal(G.order) + 1j * rng.standard_normal(G.order)
    f /= np.linalg.norm(f)
    # phi(s) = sum_r conj(f(r)) f(s r)... i.e. <lambda_s^* xi, xi>-type coefficient
    vals = np.array([np.vdot(f, f[G.mult[s]]) for s in range(G.order)])
    return GroupSymbol(G, vals)


# ---------------------------------------------------------------------------
# symbols extracted from maps
# ---------------------------------------------------------------------------

def _conjugates(G, x):
    """Stack of lambda_s x lambda_t^-1 indexed [s, t]."""
    n = G.order
    X = x.matrix
    # (lambda_s X lambda_t^-1)[a, b] = X[s^-1 a, t^-1 b]
    ia = G.mult[G.inv][:, :]                      # [s, a] -> s^-1 a
    return X[ia[:, None, :, None], ia[None, :, None, :]]


def symbol_extraction(x, y, T):
    """psi(s, t) = tau(lambda_t y lambda_s^-1 T(lambda_s x lambda_t^-1))."""
    G = same_group(x, y)
    n = G.order
    if T.dim != n:
        raise SymbolError("T must act on M_|G|")
    A = _conjugates(G, x).reshape(n * n, n, n)           # lambda_s x lambda_t^-1
    TA = T.apply_many(A).reshape(n, n, n, n)
    B = _conjugates(G, y)                                  # [t, s] -> lambda_t y lambda_s^-1
    # tau(B[t, s] @ TA[s, t]) = (1/n) sum_{a,b} B[t,s][a,b] TA[s,t][b,a]
    vals = np.einsum("tsab,stba->st", B, TA) / n
    return BiSymbol(G, vals)


def apply_id_tensor(T, X, m):
    """(id_m (x) T)(X) for X in M_m(M_n), without forming the amplified Choi matrix."""
    n = T.dim
    blocks = X.reshape(m, n, m, n).transpose(0, 2, 1, 3).reshape(m * m, n, n)
    out = T.apply_many(blocks).reshape(m, m, n, n).transpose(0, 2, 1, 3)
    return out.reshape(m * n, m * n)


def pairing_lhs(u, v, x, y, T):
    """(Tr (x) tau)[(id (x) T)(W (u (x) x) W^-1) . W (v (x) y) W^-1], computed literally."""
    from .vn import fundamental_unitary

    G = same_group(x, y)
    n = G.order
    W = fundamental_unitary(G)
    left = W @ np.kron(u, x.matrix) @ W.T
    right = W @ np.kron(v, y.matrix) @ W.T
    prod = apply_id_tensor(T, left, n) @ right
    return complex(np.trace(prod)) / n


def pairing_rhs(u, v, x, y, T):
    """Tr(M_psi(u) v) with psi = symbol_extraction(x, y, T)."""
    psi = symbol_extraction(x, y, T)
    return complex(np.trace(schur_superop(psi).apply(u) @ v))
