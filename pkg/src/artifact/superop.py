"""Linear maps on M_n stored as Choi matrices.

J(T) = sum_{k,l} E_kl (x) T(E_kl), so J[k*n + a, l*n + b] = T(E_kl)[a, b].  The
input factor comes first.
"""
import numpy as np

from .linalg import LinalgError, is_hermitian, min_eig_hermitian

MAX_DIM = 64
CP_TOL = 1e-9


class SuperOperator:
    """T: M_n -> M_n.

    ``tag`` is None, ("fourier", GroupSymbol) or ("schur", BiSymbol).
    """

    __slots__ = ("dim", "choi", "tag")

    def __init__(self, choi, dim=None, tag=None):
        choi = np.array(choi, dtype=complex)
        if dim is None:
            dim = int(round(np.sqrt(choi.shape[0])))
        if choi.shape != (dim * dim, dim * dim):
            raise LinalgError(f"Choi matrix of shape {choi.shape} does not fit M_{dim}")
        choi.setflags(write=False)
        self.dim = dim
        self.choi = choi
        self.tag = tag

    def __repr__(self):
        kind = self.tag[0] if self.tag else "map"
        return f"SuperOperator({kind}, dim={self.dim})"

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_function(cls, f, n, tag=None):
        J = np.zeros((n, n, n, n), dtype=complex)
        for k in range(n):
            for l in range(n):
                E = np.zeros((n, n), dtype=complex)
                E[k, l] = 1
                J[k, :, l, :] = f(E)
        return cls(J.reshape(n * n, n * n), n, tag)

    @classmethod
    def from_kraus(cls, kraus_ops, right_ops=None):
        """x -> sum_i K_i x L_i^* (L_i = K_i by default)."""
        kraus_ops = [np.asarray(K) for K in kraus_ops]
        right_ops = kraus_ops if right_ops is None else [np.asarray(L) for L in right_ops]
        n = kraus_ops[0].shape[1]
        # J = sum_i vec(K_i^T) vec(L_i^T)^*, with vec row-major over (k, a)
        J = sum(np.outer(K.T.reshape(-1), L.T.reshape(-1).conj()) for K, L in zip(kraus_ops, right_ops))
        return cls(J, n)

    @classmethod
    def from_superop_matrix(cls, L, n, tag=None):
        """L[(a, b), (k, l)] = T(E_kl)[a, b]."""
        J = np.asarray(L).reshape(n, n, n, n).transpose(2, 0, 3, 1)
        return cls(J.reshape(n * n, n * n), n, tag)

    def superop_matrix(self):
        n = self.dim
        return self.choi.reshape(n, n, n, n).transpose(1, 3, 0, 2).reshape(n * n, n * n)

    @property
    def choi4(self):
        n = self.dim
        return self.choi.reshape(n, n, n, n)

    # -- algebra ------------------------------------------------------------

    def apply(self, x):
        x = np.asarray(x)
        if x.shape != (self.dim, self.dim):
            raise LinalgError(f"input of shape {x.shape} does not fit M_{self.dim}")
        return np.einsum("kalb,kl->ab", self.choi4, x)

    __call__ = apply

    def apply_many(self, xs):
        return np.einsum("kalb,nkl->nab", self.choi4, xs)

    def __add__(self, other):
        _same_dim(self, other)
        return SuperOperator(self.choi + other.choi, self.dim)

    def __sub__(self, other):
        _same_dim(self, other)
        return SuperOperator(self.choi - other.choi, self.dim)

    def __mul__(self, c):
        return SuperOperator(self.choi * c, self.dim)

    __rmul__ = __mul__

    def __neg__(self):
        return SuperOperator(-self.choi, self.dim)

    def compose(self, other):
        """self o other"""
        _same_dim(self, other)
        return SuperOperator.from_superop_matrix(self.superop_matrix() @ other.superop_matrix(), self.dim)

    def allclose(self, other, tol=1e-10):
        return self.dim == other.dim and bool(np.abs(self.choi - other.choi).max() <= tol)


def _same_dim(S, T):
    if S.dim != T.dim:
        raise LinalgError(f"dimension mismatch: M_{S.dim} vs M_{T.dim}")


def identity_map(n):
    return SuperOperator.from_kraus([np.eye(n)])


def transpose_map(n):
    return SuperOperator.from_function(lambda x: x.T, n)


def conjugation_map(U):
    """x -> U x U^*"""
    return SuperOperator.from_kraus([np.asarray(U)])


def apply(T, x):
    return T.apply(x)


def circ_map(T):
    """T°(x) = T(x^*)^*; its Choi matrix is J(T)^*."""
    tag = None
    if T.tag and T.tag[0] == "fourier":
        tag = ("fourier", T.tag[1].circ())
    return SuperOperator(T.choi.conj().T, T.dim, tag)


def adjoint_map(T):
    """The adjoint for the bilinear pairing Tr(xy): Tr(T(x) y) = Tr(x T*(y))."""
    n = T.dim
    J = np.einsum("jlik->kilj", T.choi4).reshape(n * n, n * n)
    tag = None
    if T.tag and T.tag[0] == "fourier":
        tag = ("fourier", T.tag[1].check())
    return SuperOperator(J, n, tag)


def hs_adjoint(T):
    """Adjoint for <x, y> = Tr(x^* y)."""
    return SuperOperator.from_superop_matrix(T.superop_matrix().conj().T, T.dim)


def is_completely_positive(T, tol=CP_TOL):
    """(flag, min eigenvalue of the Choi matrix); a non-Hermitian Choi matrix gives (False, -inf)."""
    htol = max(1e-10, 1e-12 * np.abs(T.choi).max(initial=1.0))
    if not is_hermitian(T.choi, htol):
        return False, -np.inf
    w = min_eig_hermitian(T.choi, tol=htol)
    return w >= -tol, w


def is_hermitian_preserving(T, tol=1e-10):
    """T° = T"""
    return bool(np.abs(T.choi - T.choi.conj().T).max() <= tol)


def tensor_with_identity(T, m):
    """id_m (x) T acting on M_{m n}."""
    n = T.dim
    if m * n > MAX_DIM:
        raise LinalgError(f"amplified dimension {m * n} exceeds {MAX_DIM}")
    Lt = T.superop_matrix().reshape(n, n, n, n)           # [a, b, k, l]
    Im = np.eye(m)
    # L[(i a), (j b), (i' k), (j' l)] = d(i,i') d(j,j') Lt[a, b, k, l]
    L = np.einsum("ip,jq,abkl->iajbpkql", Im, Im, Lt).reshape((m * n) ** 2, (m * n) ** 2)
    return SuperOperator.from_superop_matrix(L, m * n)


def random_superoperator(n, rng, rank=None):
    """Random map x -> sum_i A_i x B_i^* with Gaussian entries, normalized to cb scale ~ 1."""
    rank = n if rank is None else rank
    A = (rng.standard_normal((rank, n, n)) + 1j * rng.standard_normal((rank, n, n))) / np.sqrt(2 * n * rank)
    B = (rng.standard_normal((rank, n, n)) + 1j * rng.standard_normal((rank, n, n))) / np.sqrt(2 * n)
    return SuperOperator.from_kraus(list(A), list(B))


def random_cp_map(n, rng, rank=None):
    rank = n if rank is None else rank
    K = (rng.standard_normal((rank, n, n)) + 1j * rng.standard_normal((rank, n, n))) / np.sqrt(2 * n * rank)
    return SuperOperator.from_kraus(list(K))


# ---------------------------------------------------------------------------
# 2 x 2 block maps
# ---------------------------------------------------------------------------

def block_map_choi(blocks):
    """Choi matrix of [[T11, T12], [T21, T22]] acting on M_2(M_n) = M_{2n}.

    The block map sends [x_ij] to [T_ij(x_ij)].  Side (2n)^2.
    """
    n = blocks[0][0].dim
    N2 = 2 * n
    J = np.zeros((N2, N2, N2, N2), dtype=complex)
    for i in range(2):
        for j in range(2):
            Jij = blocks[i][j].choi4                 # [k, a, l, b]
            J[i * n:(i + 1) * n, i * n:(i + 1) * n, j * n:(j + 1) * n, j * n:(j + 1) * n] = Jij
    return J.reshape(N2 * N2, N2 * N2)


def block_map_choi_compressed(blocks):
    """[[J(T11), J(T12)], [J(T21), J(T22)]]: the block map's Choi matrix restricted to
    the 2n^2-dimensional subspace where it can be non-zero."""
    return np.block([[blocks[0][0].choi, blocks[0][1].choi], [blocks[1][0].choi, blocks[1][1].choi]])


def block_map_support(n):
    """Indices of the full block-map Choi space spanned by the compressed one."""
    N2 = 2 * n
    idx = [(i * n + k) * N2 + i * n + a for i in range(2) for k in range(n) for a in range(n)]
    return np.array(idx)
