"""Dense complex matrix helpers.

Composite indices are row-major throughout: the pair (a, b) of a space of
dimension dimA*dimB sits at index a*dimB + b, which is what ``np.kron`` does.
"""
import numpy as np

HERMITIAN_TOL = 1e-10


class LinalgError(ValueError):
    pass


def as_matrix(A):
    A = np.asarray(A)
    if A.ndim != 2:
        raise LinalgError(f"expected a matrix, got shape {A.shape}")
    if A.size == 0:
        raise LinalgError("empty matrix")
    return A


def is_hermitian(A, tol=HERMITIAN_TOL):
    A = np.asarray(A)
    return A.ndim == 2 and A.shape[0] == A.shape[1] and bool(np.abs(A - A.conj().T).max(initial=0) <= tol)


def hermitian_part(A):
    return (A + A.conj().T) / 2


def _check_hermitian(A, tol=HERMITIAN_TOL):
    A = as_matrix(A)
    if not is_hermitian(A, tol):
        raise LinalgError("matrix is not Hermitian")
    return A


def operator_norm(A):
    """Largest singular value."""
    A = as_matrix(A)
    return float(np.linalg.norm(A, 2))


def singular_values(A):
    return np.linalg.svd(as_matrix(A), compute_uv=False)


def schatten_norm(A, p, weight=1.0):
    """(weight * sum_i s_i^p)^(1/p); p = inf gives the operator norm.

    :param A: square matrix.
    :param p: exponent, 1 <= p <= inf.
    :param weight: multiplies the trace, e.g. 1/n for the normalized trace.
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise LinalgError("Schatten norms are taken on square matrices here")
    if not p >= 1:
        raise LinalgError(f"p must be >= 1, got {p}")
    if weight <= 0:
        raise LinalgError("weight must be positive")
    if np.isinf(p):
        return operator_norm(A)
    s = singular_values(A)
    if p == 1:
        return float(weight * s.sum())
    if p == 2:
        return float(np.sqrt(weight * np.sum(np.abs(A) ** 2)))
    return float((weight * np.sum(s ** p)) ** (1.0 / p))


def partial_trace(A, dimA, dimB, over="second"):
    """Trace out one tensor factor of an operator on C^dimA (x) C^dimB."""
    A = as_matrix(A)
    N = dimA * dimB
    if A.shape != (N, N):
        raise LinalgError(f"shape {A.shape} does not match dims ({dimA}, {dimB})")
    T = A.reshape(dimA, dimB, dimA, dimB)
    if over == "first":
        return np.einsum("abac->bc", T)
    if over == "second":
        return np.einsum("abcb->ac", T)
    raise LinalgError(f"over must be 'first' or 'second', got {over!r}")


def partial_trace_adjoint(h, dimA, dimB, over="second"):
    """Adjoint of partial_trace for the Hilbert-Schmidt pairing: h (x) I or I (x) h."""
    if over == "first":
        return np.kron(np.eye(dimA), h)
    if over == "second":
        return np.kron(h, np.eye(dimB))
    raise LinalgError(f"over must be 'first' or 'second', got {over!r}")


def eigh(A, tol=HERMITIAN_TOL):
    A = _check_hermitian(A, tol)
    return np.linalg.eigh(hermitian_part(A))


def min_eig_hermitian(A, tol=HERMITIAN_TOL):
    A = _check_hermitian(A, tol)
    return float(np.linalg.eigvalsh(hermitian_part(A))[0])


def max_eig_hermitian(A, tol=HERMITIAN_TOL):
    A = _check_hermitian(A, tol)
    return float(np.linalg.eigvalsh(hermitian_part(A))[-1])


def psd_sqrt(A):
    w, V = np.linalg.eigh(hermitian_part(A))
    return (V * np.sqrt(np.clip(w, 0, None))) @ V.conj().T


def matrix_unit(n, k, l, dtype=complex):
    E = np.zeros((n, n), dtype=dtype)
    E[k, l] = 1
    return E


def hermitian_basis(n):
    """Orthonormal basis of the real space of n x n Hermitian matrices (n^2 elements).

    Ordered: diagonal units, then (E_kl + E_lk)/sqrt2 and i(E_kl - E_lk)/sqrt2 for k < l.
    Returned as an array of shape (n^2, n, n).
    """
    out = np.zeros((n * n, n, n), dtype=complex)
    r = 1 / np.sqrt(2)
    idx = 0
    for k in range(n):
        out[idx, k, k] = 1
        idx += 1
    for k in range(n):
        for l in range(k + 1, n):
            out[idx, k, l] = out[idx, l, k] = r
            out[idx + 1, k, l] = -1j * r
            out[idx + 1, l, k] = 1j * r
            idx += 2
    return out


def herm_to_vec(H):
    """Coordinates of Hermitian H (or a stack of them) in ``hermitian_basis``."""
    H = np.asarray(H)
    n = H.shape[-1]
    iu = np.triu_indices(n, 1)
    d = np.real(np.diagonal(H, axis1=-2, axis2=-1))
    up = H[..., iu[0], iu[1]]
    s2 = np.sqrt(2)
    inter = np.stack([s2 * up.real, -s2 * up.imag], axis=-1).reshape(H.shape[:-2] + (-1,))
    return np.concatenate([d, inter], axis=-1)


def vec_to_herm(v, n):
    v = np.asarray(v, dtype=float)
    H = np.zeros(v.shape[:-1] + (n, n), dtype=complex)
    idx = np.arange(n)
    H[..., idx, idx] = v[..., :n]
    iu = np.triu_indices(n, 1)
    pairs = v[..., n:].reshape(v.shape[:-1] + (-1, 2))
    z = (pairs[..., 0] - 1j * pairs[..., 1]) / np.sqrt(2)
    H[..., iu[0], iu[1]] = z
    H[..., iu[1], iu[0]] = z.conj()
    return H


def random_hermitian(n, rng):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (A + A.conj().T) / 2


def random_psd(n, rng, rank=None):
    rank = n if rank is None else rank
    B = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return B @ B.conj().T
