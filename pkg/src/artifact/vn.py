"""The group von Neumann algebra of a finite group, realized on l^2(G).

lambda_s is the permutation matrix with lambda_s e_t = e_{st}.  The trace is
tau(x) = Tr(x)/|G|, so tau(lambda(f)) = f(e).
"""
from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup
from .linalg import schatten_norm
from .schur import fourier_multiplier  # noqa: F401  (re-exported)
from .symbols import GroupSymbol, SymbolError, same_group

MAX_PAIR_DIM = 4096


def left_regular(G, s):
    """Permutation matrix of t -> st."""
    s = G.check_index(s)
    n = G.order
    L = np.zeros((n, n))
    L[G.mult[s], np.arange(n)] = 1
    return L


def right_regular(G, s):
    """Permutation matrix of t -> t s^-1 (commutes with every lambda)."""
    s = G.check_index(s)
    n = G.order
    R = np.zeros((n, n))
    R[G.mult[np.arange(n), G.inv[s]], np.arange(n)] = 1
    return R


def regular_stack(G):
    """Array of shape (|G|, |G|, |G|) holding every lambda_s."""
    n = G.order
    L = np.zeros((n, n, n))
    for s in range(n):
        L[s, G.mult[s], np.arange(n)] = 1
    return L


@dataclass(frozen=True, eq=False)
class VnElement:
    """x = lambda(f) = sum_s f(s) lambda_s."""
    group: FiniteGroup
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.shape[0] != self.group.order:
            raise SymbolError("coefficient count does not match the group order")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def matrix(self):
        m = self.__dict__.get("_matrix")
        if m is None:
            G = self.group
            m = np.zeros((G.order, G.order), dtype=complex)
            # (lambda(f))[st, t] = f(s)
            m[G.mult, np.arange(G.order)[None, :]] = self.coeffs[:, None]
            m.setflags(write=False)
            object.__setattr__(self, "_matrix", m)
        return m

    @classmethod
    def from_matrix(cls, G, M, tol=1e-10):
        """Inverse of ``matrix``; rejects matrices outside VN(G)."""
        M = np.asarray(M)
        coeffs = M[:, G.identity].copy()
        x = cls(G, coeffs)
        if np.abs(x.matrix - M).max() > tol:
            raise SymbolError("matrix does not lie in VN(G)")
        return x

    def __matmul__(self, other):
        same_group(self, other)
        G = self.group
        out = np.zeros(G.order, dtype=complex)
        np.add.at(out, G.mult.reshape(-1), np.outer(self.coeffs, other.coeffs).reshape(-1))
        return VnElement(G, out)

    def __add__(self, other):
        same_group(self, other)
        return VnElement(self.group, self.coeffs + other.coeffs)

    def __sub__(self, other):
        same_group(self, other)
        return VnElement(self.group, self.coeffs - other.coeffs)

    def __mul__(self, c):
        return VnElement(self.group, self.coeffs * c)

    __rmul__ = __mul__

    def adjoint(self):
        return VnElement(self.group, self.coeffs[self.group.inv].conj())


def lambda_(G, s):
    s = G.check_index(s)
    c = np.zeros(G.order)
    c[s] = 1
    return VnElement(G, c)


def unit(G):
    return lambda_(G, G.identity)


def plancherel_trace(x):
    return complex(x.coeffs[x.group.identity])


def matrix_trace(G, M):
    """tau on an arbitrary |G| x |G| matrix."""
    return complex(np.trace(M)) / G.order


def lp_norm(x, p):
    """Norm of L^p(VN(G), tau)."""
    return schatten_norm(x.matrix, p, weight=1.0 / x.group.order)


def random_vn_element(G, rng, positive=False):
    c = rng.uniform(-1, 1, G.order) + 1j * rng.uniform(-1, 1, G.order)
    x = VnElement(G, c)
    if positive:
        x = x.adjoint() @ x
    return x


def apply_fourier(phi, x):
    """M_phi on VN(G): coefficients are multiplied pointwise."""
    same_group(phi, x)
    return VnElement(x.group, phi.values * x.coeffs)


# ---------------------------------------------------------------------------
# fundamental unitary and coproduct
# ---------------------------------------------------------------------------

def fundamental_unitary(G):
    """W(e_t (x) e_r) = e_t (x) e_{tr} on l^2(G x G), index t*|G| + r."""
    n = G.order
    if n * n > MAX_PAIR_DIM:
        raise SymbolError(f"|G|^2 = {n * n} exceeds {MAX_PAIR_DIM}")
    W = np.zeros((n * n, n * n))
    t = np.repeat(np.arange(n), n)
    r = np.tile(np.arange(n), n)
    W[t * n + G.mult[t, r], t * n + r] = 1
    return W


def coproduct(x):
    """W (x (x) 1) W^-1; equals sum_s f(s) lambda_s (x) lambda_s."""
    G = x.group
    W = fundamental_unitary(G)
    return W @ np.kron(x.matrix, np.eye(G.order)) @ W.T


def unit_conjugation_defect(G):
    """max over s, t, u of |W (E_st (x) lambda_u) W^-1 - E_st (x) lambda_{s u t^-1}|."""
    n = G.order
    W = fundamental_unitary(G)
    worst = 0.0
    for s in range(n):
        for t in range(n):
            E = np.zeros((n, n))
            E[s, t] = 1
            for u in range(n):
                lhs = W @ np.kron(E, left_regular(G, u)) @ W.T
                v = G.mult[G.mult[s, u], G.inv[t]]
                worst = max(worst, float(np.abs(lhs - np.kron(E, left_regular(G, v))).max()))
    return worst
