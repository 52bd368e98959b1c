"""Structured solver for the Choi-block programs behind the cb and dec norms.

Both norms on M_n are instances of

    minimize   w.t
    subject to [[A, C], [C*, B]] PSD            (C fixed, A and B Hermitian N x N)
               t_a I - Tr_k(A) PSD,  t_b I - Tr_k(B) PSD

where N = d_in * d_out, Tr_k traces out one tensor factor, and t is either one
shared scalar (w = 1) or a pair (w = (1/2, 1/2)).  The unknowns are 2N^2 + |t|
real numbers, which makes the dense Schur complement of a generic solver
(cubic in that count) far too slow at N = 64.

The Newton operator here splits as diag(K, 0) + B^T Wt B where K is the
compression of X -> W0 X W0 to the two diagonal blocks and the second term has
rank at most 2 * (side of Tr_k)^2.  K is inverted exactly after a simultaneous
diagonalization of two N x N matrices, and the low-rank part goes through a
small dense system.  Everything stays in complex Hermitian arithmetic.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .ipm import PsdCone, solve_conic
from .linalg import herm_to_vec, hermitian_basis, partial_trace, partial_trace_adjoint, vec_to_herm


DENSE_FALLBACK_MAX_N = 16


@dataclass
class ChoiBlockResult:
    status: str
    value: float            # w.t at the returned feasible point (an upper bound)
    lower: float            # dual objective (a lower bound)
    A: np.ndarray
    B: np.ndarray
    t: np.ndarray
    iterations: int
    info: dict = field(default_factory=dict)

    @property
    def gap(self):
        return self.value - self.lower


def _spd_solver(H):
    """Solver for a symmetric matrix that should be positive definite.

    Cholesky first; near the optimum H can lose definiteness to rounding, in
    which case the eigendecomposition with clipped spectrum stands in and the
    outer iterative refinement absorbs the perturbation.
    """
    try:
        c = cho_factor(H)
        return lambda r: cho_solve(c, r)
    except np.linalg.LinAlgError:
        w, V = np.linalg.eigh(H)
        w = np.maximum(w, 1e-14 * max(w[-1], 1e-300))
        return lambda r: V @ ((V.T @ r) / (w if np.ndim(r) == 1 else w[:, None]))


class _ChoiBlockKkt:
    def __init__(self, Cm, dims, over, split):
        self.Cm = Cm
        self.dims = dims
        self.over = over
        self.N = Cm.shape[0]
        self.nr = dims[1] if over == "first" else dims[0]
        self.split = split
        self.q = 2 if split else 1
        self.N2 = self.N * self.N
        self.basis_r = hermitian_basis(self.nr)
        self.lift_basis = np.array([self._lift(h) for h in self.basis_r])
        self.vec_I = herm_to_vec(np.eye(self.nr))
        nr2 = self.nr * self.nr
        T = np.zeros((2 * nr2, self.q))
        T[:nr2, 0] = self.vec_I
        T[nr2:, self.q - 1] = self.vec_I
        self.T = T

    def _tr(self, X):
        return partial_trace(X, *self.dims, over=self.over)

    def _trs(self, Xs):
        T = Xs.reshape(Xs.shape[0], self.dims[0], self.dims[1], self.dims[0], self.dims[1])
        if self.over == "first":
            return np.einsum("nabac->nbc", T)
        return np.einsum("nabcb->nac", T)

    def _lift(self, h):
        return partial_trace_adjoint(h, *self.dims, over=self.over)

    def split_y(self, y):
        N2 = self.N2
        return vec_to_herm(y[:N2], self.N), vec_to_herm(y[N2:2 * N2], self.N), y[2 * N2:]

    def join_y(self, A, B, t):
        return np.concatenate([herm_to_vec(A), herm_to_vec(B), np.atleast_1d(t)])

    def amap_adj(self, y):
        A, B, t = self.split_y(y)
        Z = np.zeros((2 * self.N, 2 * self.N), dtype=complex)
        Z[:self.N, :self.N] = -A
        Z[self.N:, self.N:] = -B
        I = np.eye(self.nr)
        return [Z, self._tr(A) - t[0] * I, self._tr(B) - t[-1] * I]

    def amap(self, Xs):
        X0, X1, X2 = Xs
        N = self.N
        ra = herm_to_vec(self._lift(X1) - X0[:N, :N])
        rb = herm_to_vec(self._lift(X2) - X0[N:, N:])
        t1, t2 = np.real(np.trace(X1)), np.real(np.trace(X2))
        rt = np.array([-t1, -t2]) if self.split else np.array([-t1 - t2])
        return np.concatenate([ra, rb, rt])

    def factor(self, scalings):
        N = self.N
        G0 = scalings[0].G
        # W0 = G G^*.  A block-diagonal congruence diag(T1, T2) brings W0 to
        # [[I, c], [c, I]] with c = diag(cosines of the principal angles between the
        # row spaces of G[:N] and G[N:]).  K then decouples entrywise with
        # denominators 1 - c_i^2 c_j^2 = mu_i + mu_j - mu_i mu_j, mu = sin^2, and
        # the sines are measured directly so that small mu keep relative accuracy.
        U1, s1, Q1 = np.linalg.svd(G0[:N, :], full_matrices=False)
        U2, s2, Q2 = np.linalg.svd(G0[N:, :], full_matrices=False)
        Z1, c, Z2h = np.linalg.svd(Q1 @ Q2.conj().T)
        P2 = Q2.conj().T @ Z2h.conj().T                      # principal vectors of span 2
        mu = np.linalg.norm(P2 - Q1.conj().T @ (Q1 @ P2), axis=0) ** 2
        mu = np.clip(mu, 1e-300, 1.0)
        c = np.clip(c, 0.0, 1.0)
        cc = c[:, None] * c[None, :]
        denom = mu[:, None] + mu[None, :] - mu[:, None] * mu[None, :]
        T1 = (U1 / s1) @ Z1
        T2 = (U2 / s2) @ Z2h.conj().T
        T1h, T2h = T1.conj().T, T2.conj().T

        def kinv(R1, R2):
            # solve the diagonal blocks of W0 diag(dA, dB) W0 = diag(R1, R2)
            r1 = 0 if R1 is None else T1h @ R1 @ T1
            r2 = 0 if R2 is None else T2h @ R2 @ T2
            a = (r1 - cc * r2) / denom
            b = (r2 - cc * r1) / denom
            return T1 @ a @ T1h, T2 @ b @ T2h

        W1 = scalings[1].G @ scalings[1].G.conj().T
        W2 = scalings[2].G @ scalings[2].G.conj().T
        W1i, W2i = np.linalg.inv(W1), np.linalg.inv(W2)
        Br = self.basis_r
        winv = [herm_to_vec(W1i @ Br @ W1i).T, herm_to_vec(W2i @ Br @ W2i).T]
        Lb = self.lift_basis
        dA1, dB1 = kinv(Lb, None)
        dA2, dB2 = kinv(None, Lb)
        top = np.concatenate([herm_to_vec(self._trs(dA1)), herm_to_vec(self._trs(dB1))], axis=1)
        bot = np.concatenate([herm_to_vec(self._trs(dA2)), herm_to_vec(self._trs(dB2))], axis=1)
        H = np.concatenate([top, bot], axis=0).T
        nr2 = self.nr * self.nr
        H[:nr2, :nr2] += winv[0]
        H[nr2:, nr2:] += winv[1]
        H = (H + H.T) / 2
        h_solve = _spd_solver(H)
        HiT = h_solve(self.T)
        small_solve = _spd_solver(self.T.T @ HiT)
        N2 = self.N2

        def solve(r):
            RA = vec_to_herm(r[:N2], N)
            RB = vec_to_herm(r[N2:2 * N2], N)
            rt = r[2 * N2:]
            dA, dB = kinv(RA, RB)
            s = np.concatenate([herm_to_vec(self._tr(dA)), herm_to_vec(self._tr(dB))])
            His = h_solve(s)
            tau = small_solve(rt + self.T.T @ His)
            z = His - HiT @ tau
            z1, z2 = vec_to_herm(z[:nr2], self.nr), vec_to_herm(z[nr2:], self.nr)
            dA, dB = kinv(RA - self._lift(z1), RB - self._lift(z2))
            return np.concatenate([herm_to_vec(dA), herm_to_vec(dB), tau])

        return solve


def solve_choi_block(Cm, dims, over="first", split=False, gap_tol=1e-8, feas_tol=1e-8, max_iter=80):
    """Minimize t (or (t_a + t_b)/2 when ``split``) over the program in the module docstring.

    :param Cm: the fixed off-diagonal block, N x N with N = dims[0] * dims[1].
    :param dims: (d0, d1) tensor factor sizes of the Choi space.
    :param over: which factor the partial trace removes, "first" or "second".
    """
    Cm = np.asarray(Cm, dtype=complex)
    N = Cm.shape[0]
    if Cm.shape != (N, N) or dims[0] * dims[1] != N:
        raise ValueError("off-diagonal block does not match dims")
    kkt = _ChoiBlockKkt(Cm, dims, over, split)
    nr = kkt.nr
    d_tr = N // nr
    cones = [PsdCone(2 * N, complex), PsdCone(nr, complex), PsdCone(nr, complex)]
    C0 = np.zeros((2 * N, 2 * N), dtype=complex)
    C0[:N, N:] = Cm
    C0[N:, :N] = Cm.conj().T
    C = [C0, np.zeros((nr, nr), dtype=complex), np.zeros((nr, nr), dtype=complex)]
    w = np.array([0.5, 0.5]) if split else np.array([1.0])
    b = np.concatenate([np.zeros(2 * kkt.N2), -w])

    # strictly feasible start on both sides
    alpha = 1.0 + 2.0 * np.linalg.norm(Cm, 2)
    t0 = alpha * d_tr + alpha
    y0 = kkt.join_y(alpha * np.eye(N), alpha * np.eye(N), np.full(kkt.q, t0))
    S0 = [Ci - a for Ci, a in zip(C, kkt.amap_adj(y0))]
    x1 = np.eye(nr, dtype=complex) / (2 * nr)
    X0 = np.zeros((2 * N, 2 * N), dtype=complex)
    X0[:N, :N] = kkt._lift(x1)
    X0[N:, N:] = kkt._lift(x1)
    Xs = [X0, x1.copy(), x1.copy()]

    res = solve_conic(kkt, cones, C, b, start=(Xs, y0, S0), gap_tol=gap_tol, feas_tol=feas_tol,
                      max_iter=max_iter)
    A, B, t = kkt.split_y(res.y)
    value = float(w @ t) if split else float(t[0])
    out = ChoiBlockResult(res.status, value, -res.primal_value, A, B, np.array(t), res.iterations,
                          dict(res.info, dual_value=res.dual_value, primal_residual=res.primal_residual,
                               dual_residual=res.dual_residual, multipliers=res.X, solver="structured"))
    if out.status != "optimal" and N <= DENSE_FALLBACK_MAX_N:
        # the dense Schur complement is backward stable and small enough here
        value, z, sol = choi_block_lmi(Cm, dims, over, split).solve(gap_tol=gap_tol, feas_tol=feas_tol)
        if sol.status == "optimal" or (sol.status == "near-optimal" and out.status != "near-optimal"):
            nb = N * N
            out = ChoiBlockResult(sol.status, value, -sol.primal_value, vec_to_herm(z[:nb], N),
                                  vec_to_herm(z[nb:2 * nb], N), np.array(z[2 * nb:]), sol.iterations,
                                  dict(sol.info, primal_residual=sol.primal_residual,
                                       dual_residual=sol.dual_residual, solver="dense",
                                       structured_status=res.status))
    return out


def choi_block_lmi(Cm, dims, over="first", split=False):
    """The same program written for the generic dense solver (for small N only)."""
    from .sdp import LmiBuilder

    Cm = np.asarray(Cm, dtype=complex)
    N = Cm.shape[0]
    nr = dims[1] if over == "first" else dims[0]
    basis = hermitian_basis(N)
    nb = len(basis)
    q = 2 if split else 1
    nv = 2 * nb + q
    L = LmiBuilder(nv)
    g = np.zeros(nv)
    g[2 * nb:] = 0.5 if split else 1.0
    L.minimize(g)
    F0 = np.zeros((2 * N, 2 * N), dtype=complex)
    F0[:N, N:] = Cm
    F0[N:, :N] = Cm.conj().T
    Fk = np.zeros((nv, 2 * N, 2 * N), dtype=complex)
    Fk[:nb, :N, :N] = basis
    Fk[nb:2 * nb, N:, N:] = basis
    L.add_lmi(F0, Fk)
    trb = np.array([partial_trace(h, *dims, over=over) for h in basis])
    for side in range(2):
        Gk = np.zeros((nv, nr, nr), dtype=complex)
        Gk[side * nb:(side + 1) * nb] = -trb
        Gk[2 * nb + (side if split else 0)] = np.eye(nr)
        L.add_lmi(np.zeros((nr, nr), dtype=complex), Gk)
    return L
