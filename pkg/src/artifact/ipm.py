"""Primal-dual path-following for conic programs over PSD and nonnegative cones.

The pair solved here is

    (P)  min <C, X> + c.x   s.t.  A(X) + F x = b,  X in K
    (D)  max b.y            s.t.  S = C - A*(y) in K,  F^T y = c

where K is a product of PSD blocks (real or complex Hermitian) and nonnegative
orthants, x are free variables and y lives in R^m.  Directions use
Nesterov-Todd scaling with a Mehrotra predictor-corrector step; the start may
be infeasible.  The Newton system M dy = r with M = A W A* W is delegated to a
``kkt`` object so structured problems can bring their own solver.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

log = logging.getLogger(__name__)

NEAR = 100.0          # slack factor for the near-optimal status


class NumericalBreakdown(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------

class PsdCone:
    """Hermitian (or real symmetric) PSD matrices of side ``n``."""

    def __init__(self, n, dtype=float):
        self.n = n
        self.dtype = np.dtype(dtype)
        self.nu = n

    def identity(self, scale=1.0):
        return scale * np.eye(self.n, dtype=self.dtype)

    def inner(self, X, S):
        return float(np.real(np.vdot(X, S)))

    def nt_scaling(self, X, S):
        """G with G G* S G G* = X and G* S G = G^-1 X G^-* = diag(lam)."""
        Lx = np.linalg.cholesky(X)
        Ls = np.linalg.cholesky(S)
        U, lam, Vh = np.linalg.svd(Ls.conj().T @ Lx)
        G = (Lx @ Vh.conj().T) / np.sqrt(lam)
        Ginv = (U.conj().T @ Ls.conj().T) / np.sqrt(lam)[:, None]
        return _Scaling(G, Ginv, lam)

    def sandwich(self, sc, D):
        """W D W with W = G G*."""
        W = sc.G @ sc.G.conj().T
        return W @ D @ W

    def to_scaled(self, sc, dX, dS):
        dXt = sc.Ginv @ dX @ sc.Ginv.conj().T
        dSt = sc.G.conj().T @ dS @ sc.G
        return dXt, dSt

    def corrector_rhs(self, sc, target, dXa, dSa):
        """Unscaled right-hand side R in dX + W dS W = R.

        Solves lam o U = target*I - lam^2 - (dXa~ o dSa~) for U, o the Jordan product.
        """
        lam = sc.lam
        H = -np.diag(lam ** 2).astype(self.dtype)
        H[np.diag_indices(self.n)] += target
        if dXa is not None:
            a, s = self.to_scaled(sc, dXa, dSa)
            H -= (a @ s + s @ a) / 2
        U = 2 * H / (lam[:, None] + lam[None, :])
        return sc.G @ U @ sc.G.conj().T

    def max_step(self, X, dX):
        L = np.linalg.cholesky(X)
        Li = np.linalg.inv(L)
        M = Li @ dX @ Li.conj().T
        lmin = np.linalg.eigvalsh((M + M.conj().T) / 2)[0]
        return np.inf if lmin >= 0 else -1.0 / lmin

    def is_interior(self, X):
        try:
            np.linalg.cholesky(X)
            return True
        except np.linalg.LinAlgError:
            return False

    def min_eig(self, X):
        return float(np.linalg.eigvalsh((X + X.conj().T) / 2)[0])

    def sym(self, X):
        return (X + X.conj().T) / 2


class NonnegCone:
    """The orthant R^n_+, stored as 1-d arrays."""

    dtype = np.dtype(float)

    def __init__(self, n):
        self.n = n
        self.nu = n

    def identity(self, scale=1.0):
        return np.full(self.n, float(scale))

    def inner(self, x, s):
        return float(x @ s)

    def nt_scaling(self, x, s):
        g = np.sqrt(x / s)
        lam = np.sqrt(x * s)
        return _Scaling(g, 1 / g, lam)

    def sandwich(self, sc, d):
        return sc.G ** 2 * d

    def to_scaled(self, sc, dx, ds):
        return dx / sc.G, ds * sc.G

    def corrector_rhs(self, sc, target, dxa, dsa):
        h = target - sc.lam ** 2
        if dxa is not None:
            a, s = self.to_scaled(sc, dxa, dsa)
            h = h - a * s
        return sc.G * (h / sc.lam)

    def max_step(self, x, dx):
        neg = dx < 0
        return np.inf if not neg.any() else float(np.min(-x[neg] / dx[neg]))

    def is_interior(self, x):
        return bool(np.all(x > 0))

    def min_eig(self, x):
        return float(x.min())

    def sym(self, x):
        return x


@dataclass
class _Scaling:
    G: np.ndarray
    Ginv: np.ndarray
    lam: np.ndarray


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

@dataclass
class IpmResult:
    status: str
    X: list
    S: list
    y: np.ndarray
    x: np.ndarray
    primal_value: float
    dual_value: float
    iterations: int
    primal_residual: float
    dual_residual: float
    gap: float
    info: dict = field(default_factory=dict)


def _bnorm(cones, Xs):
    return float(np.sqrt(sum(np.sum(np.abs(X) ** 2) for X in Xs)))


def _refined(kkt, cones, scalings, solve, rounds=3):
    """Wrap ``solve`` with preconditioned conjugate gradients on the exact operator M.

    ``solve`` is an approximate M^-1; near the optimum it can be wrong in a few
    directions, which plain iterative refinement amplifies but CG removes.
    """

    def apply_M(v):
        AtV = kkt.amap_adj(v)
        return kkt.amap([K.sandwich(sc, a) for K, sc, a in zip(cones, scalings, AtV)])

    def refined(r):
        nr = np.linalg.norm(r)
        if nr == 0:
            return np.zeros_like(r)
        v = solve(r)
        res = r - apply_M(v)
        best = (np.linalg.norm(res), v)
        z = solve(res)
        p = z.copy()
        rz = res @ z
        for _ in range(4 * rounds):
            if best[0] <= 1e-15 * nr or rz <= 0:
                break
            Mp = apply_M(p)
            pMp = p @ Mp
            if pMp <= 0:
                break
            a = rz / pMp
            v = v + a * p
            res = res - a * Mp
            rn = np.linalg.norm(res)
            if rn < best[0]:
                best = (rn, v)
            z = solve(res)
            rz_new = res @ z
            p = z + (rz_new / rz) * p
            rz = rz_new
        return best[1]

    return refined


def solve_conic(kkt, cones, C, b, c=None, F=None, start=None, gap_tol=1e-8, feas_tol=1e-8,
                max_iter=100, step_frac=0.98):
    """Run the predictor-corrector iteration.

    :param kkt: object with ``amap(Xs) -> R^m``, ``amap_adj(y) -> blocks`` and
        ``factor(scalings) -> solve`` where ``solve(r)`` returns M^-1 r.
    :param cones: list of PsdCone / NonnegCone.
    :param C: list of blocks (objective).
    :param b: right-hand side, shape (m,).
    :param c, F: free-variable cost (k,) and constraint columns (m, k).
    :param start: optional (Xs, y, Ss) starting point, interior.
    :return: IpmResult with status "optimal", "near-optimal", "infeasible" or
        "max-iterations".
    """
    b = np.asarray(b, dtype=float)
    m = b.shape[0]
    k = 0 if F is None else F.shape[1]
    c = np.zeros(k) if c is None else np.asarray(c, dtype=float)
    F = np.zeros((m, 0)) if F is None else np.asarray(F, dtype=float)
    nu = sum(K.nu for K in cones)
    normC = _bnorm(cones, C)
    normb = float(np.linalg.norm(b))
    normc = float(np.linalg.norm(c))

    if start is None:
        xi = max(10.0, np.sqrt(max(K.n for K in cones)), normb)
        eta = max(10.0, normC)
        Xs = [K.identity(xi) for K in cones]
        Ss = [K.identity(eta) for K in cones]
        y = np.zeros(m)
    else:
        Xs, y, Ss = start
        Xs = [np.array(X) for X in Xs]
        Ss = [np.array(S) for S in Ss]
        y = np.array(y, dtype=float)
    x = np.zeros(k)

    status = "max-iterations"
    info = {}
    it = 0
    pobj = dobj = np.nan
    rp_rel = rd_rel = gap = np.inf
    best = None
    for it in range(max_iter + 1):
        AtY = kkt.amap_adj(y)
        rd = [Ci - a - S for Ci, a, S in zip(C, AtY, Ss)]
        rp = b - kkt.amap(Xs) - F @ x
        rc = c - F.T @ y
        mu_sum = sum(K.inner(X, S) for K, X, S in zip(cones, Xs, Ss))
        mu = mu_sum / nu
        pobj = sum(K.inner(Ci, X) for K, Ci, X in zip(cones, C, Xs)) + c @ x
        dobj = b @ y
        rp_rel = np.linalg.norm(rp) / (1 + normb)
        rd_rel = (_bnorm(cones, rd) + np.linalg.norm(rc)) / (1 + normC + normc)
        gap = abs(pobj - dobj)
        merit = max(rp_rel, rd_rel, gap / (1.0 + abs(pobj) + abs(dobj)))
        if best is None or merit < best[0]:
            best = (merit, (Xs, Ss, y, x, pobj, dobj, rp_rel, rd_rel, gap, it))
        log.debug("it %d pobj %.10g dobj %.10g rp %.2e rd %.2e mu %.2e", it, pobj, dobj, rp_rel, rd_rel, mu)
        scale = 1.0 + abs(pobj) + abs(dobj)
        if (rp_rel <= feas_tol and rd_rel <= feas_tol
                and gap <= gap_tol * scale and mu_sum <= gap_tol * scale):
            status = "optimal"
            break
        # infeasibility certificates
        # y / b.y is a Farkas ray when b.y dominates the data; likewise X / -pobj
        if dobj > 0 and rp_rel > feas_tol:
            if (normC + _bnorm(cones, rd) + np.linalg.norm(rc)) / dobj < 1e-8:
                status, info["infeasible"] = "infeasible", "primal"
                break
        if pobj < 0 and rd_rel > feas_tol:
            if (normb + np.linalg.norm(rp)) / -pobj < 1e-8:
                status, info["infeasible"] = "infeasible", "dual"
                break
        if it == max_iter:
            break

        try:
            scalings = [K.nt_scaling(X, S) for K, X, S in zip(cones, Xs, Ss)]
            solve = _refined(kkt, cones, scalings, kkt.factor(scalings))
            if k:
                MiF = np.column_stack([solve(F[:, j]) for j in range(k)])
                schur = cho_factor(F.T @ MiF)
        except (np.linalg.LinAlgError, ValueError) as err:
            status = "max-iterations"
            info["breakdown"] = f"factorization failed at iteration {it}: {err}"
            break

        def direction(R):
            # dX + W dS W = R,  A(dX) + F dx = rp,  A*(dy) + dS = rd,  F^T dy = rc
            WrdW = [K.sandwich(sc, r) for K, sc, r in zip(cones, scalings, rd)]
            g = rp - kkt.amap([Ri - w for Ri, w in zip(R, WrdW)])
            if k:
                Mig = solve(g)
                dx = cho_solve(schur, F.T @ Mig - rc)
                dy = Mig - MiF @ dx
            else:
                dx = np.zeros(0)
                dy = solve(g)
            AtdY = kkt.amap_adj(dy)
            dS = [r - a for r, a in zip(rd, AtdY)]
            dX = [Ri - K.sandwich(sc, d) for Ri, K, sc, d in zip(R, cones, scalings, dS)]
            dX = [K.sym(d) for K, d in zip(cones, dX)]
            dS = [K.sym(d) for K, d in zip(cones, dS)]
            return dX, dy, dS, dx

        def steps(dX, dS):
            ap = min([1.0] + [K.max_step(X, d) for K, X, d in zip(cones, Xs, dX)])
            ad = min([1.0] + [K.max_step(S, d) for K, S, d in zip(cones, Ss, dS)])
            return ap, ad

        try:
            R_aff = [K.corrector_rhs(sc, 0.0, None, None) for K, sc in zip(cones, scalings)]
            dXa, dya, dSa, dxa = direction(R_aff)
            ap, ad = steps(dXa, dSa)
            mu_aff = sum(K.inner(X + ap * a, S + ad * s)
                         for K, X, a, S, s in zip(cones, Xs, dXa, Ss, dSa)) / nu
            sigma = min(1.0, max(0.0, (mu_aff / mu) ** 3)) if mu > 0 else 0.0
            R = [K.corrector_rhs(sc, sigma * mu, a, s)
                 for K, sc, a, s in zip(cones, scalings, dXa, dSa)]
            dX, dy, dS, dx = direction(R)
            ap, ad = steps(dX, dS)
        except (np.linalg.LinAlgError, ValueError) as err:
            info["breakdown"] = f"direction failed at iteration {it}: {err}"
            break
        ap = min(1.0, step_frac * ap)
        ad = min(1.0, step_frac * ad)
        if max(ap, ad) < 1e-10:
            info["breakdown"] = f"step length collapsed at iteration {it}"
            break
        newX = [X + ap * d for X, d in zip(Xs, dX)]
        newS = [S + ad * d for S, d in zip(Ss, dS)]
        if not all(K.is_interior(X) for K, X in zip(cones, newX)) or \
                not all(K.is_interior(S) for K, S in zip(cones, newS)):
            info["breakdown"] = f"left the cone at iteration {it}"
            break
        Xs, Ss = newX, newS
        y = y + ad * dy
        x = x + ap * dx

    if status != "optimal" and best is not None and best[0] < merit:
        # report the most accurate iterate seen, still flagged as not optimal
        merit, (Xs, Ss, y, x, pobj, dobj, rp_rel, rd_rel, gap, it_best) = best
        info["best_iteration"] = it_best
    if status == "max-iterations" and "infeasible" not in info:
        # double precision often stalls one digit short; say so instead of hiding it
        if (rp_rel <= NEAR * feas_tol and rd_rel <= NEAR * feas_tol
                and gap <= NEAR * gap_tol * (1.0 + abs(pobj) + abs(dobj))):
            status = "near-optimal"
    return IpmResult(status, Xs, Ss, y, x, float(pobj), float(dobj), it,
                     float(rp_rel), float(rd_rel), float(gap), info)
