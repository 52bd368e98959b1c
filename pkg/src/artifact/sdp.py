"""Small dense semidefinite programs.

``SdpProblem`` is the standard primal form

    minimize   sum_j <C_j, X_j> + c.x
    subject to sum_j <A_ij, X_j> + F_i.x = b_i      (i = 1..m)
               X_j PSD (real symmetric) or X_j >= 0 entrywise ("l" blocks)

with free scalar variables x.  ``solve_sdp`` solves it together with its dual
max b.y s.t. C - sum_i y_i A_i PSD, F^T y = c.  Complex Hermitian data enters
through ``embed_hermitian``.  ``LmiBuilder`` states a problem as a linear matrix
inequality in a few design variables, which keeps m small.
"""
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .ipm import NonnegCone, PsdCone, solve_conic
from .linalg import LinalgError, is_hermitian

MAX_TOTAL_DIM = 1500


class SdpError(ValueError):
    pass


@dataclass
class SdpProblem:
    """Standard-form SDP.

    :param blocks: list of ("s", n) or ("l", n) cone declarations.
    :param C: objective block per cone ((n, n) for "s", (n,) for "l").
    :param A: constraint data per cone, shape (m, n, n) or (m, n).
    :param b: right-hand sides, shape (m,).
    :param c: cost of free scalars, shape (k,).
    :param F: columns of free scalars in the constraints, shape (m, k).
    """
    blocks: list
    C: list
    A: list
    b: np.ndarray
    c: np.ndarray = None
    F: np.ndarray = None

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=float)
        m = self.b.shape[0]
        if self.c is None:
            self.c = np.zeros(0)
        self.c = np.asarray(self.c, dtype=float)
        if self.F is None:
            self.F = np.zeros((m, self.c.shape[0]))
        self.F = np.asarray(self.F, dtype=float).reshape(m, -1)
        if self.F.shape[1] != self.c.shape[0]:
            raise SdpError("free-variable columns and costs disagree")
        if not (len(self.blocks) == len(self.C) == len(self.A)):
            raise SdpError("blocks, C and A must have the same length")
        for (kind, n), Cj, Aj in zip(self.blocks, self.C, self.A):
            shape = (n, n) if kind == "s" else (n,)
            if kind not in ("s", "l"):
                raise SdpError(f"unknown cone kind {kind!r}")
            if np.shape(Cj) != shape or np.shape(Aj) != (m,) + shape:
                raise SdpError("constraint data references an undeclared block shape")
            if np.iscomplexobj(Cj) or np.iscomplexobj(Aj):
                raise SdpError("complex data must be embedded with embed_hermitian first")

    @property
    def m(self):
        return self.b.shape[0]

    @property
    def total_dim(self):
        return sum(n for _, n in self.blocks)

    def to_json(self):
        """Debug dump; the schema mirrors the constructor arguments."""
        return json.dumps({
            "schema": "artifact.sdp/1",
            "blocks": [list(b) for b in self.blocks],
            "C": [np.asarray(x).tolist() for x in self.C],
            "A": [np.asarray(x).tolist() for x in self.A],
            "b": self.b.tolist(), "c": self.c.tolist(), "F": self.F.tolist(),
        })

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        blocks = [tuple(b) for b in d["blocks"]]
        return cls(blocks, [np.array(x, dtype=float) for x in d["C"]],
                   [np.array(x, dtype=float).reshape((len(d["b"]),) + ((n, n) if k == "s" else (n,)))
                    for (k, n), x in zip(blocks, d["A"])],
                   np.array(d["b"]), np.array(d["c"]), np.array(d["F"]).reshape(len(d["b"]), -1))


@dataclass
class SdpSolution:
    status: str
    primal_value: float
    dual_value: float
    duality_gap: float
    primal_blocks: list
    dual_blocks: list
    y: np.ndarray
    x: np.ndarray
    iterations: int
    primal_residual: float
    dual_residual: float
    info: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.status == "optimal"


class _DenseKkt:
    def __init__(self, p):
        self.p = p

    def amap(self, Xs):
        out = np.zeros(self.p.m)
        for (kind, _), Aj, X in zip(self.p.blocks, self.p.A, Xs):
            out += Aj.reshape(self.p.m, -1) @ X.reshape(-1)
        return out

    def amap_adj(self, y):
        return [np.tensordot(y, Aj, axes=1) for Aj in self.p.A]

    def factor(self, scalings):
        m = self.p.m
        M = np.zeros((m, m))
        for (kind, n), Aj, sc in zip(self.p.blocks, self.p.A, scalings):
            if kind == "s":
                W = sc.G @ sc.G.T
                WAW = W @ Aj @ W
                M += Aj.reshape(m, -1) @ WAW.reshape(m, -1).T
            else:
                M += (Aj * sc.G ** 2) @ Aj.T
        M = (M + M.T) / 2
        try:
            fac = cho_factor(M)
            return lambda r: cho_solve(fac, r)
        except np.linalg.LinAlgError:
            # dependent constraints: fall back to a least-squares solve
            pinv = np.linalg.pinv(M, rcond=1e-14, hermitian=True)
            return lambda r: pinv @ r


def solve_sdp(p, gap_tol=1e-8, feas_tol=1e-8, max_iter=100):
    """Solve ``p`` and return an SdpSolution.

    ``optimal`` means every tolerance was met.  A run that stalls numerically
    reports its best iterate as ``near-optimal`` when that iterate is within
    100x of the tolerances, else ``max-iterations``; the reason is in ``info``.
    """
    if gap_tol < 1e-9 or feas_tol < 1e-9:
        raise SdpError("tolerances below 1e-9 are not supported")
    if p.total_dim > MAX_TOTAL_DIM:
        raise SdpError(f"total PSD dimension {p.total_dim} exceeds {MAX_TOTAL_DIM}")
    cones = [PsdCone(n) if kind == "s" else NonnegCone(n) for kind, n in p.blocks]
    C = [np.asarray(Cj, dtype=float) for Cj in p.C]
    res = solve_conic(_DenseKkt(p), cones, C, p.b, p.c, p.F, gap_tol=gap_tol, feas_tol=feas_tol,
                      max_iter=max_iter)
    return SdpSolution(res.status, res.primal_value, res.dual_value, res.gap, res.X, res.S, res.y, res.x,
                       res.iterations, res.primal_residual, res.dual_residual, res.info)


def embed_hermitian(A, check=True):
    """[[Re A, -Im A], [Im A, Re A]]; PSD exactly when A is."""
    A = np.asarray(A)
    if check and not is_hermitian(A):
        raise LinalgError("embed_hermitian needs a Hermitian matrix")
    return _embed(A)


def _embed(A):
    re, im = np.real(A), np.imag(A)
    top = np.concatenate([re, -im], axis=-1)
    bot = np.concatenate([im, re], axis=-1)
    return np.concatenate([top, bot], axis=-2)


def unembed_hermitian(R):
    n = R.shape[-1] // 2
    return (R[..., :n, :n] + R[..., n:, n:]) / 2 + 1j * (R[..., n:, :n] - R[..., :n, n:]) / 2


# ---------------------------------------------------------------------------
# linear matrix inequalities
# ---------------------------------------------------------------------------

class LmiBuilder:
    """minimize g.z  subject to  F0_j + sum_k z_k F_kj  PSD  for each block j.

    Blocks may be complex Hermitian (embedded as real of twice the side) or
    scalar inequalities (``add_scalar``).  Solved as the dual of a standard-form
    SDP, so the Schur complement has the size of z.
    """

    def __init__(self, nvars):
        self.nvars = nvars
        self.cost = np.zeros(nvars)
        self._mats = []      # (F0, Fk stack)
        self._scal = []      # (f0, fk)

    def minimize(self, g):
        self.cost = np.asarray(g, dtype=float)
        return self

    def add_lmi(self, F0, Fk):
        """Constraint F0 + sum_k z_k Fk[k] PSD, F0 and Fk[k] Hermitian."""
        F0 = np.asarray(F0)
        Fk = np.asarray(Fk)
        if Fk.shape != (self.nvars,) + F0.shape:
            raise SdpError("LMI coefficient stack has the wrong shape")
        self._mats.append((F0, Fk))
        return self

    def add_scalar(self, f0, fk):
        """Constraint f0 + fk.z >= 0."""
        self._scal.append((float(f0), np.asarray(fk, dtype=float)))
        return self

    def problem(self):
        blocks, C, A = [], [], []
        for F0, Fk in self._mats:
            if np.iscomplexobj(F0) or np.iscomplexobj(Fk):
                F0, Fk = _embed(F0), _embed(Fk)
            F0 = np.real(F0)
            Fk = np.real(Fk)
            blocks.append(("s", F0.shape[0]))
            C.append((F0 + F0.T) / 2)
            A.append(-(Fk + np.swapaxes(Fk, 1, 2)) / 2)
        if self._scal:
            blocks.append(("l", len(self._scal)))
            C.append(np.array([f0 for f0, _ in self._scal]))
            A.append(-np.array([fk for _, fk in self._scal]).T)
        # dual form: max -g.z  s.t. C - sum z_k A_k PSD
        return SdpProblem(blocks, C, A, -self.cost)

    def solve(self, gap_tol=1e-8, feas_tol=1e-8, max_iter=100):
        """Return (value, z, SdpSolution); value is min g.z."""
        sol = solve_sdp(self.problem(), gap_tol=gap_tol, feas_tol=feas_tol, max_iter=max_iter)
        return -sol.dual_value, sol.y, sol


def lambda_max_sdp(A, **kw):
    """Largest eigenvalue of Hermitian A as max <A, X> s.t. tr X = 1, X PSD."""
    A = np.asarray(A)
    R = embed_hermitian(A)
    n = R.shape[0]
    # the embedding has the same spectrum with doubled multiplicities
    p = SdpProblem([("s", n)], [-R], [np.eye(n)[None]], np.array([1.0]))
    sol = solve_sdp(p, **kw)
    return -sol.primal_value, sol
