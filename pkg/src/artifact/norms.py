"""Completely bounded, decomposable and Fourier-Stieltjes norms.

Every norm is an SDP.  Maps on M_n go through the structured Choi-block solver
(``choi_sdp``).  When the map is a Schur multiplier, as every Fourier
multiplier is here, averaging over diagonal unitaries shrinks the program to
n x n blocks indexed by G.  That reduction is exact and on by default; pass
``reduce=False`` to force the full Choi program.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from .choi_sdp import solve_choi_block
from .linalg import hermitian_basis, operator_norm, partial_trace, vec_to_herm
from .schur import schur_superop, schur_symbol_of
from .sdp import LmiBuilder
from .superop import SuperOperator, adjoint_map, is_completely_positive, is_hermitian_preserving
from .symbols import BiSymbol, GroupSymbol, SymbolError

log = logging.getLogger(__name__)

GAP_TOL = 1e-8
FEAS_TOL = 1e-8
MAX_CB_DIM = 16
MAX_DEC_DIM = 8
MAX_DEC_SA_DIM = 4


class NormError(RuntimeError):
    pass


@dataclass
class NormResult:
    """``value`` is attained by the returned witness; ``lower`` is the dual bound."""
    value: float
    lower: float
    witness: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    def __float__(self):
        return self.value


ACCEPTED = ("optimal", "near-optimal")


def _check(status, what, stats):
    if status not in ACCEPTED:
        raise NormError(f"{what}: solver ended with status {status!r} ({stats})")


def _zero(T):
    return float(np.abs(T.choi).max(initial=0.0)) == 0.0


def _schur_symbol(T):
    if T.tag and T.tag[0] == "schur":
        return T.tag[1].values
    if T.tag and T.tag[0] == "fourier":
        from .schur import herz_schur_lift
        return herz_schur_lift(T.tag[1]).values
    return None


def _herm_lmi_vars(n):
    """Coefficient stack mapping n^2 real coordinates to Hermitian n x n matrices."""
    return hermitian_basis(n)


def _two_block_lmi(psi, shared, over_diag=True):
    """min t (or (t0+t1)/2): [[Y0, psi], [psi^*, Y1]] PSD, diag(Y_i) <= t_i."""
    n = psi.shape[0]
    Hb = _herm_lmi_vars(n)
    nb = len(Hb)
    q = 1 if shared else 2
    nv = 2 * nb + q
    L = LmiBuilder(nv)
    g = np.zeros(nv)
    g[2 * nb:] = 1.0 if shared else 0.5
    L.minimize(g)
    F0 = np.zeros((2 * n, 2 * n), dtype=complex)
    F0[:n, n:] = psi
    F0[n:, :n] = psi.conj().T
    Fk = np.zeros((nv, 2 * n, 2 * n), dtype=complex)
    Fk[:nb, :n, :n] = Hb
    Fk[nb:2 * nb, n:, n:] = Hb
    L.add_lmi(F0, Fk)
    diag = np.real(np.einsum("kii->ki", Hb))               # diag of each basis element
    for side in range(2):
        for i in range(n):
            fk = np.zeros(nv)
            fk[side * nb:(side + 1) * nb] = -diag[:, i]
            fk[2 * nb + (0 if shared else side)] = 1.0
            L.add_scalar(0.0, fk)
    return L, nb


def _solve_lmi(L, what, gap_tol, feas_tol):
    value, z, sol = L.solve(gap_tol=gap_tol, feas_tol=feas_tol)
    stats = {"status": sol.status, "iterations": sol.iterations, "gap": sol.duality_gap,
             "primal_residual": sol.primal_residual, "dual_residual": sol.dual_residual}
    _check(sol.status, what, stats)
    return value, z, sol, stats


# ---------------------------------------------------------------------------
# completely bounded norm
# ---------------------------------------------------------------------------

def cb_norm(T, reduce=True, gap_tol=GAP_TOL, feas_tol=FEAS_TOL):
    """||T||_cb, computed as the diamond norm of the trace-dual map T*."""
    return cb_norm_result(T, reduce, gap_tol, feas_tol).value


def cb_norm_result(T, reduce=True, gap_tol=GAP_TOL, feas_tol=FEAS_TOL):
    if T.dim > MAX_CB_DIM:
        raise NormError(f"cb norm limited to dim <= {MAX_CB_DIM}")
    if _zero(T):
        return NormResult(0.0, 0.0, stats={"short_circuit": "zero map"})
    psi = _schur_symbol(T) if reduce else None
    if psi is not None:
        # the dual map of a Schur multiplier is the Schur multiplier of psi^T
        L, nb = _two_block_lmi(psi.T, shared=False)
        value, z, sol, stats = _solve_lmi(L, "cb norm (Schur)", gap_tol, feas_tol)
        stats["path"] = "schur"
        return NormResult(value, -sol.primal_value, {"t": z[2 * nb:]}, stats)
    Jd = adjoint_map(T).choi
    n = T.dim
    res = solve_choi_block(Jd, (n, n), over="second", split=True, gap_tol=gap_tol, feas_tol=feas_tol)
    stats = {"status": res.status, "iterations": res.iterations, "gap": res.gap, "path": "choi",
             "solver": res.info.get("solver")}
    _check(res.status, "cb norm", stats)
    return NormResult(res.value, res.lower, {"Y0": res.A, "Y1": res.B, "t": res.t}, stats)


# ---------------------------------------------------------------------------
# decomposable norm
# ---------------------------------------------------------------------------

def dec_norm(T, reduce=True, gap_tol=GAP_TOL, feas_tol=FEAS_TOL):
    return dec_norm_result(T, reduce, gap_tol, feas_tol).value


def dec_norm_result(T, reduce=True, gap_tol=GAP_TOL, feas_tol=FEAS_TOL):
    """min t such that [[v1, T], [T°, v2]] is CP and v_i(1) <= t.

    The witness holds v1 and v2 as SuperOperators; their complete positivity is
    re-checked and recorded in ``stats``.
    """
    n = T.dim
    if n > MAX_DEC_DIM:
        raise NormError(f"dec norm limited to dim <= {MAX_DEC_DIM}")
    if _zero(T):
        Z = SuperOperator(np.zeros_like(T.choi), n)
        return NormResult(0.0, 0.0, {"v1": Z, "v2": Z}, {"short_circuit": "zero map"})
    psi = _schur_symbol(T) if reduce else None
    if psi is not None:
        L, nb = _two_block_lmi(psi, shared=True)
        value, z, sol, stats = _solve_lmi(L, "dec norm (Schur)", gap_tol, feas_tol)
        Y0 = vec_to_herm(z[:nb], n)
        Y1 = vec_to_herm(z[nb:2 * nb], n)
        G = T.tag[1].group
        v1 = schur_superop(BiSymbol(G, Y0))
        v2 = schur_superop(BiSymbol(G, Y1))
        stats["path"] = "schur"
        lower = -sol.primal_value
    else:
        res = solve_choi_block(T.choi, (n, n), over="first", split=False, gap_tol=gap_tol, feas_tol=feas_tol)
        stats = {"status": res.status, "iterations": res.iterations, "gap": res.gap, "path": "choi",
                 "solver": res.info.get("solver")}
        _check(res.status, "dec norm", stats)
        v1 = SuperOperator(res.A, n)
        v2 = SuperOperator(res.B, n)
        value, lower = res.value, res.lower
    stats["v1_cp_min_eig"] = is_completely_positive(v1)[1]
    stats["v2_cp_min_eig"] = is_completely_positive(v2)[1]
    return NormResult(value, lower, {"v1": v1, "v2": v2}, stats)


def dec_norm_selfadjoint(T, reduce=True, gap_tol=GAP_TOL, feas_tol=FEAS_TOL):
    """min ||(T1 + T2)(1)|| over CP T1, T2 with T = T1 - T2 (requires T° = T)."""
    return dec_norm_selfadjoint_result(T, reduce, gap_tol, feas_tol).value


def dec_norm_selfadjoint_result(T, reduce=True, gap_tol=GAP_TOL, feas_tol=FEAS_TOL):
    if not is_hermitian_preserving(T, 1e-10):
        raise NormError("dec_norm_selfadjoint needs T° = T")
    n = T.dim
    if _zero(T):
        return NormResult(0.0, 0.0, stats={"short_circuit": "zero map"})
    psi = _schur_symbol(T) if reduce else None
    if psi is not None:
        # T1 = Schur(P), T2 = Schur(P - psi): P PSD, P - psi PSD, min max diag(2P - psi)
        m = n
        J = psi
        tr_diag = True
    else:
        if n > MAX_DEC_SA_DIM:
            raise NormError(f"general dec_norm_selfadjoint limited to dim <= {MAX_DEC_SA_DIM}")
        m = n * n
        J = T.choi
        tr_diag = False
    Hb = hermitian_basis(m)
    nb = len(Hb)
    nv = nb + 1
    L = LmiBuilder(nv)
    g = np.zeros(nv)
    g[-1] = 1.0
    L.minimize(g)
    Fk = np.zeros((nv, m, m), dtype=complex)
    Fk[:nb] = Hb
    L.add_lmi(np.zeros((m, m), dtype=complex), Fk)     # P PSD
    L.add_lmi(-J, Fk)                                   # P - J PSD
    if tr_diag:
        d = np.real(np.einsum("kii->ki", Hb))
        for i in range(n):
            fk = np.zeros(nv)
            fk[:nb] = -2 * d[:, i]
            fk[-1] = 1.0
            L.add_scalar(float(np.real(J[i, i])), fk)
    else:
        trb = np.array([partial_trace(h, n, n, over="first") for h in Hb])
        Gk = np.zeros((nv, n, n), dtype=complex)
        Gk[:nb] = -2 * trb
        Gk[-1] = np.eye(n)
        L.add_lmi(partial_trace(J, n, n, over="first"), Gk)
    value, z, sol, stats = _solve_lmi(L, "selfadjoint dec norm", gap_tol, feas_tol)
    P = vec_to_herm(z[:nb], m)
    stats["path"] = "schur" if tr_diag else "choi"
    return NormResult(value, -sol.primal_value, {"T1": P, "T2": P - J}, stats)


# ---------------------------------------------------------------------------
# Fourier-Stieltjes norm
# ---------------------------------------------------------------------------

def _symmetric_params(G):
    """Basis of functions psi with psi(s^-1) = conj(psi(s)), as an array (k, |G|)."""
    out = []
    seen = set()
    for s in range(G.order):
        if s in seen:
            continue
        si = int(G.inv[s])
        seen.update({s, si})
        e = np.zeros(G.order, dtype=complex)
        if si == s:
            e[s] = 1
            out.append(e)
        else:
            e[s], e[si] = 1, 1
            out.append(e)
            f = np.zeros(G.order, dtype=complex)
            f[s], f[si] = 1j, -1j
            out.append(f)
    return np.array(out)


def _gram_stack(G, fs):
    """Gram matrices [f(s^-1 t)] for a stack of functions."""
    idx = G.mult[G.inv]
    return fs[:, idx]


def bg_norm_sdp(phi, gap_tol=GAP_TOL, feas_tol=FEAS_TOL):
    return bg_norm_sdp_result(phi, gap_tol, feas_tol).value


def bg_norm_sdp_result(phi, gap_tol=GAP_TOL, feas_tol=FEAS_TOL):
    """min t over psi1, psi2 with psi_i(e) <= t and the 2 x 2 block Gram matrix PSD."""
    G = phi.group
    if np.abs(phi.values).max() == 0:
        z = GroupSymbol(G, np.zeros(G.order))
        return NormResult(0.0, 0.0, {"psi1": z, "psi2": z}, {"short_circuit": "zero symbol"})
    B = _symmetric_params(G)
    k = len(B)
    nv = 2 * k + 1
    n = G.order
    grams = _gram_stack(G, B)
    L = LmiBuilder(nv)
    g = np.zeros(nv)
    g[-1] = 1.0
    L.minimize(g)
    F0 = np.zeros((2 * n, 2 * n), dtype=complex)
    F0[:n, n:] = phi.gram()
    F0[n:, :n] = phi.circ().gram()
    Fk = np.zeros((nv, 2 * n, 2 * n), dtype=complex)
    Fk[:k, :n, :n] = grams
    Fk[k:2 * k, n:, n:] = grams
    L.add_lmi(F0, Fk)
    e = G.identity
    for side in range(2):
        fk = np.zeros(nv)
        fk[side * k:(side + 1) * k] = -np.real(B[:, e])
        fk[-1] = 1.0
        L.add_scalar(0.0, fk)
    value, z, sol, stats = _solve_lmi(L, "B(G) norm", gap_tol, feas_tol)
    psi1 = GroupSymbol(G, z[:k] @ B)
    psi2 = GroupSymbol(G, z[k:2 * k] @ B)
    return NormResult(value, -sol.primal_value, {"psi1": psi1, "psi2": psi2}, stats)


def bg_norm_product(phi, gap_tol=GAP_TOL, feas_tol=FEAS_TOL):
    """inf psi1(e) * psi2(e) over the same block condition, via psi1(e) <= 1, min psi2(e).

    Equals bg_norm_sdp(phi)^2 by the rescaling psi1 -> c psi1, psi2 -> psi2 / c.
    """
    G = phi.group
    if np.abs(phi.values).max() == 0:
        return 0.0
    B = _symmetric_params(G)
    k = len(B)
    n = G.order
    grams = _gram_stack(G, B)
    L = LmiBuilder(2 * k)
    g = np.zeros(2 * k)
    g[k:] = np.real(B[:, G.identity])
    L.minimize(g)
    F0 = np.zeros((2 * n, 2 * n), dtype=complex)
    F0[:n, n:] = phi.gram()
    F0[n:, :n] = phi.circ().gram()
    Fk = np.zeros((2 * k, 2 * n, 2 * n), dtype=complex)
    Fk[:k, :n, :n] = grams
    Fk[k:, n:, n:] = grams
    L.add_lmi(F0, Fk)
    fk = np.zeros(2 * k)
    fk[:k] = -np.real(B[:, G.identity])
    L.add_scalar(1.0, fk)
    value, z, sol, stats = _solve_lmi(L, "B(G) product form", gap_tol, feas_tol)
    return value


def jordan_bg_norm(phi, gap_tol=GAP_TOL, feas_tol=FEAS_TOL):
    return jordan_bg_norm_result(phi, gap_tol, feas_tol).value


def jordan_bg_norm_result(phi, gap_tol=GAP_TOL, feas_tol=FEAS_TOL):
    """min phi1(e) + phi2(e) over positive definite phi1, phi2 with phi = phi1 - phi2."""
    if not phi.is_self_circ(1e-10):
        raise NormError("jordan_bg_norm needs conj(phi) = phi check")
    G = phi.group
    if np.abs(phi.values).max() == 0:
        return NormResult(0.0, 0.0, stats={"short_circuit": "zero symbol"})
    B = _symmetric_params(G)
    k = len(B)
    grams = _gram_stack(G, B)
    e = G.identity
    L = LmiBuilder(k)
    # objective phi1(e) + phi2(e) = 2 phi1(e) - phi(e); the constant is added back below
    L.minimize(2 * np.real(B[:, e]))
    L.add_lmi(np.zeros_like(grams[0]), grams)
    L.add_lmi(-phi.gram(), grams)
    value, z, sol, stats = _solve_lmi(L, "Jordan B(G) norm", gap_tol, feas_tol)
    phi1 = GroupSymbol(G, z @ B)
    c = float(np.real(phi.at_identity))
    return NormResult(value - c, -sol.primal_value - c, {"phi1": phi1, "phi2": phi1 - phi}, stats)


def characters(G):
    """Character table (|G| x |G|, rows are characters) of an abelian group."""
    if not G.is_abelian():
        raise NormError("characters() needs an abelian group")
    from .vn import regular_stack

    n = G.order
    L = regular_stack(G)
    rng = np.random.default_rng(12345)
    c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    A = np.tensordot(c, L, axes=1)
    # A is normal with distinct eigenvalues for generic c; its eigenvectors diagonalize every lambda_s
    _, V = np.linalg.eig(A)
    V /= np.linalg.norm(V, axis=0)
    chi = np.einsum("ai,sab,bi->is", V.conj(), L, V)
    orders = np.array([G.element_order(s) for s in range(n)])
    k = np.round(np.angle(chi) * orders / (2 * np.pi))
    chi = np.exp(2j * np.pi * k / orders)
    if np.abs(np.abs(chi @ chi.conj().T) / n - np.eye(n)).max() > 1e-8:
        raise NormError("failed to separate the characters")
    return chi


def bg_norm_abelian(phi):
    """sum over characters chi of |(1/|G|) sum_s phi(s) conj(chi(s))|."""
    G = phi.group
    chi = characters(G)
    coeffs = chi.conj() @ phi.values / G.order
    return float(np.abs(coeffs).sum())


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class NormReport:
    subject: str
    cb: float = None
    dec: float = None
    bg: float = None
    oracle_values: dict = field(default_factory=dict)
    solver_stats: dict = field(default_factory=dict)

    def max_discrepancy(self):
        vals = [v for v in (self.cb, self.dec, self.bg) if v is not None]
        vals += [v for v in self.oracle_values.values() if v is not None]
        return max(vals) - min(vals) if vals else 0.0

    def to_dict(self):
        return {"subject": self.subject, "cb": self.cb, "dec": self.dec, "bg": self.bg,
                "oracle_values": self.oracle_values, "solver_stats": self.solver_stats,
                "max_discrepancy": self.max_discrepancy()}


def symbol_norm_report(phi, which=("bg", "dec", "cb"), subject="symbol", reduce=True):
    """All requested norms of phi and of its Fourier multiplier, plus closed-form oracles."""
    from .schur import fourier_multiplier, is_positive_definite

    rep = NormReport(subject)
    M = fourier_multiplier(phi)
    if "bg" in which:
        r = bg_norm_sdp_result(phi)
        rep.bg, rep.solver_stats["bg"] = r.value, r.stats
    if "dec" in which:
        r = dec_norm_result(M, reduce=reduce)
        rep.dec = r.value
        rep.solver_stats["dec"] = {k: v for k, v in r.stats.items()}
    if "cb" in which:
        r = cb_norm_result(M, reduce=reduce)
        rep.cb, rep.solver_stats["cb"] = r.value, r.stats
    if phi.group.is_abelian():
        rep.oracle_values["bg_abelian"] = bg_norm_abelian(phi)
    if is_positive_definite(phi):
        rep.oracle_values["pd_value_at_e"] = float(np.real(phi.at_identity))
    return rep


def map_norm_report(T, which=("dec", "cb"), subject="map"):
    rep = NormReport(subject)
    if "dec" in which:
        r = dec_norm_result(T)
        rep.dec, rep.solver_stats["dec"] = r.value, r.stats
    if "cb" in which:
        r = cb_norm_result(T)
        rep.cb, rep.solver_stats["cb"] = r.value, r.stats
    if is_completely_positive(T)[0]:
        rep.oracle_values["cp_norm_of_T1"] = operator_norm(T.apply(np.eye(T.dim)))
    return rep
