"""Registry of property checks and the suites that run them.

Each check takes (group, rng, cfg) and returns a list of CheckRow.  Rows carry
the theorem id, a one-line statement of the property (the "anchor"), the
observed discrepancy and the tolerance it was held to.
"""
import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .amenability import (DensityFn, conjugation_defect, doubling_inequality_check, inner,
                          interval_overlap_closed_form, layer_cake_check, layer_cake_select, l1_distance,
                          pd_smoothing)
from .balls import enumerate_ball
from .groups import construct_group, subgroups
from .norms import bg_norm_sdp, cb_norm, dec_norm
from .projections import project_fourier, project_herz_schur
from .schur import (fourier_multiplier, gram_min_eig, herz_schur_lift, pairing_lhs, pairing_rhs,
                    random_pd_symbol, schur_superop, symbol_extraction)
from .superop import (is_completely_positive, random_cp_map, random_superoperator, tensor_with_identity)
from .symbols import BiSymbol, GroupSymbol
from .vn import VnElement, lp_norm, random_vn_element, unit_conjugation_defect

SCHEMA = "artifact.verify/1"


@dataclass
class CheckRow:
    theorem: str
    anchor: str
    group: str
    case: str
    discrepancy: float
    tolerance: float
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class SuiteConfig:
    n_symbols: int = 5
    n_maps: int = 5
    tol: float = 1e-4
    exact_tol: float = 1e-9


# ---------------------------------------------------------------------------
# random inputs
# ---------------------------------------------------------------------------

def random_symbol(G, rng):
    """Real and imaginary parts uniform on [-1, 1]."""
    return GroupSymbol(G, rng.uniform(-1, 1, G.order) + 1j * rng.uniform(-1, 1, G.order))


def random_self_circ_symbol(G, rng):
    phi = random_symbol(G, rng)
    return (phi + phi.circ()) * 0.5


def random_bisymbol(G, rng):
    n = G.order
    return BiSymbol(G, rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n)))


def symbol_family(G, rng, n):
    """n uniform symbols, then one positive definite and one self-circ symbol."""
    out = [("uniform", random_symbol(G, rng)) for _ in range(n)]
    out.append(("pd", random_pd_symbol(G, rng)))
    out.append(("self-circ", random_self_circ_symbol(G, rng)))
    return out


def _row(theorem, group, case, disc, tol, passed=None, **detail):
    passed = bool(disc <= tol) if passed is None else bool(passed)
    return CheckRow(theorem, ANCHORS[theorem], group, case, float(disc), float(tol), passed, detail)


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def check_dec_eq_bg(G, rng, cfg):
    rows = []
    for k, (fam, phi) in enumerate(symbol_family(G, rng, cfg.n_symbols)):
        d, b = dec_norm(fourier_multiplier(phi)), bg_norm_sdp(phi)
        rows.append(_row("dec-eq-bg", G.name, f"{fam}-{k}", abs(d - b), cfg.tol * max(1.0, b), dec=d, bg=b))
    return rows


def check_cb_eq_dec(G, rng, cfg):
    rows = []
    for k, (fam, phi) in enumerate(symbol_family(G, rng, cfg.n_symbols)):
        M = fourier_multiplier(phi)
        c, d = cb_norm(M), dec_norm(M)
        rows.append(_row("cb-eq-dec", G.name, f"{fam}-{k}", abs(c - d), cfg.tol * max(1.0, d), cb=c, dec=d))
    return rows


def check_pd_norm(G, rng, cfg):
    rows = []
    for k in range(cfg.n_symbols):
        phi = random_pd_symbol(G, rng)
        b, e = bg_norm_sdp(phi), float(np.real(phi.at_identity))
        rows.append(_row("pd-norm", G.name, f"pd-{k}", abs(b - e), cfg.tol, bg=b, phi_e=e))
    return rows


def check_transference(G, rng, cfg):
    rows = []
    n = G.order
    for k in range(cfg.n_symbols):
        phi = random_symbol(G, rng)
        M = fourier_multiplier(phi)
        S = schur_superop(herz_schur_lift(phi))
        c = cb_norm(M)
        rows.append(_row("transference", G.name, f"same-map-{k}", float(np.abs(M.choi - S.choi).max()), 0.0))
        # operator-norm ratios on M_2(VN(G)) can never beat the cb norm
        A2 = tensor_with_identity(M, 2)
        worst = 0.0
        for _ in range(10):
            blocks = [[random_vn_element(G, rng).matrix for _ in range(2)] for _ in range(2)]
            X = np.block(blocks)
            worst = max(worst, np.linalg.norm(A2.apply(X), 2) / np.linalg.norm(X, 2))
        rows.append(_row("transference", G.name, f"vn-lower-bound-{k}", max(0.0, worst - c), cfg.tol,
                         ratio=worst, cb=c))
    return rows


def check_kappa_contractive(G, rng, cfg):
    rows = []
    n = G.order
    for k in range(cfg.n_maps):
        T = random_superoperator(n, rng)
        P, _ = project_fourier(T, G)
        before, after = cb_norm(T), cb_norm(P)
        rows.append(_row("kappa-contractive", G.name, f"random-{k}", max(0.0, after - before), cfg.tol,
                         cb_before=before, cb_after=after))
    return rows


def check_kappa_cp(G, rng, cfg):
    rows = []
    n = G.order
    for k in range(cfg.n_maps):
        T = random_cp_map(n, rng)
        P, _ = project_fourier(T, G)
        w = is_completely_positive(P)[1]
        rows.append(_row("kappa-cp", G.name, f"cp-{k}", max(0.0, -w), 1e-8, min_eig=w))
        PP, _ = project_fourier(P, G)
        rows.append(_row("kappa-cp", G.name, f"idempotent-{k}", float(np.abs(PP.choi - P.choi).max()),
                         cfg.exact_tol))
        M = fourier_multiplier(random_symbol(G, rng))
        F, _ = project_fourier(M, G)
        rows.append(_row("kappa-cp", G.name, f"fixes-multiplier-{k}", float(np.abs(F.choi - M.choi).max()),
                         cfg.exact_tol))
    return rows


def herz_schur_defect(psi):
    G = psi.group
    m = G.mult
    return float(np.abs(psi.values[m[:, None, :], m[None, :, :]] - psi.values[:, :, None]).max())


def check_q_herz_schur(G, rng, cfg):
    rows = []
    for k in range(cfg.n_maps):
        psi = random_bisymbol(G, rng)
        q = project_herz_schur(psi)
        rows.append(_row("q-herz-schur", G.name, f"invariance-{k}", herz_schur_defect(q), cfg.exact_tol))
        rows.append(_row("q-herz-schur", G.name, f"idempotent-{k}",
                         float(np.abs(project_herz_schur(q).values - q.values).max()), cfg.exact_tol))
        before, after = cb_norm(schur_superop(psi)), cb_norm(schur_superop(q))
        rows.append(_row("q-herz-schur", G.name, f"contractive-{k}", max(0.0, after - before), cfg.tol,
                         cb_before=before, cb_after=after))
        # a PSD bi-symbol gives a CP Schur multiplier; its average must stay CP
        A = rng.standard_normal((G.order, G.order)) + 1j * rng.standard_normal((G.order, G.order))
        q_cp = project_herz_schur(BiSymbol(G, A @ A.conj().T))
        w = is_completely_positive(schur_superop(q_cp))[1]
        rows.append(_row("q-herz-schur", G.name, f"cp-{k}", max(0.0, -w), 1e-8, min_eig=w))
    return rows


def check_pairing(G, rng, cfg):
    rows = []
    n = G.order
    for k in range(cfg.n_maps):
        u = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        v = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        x, y = random_vn_element(G, rng), random_vn_element(G, rng)
        T = random_superoperator(n, rng)
        lhs, rhs = pairing_lhs(u, v, x, y, T), pairing_rhs(u, v, x, y, T)
        rows.append(_row("mxyT-pairing", G.name, f"pairing-{k}", abs(lhs - rhs), cfg.exact_tol))
    rows.append(_row("mxyT-pairing", G.name, "unit-conjugation", unit_conjugation_defect(G), cfg.exact_tol))
    return rows


LP_PAIRS = ((1, np.inf), (2, 2), (np.inf, 1))


def check_extracted_cb_bound(G, rng, cfg):
    rows = []
    n = G.order
    for k in range(cfg.n_maps):
        T = random_superoperator(n, rng)
        x, y = random_vn_element(G, rng), random_vn_element(G, rng)
        cT = cb_norm(T)
        cS = cb_norm(schur_superop(symbol_extraction(x, y, T)))
        for p, q in LP_PAIRS:
            bound = cT * lp_norm(x, p) * lp_norm(y, q)
            rows.append(_row("lemma-cb-bound", G.name, f"random-{k}-p={p}", max(0.0, cS - bound), cfg.tol,
                             cb_schur=cS, bound=bound))
        # CP map with positive x, y gives a CP Schur multiplier
        Tc = random_cp_map(n, rng)
        xp, yp = random_vn_element(G, rng, positive=True), random_vn_element(G, rng, positive=True)
        w = is_completely_positive(schur_superop(symbol_extraction(xp, yp, Tc)))[1]
        rows.append(_row("lemma-cb-bound", G.name, f"cp-{k}", max(0.0, -w), 1e-8, min_eig=w))
    return rows


def check_disco(G, rng, cfg):
    rows = []
    for K in subgroups(G):
        r = doubling_inequality_check([K], 1, G)[0]
        rows.append(_row("disco-equality", G.name, f"subgroup-order-{len(K)}", abs(r.lhs - r.overlap_sum), 0,
                         lhs=r.lhs, rhs=r.overlap_sum))
    return rows


def check_disco_interval(rng, cfg, r_max=50):
    rows = []
    Z = enumerate_ball("Z1", 2 * r_max)
    for r in range(r_max + 1):
        V = [(s,) for s in range(-r, r + 1)]
        row = doubling_inequality_check([V], 2, Z)[0]
        closed = interval_overlap_closed_form(r)
        rows.append(_row("disco-equality", "Z", f"interval-r={r}", abs(row.overlap_sum - closed), 0,
                         passed=row.passed and row.overlap_sum == closed, lhs=row.lhs, rhs=row.rhs))
    return rows


def random_layer_cake_instance(rng, size=None):
    """f on {0..m-1} plus perturbed copies whose total l1 defect is below eps."""
    m = int(size or rng.integers(5, 40))
    f = rng.random(m) ** 2
    f /= f.sum()
    k = int(rng.integers(1, 4))
    gs = []
    for _ in range(k):
        g = np.clip(f + rng.normal(0, 0.3 / m, m), 0, None)
        if rng.random() < 0.3:
            g = np.roll(g, 1)
        gs.append(g)
    total = sum(np.abs(f - g).sum() for g in gs)
    eps = total * (1 + rng.uniform(0.01, 1.0))
    F = DensityFn(tuple(range(m)), f, True)
    Gs = [DensityFn.from_dict({i: float(w) for i, w in enumerate(g)}) for g in gs]
    return F, Gs, eps


def check_layer_cake(rng, cfg, count=None):
    rows = []
    for k in range(count or 4 * cfg.n_symbols):
        f, gs, eps = random_layer_cake_instance(rng)
        t = layer_cake_select(f, gs, eps)
        ok = t > 0 and layer_cake_check(f, gs, eps, t)
        rows.append(_row("layer-cake", "-", f"instance-{k}", 0.0 if ok else 1.0, 0.0, passed=ok, t=t, eps=eps))
    return rows


def random_ball_density(ball, radius, rng):
    V = sorted(ball.sub_ball(radius))
    w = rng.random(len(V))
    return DensityFn(tuple(V), w / w.sum(), True)


def check_smoothing_balls(rng, cfg, count=None, max_radius=4):
    rows = []
    B = enumerate_ball("heisenberg-Z", 2 * max_radius + 4)
    gens = B.fam.generators()
    for k in range(count or 2 * cfg.n_symbols):
        r = int(rng.integers(1, max_radius + 1))
        f = random_ball_density(B, r, rng) if rng.random() < 0.5 else DensityFn.indicator(B.sub_ball(r))
        t = gens[int(rng.integers(len(gens)))]
        if rng.random() < 0.5:
            t = B.inv(t)
        g = pd_smoothing(f, B)
        lhs, rhs = conjugation_defect(g, t, B), 2 * conjugation_defect(f, t, B)
        rows.append(_row("smoothing-bound", "heisenberg-Z", f"r={r}-{k}", max(0.0, lhs - rhs), 1e-12,
                         lhs=lhs, rhs=rhs))
    return rows


def check_smoothing_pd(G, rng, cfg):
    rows = []
    for k in range(cfg.n_symbols):
        w = rng.random(G.order) * (rng.random(G.order) < 0.7)
        w[G.identity] += 1e-3
        f = DensityFn(tuple(range(G.order)), w / w.sum(), True)
        g = pd_smoothing(f, G).to_symbol(G)
        e = gram_min_eig(g.gram())
        rows.append(_row("smoothing-bound", G.name, f"pd-{k}", max(0.0, -e), 1e-10, min_eig=e))
    return rows


ANCHORS = {
    "dec-eq-bg": "decomposable norm of M_phi equals the B(G) norm of phi",
    "cb-eq-dec": "cb and decomposable norms of M_phi agree on a finite group",
    "pd-norm": "B(G) norm of a positive definite phi equals phi(e)",
    "transference": "M_phi and the Schur multiplier of phi(st^-1) are one map; VN(G) ratios stay below cb",
    "kappa-contractive": "the Fourier projection does not increase the cb norm",
    "kappa-cp": "the Fourier projection is idempotent, fixes multipliers and keeps complete positivity",
    "q-herz-schur": "Herz-Schur averaging is right invariant, idempotent, cb contractive and CP preserving",
    "mxyT-pairing": "coproduct pairing equals the pairing with the extracted Schur multiplier; "
                    "W conjugates E_st (x) lambda_u to E_st (x) lambda_sut^-1",
    "lemma-cb-bound": "extracted Schur multiplier has cb norm at most cb(T) ||x||_p ||y||_p*",
    "disco-equality": "|K|^3 equals sum over K of |K cap sK|^2 for subgroups; intervals of Z pass with c = 2",
    "layer-cake": "a level t with small symmetric differences exists and re-verifies",
    "smoothing-bound": "smoothing at most doubles the conjugation defect and is positive definite",
}

# theorem id -> (per-group check or None, group-free check or None)
REGISTRY = {
    "dec-eq-bg": (check_dec_eq_bg, None),
    "cb-eq-dec": (check_cb_eq_dec, None),
    "pd-norm": (check_pd_norm, None),
    "transference": (check_transference, None),
    "kappa-contractive": (check_kappa_contractive, None),
    "kappa-cp": (check_kappa_cp, None),
    "q-herz-schur": (check_q_herz_schur, None),
    "mxyT-pairing": (check_pairing, None),
    "lemma-cb-bound": (check_extracted_cb_bound, None),
    "disco-equality": (check_disco, check_disco_interval),
    "layer-cake": (None, check_layer_cake),
    "smoothing-bound": (check_smoothing_pd, check_smoothing_balls),
}


@dataclass
class VerificationSuite:
    groups: list
    theorems: list
    n_symbols: int = 5
    n_maps: int = 5
    seed: int = 0
    tol: float = 1e-4

    def __post_init__(self):
        unknown = [t for t in self.theorems if t not in REGISTRY]
        if unknown:
            raise ValueError(f"unknown theorem ids: {', '.join(unknown)}")

    def config(self):
        return SuiteConfig(self.n_symbols, self.n_maps, self.tol)


SUITES = {
    "quick": dict(groups=["Z2", "Z3"], n_symbols=2, n_maps=2),
    "default": dict(groups=["Z2", "Z3", "Z4", "S3"], n_symbols=4, n_maps=3),
    "full": dict(groups=["Z2", "Z3", "Z4", "Z6", "Z8", "S3", "D4", "Q8"], n_symbols=25, n_maps=25),
}


def make_suite(name, seed=0, theorems=None, groups=None, tol=1e-4):
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    spec = dict(SUITES[name])
    if groups:
        spec["groups"] = list(groups)
    return VerificationSuite(theorems=list(theorems or REGISTRY), seed=seed, tol=tol, **spec)


def _items(suite):
    items = []
    for ti, th in enumerate(suite.theorems):
        per_group, free = REGISTRY[th]
        if per_group is not None:
            items += [(th, ti, gi, g) for gi, g in enumerate(suite.groups)]
        if free is not None:
            items.append((th, ti, -1, None))
    return items


def _run_item(args):
    suite, (th, ti, gi, g) = args
    # every item draws from its own stream so results do not depend on scheduling
    rng = np.random.default_rng([suite.seed, ti, gi + 1])
    per_group, free = REGISTRY[th]
    cfg = suite.config()
    try:
        if g is None:
            return free(rng, cfg)
        return per_group(construct_group(g), rng, cfg)
    except Exception as err:  # a crash is a failed check, reported with its reason
        return [CheckRow(th, ANCHORS[th], g or "-", "error", float("inf"), cfg.tol, False,
                         {"error": f"{type(err).__name__}: {err}"})]


def run_suite(suite, jobs=1):
    items = [(suite, it) for it in _items(suite)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_item, items))
    else:
        results = [_run_item(it) for it in items]
    return [row for rows in results for row in rows]


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if np.isfinite(v) else str(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def summarize(rows):
    """One line per (theorem, group): counts and worst discrepancy."""
    table = {}
    for r in rows:
        key = (r.theorem, r.group)
        s = table.setdefault(key, {"theorem": r.theorem, "group": r.group, "anchor": r.anchor,
                                   "checks": 0, "failures": 0, "max_discrepancy": 0.0})
        s["checks"] += 1
        s["failures"] += int(not r.passed)
        s["max_discrepancy"] = max(s["max_discrepancy"], r.discrepancy)
    return list(table.values())


def suite_report(suite, rows):
    failures = [asdict(r) for r in rows if not r.passed]
    return _jsonable({
        "schema": SCHEMA,
        "suite": {"groups": suite.groups, "theorems": suite.theorems, "n_symbols": suite.n_symbols,
                  "n_maps": suite.n_maps, "seed": suite.seed, "tol": suite.tol},
        "passed": not failures,
        "summary": summarize(rows),
        "failures": failures,
        "rows": [asdict(r) for r in rows],
    })


def summary_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theorem", "group", "checks", "failures", "max_discrepancy", "anchor"])
    for s in summarize(rows):
        w.writerow([s["theorem"], s["group"], s["checks"], s["failures"], f"{s['max_discrepancy']:.3e}",
                    s["anchor"]])
    return buf.getvalue()


__all__ = ["CheckRow", "REGISTRY", "ANCHORS", "SUITES", "VerificationSuite", "make_suite", "run_suite",
           "suite_report", "summary_csv", "random_symbol", "random_self_circ_symbol", "random_bisymbol",
           "random_layer_cake_instance", "herz_schur_defect", "l1_distance", "inner", "VnElement"]
