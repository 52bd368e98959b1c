"""Inner-Folner ratios, conjugation defects, positive definite smoothing,
layer-cake thresholds and ball-doubling sums.

Everything is exact set or array arithmetic on an explicit region: a finite
group, or an enumerated ball of a finitely generated group.  A result that
would need an element outside the region raises RegionError instead of being
truncated.
"""
from dataclasses import dataclass, field

import numpy as np

from .groups import FiniteGroup
from .symbols import GroupSymbol

NORM_TOL = 1e-12


class RegionError(ValueError):
    pass


class LayerCakeError(ValueError):
    pass


class _FiniteRegion:
    def __init__(self, G):
        self.G = G
        self.identity = G.identity

    def mul(self, a, b):
        return int(self.G.mult[a, b])

    def inv(self, a):
        return int(self.G.inv[a])

    def __contains__(self, a):
        return isinstance(a, (int, np.integer)) and 0 <= a < self.G.order


def as_region(obj):
    """A FiniteGroup or an FgBall, viewed as something with mul, inv and membership."""
    if isinstance(obj, FiniteGroup):
        return _FiniteRegion(obj)
    return obj


def _conj(R, s, t):
    """s^-1 t s"""
    return R.mul(R.mul(R.inv(s), t), s)


def _inside(R, elements, what):
    for g in elements:
        if g not in R:
            raise RegionError(f"{what}: element {g!r} lies outside the enumerated region")


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------

@dataclass
class DensityFn:
    """Finitely supported non-negative function; ``support`` and ``weights`` align."""
    support: tuple
    weights: np.ndarray
    normalized: bool = field(default=False)

    def __post_init__(self):
        self.support = tuple(self.support)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if w.shape[0] != len(self.support):
            raise ValueError("support and weights differ in length")
        if len(set(self.support)) != len(self.support):
            raise ValueError("support has repeated elements")
        if (w < 0).any():
            raise ValueError("weights must be non-negative")
        self.weights = w
        if self.normalized and abs(w.sum() - 1) > NORM_TOL:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")

    @classmethod
    def from_dict(cls, d, normalized=False):
        items = [(g, v) for g, v in d.items() if v != 0]
        return cls(tuple(g for g, _ in items), [v for _, v in items], normalized)

    @classmethod
    def indicator(cls, V):
        V = list(V)
        return cls(tuple(V), np.full(len(V), 1.0 / len(V)), True)

    @classmethod
    def uniform(cls, V):
        return cls.indicator(V)

    def as_dict(self):
        return {g: float(w) for g, w in zip(self.support, self.weights) if w != 0}

    def l1(self):
        return float(self.weights.sum())

    def l2sq(self):
        return float(self.weights @ self.weights)

    def to_symbol(self, G):
        v = np.zeros(G.order)
        for g, w in zip(self.support, self.weights):
            v[g] += w
        return GroupSymbol(G, v)


def l1_distance(f, g):
    a, b = f.as_dict(), g.as_dict()
    return float(sum(abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in set(a) | set(b)))


def inner(f, s, region):
    """(inner_s f)(t) = f(s^-1 t s); its support is s supp(f) s^-1."""
    R = as_region(region)
    sinv = R.inv(s)
    moved = [_conj(R, sinv, g) for g in f.support]
    _inside(R, moved, "conjugation")
    return DensityFn(tuple(moved), f.weights.copy(), f.normalized)


# ---------------------------------------------------------------------------
# inner Folner quantities
# ---------------------------------------------------------------------------

def inner_folner_ratio(V, s, region):
    """|V symmetric-difference s^-1 V s| / |V|"""
    R = as_region(region)
    V = set(V)
    if not V:
        raise ValueError("V must be non-empty")
    W = {_conj(R, s, v) for v in V}
    _inside(R, W, "conjugation")
    return len(V ^ W) / len(V)


def conjugation_defect(f, s, region):
    """||f - inner_s f||_1"""
    if not f.normalized:
        raise ValueError("conjugation_defect expects a normalized density")
    return l1_distance(f, inner(f, s, region))


def pd_smoothing(f, region):
    """g(s) = sum_r f(sr) f(r).

    Positive definite whenever f is real; g(e) = ||f||_2^2 and ||g||_1 = ||f||_1^2.
    The support of g is supp(f) supp(f)^-1, which must lie in ``region``.
    """
    R = as_region(region)
    out = {}
    for a, fa in zip(f.support, f.weights):
        for b, fb in zip(f.support, f.weights):
            s = R.mul(a, R.inv(b))                       # s b = a
            out[s] = out.get(s, 0.0) + fa * fb
    _inside(R, out, "smoothing")
    g = DensityFn.from_dict(out)
    g.normalized = f.normalized and abs(g.l1() - 1) <= NORM_TOL
    return g


# ---------------------------------------------------------------------------
# layer cake
# ---------------------------------------------------------------------------

def _level_set(f, t):
    return {g for g, w in zip(f.support, f.weights) if w > t}


def _thresholds(f, gs):
    vals = {0.0}
    for h in (f, *gs):
        vals.update(float(w) for w in h.weights)
    vals = sorted(vals)
    # each open interval between consecutive values gives the same level sets
    return [(lo + hi) / 2 for lo, hi in zip(vals[:-1], vals[1:])]


def layer_cake_check(f, gs, eps, t):
    """Independent re-check: sum_k |{f>t} sym-diff {g_k>t}| < eps |{f>t}| with {f>t} non-empty."""
    A = frozenset(g for g, w in f.as_dict().items() if w > t)
    if not A:
        return False
    lhs = 0
    for h in gs:
        B = frozenset(g for g, w in h.as_dict().items() if w > t)
        lhs += len(A.symmetric_difference(B))
    return lhs < eps * len(A)


def layer_cake_select(f, gs, eps):
    """Smallest threshold t > 0 with sum_k |{f>t} sym-diff {g_k>t}| < eps |{f>t}|.

    Requires ||f||_1 = 1 and sum_k ||f - g_k||_1 < eps; integrating the level-set
    identity over t shows a good threshold then exists.
    """
    if abs(f.l1() - 1) > NORM_TOL:
        raise LayerCakeError("f must have unit mass")
    total = sum(l1_distance(f, h) for h in gs)
    if not total < eps:
        raise LayerCakeError(f"sum of distances {total!r} is not below eps = {eps!r}")
    for t in _thresholds(f, gs):
        A = _level_set(f, t)
        if not A:
            continue
        if sum(len(A ^ _level_set(h, t)) for h in gs) < eps * len(A):
            if not layer_cake_check(f, gs, eps, t):
                raise LayerCakeError(f"threshold {t!r} failed its independent re-check")
            return t
    raise LayerCakeError("no threshold qualifies although the precondition holds")


# ---------------------------------------------------------------------------
# doubling sums
# ---------------------------------------------------------------------------

@dataclass
class DoublingRow:
    size: int
    lhs: int                  # |V|^3
    overlap_sum: int          # sum_{s in V} |V cap sV|^2
    c: float
    rhs: float                # c^3 * overlap_sum
    passed: bool

    @property
    def min_constant(self):
        """Smallest c for which this ball passes."""
        return (self.lhs / self.overlap_sum) ** (1 / 3)

    def to_dict(self):
        return {"size": self.size, "lhs": self.lhs, "overlap_sum": self.overlap_sum, "c": self.c,
                "rhs": self.rhs, "passed": self.passed, "min_constant": self.min_constant}


def overlap_sum(V, region):
    R = as_region(region)
    V = set(V)
    return sum(len(V & {R.mul(s, v) for v in V}) ** 2 for s in V)


def doubling_inequality_check(balls, c, region):
    """|V|^3 <= c^3 sum_{s in V} |V cap sV|^2 for each V; exact integers when c is."""
    rows = []
    for V in balls:
        V = set(V)
        S = overlap_sum(V, region)
        L = len(V) ** 3
        rhs = c ** 3 * S
        rows.append(DoublingRow(len(V), L, S, c, rhs, L <= rhs))
    return rows


def interval_overlap_closed_form(r):
    """sum_{s=-r}^{r} (2r + 1 - |s|)^2"""
    return sum((2 * r + 1 - abs(s)) ** 2 for s in range(-r, r + 1))
