from fractions import Fraction

import numpy as np
import pytest

from artifact.amenability import (DensityFn, LayerCakeError, RegionError, conjugation_defect,
                                  doubling_inequality_check, inner, inner_folner_ratio,
                                  interval_overlap_closed_form, l1_distance, layer_cake_check, layer_cake_select,
                                  overlap_sum, pd_smoothing)
from artifact.balls import enumerate_ball
from artifact.groups import construct_group, subgroups
from artifact.schur import is_positive_definite
from artifact.verification import random_layer_cake_instance


@pytest.fixture(scope="module")
def heis():
    return enumerate_ball("heisenberg-Z", 10)


def _heis_mul(g, h):
    # (a, b, c)(a', b', c') = (a + a', b + b', c + c' - a'b)
    return (g[0] + h[0], g[1] + h[1], g[2] + h[2] - h[0] * g[1])


# ---------------------------------------------------------------------------
# inner Folner ratios and conjugation defects
# ---------------------------------------------------------------------------

def test_ratio_trivial_cases():
    Z = construct_group("Z6")
    assert all(inner_folner_ratio({0, 1, 3}, s, Z) == 0 for s in range(6))
    S = construct_group("S3")
    assert all(inner_folner_ratio(range(6), s, S) == 0 for s in range(6))
    # {e, t} for a transposition t is moved by any element outside its centralizer
    t = next(g for g in range(6) if S.element_order(g) == 2)
    s = next(g for g in range(6) if S.mul(g, t) != S.mul(t, g))
    assert inner_folner_ratio({0, t}, s, S) == 1.0


def test_heisenberg_ratios_frozen(heis):
    x, y = heis.fam.generators()
    want = [Fraction(4, 5), Fraction(16, 17), Fraction(44, 53), Fraction(100, 135)]
    for r, w in enumerate(want, start=1):
        for s in (x, y):
            assert abs(inner_folner_ratio(heis.sub_ball(r), s, heis) - float(w)) < 1e-15


def test_heisenberg_ratios_decrease_from_radius_two(heis):
    x, y = heis.fam.generators()
    for s in (x, y, heis.inv(x), heis.inv(y)):
        ratios = [inner_folner_ratio(heis.sub_ball(r), s, heis) for r in range(2, 9)]
        assert all(b <= a for a, b in zip(ratios, ratios[1:]))
    # radius 1 to 2 goes up
    assert inner_folner_ratio(heis.sub_ball(2), x, heis) > inner_folner_ratio(heis.sub_ball(1), x, heis)


def test_ratio_needs_region(heis):
    small = enumerate_ball("heisenberg-Z", 3)
    with pytest.raises(RegionError):
        inner_folner_ratio(small.sub_ball(3), small.fam.generators()[0], small)


def test_defect_examples(heis):
    G = construct_group("S3")
    u = DensityFn.uniform(range(6))
    assert all(conjugation_defect(u, s, G) == 0 for s in range(6))
    d = DensityFn.indicator([0])
    assert all(conjugation_defect(d, s, G) == 0 for s in range(6))
    V = heis.sub_ball(3)
    f = DensityFn.indicator(V)
    x = heis.fam.generators()[0]
    assert abs(conjugation_defect(f, x, heis) - inner_folner_ratio(V, x, heis)) < 1e-14


def test_defect_equals_ratio(heis):
    rng = np.random.default_rng(0)
    gens = heis.fam.generators()
    for r in range(1, 6):
        V = heis.sub_ball(r)
        for s in gens + [heis.inv(g) for g in gens]:
            assert abs(conjugation_defect(DensityFn.indicator(V), s, heis) - inner_folner_ratio(V, s, heis)) < 1e-14
    G = construct_group("D4")
    for _ in range(10):
        V = set(rng.choice(8, size=int(rng.integers(1, 8)), replace=False).tolist())
        s = int(rng.integers(8))
        assert abs(conjugation_defect(DensityFn.indicator(V), s, G) - inner_folner_ratio(V, s, G)) < 1e-14


def test_inner_moves_support():
    G = construct_group("S3")
    f = DensityFn.from_dict({1: 0.25, 3: 0.75}, normalized=True)
    for s in range(6):
        g = inner(f, s, G)
        for t in range(6):
            # (inner_s f)(t) = f(s^-1 t s)
            assert g.as_dict().get(t, 0.0) == f.as_dict().get(G.conj(s, t), 0.0)


def test_density_validation():
    with pytest.raises(ValueError):
        DensityFn((0, 1), [0.5, -0.1])
    with pytest.raises(ValueError):
        DensityFn((0, 0), [0.5, 0.5])
    with pytest.raises(ValueError):
        DensityFn((0, 1), [0.5, 0.6], True)
    with pytest.raises(ValueError):
        conjugation_defect(DensityFn((0,), [2.0]), 0, construct_group("Z2"))


# ---------------------------------------------------------------------------
# smoothing
# ---------------------------------------------------------------------------

def test_smoothing_examples():
    G = construct_group("S3")
    assert pd_smoothing(DensityFn.indicator([0]), G).as_dict() == {0: 1.0}
    Z2 = construct_group("Z2")
    g = pd_smoothing(DensityFn((0, 1), [0.5, 0.5], True), Z2)
    assert g.as_dict() == {0: 0.5, 1: 0.5}


@pytest.mark.parametrize("spec", ["Z5", "S3", "D4", "Q8"])
def test_smoothing_is_pd(spec):
    G = construct_group(spec)
    rng = np.random.default_rng(1)
    for _ in range(10):
        w = rng.random(G.order)
        f = DensityFn(tuple(range(G.order)), w / w.sum(), True)
        g = pd_smoothing(f, G)
        assert is_positive_definite(g.to_symbol(G), tol=1e-10)
        assert abs(g.l1() - 1) < 1e-12
        assert abs(g.as_dict()[0] - f.l2sq()) < 1e-15


def test_smoothing_halves_defect(heis):
    rng = np.random.default_rng(2)
    gens = heis.fam.generators()
    for r in range(1, 4):
        V = sorted(heis.sub_ball(r))
        w = rng.random(len(V))
        f = DensityFn(tuple(V), w / w.sum(), True)
        g = pd_smoothing(f, heis)
        for t in gens:
            assert conjugation_defect(g, t, heis) <= 2 * conjugation_defect(f, t, heis) + 1e-12


def test_smoothing_ball3_frozen(heis):
    f = DensityFn.indicator(heis.sub_ball(3))
    g = pd_smoothing(f, heis)
    x = heis.fam.generators()[0]
    assert len(g.support) == 593
    assert abs(g.l1() - 1) < 1e-12
    assert conjugation_defect(g, x, heis) <= 2 * conjugation_defect(f, x, heis)


# ---------------------------------------------------------------------------
# layer cake
# ---------------------------------------------------------------------------

def test_layer_cake_single_copy():
    f = DensityFn((0, 1, 2), [0.5, 0.3, 0.2], True)
    t = layer_cake_select(f, [f], 0.1)
    # smallest qualifying threshold: midpoint of 0 and the smallest value
    assert t == 0.1


def test_layer_cake_shift():
    f = DensityFn.uniform(range(10))
    g = DensityFn.uniform(range(1, 11))
    assert abs(l1_distance(f, g) - 0.2) < 1e-15
    t = layer_cake_select(f, [g], 0.3)
    assert t == 0.05
    assert layer_cake_check(f, [g], 0.3, t)


def test_layer_cake_triangle():
    m = 9
    tri = np.minimum(np.arange(1, m + 1), np.arange(m, 0, -1)).astype(float)
    tri /= tri.sum()
    f = DensityFn(tuple(range(m)), tri, True)
    gs = []
    for k in range(3):
        g = tri.copy()
        # move mass 0.1/6 from one point to another: l1 defect 0.1/3 each
        g[k] += 0.1 / 6
        g[m - 1 - k] -= 0.1 / 6
        gs.append(DensityFn(tuple(range(m)), g))
    assert abs(sum(l1_distance(f, g) for g in gs) - 0.1) < 1e-12
    t = layer_cake_select(f, gs, 0.12)
    assert layer_cake_check(f, gs, 0.12, t)
    # every smaller threshold class fails the condition
    vals = sorted({0.0} | {float(w) for h in (f, *gs) for w in h.weights})
    for lo, hi in zip(vals[:-1], vals[1:]):
        mid = (lo + hi) / 2
        if mid < t:
            assert not layer_cake_check(f, gs, 0.12, mid)
    assert t > 0


def test_layer_cake_random():
    rng = np.random.default_rng(3)
    for _ in range(30):
        f, gs, eps = random_layer_cake_instance(rng)
        t = layer_cake_select(f, gs, eps)
        assert t > 0 and layer_cake_check(f, gs, eps, t)


def test_layer_cake_precondition():
    f = DensityFn.uniform(range(4))
    g = DensityFn.uniform(range(2, 6))
    with pytest.raises(LayerCakeError):
        layer_cake_select(f, [g], 0.5)
    with pytest.raises(LayerCakeError):
        layer_cake_select(DensityFn((0,), [2.0]), [], 1.0)


# ---------------------------------------------------------------------------
# doubling sums
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("spec", ["Z6", "S3", "D4", "Q8", "S4"])
def test_subgroup_equality(spec):
    G = construct_group(spec)
    for K in subgroups(G):
        row = doubling_inequality_check([K], 1, G)[0]
        assert row.lhs == row.overlap_sum == len(K) ** 3
        assert row.passed


def test_interval_closed_form():
    Z = enumerate_ball("Z1", 100)
    for r in range(51):
        V = [(s,) for s in range(-r, r + 1)]
        row = doubling_inequality_check([V], 2, Z)[0]
        assert row.overlap_sum == interval_overlap_closed_form(r)
        assert row.passed


def test_heisenberg_overlaps_frozen(heis):
    sums = [overlap_sum(heis.sub_ball(r), heis) for r in range(1, 5)]
    assert sums == [41, 845, 16813, 306489]
    # brute force with the explicit product
    for r, want in zip(range(1, 3), sums):
        V = set(heis.sub_ball(r))
        assert sum(len(V & {_heis_mul(s, v) for v in V}) ** 2 for s in V) == want
    rows = doubling_inequality_check([heis.sub_ball(r) for r in range(1, 5)], 2, heis)
    assert [r.passed for r in rows] == [True, True, False, False]
    assert all(abs(r.min_constant - c) < 5e-3 for r, c in zip(rows, [1.450, 1.798, 2.069, 2.002]))
