import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ordshrink import (Layout, build_basis, difference_matrix, hs_adapt, isotonic_decreasing_fit,
                       ms_adapt, ms_risk_estimate, pls_shrinkage, st_adapt, st_risk_estimate,
                       variance_high_component)
from ordshrink.oracle import brute_force_isotonic, brute_force_ms, isotonic_objective
from ordshrink.shrinkage import (apply_plan, default_threshold_cap, pls_adapt, plan_risk,
                                 st_candidates)

from conftest import random_layout


def basis_with(z, residual_ss=0.0, counts=None):
    p = len(z)
    layout = Layout.from_means(np.arange(p), np.zeros(p))
    basis = build_basis(layout, difference_matrix(p, 1))
    counts = basis.counts if counts is None else np.asarray(counts)
    return dataclasses.replace(basis, z=np.asarray(z, float), residual_ss=residual_ss,
                               counts=counts)


# --- variance ---------------------------------------------------------------

def test_high_component_by_substitution():
    est = variance_high_component(basis_with([2.0, 1.0, 1.0, 1.0]), n=4, q=2)
    assert est.sigma2 == pytest.approx(1.0)
    assert est.method == 'high_component' and est.q == 2


def test_high_component_reduces_to_ls():
    rng = np.random.default_rng(0)
    layout = random_layout(rng, 10)
    basis = build_basis(layout, difference_matrix(10, 2))
    est = variance_high_component(basis, layout.n, 10)
    assert est.sigma2 == pytest.approx(basis.residual_ss / (layout.n - 10))


def test_high_component_q_bounds():
    basis = basis_with([1.0, 2.0, 3.0], residual_ss=2.0, counts=[1, 1, 2])
    assert variance_high_component(basis, n=4, q=3).sigma2 == pytest.approx(2.0)
    for q in (0, 4):
        with pytest.raises(ValueError, match='invalid q'):
            variance_high_component(basis, n=4, q=q)
    with pytest.raises(ValueError, match='invalid q'):
        variance_high_component(basis_with([1.0, 2.0, 3.0]), n=3, q=3)


# --- PLS --------------------------------------------------------------------

def test_pls_examples():
    np.testing.assert_allclose(pls_shrinkage([0, 0, 2], 1).f, [1, 1, 1 / 3])
    np.testing.assert_array_equal(pls_shrinkage([0.0, 0.3, 5.0], 0).f, 1.0)
    np.testing.assert_array_equal(pls_shrinkage([0, 0, 2], math.inf).f, [1, 1, 0])
    with pytest.raises(ValueError, match='invalid penalty weight'):
        pls_shrinkage([0, 1], -0.1)


@given(st.lists(st.floats(0, 1e3), min_size=1, max_size=30),
       st.one_of(st.floats(0, 1e8), st.just(math.inf)))
def test_pls_is_monotone_shrinkage(lams, nu):
    f = pls_shrinkage(np.sort(lams), nu).f
    assert np.all((0 <= f) & (f <= 1))
    assert np.all(np.diff(f) <= 0)


def test_pls_adapt_beats_its_grid():
    rng = np.random.default_rng(2)
    lam = np.sort(rng.uniform(0, 10, 20))
    lam[0] = 0
    z = rng.normal(size=20) * np.linspace(3, 0.5, 20)
    plan = pls_adapt(lam, z, 1.0)
    for nu in np.logspace(-4, 4, 50):
        assert ms_risk_estimate(plan.f, z, 1.0) <= ms_risk_estimate(
            pls_shrinkage(lam, nu).f, z, 1.0) + 2e-3


# --- MS ---------------------------------------------------------------------

def test_ms_risk_examples():
    z = np.array([0.3, -2.0, 5.0])
    assert ms_risk_estimate(np.ones(3), z, 0.7) == pytest.approx(0.7)
    assert ms_risk_estimate([0.0, 0.0], [2.0, 1.0], 1.0) == pytest.approx(1.5)


def test_isotonic_examples():
    np.testing.assert_allclose(isotonic_decreasing_fit([0.8, 0.5, 0.9], [1, 1, 1]),
                               [0.8, 0.7, 0.7])
    np.testing.assert_allclose(brute_force_isotonic([0.8, 0.5, 0.9], [1, 1, 1], 0.01),
                               [0.8, 0.7, 0.7])
    g = [3.0, 1.0, 1.0, -2.0]
    np.testing.assert_array_equal(isotonic_decreasing_fit(g, [1, 2, 3, 4]), g)
    np.testing.assert_allclose(isotonic_decreasing_fit([0.2, 1.0], [3, 1]), [0.4, 0.4])
    with pytest.raises(ValueError, match='vacuous problem'):
        isotonic_decreasing_fit([1.0, 2.0], [0.0, 0.0])


@given(st.lists(st.tuples(st.integers(-10, 10), st.integers(1, 5)), min_size=1, max_size=7))
@settings(max_examples=150, deadline=None)
def test_isotonic_against_brute_force(pairs):
    g = np.array([a / 10 for a, _ in pairs])
    w = np.array([float(b) for _, b in pairs])
    k = isotonic_decreasing_fit(g, w)
    assert np.all(np.diff(k) <= 1e-12)
    brute = brute_force_isotonic(g, w, 0.05)
    assert isotonic_objective(k, g, w) <= isotonic_objective(brute, g, w) + 1e-9


def test_ms_adapt_edge_cases():
    z = np.array([2.0, -1.0, 0.5])
    np.testing.assert_array_equal(ms_adapt(z, 0.0).f, 1.0)
    np.testing.assert_array_equal(ms_adapt(np.array([0.5, -1.0, 0.9]), 1.0).f, 0.0)


def test_ms_adapt_matches_grid_oracle():
    z, s2 = np.array([3.0, 1.0, 0.5]), 1.0
    f = ms_adapt(z, s2).f
    np.testing.assert_allclose(f, [8 / 9, 0, 0], atol=1e-12)
    brute = brute_force_ms(z, s2, 1e-3)
    np.testing.assert_allclose(f, brute, atol=1e-3)
    assert ms_risk_estimate(f, z, s2) <= ms_risk_estimate(brute, z, s2) + 1e-10


@given(st.integers(1, 8), st.integers(0, 2**31 - 1), st.floats(0.1, 3.0))
@settings(max_examples=80, deadline=None)
def test_ms_adapt_optimal(p, seed, s2):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=p) * rng.uniform(0.2, 4.0, size=p)
    f = ms_adapt(z, s2).f
    assert np.all(np.diff(f) <= 0) and np.all((0 <= f) & (f <= 1))
    risk = ms_risk_estimate(f, z, s2)
    assert risk <= ms_risk_estimate(brute_force_ms(z, s2, 0.01), z, s2) + 1e-9
    assert risk <= s2 + 1e-12


# --- ST ---------------------------------------------------------------------

def test_st_risk_examples():
    z = np.array([0.5, -2.0, 3.0])
    assert st_risk_estimate(0.0, z, 0.8) == pytest.approx(0.8)
    assert st_risk_estimate(3.0, z, 0.8) == pytest.approx(np.mean(z ** 2) - 0.8)
    assert st_risk_estimate(1.0, [3.0, 1.0], 1.0) == pytest.approx(1.0)


def test_st_adapt_no_noise():
    plan = st_adapt(np.array([1.0, -2.0, 0.5]), 0.0)
    assert plan.threshold == 0
    np.testing.assert_array_equal(plan.f, 1.0)


def test_st_adapt_single_spike_against_scan():
    z = np.array([10.0, 0.1, -0.2, 0.05, 0.15, -0.1, 0.12, -0.03, 0.08, 0.11])
    plan = st_adapt(z, 1.0, t_cap=math.sqrt(2 * math.log(10)))
    ts = np.linspace(0, math.sqrt(2 * math.log(10)), 20001)
    scan = [st_risk_estimate(t, z, 1.0) for t in ts]
    assert st_risk_estimate(plan.threshold, z, 1.0) <= min(scan) + 1e-12
    assert plan.threshold == pytest.approx(0.2)
    assert plan.f[0] == pytest.approx(0.98)
    np.testing.assert_array_equal(plan.f[1:], 0.0)


def test_st_adapt_all_zero():
    plan = st_adapt(np.zeros(5), 1.0)
    assert plan.threshold == 0
    np.testing.assert_array_equal(plan.f, 0.0)
    with pytest.raises(ValueError, match='empty input'):
        st_adapt(np.zeros(0), 1.0)


@given(st.integers(2, 60), st.integers(0, 2**31 - 1), st.floats(0.05, 4.0))
@settings(max_examples=60, deadline=None)
def test_st_adapt_optimal(p, seed, s2):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=p) * math.sqrt(s2) + rng.choice([0.0, 3.0], size=p)
    plan = st_adapt(z, s2)
    cap = default_threshold_cap(p, s2)
    best = st_risk_estimate(plan.threshold, z, s2)
    for t in st_candidates(z, cap):
        assert best <= st_risk_estimate(t, z, s2)
    for t in rng.uniform(0, cap, size=1000):
        assert best <= st_risk_estimate(t, z, s2) + 1e-12
    np.testing.assert_allclose(plan.f * z, np.sign(z) * np.maximum(np.abs(z) - plan.threshold, 0))


# --- HS ---------------------------------------------------------------------

def test_hs_endpoints():
    rng = np.random.default_rng(4)
    z = rng.normal(size=30) * np.linspace(4, 0.2, 30)
    plan0, risk0 = hs_adapt(z, 1.0, 0.0)
    st_plan = st_adapt(z, 1.0)
    np.testing.assert_array_equal(plan0.f, st_plan.f)
    assert risk0.value == pytest.approx(st_risk_estimate(st_plan.threshold, z, 1.0))
    plan1, risk1 = hs_adapt(z, 1.0, 1.0)
    np.testing.assert_array_equal(plan1.f, ms_adapt(z, 1.0).f)
    assert risk1.value == pytest.approx(ms_risk_estimate(plan1.f, z, 1.0))
    with pytest.raises(ValueError, match='invalid split'):
        hs_adapt(z, 1.0, 1.5)


@given(st.integers(2, 80), st.floats(0, 1), st.integers(0, 2**31 - 1))
@settings(max_examples=60, deadline=None)
def test_hs_structure_and_decomposition(p, alpha, seed):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=p) * 2
    plan, risk = hs_adapt(z, 0.9, alpha)
    p1 = plan.p1
    assert p1 == math.floor(alpha * p + 1e-9)
    assert np.all(np.diff(plan.f[:p1]) <= 0)
    if p1 < p:
        np.testing.assert_allclose(plan.f[p1:], np.maximum(1 - plan.threshold / np.abs(z[p1:]), 0))
    ms_part, st_part = risk.components
    assert risk.value == (p1 * ms_part + (p - p1) * st_part) / p
    assert plan_risk(plan, z, 0.9).value == pytest.approx(risk.value, abs=1e-14)


# --- apply ------------------------------------------------------------------

def test_apply_plan_examples():
    rng = np.random.default_rng(8)
    layout = random_layout(rng, 10)
    basis = build_basis(layout, difference_matrix(10, 1))
    from ordshrink.shrinkage import ShrinkagePlan
    _, mu = apply_plan(basis, ShrinkagePlan(np.ones(10), 'MS'))
    np.testing.assert_allclose(mu, [g.mean() for g in layout.groups], atol=1e-10)
    _, mu = apply_plan(basis, ShrinkagePlan(np.zeros(10), 'MS'))
    np.testing.assert_array_equal(mu, 0)

    bal = Layout.from_means(np.arange(10), rng.normal(size=10))
    basis = build_basis(bal, difference_matrix(10, 1))
    _, mu = apply_plan(basis, ShrinkagePlan(np.eye(10)[0], 'MS'))
    np.testing.assert_allclose(mu, np.mean(bal.y), atol=1e-12)
