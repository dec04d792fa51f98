"""Shrinkage families on the penalty basis and their estimated risks.

Four families act on the canonical coefficients ``z``:

* PLS: ``f_i = 1 / (1 + nu * lambda_i)`` for a penalty weight ``nu``;
* MS: any nonincreasing ``f`` in ``[0, 1]^p``;
* ST: soft-thresholding, ``f_i = [1 - t / |z_i|]_+``;
* HS: MS on the first ``floor(alpha * p)`` coefficients, ST on the rest.

Adaptive versions choose the member with the smallest estimated risk.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .basis import PenaltyBasis, reconstruct

PLS, MS, ST, HS, LS = 'PLS', 'MS', 'ST', 'HS', 'LS'


@dataclass(frozen=True, eq=False)
class ShrinkagePlan:
    f: np.ndarray
    family: str
    nu: Optional[float] = None
    threshold: Optional[float] = None
    alpha: Optional[float] = None
    p1: Optional[int] = None


@dataclass(frozen=True)
class VarianceEstimate:
    sigma2: float
    method: str
    q: Optional[int] = None


@dataclass(frozen=True)
class RiskEstimate:
    value: float
    family: str
    components: Optional[Tuple[float, float]] = None


def _split_point(alpha: float, p: int) -> int:
    # guard against 0.35 * 200 == 69.99999999999999
    return int(math.floor(alpha * p + 1e-9))


# ---------------------------------------------------------------------------
# variance

def variance_high_component(basis: PenaltyBasis, n: int, q: int) -> VarianceEstimate:
    """Pool the trailing ``p - q`` squared coefficients with the residual sum of squares."""
    p = basis.p
    if not (1 <= q <= min(p, n - 1)):
        raise ValueError('invalid q')
    tail = float(np.sum(basis.z[q:] ** 2))
    return VarianceEstimate((tail + basis.residual_ss) / (n - q), 'high_component', int(q))


def variance_ls(basis: PenaltyBasis, n: int) -> VarianceEstimate:
    if n <= basis.p:
        raise ValueError('least squares variance needs n > p')
    return VarianceEstimate(basis.residual_ss / (n - basis.p), 'ls')


def default_variance(basis: PenaltyBasis, q_fraction: Optional[float] = None) -> VarianceEstimate:
    """LS variance when replicated and no fraction given, else the high-component estimator."""
    n, p = basis.n, basis.p
    if q_fraction is None:
        if n > p:
            return variance_ls(basis, n)
        q_fraction = 0.75
    if not 0 < q_fraction <= 1:
        raise ValueError('invalid q')
    return variance_high_component(basis, n, _split_point(q_fraction, p))


def attach_variance(basis: PenaltyBasis, estimate: VarianceEstimate) -> PenaltyBasis:
    return dataclasses.replace(basis, sigma2=estimate)


# ---------------------------------------------------------------------------
# PLS

def pls_shrinkage(eigenvalues: Sequence[float], nu: float) -> ShrinkagePlan:
    lam = np.asarray(eigenvalues, dtype=float)
    if not nu >= 0:
        raise ValueError('invalid penalty weight')
    if math.isinf(nu):
        f = (lam <= 1e-9).astype(float)
    else:
        f = 1.0 / (1.0 + nu * lam)
    return ShrinkagePlan(f, PLS, nu=float(nu))


def pls_grid(eigenvalues: Sequence[float], size: int = 121) -> np.ndarray:
    """Candidate penalty weights: 0, infinity and a log grid scaled to the spectrum.

    The grid runs from ``1e-3 / lambda_max`` to ``1e3 / lambda_min``, where
    ``lambda_min`` is the smallest positive eigenvalue, so every eigen-component
    passes through the full range of shrinkage.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    pos = lam[lam > 1e-9 * max(1.0, lam.max(initial=0.0))]
    if pos.size == 0:
        return np.array([0.0, np.inf])
    grid = np.logspace(np.log10(1e-3 / pos.max()), np.log10(1e3 / pos.min()), size)
    return np.concatenate([[0.0], grid, [np.inf]])


def pls_adapt(eigenvalues: Sequence[float], z: Sequence[float], sigma2: float,
              grid: Optional[Sequence[float]] = None) -> ShrinkagePlan:
    """Penalty weight minimizing the MS risk estimate along the PLS curve."""
    lam = np.asarray(eigenvalues, dtype=float)
    nus = pls_grid(lam) if grid is None else np.asarray(grid, dtype=float)
    best, best_risk = None, np.inf
    for nu in nus:
        plan = pls_shrinkage(lam, nu)
        risk = ms_risk_estimate(plan.f, z, sigma2)
        if risk < best_risk:
            best, best_risk = plan, risk
    return best


# ---------------------------------------------------------------------------
# MS

def ms_risk_estimate(f, z, sigma2: float) -> float:
    """``ave[f^2 s2 + (1 - f)^2 (z^2 - s2)]``; may be negative."""
    f = np.asarray(f, dtype=float)
    z = np.asarray(z, dtype=float)
    if f.shape != z.shape:
        raise ValueError('length mismatch')
    if f.size == 0:
        return 0.0
    return float(np.mean(f ** 2 * sigma2 + (1 - f) ** 2 * (z ** 2 - sigma2)))


def isotonic_decreasing_fit(g, w) -> np.ndarray:
    """Weighted least-squares fit of a nonincreasing sequence (pool adjacent violators).

    Zero-weight entries are allowed; a block made only of them takes the plain
    mean of its values.
    """
    g = np.asarray(g, dtype=float)
    w = np.asarray(w, dtype=float)
    if g.shape != w.shape:
        raise ValueError('length mismatch')
    if np.any(w < 0):
        raise ValueError('weights must be nonnegative')
    if g.size and not np.sum(w) > 0:
        raise ValueError('vacuous problem')

    # stack of blocks: [weight, weighted sum, count, plain sum]
    wt, ws, cnt, ps = [], [], [], []

    def value(j):
        return ws[j] / wt[j] if wt[j] > 0 else ps[j] / cnt[j]

    for gi, wi in zip(g.tolist(), w.tolist()):
        wt.append(wi)
        ws.append(wi * gi)
        cnt.append(1)
        ps.append(gi)
        while len(wt) > 1 and value(-2) < value(-1):
            for stack in (wt, ws, cnt, ps):
                last = stack.pop()
                stack[-1] += last
    out = np.empty_like(g)
    start = 0
    for j in range(len(wt)):
        out[start:start + cnt[j]] = value(j)
        start += cnt[j]
    return out


def ms_adapt(z, sigma2: float) -> ShrinkagePlan:
    """Monotone shrinkage vector minimizing the MS risk estimate."""
    z = np.asarray(z, dtype=float)
    z2 = z ** 2
    g = np.zeros_like(z)
    nz = z2 > 0
    g[nz] = (z2[nz] - sigma2) / z2[nz]
    if not np.any(nz):
        k = g
    else:
        k = isotonic_decreasing_fit(g, z2)
    f = np.clip(k, 0.0, 1.0)
    return ShrinkagePlan(f, MS)


# ---------------------------------------------------------------------------
# ST

def soft_threshold_shrinkage(t: float, z) -> np.ndarray:
    """``[1 - t/|z_i|]_+``, zero where ``z_i == 0``."""
    az = np.abs(np.asarray(z, dtype=float))
    f = np.zeros_like(az)
    nz = az > 0
    f[nz] = np.maximum(1.0 - t / az[nz], 0.0)
    return f


def st_risk_estimate(t: float, z, sigma2: float) -> float:
    """Stein's unbiased risk estimate for soft-thresholding at ``t``, normalized by p."""
    az = np.abs(np.asarray(z, dtype=float))
    if az.size == 0:
        return 0.0
    below = az <= t
    return float(sigma2 * np.mean(1.0 - 2.0 * below) + np.mean(np.minimum(az, t) ** 2))


def default_threshold_cap(p: int, sigma2: float) -> float:
    """Universal threshold ``sigma * sqrt(2 log p)``."""
    if p <= 1:
        return 0.0
    return math.sqrt(max(sigma2, 0.0)) * math.sqrt(2.0 * math.log(p))


def st_candidates(z, t_cap: float) -> np.ndarray:
    az = np.abs(np.asarray(z, dtype=float))
    return np.unique(np.concatenate([[0.0], az[az <= t_cap], [t_cap]]))


def st_adapt(z, sigma2: float, t_cap: Optional[float] = None) -> ShrinkagePlan:
    """Soft threshold in ``[0, t_cap]`` minimizing the SURE criterion.

    Between consecutive values of ``|z_i|`` the estimate increases in ``t``, so
    only ``0``, the ``|z_i| <= t_cap`` and ``t_cap`` itself need checking.
    Ties go to the smallest threshold.
    """
    z = np.asarray(z, dtype=float)
    p = z.size
    if p == 0:
        raise ValueError('empty input')
    if t_cap is None:
        t_cap = default_threshold_cap(p, sigma2)
    cand = st_candidates(z, t_cap)
    az = np.sort(np.abs(z))
    # counts of |z| <= t and partial sums of z^2 over those, for every candidate
    below = np.searchsorted(az, cand, side='right')
    csum = np.concatenate([[0.0], np.cumsum(az ** 2)])
    risks = (sigma2 * (p - 2.0 * below) + csum[below] + (p - below) * cand ** 2) / p
    t = float(cand[int(np.argmin(risks))])
    return ShrinkagePlan(soft_threshold_shrinkage(t, z), ST, threshold=t)


# ---------------------------------------------------------------------------
# HS

def hs_adapt(z, sigma2: float, alpha: float,
             t_cap: Optional[float] = None) -> Tuple[ShrinkagePlan, RiskEstimate]:
    """MS on the leading ``floor(alpha p)`` coefficients, ST on the remainder."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError('invalid split')
    z = np.asarray(z, dtype=float)
    p = z.size
    p1 = _split_point(alpha, p)
    p2 = p - p1
    head, tail = z[:p1], z[p1:]
    f1 = ms_adapt(head, sigma2).f if p1 else np.empty(0)
    ms_part = ms_risk_estimate(f1, head, sigma2)
    if p2:
        st_plan = st_adapt(tail, sigma2, t_cap)
        f2, t = st_plan.f, st_plan.threshold
        st_part = st_risk_estimate(t, tail, sigma2)
    else:
        f2, t, st_part = np.empty(0), None, 0.0
    value = (p1 * ms_part + p2 * st_part) / p
    plan = ShrinkagePlan(np.concatenate([f1, f2]), HS, threshold=t, alpha=float(alpha), p1=p1)
    return plan, RiskEstimate(value, HS, (ms_part, st_part))


# ---------------------------------------------------------------------------

def plan_risk(plan: ShrinkagePlan, z, sigma2: float) -> RiskEstimate:
    """Family risk estimator evaluated at a given plan."""
    z = np.asarray(z, dtype=float)
    if plan.family in (LS, PLS, MS):
        return RiskEstimate(ms_risk_estimate(plan.f, z, sigma2), plan.family)
    if plan.family == ST:
        return RiskEstimate(st_risk_estimate(plan.threshold, z, sigma2), ST)
    if plan.family == HS:
        p1 = plan.p1
        head, tail = z[:p1], z[p1:]
        ms_part = ms_risk_estimate(plan.f[:p1], head, sigma2)
        st_part = st_risk_estimate(plan.threshold, tail, sigma2) if tail.size else 0.0
        return RiskEstimate((p1 * ms_part + tail.size * st_part) / z.size, HS, (ms_part, st_part))
    raise ValueError(f'unknown family {plan.family!r}')


def apply_plan(basis: PenaltyBasis, plan: ShrinkagePlan) -> Tuple[np.ndarray, np.ndarray]:
    f = np.asarray(plan.f, dtype=float)
    if f.shape != basis.z.shape:
        raise ValueError('plan length does not match basis')
    return reconstruct(basis, f * basis.z)
