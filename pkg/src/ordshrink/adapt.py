"""Full adaptation over penalty matrices, split fractions and shrinkage families."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .basis import PenaltyBasis, build_basis, economy_profile
from .layout import Layout
from .penalty import make_penalty
from .shrinkage import (HS, LS, MS, PLS, ST, RiskEstimate, ShrinkagePlan, VarianceEstimate,
                        apply_plan, attach_variance, default_variance, hs_adapt, ms_adapt,
                        ms_risk_estimate, pls_adapt, st_adapt, st_risk_estimate)

FAMILIES = (LS, PLS, MS, ST, HS)
DEFAULT_PENALTIES = tuple(f'd{d}' for d in range(1, 7))
ANNIHILATOR_PENALTIES = tuple(f'a{d}' for d in range(1, 7))
DEFAULT_ALPHAS = tuple(round(0.05 * k, 2) for k in range(21))


@dataclass(frozen=True)
class FitConfig:
    """Candidate classes searched by :func:`fit` and :func:`compare`.

    ``q_fraction=None`` uses the LS variance for replicated layouts and
    ``q = floor(0.75 p)`` otherwise. ``sigma2`` fixes a known variance and
    skips estimation altogether.
    """

    penalty_set: Tuple[str, ...] = DEFAULT_PENALTIES
    alpha_set: Tuple[float, ...] = DEFAULT_ALPHAS
    families: Tuple[str, ...] = FAMILIES
    q_fraction: Optional[float] = None
    seed: Optional[int] = None
    sigma2: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, 'penalty_set', tuple(self.penalty_set))
        object.__setattr__(self, 'alpha_set', tuple(float(a) for a in self.alpha_set))
        object.__setattr__(self, 'families', tuple(f.upper() for f in self.families))
        if not self.penalty_set:
            raise ValueError('penalty_set must not be empty')
        if not self.families:
            raise ValueError('no family requested')
        unknown = set(self.families) - set(FAMILIES)
        if unknown:
            raise ValueError(f'unknown family {sorted(unknown)[0]!r}')
        if HS in self.families and not self.alpha_set:
            raise ValueError('alpha_set must not be empty when HS is requested')
        if any(not 0.0 <= a <= 1.0 for a in self.alpha_set):
            raise ValueError('invalid split')
        if self.q_fraction is not None and not 0 < self.q_fraction <= 1:
            raise ValueError('invalid q')


@dataclass(frozen=True, eq=False)
class FitResult:
    family: str
    penalty: str
    alpha: Optional[float]
    plan: ShrinkagePlan
    estimated_risk: float
    sigma2: VarianceEstimate
    mu_hat: np.ndarray
    eta_hat: np.ndarray
    residuals: np.ndarray
    economy: List[Tuple[int, float]]
    risk: RiskEstimate = field(repr=False, default=None)
    basis: PenaltyBasis = field(repr=False, default=None)


@dataclass(frozen=True)
class RiskReport:
    """One adapted fit per requested family, in the fixed order LS, PLS, MS, ST, HS."""

    rows: Tuple[FitResult, ...]

    def __iter__(self):
        return iter(self.rows)

    def as_dict(self) -> Dict[str, FitResult]:
        return {r.family: r for r in self.rows}


def prepare_basis(layout: Layout, selector: str, config: FitConfig) -> PenaltyBasis:
    """Penalty basis with its variance estimate attached."""
    basis = build_basis(layout, make_penalty(selector, layout.levels))
    if config.sigma2 is not None:
        est = VarianceEstimate(float(config.sigma2), 'known')
    else:
        est = default_variance(basis, config.q_fraction)
    return attach_variance(basis, est)


def _hs_alphas(alpha_set: Sequence[float]) -> List[float]:
    alphas = list(alpha_set)
    # the endpoints make HS contain both MS and ST
    for a in (0.0, 1.0):
        if a not in alphas:
            alphas.append(a)
    return alphas


def adapt_on_basis(basis: PenaltyBasis, family: str,
                   alpha_set: Sequence[float] = DEFAULT_ALPHAS
                   ) -> Tuple[ShrinkagePlan, RiskEstimate]:
    """Shrinkage-adaptive plan of one family for a fixed basis and variance."""
    z, s2 = basis.z, basis.sigma2.sigma2
    if family == LS:
        plan = ShrinkagePlan(np.ones_like(z), LS)
        return plan, RiskEstimate(ms_risk_estimate(plan.f, z, s2), LS)
    if family == PLS:
        plan = pls_adapt(basis.eigenvalues, z, s2)
        return plan, RiskEstimate(ms_risk_estimate(plan.f, z, s2), PLS)
    if family == MS:
        plan = ms_adapt(z, s2)
        return plan, RiskEstimate(ms_risk_estimate(plan.f, z, s2), MS)
    if family == ST:
        plan = st_adapt(z, s2)
        return plan, RiskEstimate(st_risk_estimate(plan.threshold, z, s2), ST)
    if family == HS:
        best = None
        for a in _hs_alphas(alpha_set):
            cand = hs_adapt(z, s2, a)
            if best is None or cand[1].value < best[1].value:
                best = cand
        return best
    raise ValueError(f'unknown family {family!r}')


def _result(layout: Layout, basis: PenaltyBasis, selector: str,
            plan: ShrinkagePlan, risk: RiskEstimate) -> FitResult:
    eta, mu = apply_plan(basis, plan)
    return FitResult(
        family=plan.family,
        penalty=selector,
        alpha=plan.alpha,
        plan=plan,
        estimated_risk=risk.value,
        sigma2=basis.sigma2,
        mu_hat=mu,
        eta_hat=eta,
        residuals=layout.y - eta,
        economy=economy_profile(basis),
        risk=risk,
        basis=basis,
    )


def _warn_grid_size(layout: Layout, config: FitConfig) -> None:
    limit = math.sqrt(layout.p)
    if len(config.penalty_set) > limit or (HS in config.families and len(config.alpha_set) > limit):
        warnings.warn('candidate grid larger than sqrt(p); adaptation may overfit the '
                      'estimated risk', stacklevel=3)


def _adapt_family(layout: Layout, bases: Sequence[Tuple[str, PenaltyBasis]],
                  family: str, config: FitConfig) -> FitResult:
    best = None
    for selector, basis in bases:
        plan, risk = adapt_on_basis(basis, family, config.alpha_set)
        if best is None or risk.value < best[3].value:
            best = (basis, selector, plan, risk)
    return _result(layout, *best)


def _bases(layout: Layout, config: FitConfig):
    return [(sel, prepare_basis(layout, sel, config)) for sel in config.penalty_set]


def compare(layout: Layout, config: FitConfig = FitConfig()) -> RiskReport:
    """Adapt every requested family independently over the candidate penalties."""
    _warn_grid_size(layout, config)
    bases = _bases(layout, config)
    rows = tuple(_adapt_family(layout, bases, fam, config)
                 for fam in FAMILIES if fam in config.families)
    return RiskReport(rows)


def fit(layout: Layout, config: FitConfig = FitConfig()) -> FitResult:
    """Global minimizer of estimated risk over families, penalties and splits.

    Ties resolve to the earliest family in LS, PLS, MS, ST, HS order, then to
    the earliest penalty and split in the configured order.
    """
    best = None
    for row in compare(layout, config):
        if best is None or row.estimated_risk < best.estimated_risk:
            best = row
    return best
