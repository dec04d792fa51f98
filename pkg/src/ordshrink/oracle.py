"""Ground-truth utilities: loss, the Pinsker bound, test signals and brute-force references.

Everything random here draws from ``numpy.random.Generator(PCG64(...))`` with
``standard_normal`` (ziggurat); see :data:`GENERATOR`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from .adapt import FitConfig, compare
from .layout import Layout
from .shrinkage import MS, ST, ms_risk_estimate, soft_threshold_shrinkage, st_risk_estimate

GENERATOR = 'numpy.random.Generator(PCG64).standard_normal'


def rng_for(seed: int, replicate: Optional[int] = None) -> np.random.Generator:
    """Generator for ``seed``, or for replicate ``replicate`` of a seeded run."""
    entropy = seed if replicate is None else [seed, replicate]
    return np.random.Generator(np.random.PCG64(entropy))


def loss(mu_hat, mu, counts) -> float:
    """Normalized quadratic loss ``p^-1 sum n_i (mu_hat_i - mu_i)^2``."""
    mu_hat, mu, counts = (np.asarray(a, dtype=float) for a in (mu_hat, mu, counts))
    if not mu_hat.shape == mu.shape == counts.shape:
        raise ValueError('length mismatch')
    return float(np.sum(counts * (mu_hat - mu) ** 2) / mu.size)


# ---------------------------------------------------------------------------
# Pinsker bound

@dataclass(frozen=True, eq=False)
class EllipsoidSpec:
    """Ellipsoid ``{xi : ave(a xi^2) <= sigma2 r}``; ``a_i = inf`` forces ``xi_i = 0``."""

    a: np.ndarray
    r: float
    sigma2: float
    b: float

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        object.__setattr__(self, 'a', a)
        if not (self.r > 0 and self.sigma2 > 0 and 0 < self.b <= 1):
            raise ValueError('invalid ellipsoid parameters')
        head = int(math.floor(self.b * a.size + 1e-9))
        if a[0] != 1 or np.any(a < 1) or np.any(a[1:] < a[:-1]) or np.any(a[:head] != 1):
            raise ValueError('invalid ellipsoid weights')


def _pinsker_profile(root_gamma: float, inv_root_a: np.ndarray) -> np.ndarray:
    """``xi0^2 / sigma2 = [(gamma/a)^(1/2) - 1]_+``, zero where ``a`` is infinite."""
    return np.maximum(root_gamma * inv_root_a - 1.0, 0.0)


def _inverse_root_weights(spec: EllipsoidSpec) -> np.ndarray:
    return np.where(np.isinf(spec.a), 0.0, 1.0 / np.sqrt(spec.a))


def pinsker_root(spec: EllipsoidSpec):
    """Solve ``ave(xi0^2) = sigma2 r`` for ``gamma^(1/2)`` by bisection.

    Returns the root and the relative residual of the equation there.
    """
    inv_root_a = _inverse_root_weights(spec)

    def excess(c):
        return np.mean(_pinsker_profile(c, inv_root_a)) - spec.r

    # at gamma = 1 every profile entry is 0, so the bracket starts there
    lo, hi = 1.0, 2.0
    while excess(hi) < 0:
        hi *= 2.0
        if hi > 1e300:
            raise ArithmeticError('bound computation failed')
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if excess(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * hi:
            break
    c = 0.5 * (lo + hi)
    return c, float(abs(excess(c)) / spec.r)


def pinsker_bound(spec: EllipsoidSpec) -> float:
    """Asymptotic minimax risk ``sigma2 ave[xi0^2 / (sigma2 + xi0^2)]`` over the ellipsoid."""
    c, residual = pinsker_root(spec)
    if residual > 1e-10:
        raise ArithmeticError('bound computation failed')
    ratio = _pinsker_profile(c, _inverse_root_weights(spec))
    return float(spec.sigma2 * np.mean(ratio / (1.0 + ratio)))


# ---------------------------------------------------------------------------
# artificial means

def _smooth_shape(x: np.ndarray) -> np.ndarray:
    return 2.0 - 50.0 * ((x - 0.25) * (x - 0.75)) ** 2


def smooth_mean(p: int) -> np.ndarray:
    """Slowly varying quartic means at levels ``s_i = i``, ``x = i / p``."""
    x = np.arange(1, p + 1) / p
    return _smooth_shape(x)


def very_wiggly_mean(p: int) -> np.ndarray:
    """Smooth means minus a ``0.25 sin(100 pi x)`` oscillation."""
    x = np.arange(1, p + 1) / p
    return _smooth_shape(x) - 0.25 * np.sin(100.0 * np.pi * x)


SCENARIOS = {'smooth': smooth_mean, 'wiggly': very_wiggly_mean, 'very-wiggly': very_wiggly_mean}


# ---------------------------------------------------------------------------
# simulation

@dataclass(frozen=True)
class SimulationRow:
    family: str
    penalty: str
    alpha: Optional[float]
    estimated_risk: float
    loss: float


def simulated_layout(mean, sigma: float, seed: int) -> Layout:
    mean = np.asarray(mean, dtype=float)
    y = mean + sigma * rng_for(seed).standard_normal(mean.size)
    return Layout.from_means(np.arange(1, mean.size + 1, dtype=float), y)


def simulate_experiment(mean, sigma: float, seed: int,
                        config: FitConfig = FitConfig()) -> List[SimulationRow]:
    """One noisy draw around ``mean``, every family adapted, true losses attached."""
    if not sigma > 0:
        raise ValueError('sigma must be positive')
    mean = np.asarray(mean, dtype=float)
    layout = simulated_layout(mean, sigma, seed)
    rows = []
    for res in compare(layout, config):
        rows.append(SimulationRow(res.family, res.penalty, res.alpha, res.estimated_risk,
                                  loss(res.mu_hat, mean, layout.counts)))
    return rows


@dataclass(frozen=True)
class SureCheck:
    mean_estimate: float
    mean_loss: float
    se_estimate: float
    se_loss: float
    se_difference: float

    @property
    def z_score(self) -> float:
        return (self.mean_estimate - self.mean_loss) / self.se_difference


def sure_check(xi, sigma2: float, plan_kind: str, tuning, reps: int, seed: int) -> SureCheck:
    """Monte Carlo comparison of a risk estimate with the loss for a fixed plan.

    ``tuning`` is the shrinkage vector (or a scalar broadcast to one) for MS and
    the threshold for ST. The true variance stands in for its estimate.
    """
    if reps < 100:
        raise ValueError('reps must be at least 100')
    xi = np.asarray(xi, dtype=float)
    noise = rng_for(seed).standard_normal((reps, xi.size))
    z = xi + math.sqrt(sigma2) * noise
    if plan_kind == MS:
        f = np.broadcast_to(np.asarray(tuning, dtype=float), xi.shape)
        est = np.array([ms_risk_estimate(f, zz, sigma2) for zz in z])
        fz = f * z
    elif plan_kind == ST:
        est = np.array([st_risk_estimate(tuning, zz, sigma2) for zz in z])
        fz = np.array([soft_threshold_shrinkage(tuning, zz) for zz in z]) * z
    else:
        raise ValueError(f'unknown plan kind {plan_kind!r}')
    lss = np.mean((fz - xi) ** 2, axis=1)
    root = math.sqrt(reps)
    return SureCheck(float(est.mean()), float(lss.mean()), float(est.std(ddof=1) / root),
                     float(lss.std(ddof=1) / root), float((est - lss).std(ddof=1) / root))


def tracking_error(mean_fn: Callable[[int], np.ndarray], p: int, sigma: float, reps: int,
                   seed: int, config: FitConfig) -> dict:
    """Average ``|estimated risk - loss|`` of the adapted fits per family."""
    mean = mean_fn(p)
    gaps = {}
    for rep in range(reps):
        y = mean + sigma * rng_for(seed, rep).standard_normal(p)
        layout = Layout.from_means(np.arange(1, p + 1, dtype=float), y)
        for res in compare(layout, config):
            gaps.setdefault(res.family, []).append(
                abs(res.estimated_risk - loss(res.mu_hat, mean, layout.counts)))
    return {fam: float(np.mean(v)) for fam, v in gaps.items()}


# ---------------------------------------------------------------------------
# brute-force references

def _monotone_grid_min(costs: np.ndarray) -> np.ndarray:
    """Indices minimizing ``sum_i costs[i, j_i]`` subject to ``j_1 >= j_2 >= ...``.

    Dynamic programming over the grid; equivalent to enumerating every
    nonincreasing grid sequence.
    """
    p, m = costs.shape
    total = costs[0].copy()
    back = []
    for i in range(1, p):
        # best previous value among grid points >= j
        suffix = np.minimum.accumulate(total[::-1])[::-1]
        arg = np.empty(m, dtype=int)
        run = m - 1
        for j in range(m - 1, -1, -1):
            if total[j] <= total[run]:
                run = j
            arg[j] = run
        back.append(arg)
        total = costs[i] + suffix
    idx = np.empty(p, dtype=int)
    idx[-1] = int(np.argmin(total))
    for i in range(p - 1, 0, -1):
        idx[i - 1] = back[i - 1][idx[i]]
    return idx


def _value_grid(lo: float, hi: float, step: float) -> np.ndarray:
    if not step > 0:
        raise ValueError('grid_step must be positive')
    m = int(round((hi - lo) / step)) + 1
    return lo + step * np.arange(m)


def brute_force_isotonic(g, w, grid_step: float) -> np.ndarray:
    """Best nonincreasing sequence on a value grid spanning ``[min g, max g]``."""
    g = np.asarray(g, dtype=float)
    w = np.asarray(w, dtype=float)
    if g.size > 8:
        raise ValueError('instance too large for oracle')
    grid = _value_grid(g.min(), g.max(), grid_step)
    costs = w[:, None] * (grid[None, :] - g[:, None]) ** 2
    return grid[_monotone_grid_min(costs)]


def isotonic_objective(k, g, w) -> float:
    k, g, w = (np.asarray(a, dtype=float) for a in (k, g, w))
    return float(np.sum(w * (k - g) ** 2))


def brute_force_ms(z, sigma2: float, grid_step: float = 1e-3) -> np.ndarray:
    """Nonincreasing ``f`` on a ``[0, 1]`` grid minimizing the MS risk estimate directly."""
    z = np.asarray(z, dtype=float)
    if z.size > 8:
        raise ValueError('instance too large for oracle')
    grid = _value_grid(0.0, 1.0, grid_step)
    costs = grid[None, :] ** 2 * sigma2 + (1 - grid[None, :]) ** 2 * (z[:, None] ** 2 - sigma2)
    return grid[_monotone_grid_min(costs)]
