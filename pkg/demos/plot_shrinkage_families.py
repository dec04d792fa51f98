"""
Shrinkage families on one data set
==================================

Least squares, penalized least squares, monotone shrinkage, soft thresholding
and the hybrid, each adapted by minimizing its estimated risk.
"""

import numpy as np

from ordshrink import FitConfig, Layout, compare
from ordshrink.oracle import loss, rng_for, smooth_mean, very_wiggly_mean

p, sigma = 200, 0.5
config = FitConfig(penalty_set=('d4',), q_fraction=0.75)

for name, mean in (('smooth', smooth_mean(p)), ('very wiggly', very_wiggly_mean(p))):
    y = mean + sigma * rng_for(1).standard_normal(p)
    layout = Layout.from_means(np.arange(1, p + 1), y)
    print(name)
    for row in compare(layout, config):
        true_loss = loss(row.mu_hat, mean, layout.counts)
        print(f'  {row.family:3s} alpha={row.alpha!s:5s} '
              f'estimated risk={row.estimated_risk:.4f} loss={true_loss:.4f}')

# The estimated risk can be negative: it is an unbiased estimate of the loss
# for a fixed plan, not a bound. What matters is that it ranks candidates.

# A look at the chosen hybrid: monotone on the head, thresholded on the tail.
hs = compare(layout, config).as_dict()['HS']
f = hs.plan.f
print('split at', hs.plan.p1, 'threshold', hs.plan.threshold)
print('head', np.round(f[:8], 3))
print('nonzero tail entries', np.flatnonzero(f[hs.plan.p1:]) + hs.plan.p1 + 1)
