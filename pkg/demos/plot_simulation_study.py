"""
Simulation study
================

Repeat the artificial-data experiment over many seeds and look at how the
families compare on average, then check that estimated risk tracks the loss
more closely as the number of levels grows.
"""

import warnings

import numpy as np

from ordshrink import FitConfig
from ordshrink.oracle import simulate_experiment, smooth_mean, tracking_error, very_wiggly_mean

# 21 split fractions exceed sqrt(50); the warning about it is expected here.
warnings.filterwarnings('ignore', message='candidate grid larger')

config = FitConfig(penalty_set=('d4',), q_fraction=0.75)
p, sigma, seeds = 200, 0.5, range(20)

for name, mean_fn in (('smooth', smooth_mean), ('very wiggly', very_wiggly_mean)):
    losses = {}
    for seed in seeds:
        for row in simulate_experiment(mean_fn(p), sigma, seed, config):
            losses.setdefault(row.family, []).append(row.loss)
    print(name, {fam: round(float(np.mean(v)), 4) for fam, v in losses.items()})

# Mean absolute gap between estimated risk and loss; it should shrink with p.
small = FitConfig(penalty_set=('d4',), q_fraction=0.75, families=('MS', 'ST', 'HS'))
for p in (50, 100, 200):
    print(p, tracking_error(smooth_mean, p, sigma, 50, 7, small))
