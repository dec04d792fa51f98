"""
Pinsker bound
=============

Asymptotic minimax risk over an ellipsoid of coefficient vectors. Heavier
weights on the tail make the ellipsoid smaller and lower the bound.
"""

import numpy as np

from ordshrink.oracle import EllipsoidSpec, pinsker_bound, pinsker_root

p = 100
for r in (0.1, 1.0, 10.0):
    flat = EllipsoidSpec(np.ones(p), r=r, sigma2=1.0, b=1.0)
    print(r, pinsker_bound(flat), r / (1 + r))

# Keep only the first b*p coordinates: the bound becomes r b / (r + b).
for b in (0.1, 0.25, 0.5):
    head = int(b * p)
    a = np.concatenate([np.ones(head), np.full(p - head, np.inf)])
    print(b, pinsker_bound(EllipsoidSpec(a, 1.0, 1.0, b)), b / (1 + b))

# Polynomially growing weights, as for a smoothness class.
for power in (2, 4, 8):
    a = (1.0 + np.arange(p)) ** power
    spec = EllipsoidSpec(a, r=1.0, sigma2=1.0, b=1 / p)
    c, residual = pinsker_root(spec)
    print(power, pinsker_bound(spec), c ** 2, residual)
