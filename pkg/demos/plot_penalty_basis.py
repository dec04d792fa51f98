"""
Penalties and the penalty basis
===============================

Difference penalties and local polynomial annihilators, and the orthonormal
basis they induce on the space of level means.
"""

import numpy as np

from ordshrink import Layout, build_basis, difference_matrix, local_annihilator
from ordshrink.basis import economy_profile
from ordshrink.oracle import rng_for, very_wiggly_mean
from ordshrink.penalty import annihilation_residual

# On an equally spaced grid the annihilator is the normalized difference
# operator, up to sign.
levels = np.arange(1.0, 9.0)
print(difference_matrix(8, 2).entries[:2])
print(np.round(local_annihilator(levels, 2).entries[:2], 4))

# On an uneven grid only the annihilator kills low-degree polynomials.
uneven = np.array([0.0, 0.3, 1.1, 1.5, 2.8, 3.0, 4.7, 5.2])
for d in (1, 2, 3):
    print(d, annihilation_residual(local_annihilator(uneven, d), uneven))

# The basis: the first d vectors span the polynomials of degree < d and carry
# eigenvalue zero; the rest oscillate more as the eigenvalue grows.
p = 200
mean = very_wiggly_mean(p)
y = mean + 0.5 * rng_for(0).standard_normal(p)
layout = Layout.from_means(np.arange(1, p + 1), y)
basis = build_basis(layout, difference_matrix(p, 4))
print(basis.eigenvalues[:6])

# Economy: almost all of the signal sits in a handful of coefficients. The
# sinusoid shows up as an isolated spike far from the start.
profile = np.array([v for _, v in economy_profile(basis)])
top = np.argsort(-np.abs(profile))[:8] + 1
print('largest components:', sorted(int(i) for i in top))
