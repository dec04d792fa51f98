"""Banded penalty matrices: difference operators and local polynomial annihilators."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

DIFFERENCE = 'difference'
ANNIHILATOR = 'annihilator'

_SELECTOR = re.compile(r'^([da])([1-6])$')


@dataclass(frozen=True, eq=False)
class PenaltyMatrix:
    """A ``(p - d) x p`` matrix whose row ``i`` is supported on columns ``i..i+d``."""

    entries: np.ndarray
    degree: int
    kind: str
    levels_hash: Optional[str] = None

    @property
    def p(self) -> int:
        return self.entries.shape[1]

    @property
    def selector(self) -> str:
        return ('d' if self.kind == DIFFERENCE else 'a') + str(self.degree)


def _check_degree(p: int, d: int) -> None:
    if not (isinstance(d, (int, np.integer)) and 1 <= d < p):
        raise ValueError('invalid degree')


def _hash_levels(levels: np.ndarray) -> str:
    return hashlib.sha1(np.ascontiguousarray(levels, dtype='<f8').tobytes()).hexdigest()[:16]


def difference_matrix(p: int, d: int) -> PenaltyMatrix:
    """d-th difference matrix built by composing first differences."""
    _check_degree(p, d)
    D = np.eye(p)
    for k in range(d):
        # Delta(m) has +1 on the diagonal and -1 on the superdiagonal
        D = D[:-1] - D[1:]
    D.setflags(write=False)
    return PenaltyMatrix(D, int(d), DIFFERENCE)


def _window_top_polynomial(x: np.ndarray) -> np.ndarray:
    """Degree-``len(x)-1`` member of the orthonormal polynomial basis on the points x."""
    m = x.size
    u = x - x.mean()
    scale = np.max(np.abs(u))
    u = u / scale
    basis = []
    for k in range(m):
        v = u ** k
        # modified Gram-Schmidt, two passes
        for _ in range(2):
            for q in basis:
                v = v - (q @ v) * q
        v = v / np.linalg.norm(v)
        basis.append(v)
    top = basis[-1]
    return top if top[-1] > 0 else -top


def local_annihilator(levels: Sequence[float], d: int) -> PenaltyMatrix:
    """Local polynomial annihilator of degree d on an arbitrary increasing grid.

    Row ``i`` holds the degree-d orthonormal window polynomial on
    ``levels[i:i+d+1]``, normalized to unit length with a positive last entry.
    """
    s = np.asarray(levels, dtype=float)
    p = s.size
    _check_degree(p, d)
    if np.any(np.diff(s) <= 0):
        raise ValueError('unordered levels')
    A = np.zeros((p - d, p))
    for i in range(p - d):
        A[i, i:i + d + 1] = _window_top_polynomial(s[i:i + d + 1])
    A.setflags(write=False)
    return PenaltyMatrix(A, int(d), ANNIHILATOR, _hash_levels(s))


def annihilation_residual(pm: PenaltyMatrix, levels: Sequence[float]) -> float:
    """Largest relative size of ``pm @ s**k`` over ``0 <= k < degree``."""
    s = np.asarray(levels, dtype=float)
    worst = 0.0
    for k in range(pm.degree):
        sk = s ** k
        worst = max(worst, np.linalg.norm(pm.entries @ sk) / max(1.0, np.linalg.norm(sk)))
    return float(worst)


def parse_selector(selector: str) -> tuple:
    """Split a selector such as ``'d4'`` or ``'a2'`` into ``(kind, degree)``."""
    m = _SELECTOR.match(selector.strip().lower())
    if m is None:
        raise ValueError(f'unknown penalty selector {selector!r}')
    return (DIFFERENCE if m.group(1) == 'd' else ANNIHILATOR), int(m.group(2))


def make_penalty(selector: str, levels: Sequence[float]) -> PenaltyMatrix:
    kind, d = parse_selector(selector)
    if kind == DIFFERENCE:
        return difference_matrix(len(levels), d)
    return local_annihilator(levels, d)
