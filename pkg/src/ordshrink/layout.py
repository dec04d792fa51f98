"""One-way layout data model, CSV ingestion and the least-squares baseline."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np


class MalformedInputError(ValueError):
    """Raised for unparseable or non-finite input rows."""


class DegenerateLayoutError(ValueError):
    """Raised when the data has fewer than two distinct factor levels."""


@dataclass(frozen=True, eq=False)
class Layout:
    """Ordinal one-way layout.

    Attributes
    ----------
    levels : numpy.ndarray, shape (p,)
        Strictly increasing factor levels.
    counts : numpy.ndarray, shape (p,)
        Number of replicate observations at each level.
    groups : tuple of numpy.ndarray
        Observed responses at each level, in input order.
    """

    levels: np.ndarray
    counts: np.ndarray
    groups: Tuple[np.ndarray, ...]

    def __post_init__(self):
        levels = np.asarray(self.levels, dtype=float)
        groups = tuple(np.asarray(g, dtype=float).ravel() for g in self.groups)
        counts = np.array([g.size for g in groups], dtype=int)
        if levels.ndim != 1 or levels.size != len(groups):
            raise ValueError('levels and groups must have the same length')
        if levels.size < 2:
            raise DegenerateLayoutError('degenerate layout')
        if np.any(counts < 1):
            raise ValueError('every level needs at least one observation')
        if np.any(np.diff(levels) <= 0):
            raise ValueError('unordered levels')
        if self.counts is not None and not np.array_equal(np.asarray(self.counts), counts):
            raise ValueError('counts do not match group sizes')
        for arr in (levels, counts, *groups):
            arr.setflags(write=False)
        object.__setattr__(self, 'levels', levels)
        object.__setattr__(self, 'counts', counts)
        object.__setattr__(self, 'groups', groups)

    @property
    def p(self) -> int:
        return int(self.levels.size)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def y(self) -> np.ndarray:
        """All observations stacked level by level (the n-vector)."""
        return np.concatenate(self.groups)

    @classmethod
    def from_means(cls, levels: Sequence[float], values: Sequence[float]) -> 'Layout':
        """Layout with a single observation per level."""
        return cls(np.asarray(levels, float), None, tuple([v] for v in values))

    def expand(self, per_level: Sequence[float]) -> np.ndarray:
        """Repeat a per-level vector over the observations of each level."""
        return np.repeat(np.asarray(per_level, dtype=float), self.counts)


@dataclass(frozen=True, eq=False)
class LsBaseline:
    group_means: np.ndarray
    residual_ss: float
    sigma2_ls: Optional[float]


def ingest_csv(rows: Iterable[Tuple[float, float]]) -> Layout:
    """Group ``(level, value)`` rows into a :class:`Layout`.

    Rows sharing a level (exact equality) become replicates of that level.
    Levels are sorted ascending; within a level the input order is kept.
    """
    buckets = {}
    for row in rows:
        try:
            level, value = (float(v) for v in row)
        except (TypeError, ValueError) as exc:
            raise MalformedInputError('malformed input') from exc
        if not (math.isfinite(level) and math.isfinite(value)):
            raise MalformedInputError('malformed input')
        buckets.setdefault(level, []).append(value)
    if len(buckets) < 2:
        raise DegenerateLayoutError('degenerate layout')
    levels = sorted(buckets)
    return Layout(np.array(levels), None, tuple(buckets[s] for s in levels))


def parse_csv(text: str) -> Layout:
    """Parse two-column ``level,value`` CSV text, optional ``level,value`` header."""
    rows = []
    reader = csv.reader(io.StringIO(text.replace('\r\n', '\n')))
    for lineno, rec in enumerate(reader):
        if not rec or all(not f.strip() for f in rec):
            continue
        if lineno == 0 and [f.strip() for f in rec] == ['level', 'value']:
            continue
        if len(rec) != 2:
            raise MalformedInputError('malformed input')
        rows.append(rec)
    return ingest_csv(rows)


def read_csv(path) -> Layout:
    with open(path, encoding='utf-8', newline='') as fh:
        return parse_csv(fh.read())


def ls_baseline(layout: Layout) -> LsBaseline:
    means = np.array([g.mean() for g in layout.groups])
    rss = float(sum(np.sum((g - m) ** 2) for g, m in zip(layout.groups, means)))
    sigma2 = rss / (layout.n - layout.p) if layout.n > layout.p else None
    return LsBaseline(means, rss, sigma2)
