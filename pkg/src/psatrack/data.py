"""Piecewise-constant data profiles for initial and boundary values."""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PiecewiseConstant:
    """Right-continuous step function on [0, length).

    ``breaks`` are the interior jump positions (strictly increasing) and
    ``values`` the constant values on the ``len(breaks) + 1`` segments.
    """

    breaks: tuple
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.breaks) + 1:
            raise ValueError("need len(values) == len(breaks) + 1")
        if any(b2 <= b1 for b1, b2 in zip(self.breaks, self.breaks[1:])):
            raise ValueError("breaks must be strictly increasing")

    def __call__(self, s):
        if np.ndim(s) == 0:
            return self.values[bisect.bisect_right(self.breaks, s)]
        idx = np.searchsorted(self.breaks, np.asarray(s, dtype=float), side="right")
        return np.asarray(self.values, dtype=float)[idx]

    def jumps(self):
        """(position, left value, right value) for every interior jump."""
        return [
            (b, self.values[k], self.values[k + 1])
            for k, b in enumerate(self.breaks)
            if self.values[k] != self.values[k + 1]
        ]

    def total_variation(self):
        return float(sum(abs(v2 - v1) for v1, v2 in zip(self.values, self.values[1:])))

    def min(self):
        return min(self.values)

    def max(self):
        return max(self.values)

    def cell_averages(self, edges):
        """Exact averages over the cells defined by ``edges`` (increasing)."""
        edges = np.asarray(edges, dtype=float)
        pts = np.concatenate([[edges[0]], np.asarray(self.breaks), [edges[-1]]])
        pts = np.unique(np.clip(pts, edges[0], edges[-1]))
        mids = 0.5 * (pts[:-1] + pts[1:])
        vals = self(mids)
        # integrate the step function, then difference over the cells
        cum = np.concatenate([[0.0], np.cumsum(vals * np.diff(pts))])
        cum_at = np.interp(edges, pts, cum)
        return np.diff(cum_at) / np.diff(edges)

    @staticmethod
    def constant(value):
        return PiecewiseConstant((), (float(value),))

    @staticmethod
    def from_function(fn, length, n_cells):
        """Cell averages of ``fn`` on ``n_cells`` uniform cells of [0, length]."""
        edges = np.linspace(0.0, float(length), n_cells + 1)
        sub = np.linspace(0.0, 1.0, 33)[1::2]  # 16 midpoints per cell
        pts = edges[:-1, None] + np.diff(edges)[:, None] * sub[None, :]
        vals = np.mean(np.asarray(fn(pts.ravel())).reshape(n_cells, -1), axis=1)
        return PiecewiseConstant(tuple(edges[1:-1]), tuple(float(v) for v in vals))


def merge_piecewise(a: PiecewiseConstant, b: PiecewiseConstant):
    """Common refinement: merged interior breaks plus paired segment values."""
    breaks = tuple(sorted(set(a.breaks) | set(b.breaks)))
    # right continuity: value on segment k is the value at its left break
    va = (a(-1.0),) + tuple(a(p) for p in breaks)
    vb = (b(-1.0),) + tuple(b(p) for p in breaks)
    return breaks, va, vb
