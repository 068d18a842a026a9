"""Maximisation over interaction time: dense grid scan, then a bounded local polish."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConfigError

GT_MAX = 10.0


@dataclass(frozen=True)
class GtGrid:
    start: float = 0.0
    stop: float = GT_MAX
    steps: int = 2001
    xatol: float = 1e-5

    def __post_init__(self):
        if self.steps < 3:
            raise ConfigError("gt grid needs at least 3 points")
        if not 0 <= self.start < self.stop:
            raise ConfigError(f"gt range must satisfy 0 <= min < max, got ({self.start}, {self.stop})")

    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


def maximize(curve, scalar, grid: GtGrid):
    """Global maximum of a function of gt.

    ``curve`` evaluates on an array of times, ``scalar`` on one time. The grid
    argmax (first occurrence, i.e. smallest gt on ties) brackets a bounded
    Brent search between its neighbours. Returns (value, gt).
    """
    ts = grid.points()
    vals = np.asarray(curve(ts), dtype=float)
    i = int(np.argmax(vals))
    best_t, best_v = float(ts[i]), float(vals[i])
    lo = ts[max(i - 1, 0)]
    hi = ts[min(i + 1, ts.size - 1)]
    res = minimize_scalar(lambda t: -scalar(t), bounds=(lo, hi), method="bounded",
                          options={"xatol": grid.xatol})
    if res.success and -res.fun > best_v:
        best_t, best_v = float(res.x), float(-res.fun)
    return best_v, best_t
