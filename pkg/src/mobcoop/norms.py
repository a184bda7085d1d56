"""Long-run norm selection: the progressivity that minimizes the threshold."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .econ import income_weights
from .exceptions import DomainError
from .smoothing import savitzky_golay
from .threshold import delta_min
from .values import Scenario


@dataclass(frozen=True)
class SearchConfig:
    """Two-stage grid over ``beta``.

    The refinement window spans one coarse step on either side of the coarse
    minimizer, clipped to ``[lo, hi]``.
    """

    lo: float = 0.0
    hi: float = 8.0
    coarse_points: int = 100
    refine_points: int = 1000

    def __post_init__(self):
        if not (0.0 <= self.lo < self.hi):
            raise DomainError("need 0 <= lo < hi for the beta grid", "beta-lo")
        if self.coarse_points < 2 or self.refine_points < 2:
            raise DomainError("grids need at least two points", "coarse-points")


@dataclass(frozen=True, eq=False)
class NormSelectionResult:
    beta_star: float
    delta_min_at_star: float
    coarse_grid: tuple
    refine_grid: tuple
    betas: np.ndarray
    deltas: np.ndarray

    @property
    def defined(self):
        return not np.isnan(self.beta_star)

    @property
    def refine_step(self):
        lo, hi, pts = self.refine_grid
        return (hi - lo) / (pts - 1)


def threshold_curve(betas, incomes, template, m, rule="all"):
    """``delta_min`` for each ``beta``; unsustainable points count as 1."""
    out = np.empty(len(betas))
    for k, b in enumerate(betas):
        sc = Scenario(incomes, float(b), template.rho, m, 0.0, template.grant)
        out[k] = delta_min(sc, rule=rule).delta_min
    return out


def beta_star(alpha, m, template, config=None, rule="all"):
    """Progressivity minimizing ``delta_min`` at inequality ``alpha`` and mobility ``m``.

    ``template`` supplies ``n``, ``rho`` and ``grant``. Ties go to the
    smallest ``beta``. When every grid point is unsustainable ``beta_star``
    is NaN.
    """
    if not (0.0 < m <= 1.0):
        raise DomainError(f"norm selection needs m in (0, 1], got {m!r}", "m")
    cfg = config or SearchConfig()
    incomes = income_weights(template.n, alpha)

    coarse = np.linspace(cfg.lo, cfg.hi, cfg.coarse_points)
    d_coarse = threshold_curve(coarse, incomes, template, m, rule)
    k = int(np.argmin(d_coarse))
    step = coarse[1] - coarse[0]
    r_lo, r_hi = max(cfg.lo, coarse[k] - step), min(cfg.hi, coarse[k] + step)
    fine = np.linspace(r_lo, r_hi, cfg.refine_points)
    d_fine = threshold_curve(fine, incomes, template, m, rule)

    betas = np.concatenate([coarse, fine])
    deltas = np.concatenate([d_coarse, d_fine])
    order = np.lexsort((betas, deltas))
    best = order[0]
    coarse_grid = (cfg.lo, cfg.hi, cfg.coarse_points)
    refine_grid = (float(r_lo), float(r_hi), cfg.refine_points)
    if deltas[best] >= 1.0:
        return NormSelectionResult(float("nan"), 1.0, coarse_grid, refine_grid, betas, deltas)
    return NormSelectionResult(float(betas[best]), float(deltas[best]), coarse_grid,
                               refine_grid, betas, deltas)


def smooth_series(values, window=11, order=3):
    """Savitzky-Golay smoothing for presentation; shrinks the window for short series.

    NaN entries are left in place and the remaining points are smoothed as one
    series. Series shorter than three points are returned unchanged.
    """
    y = np.asarray(values, dtype=float)
    ok = ~np.isnan(y)
    n = int(ok.sum())
    w = min(window, n if n % 2 else n - 1)
    if w < 3:
        return y.copy()
    out = y.copy()
    out[ok] = savitzky_golay(y[ok], w, min(order, w - 1))
    return out
