"""Proportional taxation with a lump-sum rebate ahead of the transfer game."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .exceptions import DomainError
from .threshold import delta_min
from .values import Scenario, autarky_consumptions, coop_consumptions


class Regime(str, enum.Enum):
    AUTARKIC = "autarkic"
    COOPERATIVE = "cooperative"


@dataclass(frozen=True)
class FiscalPolicy:
    """Tax rate ``tau`` and cost of public funds ``s`` (share of revenue lost)."""

    tau: float
    s: float

    def __post_init__(self):
        if not (0.0 <= self.tau <= 1.0):
            raise DomainError(f"tau must lie in [0, 1], got {self.tau!r}", "tau")
        if not (0.0 < self.s <= 1.0):
            raise DomainError(f"s must lie in (0, 1], got {self.s!r}", "s")

    def revenue(self, incomes):
        return self.tau * float(np.sum(incomes))

    def grant(self, incomes):
        return (1.0 - self.s) * self.revenue(incomes) / len(incomes)


@dataclass(frozen=True, eq=False)
class TaxResult:
    tau_star: float
    regime: Regime
    welfare_at_star: float
    tau_dagger: float | None
    tau_a: float
    taus: np.ndarray
    welfare: np.ndarray
    welfare_autarky: np.ndarray
    delta_mins: np.ndarray


def post_tax_scenario(policy, base):
    """Scenario after taxation: incomes scaled by ``1 - tau`` plus an equal rebate.

    The norm applies to post-tax income.
    """
    w = base.incomes
    return Scenario((1.0 - policy.tau) * w, base.beta, base.rho, base.m, base.delta,
                    base.grant + policy.grant(w), alpha=base.alpha)


def _branch_welfare(sc):
    u = sc.u
    return float(np.mean(u(autarky_consumptions(sc)))), float(np.mean(u(coop_consumptions(sc))))


def welfare(policy, delta, base, rule="all"):
    """Average per-period utility the planner attains at ``policy``.

    The cooperative branch applies exactly when ``delta`` reaches the
    post-tax threshold. Returns ``(welfare, regime, threshold)``.
    """
    sc = post_tax_scenario(policy, base)
    th = delta_min(sc, rule=rule)
    w_aut, w_coop = _branch_welfare(sc)
    if th.sustainable and delta >= th.delta_min:
        return w_coop, Regime.COOPERATIVE, th
    return w_aut, Regime.AUTARKIC, th


def _first_argmax(x):
    return int(np.flatnonzero(x == np.max(x))[0])


def _tau_dagger(taus, gaps, f, xtol=1e-10):
    s = np.sign(gaps)
    idx = np.flatnonzero(s[:-1] * s[1:] < 0)
    exact = np.flatnonzero(gaps == 0)
    if idx.size == 0:
        return float(taus[exact[-1]]) if exact.size else None
    j = idx[-1]
    lo, hi = taus[j], taus[j + 1]
    s_lo = s[j]
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if np.sign(f(mid)) == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def optimal_tax(delta, base, s, points=501, refine=False, rule="all"):
    """Welfare-maximizing tax on a uniform grid over ``[0, 1]``.

    Parameters
    ----------
    delta : float
        Common discount factor.
    base : Scenario
        Pre-tax economy; its ``delta`` is ignored.
    s : float
        Cost of public funds.
    points : int
        Grid size; ties go to the smallest rate.
    refine : bool
        Polish the winning grid cell with a bounded scalar search when both
        neighbours share its regime.

    Returns
    -------
    TaxResult
        ``tau_dagger`` solves ``delta_min(tau) = delta`` on the last sign
        change along the grid and is ``None`` when there is none.
    """
    taus = np.linspace(0.0, 1.0, points)
    W = np.empty(points)
    Wa = np.empty(points)
    D = np.empty(points)
    regimes = []
    for k, t in enumerate(taus):
        pol = FiscalPolicy(float(t), s)
        sc = post_tax_scenario(pol, base)
        th = delta_min(sc, rule=rule)
        wa, wc = _branch_welfare(sc)
        coop = th.sustainable and delta >= th.delta_min
        W[k] = wc if coop else wa
        Wa[k] = wa
        D[k] = th.delta_min
        regimes.append(Regime.COOPERATIVE if coop else Regime.AUTARKIC)

    k = _first_argmax(W)
    tau_star, w_star, regime = float(taus[k]), float(W[k]), regimes[k]
    if refine and 0 < k < points - 1 and regimes[k - 1] == regime == regimes[k + 1]:
        branch = 1 if regime is Regime.COOPERATIVE else 0

        def neg(t):
            return -_branch_welfare(post_tax_scenario(FiscalPolicy(t, s), base))[branch]

        res = minimize_scalar(neg, bounds=(taus[k - 1], taus[k + 1]), method="bounded",
                              options={"xatol": 1e-10})
        cand = float(res.x)
        w_cand, reg_cand, _ = welfare(FiscalPolicy(cand, s), delta, base, rule)
        if reg_cand == regime and w_cand > w_star:
            tau_star, w_star = cand, w_cand

    def gap(t):
        return delta_min(post_tax_scenario(FiscalPolicy(float(t), s), base), rule=rule).delta_min - delta

    tau_d = _tau_dagger(taus, D - delta, gap)
    return TaxResult(tau_star, regime, w_star, tau_d, float(taus[_first_argmax(Wa)]),
                     taus, W, Wa, D)
