"""Closed-form discounted values of cooperation, deviation and autarky.

Positions follow the player-level chain: stay with probability
``1 - (n-1) m / n`` and move to each other position with probability
``m / n``. Writing ``a = 1 - delta (1 - m)`` and ``ubar`` for the mean of a
per-type utility vector, every value has the form

    V_i = ((1 - delta) u_i + delta m ubar) / ((1 - delta) a).

A lump-sum grant ``g`` is added to consumption in every regime and state.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .econ import income_weights, norm_share, utility
from .exceptions import DomainError


@dataclass(frozen=True, eq=False)
class Scenario:
    """One fully specified economy.

    ``incomes`` are ordered richest first and need not sum to one (post-tax
    incomes do not). ``alpha`` is carried along for reporting only.
    """

    incomes: np.ndarray
    beta: float
    rho: float
    m: float
    delta: float = 0.0
    grant: float = 0.0
    alpha: float | None = field(default=None, compare=False)

    def __post_init__(self):
        w = np.array(self.incomes, dtype=float).ravel()
        if w.size < 2:
            raise DomainError("a scenario needs at least two income types", "n")
        if np.any(w < 0) or np.any(np.diff(w) > 1e-15):
            raise DomainError("incomes must be non-negative and ordered richest first", "incomes")
        if not (0.0 <= self.m <= 1.0):
            raise DomainError(f"mobility m must lie in [0, 1], got {self.m!r}", "m")
        if not (0.0 <= self.delta < 1.0):
            raise DomainError(f"delta must lie in [0, 1), got {self.delta!r}", "delta")
        if not (self.grant >= 0.0):
            raise DomainError(f"grant must be >= 0, got {self.grant!r}", "grant")
        if w.min() + self.grant <= 0:
            raise DomainError("consumption would be zero for the poorest type", "grant")
        norm_share(self.beta, 1.0)
        utility(self.rho, 1.0)
        w.setflags(write=False)
        object.__setattr__(self, "incomes", w)

    @classmethod
    def from_alpha(cls, n, alpha, beta, rho, m, delta=0.0, grant=0.0):
        return cls(income_weights(n, alpha), beta, rho, m, delta, grant, alpha=alpha)

    @property
    def n(self):
        return self.incomes.size

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def u(self, x):
        return utility(self.rho, x)


@dataclass(frozen=True, eq=False)
class ValueTriple:
    v_coop: np.ndarray
    v_dev: np.ndarray
    v_aut: np.ndarray


def _check_type(scenario, i):
    if not (1 <= i <= scenario.n):
        raise DomainError(f"type index must be in 1..{scenario.n}, got {i}", "type")
    return i - 1


def contributions(scenario):
    """Amounts ``theta(w_j) w_j`` that the norm asks of each type."""
    w = scenario.incomes
    return norm_share(scenario.beta, w) * w


def coop_consumptions(scenario):
    c = contributions(scenario)
    return scenario.incomes - c + c.sum() / scenario.n + scenario.grant


def deviation_consumptions(scenario):
    """One-shot consumption of each type when it alone withholds its contribution."""
    c = contributions(scenario)
    return scenario.incomes + (c.sum() - c) / scenario.n + scenario.grant


def autarky_consumptions(scenario):
    return scenario.incomes + scenario.grant


def coop_consumption(scenario, i):
    """Consumption of type ``i`` (1-based) when everyone follows the norm."""
    return float(coop_consumptions(scenario)[_check_type(scenario, i)])


def stage_utilities(scenario):
    """Per-type utilities ``(u_coop, u_dev, u_aut)`` of one period."""
    u = scenario.u
    return (
        u(coop_consumptions(scenario)),
        u(deviation_consumptions(scenario)),
        u(autarky_consumptions(scenario)),
    )


def _stationary_value(u, delta, m):
    a = 1.0 - delta * (1.0 - m)
    return ((1.0 - delta) * u + delta * m * u.mean()) / ((1.0 - delta) * a)


def _continuation(V, m):
    # expected next-period value from each position
    return (1.0 - m) * V + m * V.mean()


def values(scenario):
    """Values of all three regimes for every type.

    The deviation value prices the one-shot deviation followed by permanent
    autarky. Its continuation uses ``S / n`` with ``S = sum(u_aut) / (1 - delta)``,
    which is the form consistent with the recursions. The compact display
    of the same value drops the ``1/(1 - delta)`` on the final mobility term.
    """
    d, m = scenario.delta, scenario.m
    uc, ud, ua = stage_utilities(scenario)
    v_coop = _stationary_value(uc, d, m)
    v_aut = _stationary_value(ua, d, m)
    v_dev = ud + d * _continuation(v_aut, m)
    return ValueTriple(v_coop, v_dev, v_aut)


def value_coop(scenario, i):
    return float(values(scenario).v_coop[_check_type(scenario, i)])


def value_deviation(scenario, i):
    return float(values(scenario).v_dev[_check_type(scenario, i)])


def value_autarky(scenario, i):
    return float(values(scenario).v_aut[_check_type(scenario, i)])


def normalized_gap_vector(delta, m, u_coop_now, u_dev_now, u_coop_next, u_aut_next):
    """Cooperation-minus-deviation gap of every type, times ``(1-delta)(1-delta(1-m))``.

    The period-0 utilities and the continuation utilities may come from
    different income distributions. The expression is a polynomial in
    ``delta`` and stays finite at ``delta = 1``. ``delta`` may be an array,
    in which case the result has shape ``delta.shape + (n,)``.
    """
    d = np.asarray(delta, dtype=float)[..., None]
    a = 1.0 - d * (1.0 - m)
    k = 1.0 - d

    def side(now, nxt):
        cont = (1.0 - m) * (k * nxt + d * m * nxt.mean()) + a * m * nxt.mean()
        return k * a * now + d * cont

    return side(u_coop_now, u_coop_next) - side(u_dev_now, u_aut_next)


def incentive_gap(scenario, i):
    """Return ``(raw, normalized)`` gap ``V_coop - V_dev`` of type ``i`` (1-based)."""
    k = _check_type(scenario, i)
    uc, ud, ua = stage_utilities(scenario)
    norm = float(normalized_gap_vector(scenario.delta, scenario.m, uc, ud, uc, ua)[k])
    v = values(scenario)
    return float(v.v_coop[k] - v.v_dev[k]), norm


def comparative_statics(scenario, wrt, h=1e-5, i=1):
    """Central finite differences of ``V_i^c`` and ``V_i^d`` in ``m`` or ``alpha``.

    Differentiating in ``alpha`` requires a scenario built with
    :meth:`Scenario.from_alpha`.
    """
    def build(x):
        if wrt == "m":
            return scenario.replace(m=x)
        if wrt == "alpha":
            if scenario.alpha is None:
                raise DomainError("scenario was not built from alpha", "alpha")
            return Scenario.from_alpha(scenario.n, x, scenario.beta, scenario.rho,
                                       scenario.m, scenario.delta, scenario.grant)
        raise DomainError(f"cannot differentiate with respect to {wrt!r}", "wrt")

    if wrt not in ("m", "alpha"):
        raise DomainError(f"cannot differentiate with respect to {wrt!r}", "wrt")
    if wrt == "alpha" and scenario.alpha is None:
        raise DomainError("scenario was not built from alpha", "alpha")
    x0 = scenario.m if wrt == "m" else scenario.alpha
    lo, hi = x0 - h, x0 + h
    if wrt == "m":
        lo, hi = max(lo, 0.0), min(hi, 1.0)
    else:
        lo = max(lo, 0.0)
    vlo, vhi = values(build(lo)), values(build(hi))
    k = _check_type(scenario, i)
    return (
        float((vhi.v_coop[k] - vlo.v_coop[k]) / (hi - lo)),
        float((vhi.v_dev[k] - vlo.v_dev[k]) / (hi - lo)),
    )
