"""Minimum discount factor that sustains the contribution norm.

For every type the normalized gap (cooperation minus deviation, multiplied
by ``(1-delta)(1-delta(1-m))``) is a quadratic in ``delta`` with a
non-positive value at 0 and the common value ``m (ubar_coop - ubar_aut)``
at 1. Each type therefore has at most one threshold in (0, 1).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .econ import income_weights
from .exceptions import BindingTypeError, DomainError, UniquenessError, UsageError
from .values import (
    Scenario,
    autarky_consumptions,
    coop_consumptions,
    deviation_consumptions,
    normalized_gap_vector,
    stage_utilities,
    values,
)

DELTA_EDGE = 1.0 - 1e-9
SCAN_POINTS = 64
BINDING_TOL = 1e-9


class Method(str, enum.Enum):
    QUADRATIC = "quadratic"
    BISECTION = "bisection"


class Status(str, enum.Enum):
    SUSTAINABLE = "sustainable"
    UNSUSTAINABLE = "unsustainable"


@dataclass(frozen=True)
class QuadraticCoefficients:
    """Coefficients of the ``beta = 0`` cooperation condition ``A d^2 + B d + C > 0``."""

    c0: float
    c1: float
    c2: float
    c3: float
    A: float
    B: float
    C: float

    @property
    def discriminant(self):
        return self.B * self.B - 4.0 * self.A * self.C

    def roots(self):
        """Return ``(retained, discarded)``.

        The retained root is the one in ``[0, 1)``; the discarded root is at
        least 1 and is ``inf`` when ``A == 0``.
        """
        sq = math.sqrt(max(self.discriminant, 0.0))
        q = -0.5 * (self.B + math.copysign(sq, self.B))
        retained = self.C / q
        discarded = q / self.A if self.A != 0 else math.inf
        return retained, discarded

    @property
    def vertex(self):
        return -self.B / (2.0 * self.A) if self.A != 0 else math.inf

    def __call__(self, delta):
        return self.A * delta * delta + self.B * delta + self.C


@dataclass(frozen=True, eq=False)
class ThresholdResult:
    """Outcome of a threshold computation.

    ``delta_min`` is 1.0 when the norm cannot be sustained for any
    ``delta < 1``; ``status`` tells the two cases apart. ``type_thresholds``
    holds each type's own indifference point (1-based type ``k`` at index
    ``k - 1``).
    """

    delta_min: float
    status: Status
    method: Method
    binding_type: int
    gap_at_solution: float
    type_thresholds: np.ndarray | None = None

    @property
    def sustainable(self):
        return self.status is Status.SUSTAINABLE


def quadratic_coefficients(scenario, i=1):
    """Coefficients ``c0..c3`` and ``A, B, C`` for type ``i`` when ``beta = 0``.

    The grant is folded into every consumption argument.
    """
    if scenario.beta != 0:
        raise UsageError("quadratic coefficients exist only for beta = 0")
    k = i - 1
    u, w, g, m = scenario.u, scenario.incomes, scenario.grant, scenario.m
    n = scenario.n
    c0 = float(u(w[k] + (w.sum() - w[k]) / n + g))
    c1 = float(u(w[k] + g))
    c2 = float(u(w.mean() + g))
    c3 = float(np.mean(u(w + g)))
    A = (1.0 - m) * (c1 - c0)
    B = c0 - m * c3 - (1.0 - m) * (c2 - c0 + c1)
    C = c2 - c0
    return QuadraticCoefficients(c0, c1, c2, c3, A, B, C)


def _bisect_types(gap, brackets, xtol):
    """Vectorized bisection, one bracket per type; ``gap(d)`` maps an ``(n,)`` array of deltas to per-type gaps."""
    lo = brackets[:, 0].copy()
    hi = brackets[:, 1].copy()
    idx = np.arange(lo.size)
    while np.max(hi - lo) > xtol:
        mid = 0.5 * (lo + hi)
        if np.all((mid == lo) | (mid == hi)):
            break
        pos = gap(mid)[idx, idx] > 0
        hi = np.where(pos, mid, hi)
        lo = np.where(pos, lo, mid)
    return hi


def _scan_brackets(G, grid):
    """Bracket each type's root from a coarse scan ``G`` of shape ``(points, n)``."""
    n = G.shape[1]
    brackets = np.empty((n, 2))
    for k in range(n):
        s = np.sign(G[:, k])
        changes = np.count_nonzero(np.diff(s[s != 0]))
        if changes > 1:
            raise UniquenessError(
                f"type {k + 1}: {changes} sign changes of the incentive gap on (0, 1)"
            )
        nonpos = np.nonzero(G[:, k] <= 0)[0]
        if nonpos.size == 0:
            brackets[k] = (0.0, 0.0)
        elif nonpos[-1] == grid.size - 1:
            brackets[k] = (1.0, 1.0)
        else:
            j = nonpos[-1]
            brackets[k] = (grid[j], grid[j + 1])
    return brackets


def _quadratic_thresholds(scenario):
    roots = np.empty(scenario.n)
    for k in range(scenario.n):
        q = quadratic_coefficients(scenario, k + 1)
        roots[k] = q.roots()[0]
    return np.clip(roots, 0.0, 1.0)


def _solve(m, uc0, ud0, uc1, ua1, method, rule, xtol, equal_incomes):
    def gap(d):
        return normalized_gap_vector(d, m, uc0, ud0, uc1, ua1)

    n = uc0.size
    end = float(gap(DELTA_EDGE)[0])
    if m == 0 or end <= 0:
        return ThresholdResult(1.0, Status.UNSUSTAINABLE, method, 1, end, np.ones(n))
    grid = np.linspace(0.0, DELTA_EDGE, SCAN_POINTS)
    brackets = _scan_brackets(gap(grid), grid)
    roots = _bisect_types(gap, brackets, xtol)
    return _finish(roots, gap, method, rule, equal_incomes)


def _finish(roots, gap, method, rule, equal_incomes):
    g_at = gap(roots[0])
    others_bind = np.nonzero((roots > roots[0] + BINDING_TOL) & (g_at < -BINDING_TOL))[0]
    if rule == "richest":
        if others_bind.size and not equal_incomes:
            k = int(others_bind[np.argmax(roots[others_bind])])
            raise BindingTypeError(
                f"type {k + 1} prefers to deviate at the richest type's threshold "
                f"{roots[0]:.12g} (its own threshold is {roots[k]:.12g})",
                binding_type=k + 1,
                delta=float(roots[0]),
            )
        d, b = float(roots[0]), 1
    elif rule == "all":
        b = int(np.argmax(roots)) + 1
        d = float(roots[b - 1])
    else:
        raise DomainError(f"unknown binding rule {rule!r}", "rule")
    status = Status.SUSTAINABLE if d < 1.0 else Status.UNSUSTAINABLE
    return ThresholdResult(d, status, method, b, float(gap(d)[b - 1]), roots)


def delta_min(scenario, *, method=None, rule="richest", xtol=1e-12):
    """Minimum discount factor at which the norm is an equilibrium outcome.

    Parameters
    ----------
    scenario : Scenario
        Economy; its ``delta`` is ignored.
    method : {"quadratic", "bisection"}, optional
        Defaults to the closed-form quadratic when ``beta == 0`` and to a
        64-point scan followed by bisection otherwise.
    rule : {"richest", "all"}
        ``"richest"`` solves the richest type's indifference condition and
        raises :class:`BindingTypeError` if another type still prefers to
        deviate there. ``"all"`` returns the largest per-type threshold.
    xtol : float
        Bisection tolerance on ``delta``.

    Returns
    -------
    ThresholdResult
    """
    if method is None:
        method = Method.QUADRATIC if scenario.beta == 0 else Method.BISECTION
    method = Method(method)
    m = scenario.m
    uc, ud, ua = stage_utilities(scenario)
    equal = bool(np.ptp(scenario.incomes) == 0)

    def gap(d):
        return normalized_gap_vector(d, m, uc, ud, uc, ua)

    if method is Method.BISECTION:
        return _solve(m, uc, ud, uc, ua, method, rule, xtol, equal)

    end = float(gap(DELTA_EDGE)[0])
    if m == 0 or end <= 0:
        return ThresholdResult(1.0, Status.UNSUSTAINABLE, method, 1, end, np.ones(scenario.n))
    return _finish(_quadratic_thresholds(scenario), gap, method, rule, equal)


def delta_min_two_alpha(alpha0, alpha1, template, *, rule="richest", xtol=1e-12):
    """Threshold when inequality is ``alpha0`` today and ``alpha1`` in every later period.

    The one-shot payoffs (the cooperative stage payoff and the deviation
    payoff, which includes the others' norm contributions) use ``alpha0``
    incomes. Both continuations use ``alpha1`` incomes. With
    ``alpha1 == alpha0`` this is :func:`delta_min`.

    ``template`` supplies ``n``, ``beta``, ``rho``, ``m`` and ``grant``;
    its incomes are ignored.
    """
    for name, a in (("alpha0", alpha0), ("alpha1", alpha1)):
        if not (a >= 0):
            raise DomainError(f"{name} must be >= 0, got {a!r}", name)
    t = template
    s0 = Scenario(income_weights(t.n, alpha0), t.beta, t.rho, t.m, 0.0, t.grant, alpha=alpha0)
    s1 = Scenario(income_weights(t.n, alpha1), t.beta, t.rho, t.m, 0.0, t.grant, alpha=alpha1)
    u = t.u
    uc0 = u(coop_consumptions(s0))
    ud0 = u(deviation_consumptions(s0))
    uc1 = u(coop_consumptions(s1))
    ua1 = u(autarky_consumptions(s1))
    equal = bool(np.ptp(s0.incomes) == 0 and np.ptp(s1.incomes) == 0)
    return _solve(t.m, uc0, ud0, uc1, ua1, Method.BISECTION, rule, xtol, equal)


def binding_type_check(scenario, delta=None):
    """Type (1-based) with the largest ``V_dev - V_coop``; ties go to the lowest index."""
    if delta is not None:
        scenario = scenario.replace(delta=delta)
    v = values(scenario)
    return int(np.argmax(v.v_dev - v.v_coop)) + 1
