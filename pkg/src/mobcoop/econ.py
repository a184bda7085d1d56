"""Primitive economic objects: incomes, mobility, contribution norms, utility.

Income types are indexed from the top of the distribution: type 1 is the
richest. Arrays returned here are 0-based, so ``w[0]`` is type 1's income.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import CapacityError, DomainError

MAX_STATE_N = 6


def _check_n(n):
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}", "n")
    return int(n)


def _check_m(m):
    if not (0.0 <= m <= 1.0):
        raise DomainError(f"mobility m must lie in [0, 1], got {m!r}", "m")
    return float(m)


def income_weights(n, alpha):
    """Income shares of the ``n`` positions for inequality level ``alpha``.

    Shares are a softmax over ``alpha * (n - i + 1)`` for ``i = 1..n``, so
    they sum to one, are all ``1/n`` at ``alpha = 0`` and concentrate on the
    first position as ``alpha`` grows. Consecutive shares have ratio
    ``exp(alpha)``.

    Parameters
    ----------
    n : int
        Number of players / positions, at least 2.
    alpha : float
        Non-negative, finite inequality parameter.

    Returns
    -------
    numpy.ndarray
        Shares ordered from richest to poorest.
    """
    n = _check_n(n)
    if not math.isfinite(alpha) or alpha < 0:
        raise DomainError(f"alpha must be finite and >= 0, got {alpha!r}", "alpha")
    expo = alpha * (n - np.arange(1, n + 1) + 1.0)
    expo -= expo.max()
    e = np.exp(expo)
    return e / e.sum()


def utility(rho, x):
    """CRRA utility with relative risk aversion ``rho`` (log at ``rho == 1``)."""
    if not math.isfinite(rho) or rho < 0:
        raise DomainError(f"rho must be finite and >= 0, got {rho!r}", "rho")
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("utility is only defined for strictly positive consumption", "x")
    if rho == 1.0:
        out = np.log(x)
    else:
        out = np.expm1((1.0 - rho) * np.log(x)) / (1.0 - rho)
    return out if out.ndim else float(out)


def norm_share(beta, w):
    """Share ``w**beta`` of income that the norm asks a player to transfer.

    Uses ``0**0 == 1`` (``beta = 0`` means "give everything") and
    ``0**beta == 0`` for ``beta > 0``.
    """
    if not math.isfinite(beta) or beta < 0:
        raise DomainError(f"beta must be finite and >= 0, got {beta!r}", "beta")
    w = np.asarray(w, dtype=float)
    if np.any(w < 0):
        raise DomainError("income shares must be non-negative", "w")
    out = np.power(w, beta)
    return out if out.ndim else float(out)


def position_transition_matrix(n, m):
    """One player's position chain: stay w.p. ``1-(n-1)m/n``, move to each other position w.p. ``m/n``."""
    n = _check_n(n)
    m = _check_m(m)
    return (1.0 - m) * np.eye(n) + (m / n) * np.ones((n, n))


def ranking_states(n):
    """All rankings of ``n`` players in lexicographic order.

    State ``s`` is a tuple where ``s[k]`` is the player holding position
    ``k + 1``; for three players this is the order ijk, ikj, jik, jki, kij, kji.
    """
    return list(itertools.permutations(range(n)))


def rotation_successors(s):
    """Non-trivial cyclic shifts of ranking ``s``.

    Every player changes position, and across the ``n - 1`` shifts each
    player visits every other position exactly once.
    """
    n = len(s)
    return [tuple(s[(k + r) % n] for k in range(n)) for r in range(1, n)]


def state_transition_matrix(n, m):
    """Transition matrix over the ``n!`` ranking states.

    The diagonal is ``1-(n-1)m/n``; each cyclic shift of the current ranking
    receives ``m/n``. For ``n <= 3`` the shifts are exactly the rankings with
    no player left in place.
    """
    n = _check_n(n)
    m = _check_m(m)
    if n > MAX_STATE_N:
        raise CapacityError(
            f"state-level matrix needs n! states; n={n} exceeds the limit "
            f"n <= {MAX_STATE_N} ({math.factorial(MAX_STATE_N)} states)",
            "n",
        )
    states = ranking_states(n)
    index = {s: k for k, s in enumerate(states)}
    P = np.zeros((len(states), len(states)))
    stay = 1.0 - (n - 1) * m / n
    for k, s in enumerate(states):
        P[k, k] = stay
        for t in rotation_successors(s):
            P[k, index[t]] += m / n
    return P


def prais_index(matrix, atol=1e-9):
    """Prais mobility index ``(K - trace) / (K - 1)`` of a ``K x K`` stochastic matrix."""
    P = np.asarray(matrix, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] < 2:
        raise DomainError("Prais index needs a square matrix of size >= 2", "matrix")
    if np.any(P < -atol) or not np.allclose(P.sum(axis=1), 1.0, atol=atol):
        raise DomainError("Prais index needs a row-stochastic matrix", "matrix")
    K = P.shape[0]
    return float((K - np.trace(P)) / (K - 1))


@dataclass(frozen=True)
class IncomeDistribution:
    n: int
    alpha: float
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        w = income_weights(self.n, self.alpha)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def mean(self):
        return 1.0 / self.n


@dataclass(frozen=True)
class MobilityProcess:
    n: int
    m: float

    def __post_init__(self):
        _check_n(self.n)
        _check_m(self.m)

    def position_matrix(self):
        return position_transition_matrix(self.n, self.m)

    def state_matrix(self):
        return state_transition_matrix(self.n, self.m)


@dataclass(frozen=True)
class ContributionNorm:
    beta: float

    def __post_init__(self):
        norm_share(self.beta, 1.0)

    def share(self, w):
        return norm_share(self.beta, w)


@dataclass(frozen=True)
class Utility:
    rho: float

    def __post_init__(self):
        utility(self.rho, 1.0)

    def __call__(self, x):
        return utility(self.rho, x)
