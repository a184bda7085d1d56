"""Monte Carlo oracle for the discounted values.

Paths are drawn from the transition matrices by inverse-CDF sampling, and
stage consumptions are rebuilt here from the primitives, so the estimates
share nothing with the closed forms beyond the economy's primitives.

Replications are split into fixed-size chunks. Chunk ``c`` of the run for
(regime, type) draws from ``SeedSequence(seed, spawn_key=(regime, type, c))``,
so an estimate does not depend on how chunks are scheduled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .econ import (
    norm_share,
    position_transition_matrix,
    ranking_states,
    state_transition_matrix,
    utility,
)
from .exceptions import CapacityError, DomainError

REGIMES = ("cooperate", "deviate", "autarky")
MAX_SIM_STATE_N = 4


@dataclass(frozen=True)
class SimConfig:
    replications: int = 20_000
    seed: int = 0
    horizon: int | None = None
    truncation_tol: float = 1e-4
    chunk: int = 2_500

    def __post_init__(self):
        if self.replications < 1:
            raise DomainError("need at least one replication", "replications")
        if self.horizon is not None and self.horizon < 1:
            raise DomainError("horizon must be >= 1", "horizon")
        if not (0 <= self.seed < 2**64):
            raise DomainError("seed must be a 64-bit unsigned value", "seed")


@dataclass(frozen=True)
class SimEstimate:
    mean: float
    stderr: float
    truncation_bound: float
    horizon: int
    replications: int

    def covers(self, value, k=3.0):
        # the bound is attained exactly on deterministic paths, so allow for rounding
        slack = 1e-9 * max(1.0, abs(value))
        return abs(value - self.mean) <= k * self.stderr + self.truncation_bound + slack


def _rng(seed, *key):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def _step(cum, pos, rng):
    u = rng.random(pos.shape[0])
    nxt = (cum[pos] <= u[:, None]).sum(axis=1)
    return np.minimum(nxt, cum.shape[1] - 1)


def _run_chain(P, start, horizon, seed):
    cum = np.cumsum(P, axis=1)
    rng = _rng(seed)
    path = np.empty(horizon, dtype=np.int64)
    pos = np.array([start])
    for t in range(horizon):
        path[t] = pos[0]
        pos = _step(cum, pos, rng)
    return path


def simulate_positions(n, m, start, horizon, seed):
    """Position path (1-based) of one player, starting at ``start``."""
    if not (1 <= start <= n):
        raise DomainError(f"start must be in 1..{n}", "start")
    return _run_chain(position_transition_matrix(n, m), start - 1, horizon, seed) + 1


def simulate_states(n, m, start, horizon, seed):
    """Path of ranking-state indices into :func:`mobcoop.econ.ranking_states`.

    ``start`` is a state index or a ranking tuple.
    """
    if n > MAX_SIM_STATE_N:
        raise CapacityError(f"state simulation supports n <= {MAX_SIM_STATE_N}, got {n}", "n")
    states = ranking_states(n)
    if isinstance(start, tuple):
        start = states.index(start)
    return _run_chain(state_transition_matrix(n, m), int(start), horizon, seed)


def stage_tables(scenario):
    """Per-position period utilities under cooperation, one-shot deviation and autarky."""
    w = np.asarray(scenario.incomes, dtype=float)
    n, g = w.size, scenario.grant
    give = norm_share(scenario.beta, w) * w
    pool = give.sum() / n
    coop = w - give + pool + g
    dev = w + pool - give / n + g
    aut = w + g
    u = lambda x: np.asarray(utility(scenario.rho, x), dtype=float)  # noqa: E731
    return u(coop), u(dev), u(aut)


def horizon_for(delta, u_range, tol):
    """Smallest ``T`` with ``delta**T * u_range / (1 - delta) <= tol``."""
    if delta == 0 or u_range == 0:
        return 1
    need = math.log(tol * (1.0 - delta) / u_range) / math.log(delta)
    return max(1, math.ceil(need))


def estimate_value(regime, scenario, i, config=None):
    """Monte Carlo estimate of type ``i``'s (1-based) discounted value.

    ``cooperate``: everyone follows the norm in every period.
    ``deviate``: type ``i`` withholds its contribution in period 0 while
    the others give, then everyone contributes nothing.
    ``autarky``: nobody ever contributes.
    """
    if regime not in REGIMES:
        raise DomainError(f"regime must be one of {REGIMES}", "regime")
    cfg = config or SimConfig()
    n = scenario.n
    if not (1 <= i <= n):
        raise DomainError(f"type index must be in 1..{n}", "type")
    delta, m = scenario.delta, scenario.m
    coop, dev, aut = stage_tables(scenario)
    if regime == "cooperate":
        first, rest = coop, coop
    elif regime == "deviate":
        first, rest = dev, aut
    else:
        first, rest = aut, aut
    u_range = float(max(np.abs(first[i - 1]), np.abs(rest).max()))
    T = cfg.horizon or horizon_for(delta, u_range, cfg.truncation_tol)
    bound = 0.0 if delta == 0 else delta**T * u_range / (1.0 - delta)

    cum = np.cumsum(position_transition_matrix(n, m), axis=1)
    code = REGIMES.index(regime)
    chunks = []
    for c, lo in enumerate(range(0, cfg.replications, cfg.chunk)):
        r = min(cfg.chunk, cfg.replications - lo)
        rng = _rng(cfg.seed, code, i, c)
        pos = np.full(r, i - 1)
        acc = np.full(r, first[i - 1])
        disc = 1.0
        for _ in range(1, T):
            pos = _step(cum, pos, rng)
            disc *= delta
            acc += disc * rest[pos]
        chunks.append(acc)
    draws = np.concatenate(chunks)
    R = draws.size
    sd = float(np.std(draws, ddof=1)) if R > 1 else 0.0
    return SimEstimate(float(np.mean(draws)), sd / math.sqrt(R), bound, T, R)


def oracle_check(scenario, config=None, k=3.0):
    """Compare every closed-form value of ``scenario`` with its estimate.

    Returns a list of ``(regime, type, closed_form, estimate, covered)``.
    """
    from .values import values

    v = values(scenario)
    closed = {"cooperate": v.v_coop, "deviate": v.v_dev, "autarky": v.v_aut}
    rows = []
    for regime in REGIMES:
        for i in range(1, scenario.n + 1):
            est = estimate_value(regime, scenario, i, config)
            cf = float(closed[regime][i - 1])
            rows.append((regime, i, cf, est, est.covers(cf, k)))
    return rows
