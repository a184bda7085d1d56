"""Informal transfer groups under income mobility.

Closed-form values of cooperating, deviating and autarky, the minimum
discount factor that sustains a contribution norm, the norm that minimizes
it, optimal proportional taxation, and a Monte Carlo oracle for the values.
"""
from .econ import (
    ContributionNorm,
    IncomeDistribution,
    MobilityProcess,
    Utility,
    income_weights,
    norm_share,
    position_transition_matrix,
    prais_index,
    ranking_states,
    state_transition_matrix,
    utility,
)
from .exceptions import (
    BindingTypeError,
    CapacityError,
    DomainError,
    EmptyResultError,
    UniquenessError,
    UsageError,
)
from .fiscal import FiscalPolicy, Regime, TaxResult, optimal_tax, post_tax_scenario, welfare
from .norms import NormSelectionResult, SearchConfig, beta_star, smooth_series
from .sim import SimConfig, SimEstimate, estimate_value, oracle_check
from .smoothing import savitzky_golay
from .threshold import (
    Method,
    Status,
    ThresholdResult,
    binding_type_check,
    delta_min,
    delta_min_two_alpha,
    quadratic_coefficients,
)
from .values import Scenario, ValueTriple, incentive_gap, values

__version__ = "0.1.0"
