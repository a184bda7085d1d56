"""Parameter sweeps over thresholds, selected norms and optimal taxes.

A sweep is a one-dimensional grid over one parameter, repeated for every
curve. Curves come from list-valued fixed fields (their cartesian product)
and from explicit per-curve overrides. Records are ordered by curve, then
by grid index, whatever the number of workers.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError
from .fiscal import FiscalPolicy, optimal_tax, post_tax_scenario
from .io import NORM_FIELDS, TAX_FIELDS, THRESHOLD_FIELDS
from .norms import SearchConfig, beta_star, smooth_series
from .threshold import delta_min, delta_min_two_alpha
from .values import Scenario

KINDS = ("threshold", "norm", "tax")
SWEEP_PARAMS = ("m", "alpha", "alpha1", "beta", "tau", "delta")
ALLOWED = {
    "threshold": ("m", "alpha", "alpha1", "beta", "tau", "delta"),
    "norm": ("m", "alpha"),
    "tax": ("m", "alpha", "beta", "delta"),
}
DEFAULTS = {
    "threshold": dict(n=3, rho=1.0, alpha=1.0, beta=0.0, m=0.5, grant=0.0, rule="all"),
    "norm": dict(n=6, rho=4.0, alpha=0.5, m=0.5, grant=0.0, rule="all",
                 beta_lo=0.0, beta_hi=8.0, coarse_points=100, refine_points=1000),
    "tax": dict(n=3, rho=0.5, alpha=1.0, beta=0.0, m=0.5, s=0.09, delta=0.7,
                tau_points=501, rule="all"),
}


@dataclass(frozen=True)
class SweepSpec:
    """Grid over ``param`` from ``lo`` to ``hi`` with ``points`` nodes.

    ``fixed`` values that are lists span one curve per element (cartesian
    product, in key order). ``curves`` adds per-curve overrides on top.
    """

    param: str
    lo: float
    hi: float
    points: int
    kind: str = "threshold"
    fixed: dict = field(default_factory=dict)
    curves: tuple = ({},)
    output: str | None = None
    fmt: str = "csv"
    chart: bool = False
    smooth: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"sweep kind must be one of {KINDS}", "kind")
        if self.param not in SWEEP_PARAMS:
            raise DomainError(f"swept parameter must be one of {SWEEP_PARAMS}", "param")
        if self.param not in ALLOWED[self.kind]:
            raise DomainError(f"{self.kind} sweeps cannot vary {self.param!r}", "param")
        if int(self.points) != self.points or self.points < 2:
            raise DomainError("a sweep needs at least 2 grid points", "points")
        if not (self.lo < self.hi):
            raise DomainError(f"need lo < hi, got {self.lo!r} >= {self.hi!r}", "lo")
        if self.fmt not in ("csv", "json"):
            raise DomainError("format must be csv or json", "format")

    def grid(self):
        return np.linspace(self.lo, self.hi, int(self.points))

    def curve_params(self):
        base = dict(DEFAULTS[self.kind])
        scalars, lists = {}, {}
        for k, v in self.fixed.items():
            (lists if isinstance(v, (list, tuple)) else scalars)[k] = v
        base.update(scalars)
        out = []
        for combo in itertools.product(*lists.values()):
            for extra in self.curves:
                p = dict(base)
                p.update(zip(lists.keys(), combo))
                p.update(extra)
                p.pop(self.param, None)
                out.append(p)
        return out

    def tasks(self):
        return [dict(p, **{self.param: float(x)}) for p in self.curve_params() for x in self.grid()]

    def fields(self):
        if self.kind == "threshold":
            return THRESHOLD_FIELDS + (("tau", "s") if self.param == "tau" else ())
        if self.kind == "norm":
            return NORM_FIELDS + (("beta_star_smoothed",) if self.smooth else ())
        return TAX_FIELDS

    def y_field(self):
        return {"threshold": "delta_min", "norm": "beta_star", "tax": "tau_star"}[self.kind]


def curve_label(spec, record):
    """Short text naming the curve a record belongs to, built from its varying fields."""
    varying = [k for k, v in spec.fixed.items() if isinstance(v, (list, tuple))]
    for extra in spec.curves:
        varying += [k for k in extra if k not in varying]
    varying = [k for k in varying if k != spec.param]
    return ", ".join(f"{k}={record.get(k)}" for k in varying)


def threshold_point(p):
    """One threshold record. Setting ``alpha1`` switches to the two-period economy."""
    n, rho, beta, m, g = int(p["n"]), p["rho"], p["beta"], p["m"], p.get("grant", 0.0)
    rule = p.get("rule", "all")
    template = Scenario.from_alpha(n, p["alpha"], beta, rho, m, 0.0, g)
    extra = {}
    if "alpha1" in p:
        a0 = p.get("alpha0", p["alpha"])
        a1 = p["alpha1"]
        res = delta_min_two_alpha(a0, a1, template, rule=rule)
    else:
        a0 = a1 = p["alpha"]
        sc = template
        if "tau" in p:
            s = p.get("s", 0.09)
            sc = post_tax_scenario(FiscalPolicy(p["tau"], s), template)
            extra = {"tau": p["tau"], "s": s}
        res = delta_min(sc, rule=rule)
    return dict(n=n, rho=rho, alpha=a0, alpha0=a0, alpha1=a1, beta=beta, m=m,
                delta_min=res.delta_min, sustainable=res.sustainable, **extra)


def norm_point(p):
    n, rho, m, alpha = int(p["n"]), p["rho"], p["m"], p["alpha"]
    cfg = SearchConfig(p["beta_lo"], p["beta_hi"], int(p["coarse_points"]), int(p["refine_points"]))
    template = Scenario.from_alpha(n, alpha, 0.0, rho, 0.5, 0.0, p.get("grant", 0.0))
    res = beta_star(alpha, m, template, cfg, rule=p.get("rule", "all"))
    return dict(n=n, rho=rho, m=m, alpha=alpha, beta_star=res.beta_star,
                delta_min_at_star=res.delta_min_at_star)


def tax_point(p):
    n, rho, m, beta, alpha = int(p["n"]), p["rho"], p["m"], p["beta"], p["alpha"]
    s, delta = p["s"], p["delta"]
    base = Scenario.from_alpha(n, alpha, beta, rho, m, 0.0, p.get("grant", 0.0))
    res = optimal_tax(delta, base, s, int(p["tau_points"]), rule=p.get("rule", "all"))
    return dict(n=n, rho=rho, s=s, delta=delta, m=m, beta=beta, alpha=alpha,
                tau_star=res.tau_star, tau_dagger=res.tau_dagger, tau_a=res.tau_a,
                regime=res.regime.value, welfare=res.welfare_at_star)


POINT_FUNCS = {"threshold": threshold_point, "norm": norm_point, "tax": tax_point}


def evaluate(func, tasks, workers=1):
    """Map ``func`` over ``tasks`` keeping input order."""
    if workers is None or workers <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks, chunksize=chunk))


def run_sweep(spec, workers=1):
    """Evaluate every grid point of ``spec`` and return the records in order."""
    records = evaluate(POINT_FUNCS[spec.kind], spec.tasks(), workers)
    if spec.kind == "norm" and spec.smooth:
        k = int(spec.points)
        for start in range(0, len(records), k):
            block = records[start:start + k]
            sm = smooth_series([r["beta_star"] for r in block])
            for r, v in zip(block, sm):
                r["beta_star_smoothed"] = float(v)
    return records


PRESETS = {
    "fig2-beta0": (dict(kind="threshold", param="m", lo=0.05, hi=1.0, points=96,
                        fixed=dict(n=3, rho=1.0, beta=0.0, alpha=[0.25, 0.5, 1.0, 2.0])),),
    "fig2-beta1": (dict(kind="threshold", param="m", lo=0.05, hi=1.0, points=96,
                        fixed=dict(n=3, rho=1.0, beta=1.0, alpha=[0.25, 0.5, 1.0, 2.0])),),
    "fig3": (dict(kind="threshold", param="alpha1", lo=0.6, hi=3.0, points=50,
                  fixed=dict(n=5, rho=1.0, alpha=0.5, alpha0=0.5, beta=[1.0, 4.0],
                             m=[0.2, 0.5, 0.8])),),
    "fig-norm": (dict(kind="norm", param="alpha", lo=0.05, hi=1.0, points=20, smooth=True,
                      fixed=dict(n=6, rho=4.0, m=[0.4, 0.9])),),
    "fig4": (dict(kind="tax", param="alpha", lo=0.25, hi=10.0, points=40,
                  fixed=dict(n=3, rho=0.5, s=0.09, delta=0.7),
                  curves=(dict(m=0.8, beta=1.5), dict(m=0.8, beta=2.0),
                          dict(m=0.4, beta=2.0), dict(m=0.8, beta=0.0))),),
}
PRESETS["fig2"] = PRESETS["fig2-beta0"] + PRESETS["fig2-beta1"]


def preset_specs(name, **overrides):
    if name not in PRESETS:
        raise DomainError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}", "preset")
    return [SweepSpec(**{**d, **overrides}) for d in PRESETS[name]]
