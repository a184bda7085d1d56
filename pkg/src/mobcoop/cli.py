"""Command-line front end.

Exit codes: 0 success, 1 internal failure, 2 bad argument, 3 I/O error,
4 empty result.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from .exceptions import BindingTypeError, DomainError, EmptyResultError
from .io import THRESHOLD_FIELDS, format_value, from_csv, render_chart, to_csv, to_json, write_text
from .sim import REGIMES, SimConfig, estimate_value
from .sweeps import DEFAULTS, SweepSpec, curve_label, preset_specs, run_sweep
from .threshold import delta_min, delta_min_two_alpha
from .values import Scenario, incentive_gap, values

EXIT_OK, EXIT_FAIL, EXIT_ARGS, EXIT_IO, EXIT_EMPTY = 0, 1, 2, 3, 4


class ArgumentError(Exception):
    def __init__(self, flag, message):
        super().__init__(f"--{flag}: {message}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


def _common(default=None):
    # subcommands pass SUPPRESS so they do not overwrite values given before the subcommand
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--config", metavar="FILE", default=default,
                   help="JSON file whose keys match flag names")
    g.add_argument("--seed", type=int, default=default, help="base seed (used by simulate)")
    g.add_argument("--workers", type=int, default=default, help="worker processes for sweeps")
    g.add_argument("--preset", default=default,
                   help="figure preset: fig2, fig2-beta0, fig2-beta1, fig3, fig-norm, fig4")
    return p


def _scenario_flags(p, many=False):
    kw = dict(nargs="+") if many else {}
    p.add_argument("--n", type=int, **kw, help="number of income types")
    p.add_argument("--alpha", type=float, **kw, help="inequality parameter")
    p.add_argument("--beta", type=float, **kw, help="norm progressivity")
    p.add_argument("--rho", type=float, **kw, help="relative risk aversion")
    p.add_argument("--m", type=float, **kw, help="income mobility")
    p.add_argument("--grant", type=float, **kw, help="lump-sum grant added to consumption")
    p.add_argument("--rule", choices=("richest", "all"), default=None,
                   help="binding-type rule for thresholds (default: all)")


def _sweep_flags(p, kind, default_param):
    p.add_argument("--param", default=None, help=f"swept parameter (default {default_param})")
    p.add_argument("--lo", type=float, default=None)
    p.add_argument("--hi", type=float, default=None)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--chart", default=None, metavar="SVG", help="also write an SVG chart")
    p.set_defaults(kind=kind, default_param=default_param)


def build_parser():
    parser = _Parser(prog="mobcoop", parents=[_common()],
                     description="Cooperation thresholds under income mobility.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common(argparse.SUPPRESS)

    p = sub.add_parser("values", parents=[common], help="closed-form values per type")
    _scenario_flags(p)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--json", action="store_true", help="print JSON instead of a table")

    p = sub.add_parser("threshold", parents=[common], help="minimum discount factor")
    _scenario_flags(p)
    p.add_argument("--alpha0", type=float, default=None, help="current-period inequality")
    p.add_argument("--alpha1", type=float, default=None, help="future inequality")
    p.add_argument("--method", choices=("quadratic", "bisection"), default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default=None)

    p = sub.add_parser("sweep", parents=[common], help="threshold sweep over one parameter")
    _scenario_flags(p, many=True)
    p.add_argument("--alpha0", type=float, nargs="+", default=None)
    p.add_argument("--alpha1", type=float, nargs="+", default=None)
    p.add_argument("--s", type=float, nargs="+", default=None, help="cost of public funds (tau sweeps)")
    _sweep_flags(p, "threshold", "m")

    p = sub.add_parser("norm-select", parents=[common], help="threshold-minimizing norm")
    for name, typ in (("n", int), ("rho", float), ("alpha", float), ("m", float), ("grant", float)):
        p.add_argument(f"--{name}", type=typ, nargs="+", default=None)
    p.add_argument("--rule", choices=("richest", "all"), default=None)
    p.add_argument("--beta-lo", type=float, default=None)
    p.add_argument("--beta-hi", type=float, default=None)
    p.add_argument("--coarse-points", type=int, default=None)
    p.add_argument("--refine-points", type=int, default=None)
    p.add_argument("--smooth", action="store_true", default=None,
                   help="add a Savitzky-Golay smoothed beta_star column")
    _sweep_flags(p, "norm", "alpha")

    p = sub.add_parser("tax", parents=[common], help="welfare-maximizing tax rate")
    _scenario_flags(p, many=True)
    p.add_argument("--s", type=float, nargs="+", default=None)
    p.add_argument("--delta", type=float, nargs="+", default=None)
    p.add_argument("--tau-points", type=int, default=None)
    _sweep_flags(p, "tax", "alpha")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo value estimates")
    _scenario_flags(p)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--regime", choices=REGIMES + ("all",), default=None)
    p.add_argument("--type", type=int, default=None, help="1-based type (default: all)")
    p.add_argument("--replications", type=int, default=None)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--truncation-tol", type=float, default=None)

    p = sub.add_parser("chart", parents=[common], help="SVG line chart from a CSV file")
    p.add_argument("--in", dest="input", default=None, help="input CSV")
    p.add_argument("--x", default=None)
    p.add_argument("--y", default=None)
    p.add_argument("--group", default=None)
    p.add_argument("--title", default=None)
    p.add_argument("--out", default=None, help="output SVG (default: stdout)")
    return parser


def _apply_config(parser, argv):
    """Parse ``argv``; values from ``--config`` fill in flags left unset."""
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read config {args.config}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ArgumentError("config", f"invalid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ArgumentError("config", "top level must be an object")
    known = vars(args)
    for key, val in cfg.items():
        dest = "input" if key == "in" else key.replace("-", "_")
        if dest not in known or dest in ("command", "config", "kind", "default_param"):
            raise ArgumentError(key, "unknown key in config file")
        if known[dest] is None or known[dest] is False:
            setattr(args, dest, val)
    return args


def _get(args, name, default=None):
    v = getattr(args, name, None)
    return default if v is None else v


def _scenario(args):
    d = DEFAULTS["threshold"]
    return Scenario.from_alpha(int(_get(args, "n", d["n"])), float(_get(args, "alpha", d["alpha"])),
                               float(_get(args, "beta", d["beta"])), float(_get(args, "rho", d["rho"])),
                               float(_get(args, "m", d["m"])), float(_get(args, "delta", 0.0)),
                               float(_get(args, "grant", 0.0)))


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        write_text(out, text)


def _serialize(records, fields, fmt):
    return to_json(records, fields) if fmt == "json" else to_csv(records, fields)


def cmd_values(args):
    sc = _scenario(args)
    v = values(sc)
    rows = []
    for i in range(1, sc.n + 1):
        raw, norm = incentive_gap(sc, i)
        rows.append(dict(type=i, income=float(sc.incomes[i - 1]), v_coop=float(v.v_coop[i - 1]),
                         v_dev=float(v.v_dev[i - 1]), v_aut=float(v.v_aut[i - 1]),
                         gap_raw=raw, gap_normalized=norm))
    fields = ("type", "income", "v_coop", "v_dev", "v_aut", "gap_raw", "gap_normalized")
    if args.json:
        sys.stdout.write(to_json(rows, fields))
        return EXIT_OK
    print(" ".join(f"{f:>14}" for f in fields))
    for r in rows:
        print(f"{r['type']:>14d} " + " ".join(f"{r[f]:>14.6f}" for f in fields[1:]))
    return EXIT_OK


def cmd_threshold(args):
    sc = _scenario(args)
    rule = _get(args, "rule", "all")
    if args.alpha0 is not None or args.alpha1 is not None:
        if args.method == "quadratic":
            raise ArgumentError("method", "the two-period economy is solved by bisection only")
        a0 = _get(args, "alpha0", _get(args, "alpha", DEFAULTS["threshold"]["alpha"]))
        a1 = _get(args, "alpha1", a0)
        res = delta_min_two_alpha(a0, a1, sc, rule=rule)
    else:
        a0 = a1 = sc.alpha
        res = delta_min(sc, method=args.method, rule=rule)
    rec = dict(n=sc.n, rho=sc.rho, alpha=a0, alpha0=a0, alpha1=a1, beta=sc.beta, m=sc.m,
               delta_min=res.delta_min, sustainable=res.sustainable)
    _emit(_serialize([rec], THRESHOLD_FIELDS, _get(args, "format", "csv")), args.out)
    if args.out is not None:
        print(f"delta_min={format_value(res.delta_min)} status={res.status.value} "
              f"method={res.method.value} binding_type={res.binding_type}", file=sys.stderr)
    return EXIT_OK


SWEEP_KEYS = {
    "threshold": ("n", "alpha", "beta", "rho", "m", "grant", "rule", "alpha0", "alpha1", "s"),
    "norm": ("n", "rho", "alpha", "m", "grant", "rule", "beta_lo", "beta_hi",
             "coarse_points", "refine_points"),
    "tax": ("n", "alpha", "beta", "rho", "m", "grant", "rule", "s", "delta", "tau_points"),
}


def _unwrap(v):
    return v[0] if isinstance(v, list) and len(v) == 1 else v


def _specs(args):
    """Sweep specs from a preset or from flags; explicit flags override preset values."""
    kind = args.kind
    fixed = {}
    for k in SWEEP_KEYS[kind]:
        v = getattr(args, k, None)
        if v is not None:
            fixed[k] = _unwrap(v)
    out = dict(output=args.out, fmt=_get(args, "format", "csv"), chart=bool(args.chart))
    if kind == "norm" and args.smooth:
        out["smooth"] = True
    grid = {k: getattr(args, k) for k in ("param", "lo", "hi", "points") if getattr(args, k) is not None}
    if args.preset:
        specs = preset_specs(args.preset, **out)
        res = []
        for sp in specs:
            if sp.kind != kind and args.command != "sweep":
                raise ArgumentError("preset", f"{args.preset} is a {sp.kind} sweep; "
                                              f"use the sweep or matching subcommand")
            res.append(dataclasses.replace(sp, **grid, fixed={**sp.fixed, **fixed}))
        return res
    param = grid.get("param", args.default_param)
    if "lo" not in grid or "hi" not in grid:
        raise ArgumentError("lo", "sweeps need --lo and --hi (or a --preset)")
    return [SweepSpec(param, grid["lo"], grid["hi"], grid.get("points", 20), kind=kind,
                      fixed=fixed, **out)]


def cmd_sweep(args):
    specs = _specs(args)
    workers = _get(args, "workers", 1)
    records, fields, charts = [], None, []
    for sp in specs:
        recs = run_sweep(sp, workers)
        fields = fields or sp.fields()
        if sp.fields() != fields:
            raise ArgumentError("preset", "combined sweeps must share a schema")
        for r in recs:
            charts.append(dict(r, curve=curve_label(sp, r) or "all"))
        records += recs
    if not records:
        raise EmptyResultError("the sweep produced no records")
    _emit(_serialize(records, fields, specs[0].fmt), args.out)
    if args.chart:
        sp = specs[0]
        write_text(args.chart, render_chart(charts, sp.param, sp.y_field(), "curve",
                                            title=args.preset or f"{sp.y_field()} vs {sp.param}"))
    return EXIT_OK


def cmd_simulate(args):
    sc = _scenario(args)
    cfg = SimConfig(replications=_get(args, "replications", 20_000), seed=_get(args, "seed", 0),
                    horizon=args.horizon, truncation_tol=_get(args, "truncation_tol", 1e-4))
    regimes = REGIMES if _get(args, "regime", "all") == "all" else (args.regime,)
    types = range(1, sc.n + 1) if args.type is None else (args.type,)
    v = values(sc)
    closed = {"cooperate": v.v_coop, "deviate": v.v_dev, "autarky": v.v_aut}
    print("regime,type,closed_form,estimate,stderr,truncation_bound,horizon,covered")
    for reg in regimes:
        for i in types:
            est = estimate_value(reg, sc, i, cfg)
            cf = float(closed[reg][i - 1])
            print(",".join([reg, str(i)] + [format_value(x) for x in
                           (cf, est.mean, est.stderr, est.truncation_bound, est.horizon,
                            est.covers(cf))]))
    return EXIT_OK


def cmd_chart(args):
    for flag in ("input", "x", "y"):
        if getattr(args, flag) is None:
            raise ArgumentError("in" if flag == "input" else flag, "is required")
    with open(args.input, encoding="utf-8") as fh:
        records = from_csv(fh.read())
    if not records:
        raise EmptyResultError(f"{args.input} has no records")
    for f in (args.x, args.y) + ((args.group,) if args.group else ()):
        if f not in records[0]:
            raise ArgumentError("x" if f == args.x else "y" if f == args.y else "group",
                                f"field {f!r} not in {args.input}")
    _emit(render_chart(records, args.x, args.y, args.group, args.title), args.out)
    return EXIT_OK


COMMANDS = {"values": cmd_values, "threshold": cmd_threshold, "sweep": cmd_sweep,
            "norm-select": cmd_sweep, "tax": cmd_sweep, "simulate": cmd_simulate,
            "chart": cmd_chart}


def main(argv=None):
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:
        # argparse reports bad flags by exiting; hand the code back instead
        return exc.code if isinstance(exc.code, int) else EXIT_ARGS
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except DomainError as exc:
        flag = (exc.param or "").replace("_", "-")
        print(f"error: --{flag}: {exc}" if flag else f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except EmptyResultError as exc:
        print(f"error: empty result: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except BindingTypeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except KeyError as exc:
        print(f"error: unknown field {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
