"""Command-line front end.

Subcommands: validate, simulate, compare, forecast. Exit codes: 0 success,
1 validation failure, 2 I/O failure, 3 simulation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .engine import (
    SimulationError,
    atomic_write_text,
    compare,
    comparison_csv,
    comparison_series_csv,
    run_simulation,
    summary_csv,
    trace_csv,
)
from .forecast import (
    DEFAULT_ORDERS,
    SarimaOrders,
    fit_sarima,
    forecast_one,
    load_demand_csv,
)
from .model import validate_topology
from .scenario import load_scenario

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_SIMULATION = 3


def _on_off(value: str) -> bool:
    if value not in ("on", "off"):
        raise argparse.ArgumentTypeError(f"expected on|off, got {value!r}")
    return value == "on"


def _apply_overrides(cfg, args) -> None:
    if getattr(args, "days", None) is not None:
        if args.days < 0:
            raise ValueError("--days must be >= 0")
        cfg.days = args.days
    if getattr(args, "priority", None) is not None:
        cfg.priority_enabled = args.priority
    if getattr(args, "health", None) is not None:
        cfg.health_enabled = args.health
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed


def _load(config_path: str, args):
    cfg, topology = load_scenario(config_path)
    _apply_overrides(cfg, args)
    if getattr(args, "seed", None) is not None or getattr(args, "days", None) is not None:
        # Seed and day overrides can change seeded unit wear, so rebuild.
        doc = dict(cfg.raw)
        run = dict(doc.get("run", {}))
        run["seed"], run["days"] = cfg.seed, cfg.days
        doc["run"] = run
        from .scenario import parse_scenario

        cfg2, topology = parse_scenario(doc)
        _apply_overrides(cfg2, args)
        cfg = cfg2
    return cfg, topology


def cmd_validate(args) -> int:
    cfg, topology = load_scenario(args.config)
    violations = validate_topology(topology)
    if violations:
        for v in violations:
            print(f"violation: {v}")
        return EXIT_VALIDATION
    print(
        f"ok: {len(topology.systems)} systems, {len(topology.loads)} loads, "
        f"{len(topology.sources)} sources, {cfg.days} days"
    )
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg, topology = _load(args.config, args)
    trace = run_simulation(cfg, topology)
    out = Path(args.out)
    atomic_write_text(out / "trace.csv", trace_csv(trace))
    atomic_write_text(out / "summary.csv", summary_csv(trace))
    atomic_write_text(
        out / "config-echo.json", json.dumps(trace.config_echo, indent=2, sort_keys=True) + "\n"
    )
    zero_total = sum(trace.summary.zero_soc_events.values())
    print(
        f"simulated {cfg.days} days: zero-SoC events {zero_total}, "
        f"unmet {trace.summary.total_unmet_mwd:.3f} MWd, "
        f"curtailed {trace.summary.total_curtailed_mwd:.3f} MWd"
    )
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg, topology = _load(args.config, args)
    report = compare(cfg, topology, args.axis)
    out = Path(args.out)
    atomic_write_text(out / "comparison.csv", comparison_csv(report))
    atomic_write_text(out / "series.csv", comparison_series_csv(report))
    mean_gain = sum(report.soh_gain_pct_points.values()) / len(report.soh_gain_pct_points)
    print(
        f"axis={args.axis}: mean SoH gain {mean_gain:+.3f} pp, zero-SoC events "
        f"{sum(report.zero_soc_events_treatment.values())} (on) vs "
        f"{sum(report.zero_soc_events_baseline.values())} (off)"
    )
    return EXIT_OK


def cmd_forecast(args) -> int:
    orders = (
        SarimaOrders.from_sequence(args.orders.split(",")) if args.orders else DEFAULT_ORDERS
    )
    if args.horizon < 1:
        raise ValueError("--horizon must be >= 1")
    series_by_load = load_demand_csv(args.history)
    if args.load_id is not None:
        if args.load_id not in series_by_load:
            raise ValueError(f"no history for load {args.load_id}")
        series_by_load = {args.load_id: series_by_load[args.load_id]}

    for lid, series in sorted(series_by_load.items()):
        history = list(series)
        model = fit_sarima(history, orders)
        coeffs = {
            "ar": list(map(float, model.ar_coeffs)),
            "ma": list(map(float, model.ma_coeffs)),
            "seasonal_ar": list(map(float, model.seasonal_ar_coeffs)),
            "seasonal_ma": list(map(float, model.seasonal_ma_coeffs)),
        }
        steps = []
        for _ in range(args.horizon):
            nxt = forecast_one(model)
            steps.append(nxt)
            if len(steps) < args.horizon:
                history.append(nxt)
                model = fit_sarima(history, orders)
        print(
            f"load {lid}: intercept {model.intercept:.6f} coeffs {json.dumps(coeffs)} "
            f"forecast {' '.join(f'{v:.6f}' for v in steps)}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridgrid",
        description="Daily-tick hybrid renewable grid simulator with priority charging",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario config and its topology")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("simulate", help="run one scenario and write trace artifacts")
    p.add_argument("config")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--days", type=int)
    p.add_argument("--priority", type=_on_off, help="on|off")
    p.add_argument("--health", type=_on_off, help="on|off")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="A/B one axis with identical data")
    p.add_argument("config")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--axis", required=True, choices=("priority", "health"))
    p.add_argument("--days", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("forecast", help="fit the demand forecaster on a history csv")
    p.add_argument("history")
    p.add_argument("--orders", help="p,d,q,P,D,Q,s (default 1,0,0,1,0,0,7)")
    p.add_argument("--horizon", type=int, default=1)
    p.add_argument("--load-id", type=int, dest="load_id")
    p.set_defaults(func=cmd_forecast)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
        return EXIT_IO
    except IsADirectoryError as exc:
        print(f"error: expected a file: {exc}", file=sys.stderr)
        return EXIT_IO
    except PermissionError as exc:
        print(f"error: permission denied: {exc}", file=sys.stderr)
        return EXIT_IO
    except SimulationError as exc:
        print(f"error: simulation failed: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
