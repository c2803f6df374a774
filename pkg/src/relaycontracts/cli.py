"""Command-line front end: contracts | select | simulate | table3.

Defaults reproduce the reference setup (uniform types on [50, 300],
K=10, N=16, c=1).  A JSON config file supplies experiment parameters;
explicit flags override file values.  Exit codes: 0 success, 2 usage,
1 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .contracts import first_best_menu, menu_to_csv, second_best_menu
from .distributions import TypeDistribution, TypeGrid
from .selection import (
    SelectionProblem,
    best_snr_baseline,
    offers_from_csv,
    overall_heuristic,
    relaxed_upper_bound,
    selection_to_csv,
)
from .simulate import (
    ExperimentConfig,
    Information,
    MenuKind,
    reproduce_table3,
    run_experiment,
    table3_to_csv,
)

_CONFIG_KEYS = {
    "dist",
    "quant",
    "subcarriers",
    "relays",
    "budget",
    "cost",
    "trials",
    "seed",
    "resolution",
    "menu",
    "information",
}

_DIST_KEYS = {"kind", "low", "high", "rate", "cdf_points"}


def _parse_dist(spec: dict) -> TypeDistribution:
    unknown = set(spec) - _DIST_KEYS
    if unknown:
        raise ValueError(f"unknown distribution keys: {sorted(unknown)}")
    kind = spec.get("kind", "uniform")
    if kind == "uniform":
        return TypeDistribution.uniform(spec["low"], spec["high"])
    if kind == "truncated_exponential":
        return TypeDistribution.truncated_exponential(
            spec["low"], spec["high"], spec["rate"]
        )
    if kind == "empirical":
        return TypeDistribution.empirical([tuple(p) for p in spec["cdf_points"]])
    raise ValueError(f"unknown distribution kind {kind!r}")


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    raw = json.loads(Path(path).read_text())
    if not isinstance(raw, dict):
        raise ValueError("config file must hold a JSON object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return raw


def _experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    raw = _load_config(getattr(args, "config", None))
    kwargs: dict = {}
    if "dist" in raw:
        kwargs["dist"] = _parse_dist(raw["dist"])
    for key, field in (
        ("quant", "quant"),
        ("subcarriers", "subcarriers"),
        ("relays", "relays"),
        ("budget", "budget"),
        ("cost", "cost_coeff"),
        ("trials", "trials"),
        ("seed", "seed"),
        ("resolution", "resolution"),
    ):
        if key in raw:
            kwargs[field] = raw[key]
    if "menu" in raw:
        kwargs["menu_kind"] = MenuKind(raw["menu"])
    if "information" in raw:
        kwargs["information"] = Information(raw["information"])

    overrides = {
        "quant": getattr(args, "quant", None),
        "subcarriers": getattr(args, "subcarriers", None),
        "relays": getattr(args, "relays", None),
        "budget": getattr(args, "budget", None),
        "cost_coeff": getattr(args, "cost", None),
        "trials": getattr(args, "trials", None),
        "seed": getattr(args, "seed", None),
        "resolution": getattr(args, "resolution", None),
        "menu_kind": MenuKind(args.menu) if getattr(args, "menu", None) else None,
        "information": Information(args.information)
        if getattr(args, "information", None)
        else None,
    }
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**kwargs)


def _int_list(text: str) -> int | tuple[int, ...]:
    parts = [int(p) for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("expected an integer or comma list")
    return parts[0] if len(parts) == 1 else tuple(parts)


def _float_list(text: str) -> float | tuple[float, ...]:
    parts = [float(p) for p in text.split(",") if p.strip()]
    if not parts:
        raise argparse.ArgumentTypeError("expected a number or comma list")
    return parts[0] if len(parts) == 1 else tuple(parts)


def _add_experiment_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON experiment config file")
    sub.add_argument("--seed", type=int, help="master random seed")
    sub.add_argument("--budget", type=_float_list, help="budget or comma-separated sweep")
    sub.add_argument("--relays", type=_int_list, help="relay count or comma-separated sweep")
    sub.add_argument("--subcarriers", type=int, help="number of OFDM subcarriers")
    sub.add_argument("--quant", type=int, help="quantization factor K")
    sub.add_argument("--cost", type=float, help="cost per unit relay power c")
    sub.add_argument("--trials", type=int, help="Monte Carlo trials per sweep cell")
    sub.add_argument("--resolution", type=int, help="money units per 1.0 for the knapsack DP")
    sub.add_argument("--menu", choices=[m.value for m in MenuKind], help="broadcast menu kind")
    sub.add_argument(
        "--information",
        choices=[i.value for i in Information],
        help="information regime",
    )
    sub.add_argument("--out", help="output CSV path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaycontracts",
        description="Contract menus and budgeted relay selection for OFDM relaying",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    contracts = commands.add_parser(
        "contracts", help="emit a contract menu as CSV (k, delta, snr, transfer, rent)"
    )
    _add_experiment_flags(contracts)

    select = commands.add_parser(
        "select", help="run the selection methods over an offers CSV"
    )
    select.add_argument("offers", help="offers CSV (m,n,gamma_linear,transfer)")
    select.add_argument("--budget", type=float, default=16.0, help="total budget")
    select.add_argument("--resolution", type=int, default=1000)
    select.add_argument("--out", help="output CSV path (default: stdout)")

    simulate = commands.add_parser(
        "simulate", help="Monte Carlo capacity experiment, metrics CSV per sweep cell"
    )
    _add_experiment_flags(simulate)

    table3 = commands.add_parser(
        "table3", help="first/second-best contract table at the reference defaults"
    )
    table3.add_argument("--cost", type=float, default=1.0)
    table3.add_argument("--out", help="output CSV path (default: stdout)")

    return parser


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _cmd_contracts(args: argparse.Namespace) -> int:
    config = _experiment_config(args)
    grid = TypeGrid.from_distribution(config.dist, config.quant, config.subcarriers)
    if config.menu_kind is MenuKind.FIRST_BEST:
        menu = first_best_menu(grid, config.cost_coeff)
    else:
        menu = second_best_menu(grid, config.cost_coeff)
    _emit(menu_to_csv(menu), args.out)
    return 0


def _cmd_select(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.budget < 0.0:
        parser.error("budget must be non-negative")
    if args.resolution < 1:
        parser.error("resolution must be >= 1")
    offers = offers_from_csv(Path(args.offers).read_text())
    problem = SelectionProblem(offers, args.budget, args.resolution)
    results = [overall_heuristic(problem), best_snr_baseline(problem)]
    bound = relaxed_upper_bound(problem)
    _emit(selection_to_csv(results, bounds={"Relaxed": bound}), args.out)
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = _experiment_config(args)
    table = run_experiment(config)
    _emit(table.to_csv(), args.out)
    return 0


def _cmd_table3(args: argparse.Namespace) -> int:
    rows = reproduce_table3(args.cost)
    _emit(table3_to_csv(rows), args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "contracts":
            return _cmd_contracts(args)
        if args.command == "select":
            return _cmd_select(args, parser)
        if args.command == "simulate":
            return _cmd_simulate(args)
        return _cmd_table3(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
