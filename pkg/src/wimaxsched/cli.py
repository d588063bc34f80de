"""Command-line front end.

Two subcommands:

  wimaxsched run <scenario>    one run; writes report.csv and a
                               queue-occupancy timeseries CSV
  wimaxsched sweep <scenario>  the 18-run matrix; writes report.csv,
                               verdicts.csv, and per-metric plot data

<scenario> is a TOML file path or the name of a shipped preset.  Every
CSV cell is rendered with str(), so reruns with the same inputs are
byte-identical.  Exit codes: 0 success, 1 usage, 2 invalid scenario,
3 runtime failure.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Sequence

from .engine import ConfigError, RunConfig, simulate, validate_config
from .metrics import METRIC_UNITS, MetricsReport, build_report, run as run_report
from .scenario import Scenario, ScenarioError, find_scenario, parse_scheduler
from .scenarios import (
    SCHEDULER_ORDER,
    Sweep,
    TrendVerdict,
    CLAIMS,
    build_sweep,
    evaluate_trends,
)

REPORT_COLUMNS = (
    "scheduler",
    "num_queues",
    "queue_capacity_bytes",
    "link_rate_bps",
    "duration_s",
    "seed",
    "server_throughput_bps",
    "avg_end_to_end_delay_s",
    "peak_queue_bytes",
    "avg_queue_length_bytes",
    "avg_time_in_queue_s",
    "total_dropped_packets",
    "jain_fairness",
    "total_arrivals",
    "total_delivered",
)

_METRIC_FIELDS = {
    "server_throughput": "server_throughput_bps",
    "avg_end_to_end_delay": "avg_end_to_end_delay_s",
    "peak_queue": "peak_queue_bytes",
    "avg_queue_length": "avg_queue_length_bytes",
    "avg_time_in_queue": "avg_time_in_queue_s",
    "total_dropped": "total_dropped_packets",
    "jain_fairness": "jain_fairness",
}

VERDICT_COLUMNS = ("claim", "description", "status", "measured", "tolerance")


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="wimaxsched", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("run", "simulate the scenario's single run"),
        ("sweep", "expand the scenario into a sweep and evaluate trends"),
    ):
        p = sub.add_parser(name, help=help_, parents=[], add_help=True)
        p.add_argument("scenario", help="scenario TOML path or preset name")
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument(
            "--scheduler",
            help="run: override the discipline; sweep: restrict the matrix to one",
        )
        p.add_argument(
            "--fairness",
            choices=("queue", "flow"),
            default="queue",
            help="shares fed to the fairness index (default: per queue)",
        )
        p.add_argument(
            "--no-plots", action="store_true", help="skip rendering PNG figures"
        )
    sweep_p = sub.choices["sweep"]
    sweep_p.add_argument(
        "--name",
        choices=("queue_size", "queue_count"),
        help="sweep to build (default: the scenario's [sweep] name)",
    )
    sweep_p.add_argument(
        "--jobs", type=int, default=1, help="parallel worker processes (default: 1)"
    )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_sweep(args)
    except (ScenarioError, ConfigError) as exc:
        print(f"wimaxsched: invalid scenario: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not raises
        print(f"wimaxsched: runtime failure: {exc}", file=sys.stderr)
        return 3


def _load(args) -> Scenario:
    scenario = find_scenario(args.scenario)
    if args.seed is not None:
        scenario = scenario.reseed(args.seed)
    return scenario


def _cell(value) -> str:
    return str(value)


def _write_csv(path: str, header: Sequence[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def _report_row(report: MetricsReport):
    return [getattr(report, col) for col in REPORT_COLUMNS]


def _cmd_run(args) -> int:
    scenario = _load(args)
    cfg = scenario.base
    if args.scheduler:
        from dataclasses import replace

        cfg = replace(cfg, scheduler=parse_scheduler(args.scheduler))
    validate_config(cfg)

    result = simulate(cfg, record_occupancy=True)
    report = build_report(result, fairness_scope=args.fairness)

    os.makedirs(args.out, exist_ok=True)
    _write_csv(
        os.path.join(args.out, "report.csv"), REPORT_COLUMNS, [_report_row(report)]
    )
    stem = f"queue_occupancy_{report.scheduler}_{report.queue_capacity_bytes}"
    _write_csv(
        os.path.join(args.out, f"{stem}.csv"),
        ("time_s", "queue_index", "occupied_bytes"),
        result.occupancy_trace,
    )
    if not args.no_plots:
        from . import plotting

        plotting.save_occupancy_figure(
            os.path.join(args.out, f"{stem}.png"),
            result.occupancy_trace,
            cfg.num_queues,
            title=f"{report.scheduler} queue occupancy",
        )

    for sample in report.samples():
        print(f"{sample.name:>22}  {sample.value}  {sample.unit}")
    print(f"report written to {os.path.join(args.out, 'report.csv')}")
    return 0


def _axis_of(report: MetricsReport, sweep: Sweep) -> int:
    if sweep.name == "queue_size":
        return report.queue_capacity_bytes
    return report.num_queues


def _cmd_sweep(args) -> int:
    scenario = _load(args)
    name = args.name or scenario.sweep_name
    if name is None:
        raise ScenarioError(
            "scenario has no [sweep] name; pass --name queue_size or --name queue_count"
        )
    sweep = build_sweep(name, scenario.base, scenario.sweep_axis)
    configs = list(sweep.configs)
    restricted = None
    if args.scheduler:
        restricted = parse_scheduler(args.scheduler)
        configs = [c for c in configs if c.scheduler is restricted]
    for cfg in configs:
        validate_config(cfg)
    if args.jobs < 1:
        raise ScenarioError(f"--jobs must be >= 1, got {args.jobs}")

    worker = partial(run_report, fairness_scope=args.fairness)
    if args.jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(worker, configs))
    else:
        reports = [worker(cfg) for cfg in configs]

    os.makedirs(args.out, exist_ok=True)
    _write_csv(
        os.path.join(args.out, "report.csv"),
        REPORT_COLUMNS,
        [_report_row(r) for r in reports],
    )

    schedulers = [str(k) for k in SCHEDULER_ORDER if restricted in (None, k)]
    by_key = {(r.scheduler, _axis_of(r, sweep)): r for r in reports}
    for metric, field in _METRIC_FIELDS.items():
        rows = [
            [axis] + [getattr(by_key[(s, axis)], field) for s in schedulers]
            for axis in sweep.axis_values
        ]
        _write_csv(
            os.path.join(args.out, f"{metric}_vs_axis.csv"),
            [sweep.axis_label] + schedulers,
            rows,
        )

    verdicts = _verdicts_for(reports, sweep, restricted)
    _write_csv(
        os.path.join(args.out, "verdicts.csv"),
        VERDICT_COLUMNS,
        [(v.claim, v.description, v.status, v.measured, v.tolerance) for v in verdicts],
    )

    if not args.no_plots:
        from . import plotting

        for metric, field in _METRIC_FIELDS.items():
            series = {
                s: [getattr(by_key[(s, axis)], field) for axis in sweep.axis_values]
                for s in schedulers
            }
            plotting.save_metric_figure(
                os.path.join(args.out, f"{metric}_vs_axis.png"),
                sweep.axis_label,
                sweep.axis_values,
                series,
                metric,
                METRIC_UNITS[metric],
                logx=sweep.name == "queue_size",
            )

    for v in verdicts:
        print(f"{v.claim} {v.status:>7}  {v.description}  [{v.measured}]")
    print(f"{len(reports)} runs written to {os.path.join(args.out, 'report.csv')}")
    return 0


def _verdicts_for(reports, sweep: Sweep, restricted) -> list[TrendVerdict]:
    if restricted is not None:
        reason = f"sweep restricted to {restricted}; registry needs all six disciplines"
        return [
            TrendVerdict(claim, desc, "skipped", reason, tol)
            for claim, (desc, tol) in CLAIMS.items()
        ]
    try:
        return evaluate_trends(reports)
    except ValueError as exc:
        return [
            TrendVerdict(claim, desc, "skipped", str(exc), tol)
            for claim, (desc, tol) in CLAIMS.items()
        ]
