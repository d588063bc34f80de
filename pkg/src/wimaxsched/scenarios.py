"""Experiment sweeps and the trend verdicts drawn from their reports.

A sweep is the cross product of one swept axis (queue capacity or queue
count) with all six disciplines, every run sharing the same seed and
flow population.  evaluate_trends reduces the 18 reports to a fixed
registry of pass/fail claims about the curves: invariance of throughput
and delay to capacity, vanishing drops, priority starvation, peak
growth, weighted-share proportionality, and fairness dominance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterator, Sequence

from .core import Packet, QosClass
from .engine import RunConfig
from .metrics import MetricsReport, jain_fairness
from .queueing import BoundedQueue
from .sched import SchedulerKind, default_weights, make_scheduler

AXIS_QUEUE_SIZE = (128000, 1280000, 12800000)
AXIS_QUEUE_COUNT = (6, 8, 10)
SCHEDULER_ORDER = (
    SchedulerKind.SP,
    SchedulerKind.RR,
    SchedulerKind.WRR,
    SchedulerKind.WFQ,
    SchedulerKind.SCF,
    SchedulerKind.DS,
)
SWEEP_NAMES = ("queue_size", "queue_count")

_SPREAD_TOL = 0.05
_DROP_TOL = 0.05
_STARVE_TOL = 0.05
_SERVE_FLOOR = 0.90
_OVERLOAD_FACTOR = 1.5


@dataclass(frozen=True)
class Sweep:
    """An ordered run matrix: axis-major, scheduler-minor."""

    name: str
    axis_label: str
    axis_values: tuple[int, ...]
    configs: tuple[RunConfig, ...]

    def __iter__(self) -> Iterator[RunConfig]:
        return iter(self.configs)

    def __len__(self) -> int:
        return len(self.configs)

    def axis_of(self, cfg: RunConfig) -> int:
        if self.name == "queue_size":
            return cfg.queue_capacity_bytes
        return cfg.num_queues


def build_sweep(
    name: str,
    base: RunConfig,
    axis_values: Sequence[int] | None = None,
) -> Sweep:
    """Expand a base configuration into the named 18-run matrix.

    The queue_size sweep pins eight queues and walks the capacity axis;
    the queue_count sweep pins the middle capacity and walks the queue
    count, re-deriving the default monotone weights for each count.
    axis_values replaces the standard axis (trend verdicts only apply to
    the standard one).
    """
    if name == "queue_size":
        axis = tuple(axis_values) if axis_values is not None else AXIS_QUEUE_SIZE
        n = 8
        weights = (
            base.weights
            if base.num_queues == n and len(base.weights) == n
            else default_weights(n)
        )
        configs = tuple(
            replace(
                base,
                scheduler=kind,
                num_queues=n,
                weights=weights,
                queue_capacity_bytes=cap,
            )
            for cap in axis
            for kind in SCHEDULER_ORDER
        )
        return Sweep(name, "queue_capacity_bytes", axis, configs)
    if name == "queue_count":
        axis = tuple(axis_values) if axis_values is not None else AXIS_QUEUE_COUNT
        configs = tuple(
            replace(
                base,
                scheduler=kind,
                num_queues=count,
                weights=default_weights(count),
                queue_capacity_bytes=1280000,
            )
            for count in axis
            for kind in SCHEDULER_ORDER
        )
        return Sweep(name, "num_queues", axis, configs)
    raise ValueError(f"unknown sweep {name!r}; expected one of {SWEEP_NAMES}")


@dataclass(frozen=True)
class TrendVerdict:
    claim: str
    description: str
    status: str  # "pass", "fail", or "skipped"
    measured: str
    tolerance: str


CLAIMS = {
    "A1": (
        "server throughput unchanged across queue capacities",
        "relative spread <= 5% per scheduler",
    ),
    "A2": (
        "average end-to-end delay unchanged across queue capacities",
        "relative spread <= 5% per scheduler",
    ),
    "A3": (
        "dropped packets shrink as queue capacity grows",
        "non-increasing per scheduler; final < 5% of first",
    ),
    "A4": (
        "strict priority starves best effort under overload yet serves the"
        " constant-rate class",
        "offered >= 1.5x link; BE < 5% of offered bits; UGS > 90%",
    ),
    "A5": (
        "peak queue occupancy grows with queue capacity",
        "non-decreasing per scheduler",
    ),
    "A6": (
        "WRR and WFQ split a full backlog in the 1:2:4 weight ratio",
        "within one packet per queue per weight round",
    ),
    "A7": (
        "round robin is fairer than strict priority on a uniform backlog",
        "Jain(RR) >= Jain(SP) and Jain(RR) >= 0.99",
    ),
}

_AXIS_CLAIMS = {"A1", "A2", "A3", "A5"}  # need the capacity axis to vary


def _rel_spread(values: Sequence[float]) -> float:
    mean = sum(values) / len(values)
    if mean == 0:
        return 0.0 if max(values) == min(values) else math.inf
    return (max(values) - min(values)) / mean


def _sweep_kind(reports: Sequence[MetricsReport]) -> str:
    caps = tuple(sorted({r.queue_capacity_bytes for r in reports}))
    counts = tuple(sorted({r.num_queues for r in reports}))
    if caps == AXIS_QUEUE_SIZE and counts == (8,):
        return "queue_size"
    if counts == AXIS_QUEUE_COUNT and caps == (1280000,):
        return "queue_count"
    raise ValueError(
        "reports do not form one complete sweep: "
        f"capacities {caps}, queue counts {counts}"
    )


def _index_reports(
    reports: Sequence[MetricsReport], kind: str
) -> dict[str, list[MetricsReport]]:
    """Group by scheduler, ordered along the axis; reject gaps and dupes."""
    axis = AXIS_QUEUE_SIZE if kind == "queue_size" else AXIS_QUEUE_COUNT
    table: dict[tuple[str, int], MetricsReport] = {}
    for r in reports:
        key = (
            r.scheduler,
            r.queue_capacity_bytes if kind == "queue_size" else r.num_queues,
        )
        if key in table:
            raise ValueError(f"duplicate report for {key[0]} at {key[1]}")
        table[key] = r
    missing = [
        f"{kind_}@{value}"
        for kind_ in (str(k) for k in SCHEDULER_ORDER)
        for value in axis
        if (kind_, value) not in table
    ]
    if missing:
        raise ValueError("incomplete sweep; missing runs: " + ", ".join(missing))
    return {
        str(k): [table[(str(k), v)] for v in axis] for k in SCHEDULER_ORDER
    }


def evaluate_trends(reports: Sequence[MetricsReport]) -> list[TrendVerdict]:
    """One verdict per registered claim, in registry order.

    Claims that need the capacity axis are marked skipped on the
    queue-count sweep; the synthetic probes behind A6 and A7 run on
    their own instances and are evaluated for either sweep.
    """
    kind = _sweep_kind(reports)
    series = _index_reports(reports, kind)
    verdicts: list[TrendVerdict] = []
    for claim, (description, tolerance) in CLAIMS.items():
        if claim in _AXIS_CLAIMS and kind != "queue_size":
            verdicts.append(
                TrendVerdict(
                    claim,
                    description,
                    "skipped",
                    "not applicable on the queue-count axis",
                    tolerance,
                )
            )
            continue
        if claim == "A1":
            verdicts.append(_spread_verdict(claim, description, tolerance, series, "server_throughput_bps"))
        elif claim == "A2":
            verdicts.append(_spread_verdict(claim, description, tolerance, series, "avg_end_to_end_delay_s"))
        elif claim == "A3":
            verdicts.append(_drop_verdict(description, tolerance, series))
        elif claim == "A4":
            verdicts.append(_starvation_verdict(description, tolerance, series))
        elif claim == "A5":
            verdicts.append(_peak_verdict(description, tolerance, series))
        elif claim == "A6":
            verdicts.append(weighted_share_verdict())
        elif claim == "A7":
            verdicts.append(fairness_dominance_verdict())
    return verdicts


def _spread_verdict(claim, description, tolerance, series, field) -> TrendVerdict:
    worst = -1.0
    worst_sched = ""
    for sched, row in series.items():
        spread = _rel_spread([getattr(r, field) for r in row])
        if spread > worst:
            worst, worst_sched = spread, sched
    status = "pass" if worst <= _SPREAD_TOL else "fail"
    return TrendVerdict(
        claim, description, status,
        f"worst relative spread {worst:.6f} ({worst_sched})", tolerance,
    )


def _drop_verdict(description, tolerance, series) -> TrendVerdict:
    notes = []
    ok = True
    for sched, row in series.items():
        drops = [r.total_dropped_packets for r in row]
        monotone = all(a >= b for a, b in zip(drops, drops[1:]))
        vanished = drops[0] > 0 and drops[-1] < _DROP_TOL * drops[0]
        ok = ok and monotone and vanished
        notes.append(f"{sched}:{'/'.join(str(d) for d in drops)}")
    return TrendVerdict(
        "A3", description, "pass" if ok else "fail",
        "drops " + " ".join(notes), tolerance,
    )


def _starvation_verdict(description, tolerance, series) -> TrendVerdict:
    row = series[str(SchedulerKind.SP)]
    report = next((r for r in row if r.num_queues == 8), row[0])
    offered_bits = sum(c.offered_bits for c in report.per_class.values())
    offered_rate = offered_bits / report.duration_s
    overload = offered_rate / report.link_rate_bps
    be = report.per_class.get("BE")
    ugs = report.per_class.get("UGS")
    if be is None or ugs is None or be.offered_bits == 0 or ugs.offered_bits == 0:
        return TrendVerdict(
            "A4", description, "fail",
            "scenario offers no BE or no UGS traffic", tolerance,
        )
    be_share = be.delivered_bits / be.offered_bits
    ugs_share = ugs.delivered_bits / ugs.offered_bits
    ok = (
        overload >= _OVERLOAD_FACTOR
        and be_share < _STARVE_TOL
        and ugs_share > _SERVE_FLOOR
    )
    return TrendVerdict(
        "A4", description, "pass" if ok else "fail",
        f"offered {overload:.2f}x link; BE {be_share:.2%} delivered; "
        f"UGS {ugs_share:.2%} delivered",
        tolerance,
    )


def _peak_verdict(description, tolerance, series) -> TrendVerdict:
    notes = []
    ok = True
    for sched, row in series.items():
        peaks = [r.peak_queue_bytes for r in row]
        ok = ok and all(a <= b for a, b in zip(peaks, peaks[1:]))
        notes.append(f"{sched}:{'/'.join(str(p) for p in peaks)}")
    return TrendVerdict(
        "A5", description, "pass" if ok else "fail",
        "peaks " + " ".join(notes), tolerance,
    )


def _drain(kind: SchedulerKind, weights, per_queue_packets, packet_bytes, services):
    """Preload equal-size packets and count drained bits per queue.

    The backlog is sized so no queue empties within the requested number
    of services, which is the regime the share claims quantify.
    """
    n = len(weights)
    queues = [BoundedQueue(10 ** 9) for _ in range(n)]
    sched = make_scheduler(kind, n, weights, link_rate=100000.0)
    sched.bind(queues)
    pid = 1
    for q in range(n):
        for _ in range(per_queue_packets):
            p = Packet(
                id=pid, flow_id=q, qos=QosClass.BE, precedence=min(q, 7),
                size_bytes=packet_bytes, arrival_time=0.0,
            )
            pid += 1
            tag = sched.tag_on_arrival(p, q, 0.0)
            queues[q].enqueue(p, 0.0)
            sched.commit(p, q, tag)
    drained = [0] * n
    for _ in range(services):
        idx = sched.select()
        if idx is None:
            break
        p = queues[idx].dequeue(0.0)
        sched.on_service_start(p, idx, 0.0)
        drained[idx] += p.size_bytes * 8
        sched.on_service_end(p, idx, 0.0, not any(q.packets for q in queues))
    return drained


def weighted_share_verdict() -> TrendVerdict:
    """A6 probe: weights (1, 2, 4) over three equally loaded queues."""
    description, tolerance = CLAIMS["A6"]
    weights = (1.0, 2.0, 4.0)
    packet_bytes = 500
    rounds = 60
    services = rounds * int(sum(weights))
    slack_bits = rounds * packet_bytes * 8
    notes = []
    ok = True
    for kind in (SchedulerKind.WRR, SchedulerKind.WFQ):
        drained = _drain(kind, weights, services, packet_bytes, services)
        total = sum(drained)
        shares = []
        for q, w in enumerate(weights):
            expected = total * w / sum(weights)
            ok = ok and abs(drained[q] - expected) <= slack_bits
            shares.append(f"{drained[q] // (packet_bytes * 8)}")
        notes.append(f"{kind}={':'.join(shares)}")
    return TrendVerdict(
        "A6", description, "pass" if ok else "fail",
        f"packets over {rounds} rounds " + " ".join(notes), tolerance,
    )


def fairness_dominance_verdict() -> TrendVerdict:
    """A7 probe: uniform backlog over eight queues, RR against SP."""
    description, tolerance = CLAIMS["A7"]
    n = 8
    services = n * 40
    values = {}
    for kind in (SchedulerKind.RR, SchedulerKind.SP):
        drained = _drain(kind, (1.0,) * n, services, 500, services)
        values[kind] = jain_fairness([float(d) for d in drained])
    ok = (
        values[SchedulerKind.RR] >= values[SchedulerKind.SP]
        and values[SchedulerKind.RR] >= 0.99
    )
    return TrendVerdict(
        "A7", description, "pass" if ok else "fail",
        f"Jain RR {values[SchedulerKind.RR]:.4f} vs SP {values[SchedulerKind.SP]:.4f}",
        tolerance,
    )
