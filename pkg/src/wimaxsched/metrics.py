"""Per-run metrics and the flat report derived from a finished run.

All averages are over the run horizon or over delivered packets only,
as noted on each field.  Aggregates across queues are sums: the peak
occupancy reported for a run is the sum of each queue's own peak, and
the average backlog is the sum of the per-queue time averages.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import QosClass, end_to_end_delay
from .engine import RunConfig, RunResult, simulate

METRIC_UNITS = {
    "server_throughput": "bit/s",
    "avg_end_to_end_delay": "s",
    "peak_queue": "bytes",
    "avg_queue_length": "bytes",
    "avg_time_in_queue": "s",
    "total_dropped": "packets",
    "jain_fairness": "ratio",
}


def jain_fairness(values: Sequence[float]) -> float:
    """Jain's index (sum x)^2 / (n * sum x^2) over resource shares.

    Equal shares score 1.0 and the score falls toward 1/n as the
    allocation concentrates.  Zero shares participate; an all-zero
    allocation has no defined fairness and raises ValueError.
    """
    if not values:
        raise ValueError("fairness needs at least one share")
    if any(v < 0 for v in values):
        raise ValueError("shares must be non-negative")
    square_sum = sum(v * v for v in values)
    if square_sum == 0:
        raise ValueError("fairness is undefined when every share is zero")
    total = sum(values)
    return (total * total) / (len(values) * square_sum)


@dataclass(frozen=True)
class MetricsSample:
    name: str
    value: float
    unit: str


@dataclass(frozen=True)
class QueueStats:
    """Per-queue slice of a run, in queue-index order."""

    arrived: int
    accepted: int
    served: int
    dropped: int
    delivered_bits: int
    peak_bytes: int
    avg_queue_length_bytes: float
    avg_time_in_queue_s: float


@dataclass(frozen=True)
class ClassBits:
    offered_bits: int
    delivered_bits: int


@dataclass(frozen=True)
class MetricsReport:
    """One row of the experiment output: config echo plus seven metrics.

    ``jain_fairness`` is NaN when nothing was delivered (the index is
    undefined over an all-zero allocation).
    """

    scheduler: str
    num_queues: int
    queue_capacity_bytes: int
    link_rate_bps: float
    duration_s: float
    seed: int
    server_throughput_bps: float
    avg_end_to_end_delay_s: float
    peak_queue_bytes: int
    avg_queue_length_bytes: float
    avg_time_in_queue_s: float
    total_dropped_packets: int
    jain_fairness: float
    total_arrivals: int
    total_delivered: int
    per_queue: tuple[QueueStats, ...]
    per_class: dict[str, ClassBits]

    def samples(self) -> list[MetricsSample]:
        """The seven headline metrics with their units."""
        pairs = [
            ("server_throughput", self.server_throughput_bps),
            ("avg_end_to_end_delay", self.avg_end_to_end_delay_s),
            ("peak_queue", float(self.peak_queue_bytes)),
            ("avg_queue_length", self.avg_queue_length_bytes),
            ("avg_time_in_queue", self.avg_time_in_queue_s),
            ("total_dropped", float(self.total_dropped_packets)),
            ("jain_fairness", self.jain_fairness),
        ]
        return [MetricsSample(n, v, METRIC_UNITS[n]) for n, v in pairs]


def build_report(result: RunResult, fairness_scope: str = "queue") -> MetricsReport:
    """Reduce a raw run to its report row.

    fairness_scope picks the shares fed to Jain's index: "queue" uses
    delivered bits per queue, "flow" uses delivered bits per flow.
    """
    cfg = result.config
    horizon = cfg.duration_s
    delivered = result.delivered
    delivered_bits = sum(result.delivered_bits_per_queue)

    if delivered:
        avg_delay = sum(end_to_end_delay(p) for p in delivered) / len(delivered)
    else:
        avg_delay = 0.0

    if fairness_scope == "queue":
        shares: Iterable[int] = result.delivered_bits_per_queue
    elif fairness_scope == "flow":
        shares = [result.delivered_bits_per_flow[f.flow_id] for f in cfg.flows]
    else:
        raise ValueError(f"unknown fairness scope {fairness_scope!r}")
    try:
        fairness = jain_fairness([float(s) for s in shares])
    except ValueError:
        fairness = math.nan

    served_total = sum(q.served for q in result.queues)
    wait_total = sum(q.total_wait for q in result.queues)

    per_queue = tuple(
        QueueStats(
            arrived=q.arrived,
            accepted=q.accepted,
            served=q.served,
            dropped=q.dropped,
            delivered_bits=result.delivered_bits_per_queue[i],
            peak_bytes=q.peak_bytes,
            avg_queue_length_bytes=q.average_queue_length(horizon),
            avg_time_in_queue_s=q.average_time_in_queue(),
        )
        for i, q in enumerate(result.queues)
    )
    per_class = {
        str(qos): ClassBits(
            offered_bits=result.offered_bits_per_class.get(qos, 0),
            delivered_bits=result.delivered_bits_per_class.get(qos, 0),
        )
        for qos in QosClass
        if qos in result.offered_bits_per_class
    }

    return MetricsReport(
        scheduler=str(cfg.scheduler),
        num_queues=cfg.num_queues,
        queue_capacity_bytes=cfg.queue_capacity_bytes,
        link_rate_bps=cfg.link.rate_bps,
        duration_s=horizon,
        seed=cfg.seed,
        server_throughput_bps=delivered_bits / horizon,
        avg_end_to_end_delay_s=avg_delay,
        peak_queue_bytes=sum(q.peak_bytes for q in result.queues),
        avg_queue_length_bytes=sum(
            q.average_queue_length(horizon) for q in result.queues
        ),
        avg_time_in_queue_s=wait_total / served_total if served_total else 0.0,
        total_dropped_packets=result.total_dropped,
        jain_fairness=fairness,
        total_arrivals=result.total_arrivals,
        total_delivered=result.total_delivered,
        per_queue=per_queue,
        per_class=per_class,
    )


def run(cfg: RunConfig, fairness_scope: str = "queue") -> MetricsReport:
    """Simulate cfg and reduce it to a report in one step."""
    return build_report(simulate(cfg), fairness_scope=fairness_scope)
