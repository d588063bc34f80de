"""Discrete-event loop for a single base-station downlink.

One non-preemptive server drains packets at a fixed bit rate from a bank
of bounded queues.  The event list is a heap ordered by (time, kind, id)
with arrivals sorting before service completions at the same instant, so
a run is a pure function of its configuration.  The engine processes
every event up to the configured duration and nothing after it; packets
still queued (or on the wire) at the horizon count as resident.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .classify import queue_index
from .core import Packet, QosClass, SimTime, packet_bits
from .queueing import BoundedQueue
from .sched import SchedulerKind, integer_weights, make_scheduler, validate_weights
from .traffic import ServiceFlow, arrival_stream

_ARRIVAL = 0
_COMPLETION = 1


@dataclass(frozen=True)
class LinkModel:
    """The downlink is a single fixed-rate bit pipe."""

    rate_bps: float = 500000.0


@dataclass(frozen=True)
class RunConfig:
    scheduler: SchedulerKind
    num_queues: int
    queue_capacity_bytes: int
    weights: tuple[float, ...]
    link: LinkModel
    duration_s: float
    seed: int
    flows: tuple[ServiceFlow, ...]


class ConfigError(ValueError):
    """The run configuration is invalid; nothing was simulated."""


def validate_config(cfg: RunConfig) -> None:
    if cfg.num_queues < 1:
        raise ConfigError(f"need at least one queue, got {cfg.num_queues}")
    if cfg.queue_capacity_bytes <= 0:
        raise ConfigError(f"queue capacity must be positive, got {cfg.queue_capacity_bytes}")
    if cfg.link.rate_bps <= 0:
        raise ConfigError(f"link rate must be positive, got {cfg.link.rate_bps}")
    if cfg.duration_s <= 0:
        raise ConfigError(f"duration must be positive, got {cfg.duration_s}")
    try:
        validate_weights(cfg.weights, cfg.num_queues)
        if cfg.scheduler in (SchedulerKind.WRR, SchedulerKind.DS):
            integer_weights(cfg.weights)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    seen = set()
    for flow in cfg.flows:
        if flow.flow_id in seen:
            raise ConfigError(f"duplicate flow id {flow.flow_id}")
        seen.add(flow.flow_id)


@dataclass
class RunResult:
    """Everything a finished run knows, before any metric is computed."""

    config: RunConfig
    queues: list[BoundedQueue]
    delivered: list[Packet]
    in_flight: Packet | None
    delivered_bits_per_queue: list[int]
    delivered_bits_per_flow: dict[int, int]
    offered_bits_per_class: dict[QosClass, int]
    delivered_bits_per_class: dict[QosClass, int]
    total_arrivals: int
    total_delivered: int
    total_dropped: int
    work_conservation_checks: int
    occupancy_trace: list[tuple[SimTime, int, int]] | None = None
    _residents: int = field(default=0, repr=False)

    @property
    def resident_packets(self) -> int:
        return self._residents


def simulate(cfg: RunConfig, record_occupancy: bool = False) -> RunResult:
    """Run the downlink to its horizon and return the raw outcome."""
    validate_config(cfg)
    n = cfg.num_queues
    scheduler = make_scheduler(cfg.scheduler, n, cfg.weights, cfg.link.rate_bps)
    queues = [BoundedQueue(cfg.queue_capacity_bytes) for _ in range(n)]
    scheduler.bind(queues)

    flow_by_id = {f.flow_id: f for f in cfg.flows}
    queue_of_flow = {f.flow_id: queue_index(f.precedence, n) for f in cfg.flows}
    streams = {f.flow_id: arrival_stream(f) for f in cfg.flows}

    heap: list[tuple[SimTime, int, int, int]] = []
    for flow in cfg.flows:
        t, size = next(streams[flow.flow_id])
        if t <= cfg.duration_s:
            heapq.heappush(heap, (t, _ARRIVAL, flow.flow_id, size))

    server: tuple[Packet, int] | None = None
    next_packet_id = 1
    delivered: list[Packet] = []
    delivered_bits_per_queue = [0] * n
    delivered_bits_per_flow = {f.flow_id: 0 for f in cfg.flows}
    offered_bits_per_class: dict[QosClass, int] = {}
    delivered_bits_per_class: dict[QosClass, int] = {}
    trace: list[tuple[SimTime, int, int]] | None = [] if record_occupancy else None
    fair = cfg.scheduler in (SchedulerKind.WFQ, SchedulerKind.SCF)
    work_checks = 0

    def try_start(now: SimTime) -> None:
        nonlocal server, work_checks
        qidx = scheduler.select()
        if qidx is None:
            if any(q.packets for q in queues):
                raise RuntimeError(
                    f"{cfg.scheduler} left the server idle with backlogged queues at t={now}"
                )
            return
        packet = queues[qidx].dequeue(now)
        scheduler.on_service_start(packet, qidx, now)
        server = (packet, qidx)
        done = now + packet_bits(packet) / cfg.link.rate_bps
        heapq.heappush(heap, (done, _COMPLETION, packet.id, 0))
        if trace is not None:
            trace.append((now, qidx, queues[qidx].occupied_bytes))

    while heap and heap[0][0] <= cfg.duration_s:
        now, kind, key, size = heapq.heappop(heap)
        scheduler.advance(now)
        if kind == _ARRIVAL:
            flow = flow_by_id[key]
            qidx = queue_of_flow[key]
            packet = Packet(
                id=next_packet_id,
                flow_id=key,
                qos=flow.qos,
                precedence=flow.precedence,
                size_bytes=size,
                arrival_time=now,
            )
            next_packet_id += 1
            offered_bits_per_class[flow.qos] = (
                offered_bits_per_class.get(flow.qos, 0) + size * 8
            )
            tag = scheduler.tag_on_arrival(packet, qidx, now) if fair else None
            if queues[qidx].enqueue(packet, now):
                if fair:
                    scheduler.commit(packet, qidx, tag)
                if trace is not None:
                    trace.append((now, qidx, queues[qidx].occupied_bytes))
            t_next, next_size = next(streams[key])
            if t_next <= cfg.duration_s:
                heapq.heappush(heap, (t_next, _ARRIVAL, key, next_size))
            if server is None:
                try_start(now)
        else:
            assert server is not None and server[0].id == key
            packet, qidx = server
            server = None
            packet.delivery_time = now
            delivered.append(packet)
            bits = packet_bits(packet)
            delivered_bits_per_queue[qidx] += bits
            delivered_bits_per_flow[packet.flow_id] += bits
            delivered_bits_per_class[packet.qos] = (
                delivered_bits_per_class.get(packet.qos, 0) + bits
            )
            system_idle = not any(q.packets for q in queues)
            scheduler.on_service_end(packet, qidx, now, system_idle)
            if not system_idle:
                try_start(now)
        # Work conservation: the server may only be idle when every queue is.
        work_checks += 1
        if server is None and any(q.packets for q in queues):
            raise RuntimeError(
                f"work conservation violated by {cfg.scheduler} at t={now}"
            )

    for q in queues:
        q.finalize(cfg.duration_s)

    residents = sum(len(q.packets) for q in queues) + (1 if server is not None else 0)
    total_arrivals = sum(q.arrived for q in queues)
    total_dropped = sum(q.dropped for q in queues)
    _check_conservation(queues, len(delivered), total_dropped, residents, server)

    return RunResult(
        config=cfg,
        queues=queues,
        delivered=delivered,
        in_flight=server[0] if server is not None else None,
        delivered_bits_per_queue=delivered_bits_per_queue,
        delivered_bits_per_flow=delivered_bits_per_flow,
        offered_bits_per_class=offered_bits_per_class,
        delivered_bits_per_class=delivered_bits_per_class,
        total_arrivals=total_arrivals,
        total_delivered=len(delivered),
        total_dropped=total_dropped,
        work_conservation_checks=work_checks,
        occupancy_trace=trace,
        _residents=residents,
    )


def _check_conservation(
    queues: list[BoundedQueue],
    delivered: int,
    dropped: int,
    residents: int,
    server: tuple[Packet, int] | None,
) -> None:
    for i, q in enumerate(queues):
        if q.arrived != q.accepted + q.dropped:
            raise RuntimeError(f"queue {i}: arrivals != accepted + dropped")
        if q.accepted != q.served + len(q.packets):
            raise RuntimeError(f"queue {i}: accepted != served + resident")
    total_arrived = sum(q.arrived for q in queues)
    if total_arrived != delivered + dropped + residents:
        raise RuntimeError(
            "packet conservation violated: "
            f"{total_arrived} arrived != {delivered} delivered + "
            f"{dropped} dropped + {residents} resident"
        )
