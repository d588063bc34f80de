"""Per-flow downlink traffic generation.

Each subscriber station carries one flow of one service class.  A flow's
arrival process comes from its class profile and a private RNG derived
from (run seed, flow id), so streams are reproducible and independent:
adding or removing one flow never changes what the others generate.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from .classify import assign_precedence
from .core import CLASS_ORDER, QosClass

_M64 = (1 << 64) - 1


def _flow_seed(seed: int, flow_id: int) -> int:
    """Mix the run seed and flow id into an independent 64-bit stream seed."""
    x = (seed * 0x9E3779B97F4A7C15 + flow_id * 0xBF58476D1CE4E5B9) & _M64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _M64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _M64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class ConstantBitRate:
    """Fixed-size packet every period, zero jitter."""

    packet_bytes: int
    period_s: float

    kind = "cbr"

    def mean_rate_bps(self) -> float:
        return self.packet_bytes * 8 / self.period_s


@dataclass(frozen=True)
class OnOffBitRate:
    """CBR talk spurts separated by silence.

    On and off durations are exponentially distributed; each on-window
    restarts its packet clock, emitting a packet every period until the
    window closes.
    """

    packet_bytes: int
    period_s: float
    mean_on_s: float
    mean_off_s: float

    kind = "on_off_cbr"

    def mean_rate_bps(self) -> float:
        duty = self.mean_on_s / (self.mean_on_s + self.mean_off_s)
        return duty * self.packet_bytes * 8 / self.period_s


@dataclass(frozen=True)
class PeriodicVariable:
    """Constant inter-arrival time with uniformly random packet sizes."""

    period_s: float
    size_min_bytes: int
    size_max_bytes: int

    kind = "periodic_vbr"

    def mean_rate_bps(self) -> float:
        return (self.size_min_bytes + self.size_max_bytes) / 2 * 8 / self.period_s


@dataclass(frozen=True)
class PoissonArrivals:
    """Poisson packet arrivals at a target mean bit rate.

    Sizes are uniform in [size_min, size_max] (equal bounds give a fixed
    size); the arrival rate is whatever makes the mean size hit the
    configured bit rate.
    """

    mean_rate_bps: float
    size_min_bytes: int
    size_max_bytes: int

    kind = "poisson"

    def packets_per_second(self) -> float:
        mean_size = (self.size_min_bytes + self.size_max_bytes) / 2
        return self.mean_rate_bps / (mean_size * 8)


Profile = ConstantBitRate | OnOffBitRate | PeriodicVariable | PoissonArrivals


def profile_for(qos: QosClass) -> Profile:
    """Default traffic profile for a service class."""
    if qos is QosClass.UGS:
        return ConstantBitRate(packet_bytes=200, period_s=0.025)
    if qos is QosClass.ERTPS:
        return OnOffBitRate(
            packet_bytes=200, period_s=0.025, mean_on_s=1.0, mean_off_s=1.35
        )
    if qos is QosClass.RTPS:
        return PeriodicVariable(period_s=0.020, size_min_bytes=100, size_max_bytes=1500)
    if qos is QosClass.NRTPS:
        return PoissonArrivals(
            mean_rate_bps=40000.0, size_min_bytes=1000, size_max_bytes=1000
        )
    if qos is QosClass.BE:
        return PoissonArrivals(
            mean_rate_bps=30000.0, size_min_bytes=64, size_max_bytes=1500
        )
    raise ValueError(f"unknown service class: {qos}")


@dataclass(frozen=True)
class ServiceFlow:
    """One station's downlink flow: class, precedence and its stream seed."""

    flow_id: int
    station: int
    qos: QosClass
    precedence: int
    profile: Profile
    seed: int


def build_flows(
    stations: int,
    seed: int,
    profiles: dict[QosClass, Profile] | None = None,
    class_counts: dict[QosClass, int] | None = None,
) -> list[ServiceFlow]:
    """One flow per station, classes assigned round-robin over CLASS_ORDER.

    Within a class, flows cycle through the class's precedence set, so a
    40-station build covers every precedence 0..7.  class_counts caps how
    many stations each class receives (classes keep interleaving until
    their cap is hit); by default the classes split the stations evenly
    in round-robin order, and the total station count is ignored when
    explicit caps are given.
    """
    if stations < 0:
        raise ValueError(f"station count must be >= 0, got {stations}")
    if profiles is None:
        profiles = {}
    if class_counts is not None:
        for qos, count in class_counts.items():
            if count < 0:
                raise ValueError(f"negative station count for {qos}: {count}")
        remaining = {qos: class_counts.get(qos, 0) for qos in CLASS_ORDER}
    else:
        remaining = None
    flows = []
    per_class_count: dict[QosClass, int] = {}
    station = 0
    cursor = 0
    while True:
        if remaining is None:
            if station >= stations:
                break
            qos = CLASS_ORDER[cursor % len(CLASS_ORDER)]
            cursor += 1
        else:
            if not any(remaining.values()):
                break
            qos = CLASS_ORDER[cursor % len(CLASS_ORDER)]
            cursor += 1
            if remaining[qos] == 0:
                continue
            remaining[qos] -= 1
        station += 1
        ordinal = per_class_count.get(qos, 0)
        per_class_count[qos] = ordinal + 1
        flows.append(
            ServiceFlow(
                flow_id=station,
                station=station,
                qos=qos,
                precedence=assign_precedence(qos, ordinal),
                profile=profiles.get(qos, profile_for(qos)),
                seed=_flow_seed(seed, station),
            )
        )
    return flows


def arrival_stream(flow: ServiceFlow) -> Iterator[tuple[float, int]]:
    """Infinite (time, size_bytes) arrivals, strictly increasing in time.

    Rebuilding the stream for the same flow reproduces it exactly.
    """
    p = flow.profile
    if isinstance(p, ConstantBitRate):
        return _cbr_stream(p)
    if isinstance(p, OnOffBitRate):
        return _on_off_stream(random.Random(flow.seed), p)
    if isinstance(p, PeriodicVariable):
        return _periodic_vbr_stream(random.Random(flow.seed), p)
    if isinstance(p, PoissonArrivals):
        return _poisson_stream(random.Random(flow.seed), p)
    raise ValueError(f"unknown profile kind: {p!r}")


def _cbr_stream(p: ConstantBitRate) -> Iterator[tuple[float, int]]:
    k = 1
    while True:
        yield (k * p.period_s, p.packet_bytes)
        k += 1


def _periodic_vbr_stream(
    rng: random.Random, p: PeriodicVariable
) -> Iterator[tuple[float, int]]:
    k = 1
    while True:
        yield (k * p.period_s, rng.randint(p.size_min_bytes, p.size_max_bytes))
        k += 1


def _poisson_stream(
    rng: random.Random, p: PoissonArrivals
) -> Iterator[tuple[float, int]]:
    lam = p.packets_per_second()
    fixed = p.size_min_bytes == p.size_max_bytes
    t = 0.0
    while True:
        t += rng.expovariate(lam)
        size = p.size_min_bytes if fixed else rng.randint(p.size_min_bytes, p.size_max_bytes)
        yield (t, size)


def _on_off_stream(rng: random.Random, p: OnOffBitRate) -> Iterator[tuple[float, int]]:
    t = 0.0
    while True:
        on_end = t + rng.expovariate(1.0 / p.mean_on_s)
        tick = t + p.period_s
        while tick <= on_end:
            yield (tick, p.packet_bytes)
            tick += p.period_s
        t = on_end + rng.expovariate(1.0 / p.mean_off_s)
