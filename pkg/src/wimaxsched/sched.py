"""The six downlink scheduling disciplines.

Every scheduler answers one question: given the current queues, which one
gives up its head packet next.  The engine drives a scheduler through a
narrow protocol:

* ``advance(now)``       - account for elapsed time (only WFQ cares)
* ``tag_on_arrival(...)``- compute a finish tag for a new packet (fair
                           queuing only; returns None elsewhere)
* ``commit(...)``        - the packet was admitted, keep its tag
* ``select()``           - pick the next queue to serve, or None
* ``on_service_start`` / ``on_service_end`` - transmission bookkeeping

Queue index doubles as priority: higher index means higher priority, and
every tie between equally urgent queues breaks toward the higher index.
"""
from __future__ import annotations

import math
from enum import Enum
from typing import Sequence

from .classify import expedited_queues
from .core import Packet, SimTime, packet_bits
from .queueing import BoundedQueue


class SchedulerKind(Enum):
    SP = "SP"
    RR = "RR"
    WRR = "WRR"
    WFQ = "WFQ"
    SCF = "SCF"
    DS = "DS"

    def __str__(self) -> str:
        return self.value


def default_weights(num_queues: int) -> tuple[float, ...]:
    """Monotone default weight vector: queue 0 lightest, top queue heaviest."""
    return tuple(float(i + 1) for i in range(num_queues))


def validate_weights(weights: Sequence[float], num_queues: int) -> tuple[float, ...]:
    ws = tuple(float(w) for w in weights)
    if len(ws) != num_queues:
        raise ValueError(f"expected {num_queues} weights, got {len(ws)}")
    for w in ws:
        if not math.isfinite(w) or w <= 0:
            raise ValueError(f"weights must be positive and finite, got {w}")
    return ws


def integer_weights(weights: Sequence[float]) -> tuple[int, ...]:
    """Round-robin credits for WRR: integer-valued weights, gcd-normalized.

    Normalizing by the gcd makes scaled weight vectors ([2, 2] vs [1, 1])
    behave identically, which keeps the credit scheme consistent with the
    scale-free weighted disciplines.
    """
    ints = []
    for w in weights:
        r = round(w)
        if abs(w - r) > 1e-9 or r <= 0:
            raise ValueError(f"round-robin credits need positive integer weights, got {w}")
        ints.append(int(r))
    g = math.gcd(*ints) if len(ints) > 1 else ints[0]
    return tuple(i // g for i in ints)


class Scheduler:
    """Common no-op protocol; concrete disciplines override what they need."""

    kind: SchedulerKind

    def __init__(self, num_queues: int):
        self.num_queues = num_queues
        self.queues: Sequence[BoundedQueue] = ()

    def bind(self, queues: Sequence[BoundedQueue]) -> None:
        if len(queues) != self.num_queues:
            raise ValueError(f"expected {self.num_queues} queues, got {len(queues)}")
        self.queues = queues

    def advance(self, now: SimTime) -> None:
        pass

    def tag_on_arrival(self, packet: Packet, qidx: int, now: SimTime) -> float | None:
        return None

    def commit(self, packet: Packet, qidx: int, tag: float | None) -> None:
        pass

    def select(self) -> int | None:
        raise NotImplementedError

    def on_service_start(self, packet: Packet, qidx: int, now: SimTime) -> None:
        pass

    def on_service_end(
        self, packet: Packet, qidx: int, now: SimTime, system_idle: bool
    ) -> None:
        pass


class StrictPriority(Scheduler):
    """Always the highest-index nonempty queue; lower queues wait."""

    kind = SchedulerKind.SP

    def select(self) -> int | None:
        for q in range(self.num_queues - 1, -1, -1):
            if self.queues[q].packets:
                return q
        return None


class RoundRobin(Scheduler):
    """One packet per nonempty queue, scanning circularly."""

    kind = SchedulerKind.RR

    def __init__(self, num_queues: int):
        super().__init__(num_queues)
        # Start just before queue 0 so the first scan begins there.
        self.pointer = num_queues - 1

    def select(self) -> int | None:
        n = self.num_queues
        for step in range(1, n + 1):
            q = (self.pointer + step) % n
            if self.queues[q].packets:
                self.pointer = q
                return q
        return None


class _CreditRing:
    """Weighted round-robin over a fixed set of queue indices.

    Serves up to weight[i] packets from ring member i before moving on;
    an empty member forfeits whatever credit it has left.
    """

    def __init__(self, indices: Sequence[int], credits: Sequence[int]):
        self.indices = tuple(indices)
        self.credits = tuple(credits)
        self.pos = 0
        self.remaining = self.credits[0] if self.credits else 0

    def select(self, queues: Sequence[BoundedQueue]) -> int | None:
        if not self.indices:
            return None
        cur = self.indices[self.pos]
        if self.remaining > 0 and queues[cur].packets:
            self.remaining -= 1
            return cur
        n = len(self.indices)
        for step in range(1, n + 1):
            j = (self.pos + step) % n
            q = self.indices[j]
            if queues[q].packets:
                self.pos = j
                self.remaining = self.credits[j] - 1
                return q
        return None


class WeightedRoundRobin(Scheduler):
    """Classic WRR: weight_i packets from queue i per round."""

    kind = SchedulerKind.WRR

    def __init__(self, num_queues: int, weights: Sequence[float]):
        super().__init__(num_queues)
        self.weights = validate_weights(weights, num_queues)
        self._ring = _CreditRing(range(num_queues), integer_weights(self.weights))

    def select(self) -> int | None:
        return self._ring.select(self.queues)


def _min_tag_queue(
    queues: Sequence[BoundedQueue], tags: dict[int, float]
) -> int | None:
    """Queue whose head packet has the smallest finish tag.

    Ties break toward the higher queue index, then the lower packet id.
    """
    best: tuple[float, int, int] | None = None
    chosen: int | None = None
    for q, queue in enumerate(queues):
        head = queue.head()
        if head is None:
            continue
        try:
            tag = tags[head.id]
        except KeyError:
            raise RuntimeError(
                f"packet {head.id} reached the head of queue {q} without a finish tag"
            ) from None
        key = (tag, -q, head.id)
        if best is None or key < best:
            best = key
            chosen = q
    return chosen


class WeightedFairQueue(Scheduler):
    """Packet-by-packet emulation of generalized processor sharing.

    A virtual clock tracks how much normalized service a continuously
    backlogged queue would have received: while anything is backlogged it
    runs at link_rate / sum(weights of backlogged queues), and it resets
    to zero whenever the system drains.  An arriving packet is stamped
    with the virtual time at which the fluid server would finish it, and
    the scheduler always transmits the head packet with the smallest
    stamp.  The queue holding the packet being transmitted counts as
    backlogged even if it is momentarily empty behind the transmitter.
    """

    kind = SchedulerKind.WFQ

    def __init__(self, num_queues: int, weights: Sequence[float], link_rate: float):
        super().__init__(num_queues)
        if link_rate <= 0:
            raise ValueError(f"link rate must be positive, got {link_rate}")
        self.weights = validate_weights(weights, num_queues)
        self.link_rate = link_rate
        self.virtual_time = 0.0
        self._last_real = 0.0
        self._last_finish: dict[int, float] = {}
        self._tags: dict[int, float] = {}
        self._in_service_queue: int | None = None

    def _active_weight(self) -> float:
        total = 0.0
        for q, queue in enumerate(self.queues):
            if queue.packets or q == self._in_service_queue:
                total += self.weights[q]
        return total

    def advance(self, now: SimTime) -> None:
        elapsed = now - self._last_real
        if elapsed > 0:
            active = self._active_weight()
            if active > 0:
                self.virtual_time += elapsed * self.link_rate / active
        self._last_real = now

    def tag_on_arrival(self, packet: Packet, qidx: int, now: SimTime) -> float:
        anchor = max(self._last_finish.get(qidx, 0.0), self.virtual_time)
        return anchor + packet_bits(packet) / self.weights[qidx]

    def commit(self, packet: Packet, qidx: int, tag: float | None) -> None:
        assert tag is not None
        self._tags[packet.id] = tag
        self._last_finish[qidx] = tag

    def select(self) -> int | None:
        return _min_tag_queue(self.queues, self._tags)

    def on_service_start(self, packet: Packet, qidx: int, now: SimTime) -> None:
        self._in_service_queue = qidx

    def on_service_end(
        self, packet: Packet, qidx: int, now: SimTime, system_idle: bool
    ) -> None:
        self._tags.pop(packet.id, None)
        self._in_service_queue = None
        if system_idle:
            self.virtual_time = 0.0
            self._last_finish.clear()
            self._last_real = now


class SelfClockedFairQueue(Scheduler):
    """Fair queuing clocked by the packet in service instead of real time.

    The finish tag of whatever is currently being transmitted stands in
    for virtual time, so no link rate or wall clock is ever consulted:
    a new packet's tag is anchored at max(queue's previous tag, tag in
    service), or zero when the server is idle.  Selection is the same
    smallest-tag rule as WFQ.
    """

    kind = SchedulerKind.SCF

    def __init__(self, num_queues: int, weights: Sequence[float]):
        super().__init__(num_queues)
        self.weights = validate_weights(weights, num_queues)
        self._last_finish: dict[int, float] = {}
        self._tags: dict[int, float] = {}
        self._in_service_tag: float | None = None

    def tag_on_arrival(self, packet: Packet, qidx: int, now: SimTime) -> float:
        clock = self._in_service_tag if self._in_service_tag is not None else 0.0
        anchor = max(self._last_finish.get(qidx, 0.0), clock)
        return anchor + packet_bits(packet) / self.weights[qidx]

    def commit(self, packet: Packet, qidx: int, tag: float | None) -> None:
        assert tag is not None
        self._tags[packet.id] = tag
        self._last_finish[qidx] = tag

    def select(self) -> int | None:
        return _min_tag_queue(self.queues, self._tags)

    def on_service_start(self, packet: Packet, qidx: int, now: SimTime) -> None:
        self._in_service_tag = self._tags[packet.id]

    def on_service_end(
        self, packet: Packet, qidx: int, now: SimTime, system_idle: bool
    ) -> None:
        self._tags.pop(packet.id, None)
        self._in_service_tag = None
        if system_idle:
            self._last_finish.clear()


class DiffServ(Scheduler):
    """Two-tier DiffServ: expedited queues by strict priority, the rest WRR.

    Queues fed only by precedence 5 and up form the expedited tier and are
    served first, highest index wins.  The assured tier shares what is
    left via weighted round-robin; expedited traffic preempts it at packet
    boundaries only, because every decision happens between packets.
    """

    kind = SchedulerKind.DS

    def __init__(self, num_queues: int, weights: Sequence[float]):
        super().__init__(num_queues)
        self.weights = validate_weights(weights, num_queues)
        self.expedited = expedited_queues(num_queues)
        assured = [q for q in range(num_queues) if q not in self.expedited]
        self._ring = _CreditRing(
            assured, integer_weights([self.weights[q] for q in assured])
        )

    def select(self) -> int | None:
        for q in range(self.num_queues - 1, -1, -1):
            if q in self.expedited and self.queues[q].packets:
                return q
        return self._ring.select(self.queues)


def make_scheduler(
    kind: SchedulerKind,
    num_queues: int,
    weights: Sequence[float],
    link_rate: float,
) -> Scheduler:
    if kind is SchedulerKind.SP:
        return StrictPriority(num_queues)
    if kind is SchedulerKind.RR:
        return RoundRobin(num_queues)
    if kind is SchedulerKind.WRR:
        return WeightedRoundRobin(num_queues, weights)
    if kind is SchedulerKind.WFQ:
        return WeightedFairQueue(num_queues, weights, link_rate)
    if kind is SchedulerKind.SCF:
        return SelfClockedFairQueue(num_queues, weights)
    if kind is SchedulerKind.DS:
        return DiffServ(num_queues, weights)
    raise ValueError(f"unknown scheduler kind: {kind}")
