"""Bounded drop-tail FIFO queue with built-in occupancy statistics."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .core import Packet, SimTime


@dataclass
class BoundedQueue:
    """FIFO byte-bounded queue for one precedence level.

    A packet is admitted when the occupied bytes plus its own size still
    fit the capacity (the boundary case is admitted); otherwise it is
    dropped at the tail.  The queue integrates occupied-bytes over time so
    a time-weighted average occupancy can be reported later.
    """

    capacity_bytes: int
    packets: deque[Packet] = field(default_factory=deque)
    occupied_bytes: int = 0
    peak_bytes: int = 0
    arrived: int = 0
    arrived_bytes: int = 0
    accepted: int = 0
    served: int = 0
    dropped: int = 0
    dropped_bytes: int = 0
    total_wait: float = 0.0
    byte_time_integral: float = 0.0
    _last_change: SimTime = 0.0

    def __post_init__(self) -> None:
        if self.capacity_bytes <= 0:
            raise ValueError(f"capacity must be positive, got {self.capacity_bytes}")

    def __len__(self) -> int:
        return len(self.packets)

    def _advance(self, now: SimTime) -> None:
        self.byte_time_integral += self.occupied_bytes * (now - self._last_change)
        self._last_change = now

    def enqueue(self, packet: Packet, now: SimTime) -> bool:
        """Try to admit a packet; returns True if accepted, False if dropped."""
        self._advance(now)
        self.arrived += 1
        self.arrived_bytes += packet.size_bytes
        if self.occupied_bytes + packet.size_bytes > self.capacity_bytes:
            self.dropped += 1
            self.dropped_bytes += packet.size_bytes
            return False
        packet.enqueue_time = now
        self.packets.append(packet)
        self.accepted += 1
        self.occupied_bytes += packet.size_bytes
        if self.occupied_bytes > self.peak_bytes:
            self.peak_bytes = self.occupied_bytes
        return True

    def dequeue(self, now: SimTime) -> Packet:
        """Remove and return the head packet, accounting its waiting time."""
        if not self.packets:
            raise IndexError("dequeue from an empty queue")
        self._advance(now)
        packet = self.packets.popleft()
        packet.dequeue_time = now
        self.occupied_bytes -= packet.size_bytes
        self.served += 1
        assert packet.enqueue_time is not None
        self.total_wait += now - packet.enqueue_time
        return packet

    def head(self) -> Packet | None:
        return self.packets[0] if self.packets else None

    def finalize(self, horizon: SimTime) -> None:
        """Close the occupancy integral at the end of the run."""
        self._advance(horizon)

    def average_queue_length(self, horizon: SimTime) -> float:
        """Time-weighted mean occupancy in bytes over [0, horizon]."""
        if horizon <= 0:
            raise ValueError(f"horizon must be positive, got {horizon}")
        return self.byte_time_integral / horizon

    def average_time_in_queue(self) -> float:
        """Mean waiting time of the packets served so far (0 if none)."""
        if self.served == 0:
            return 0.0
        return self.total_wait / self.served
