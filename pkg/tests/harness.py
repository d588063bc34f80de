"""Shared scheduler-drain helpers for the unit and acceptance tests.

batch_load puts every packet in place while the server is idle, then
drain_order empties the bank one service at a time.  This realizes the
"all arrivals into an idle system" regime exactly: no packet is tagged
while another is in flight.
"""
from __future__ import annotations

from wimaxsched import BoundedQueue, Packet, QosClass


def make_bank(num_queues: int, capacity: int = 10**9) -> list[BoundedQueue]:
    return [BoundedQueue(capacity) for _ in range(num_queues)]


def batch_load(sched, queues, packets, start_id: int = 1) -> list[Packet]:
    """Load (queue_index, size_bytes) pairs in order; ids follow input order."""
    loaded = []
    pid = start_id
    for q, size_bytes in packets:
        packet = Packet(
            id=pid,
            flow_id=q,
            qos=QosClass.BE,
            precedence=min(q, 7),
            size_bytes=size_bytes,
            arrival_time=0.0,
        )
        pid += 1
        tag = sched.tag_on_arrival(packet, q, 0.0)
        if not queues[q].enqueue(packet, 0.0):
            raise AssertionError("harness queues must never overflow")
        sched.commit(packet, q, tag)
        loaded.append(packet)
    return loaded


def drain_order(sched, queues, limit: int | None = None) -> list[int]:
    """Serve until empty (or limit services); returns packet ids in order."""
    order = []
    while limit is None or len(order) < limit:
        idx = sched.select()
        if idx is None:
            break
        packet = queues[idx].dequeue(0.0)
        sched.on_service_start(packet, idx, 0.0)
        order.append(packet.id)
        sched.on_service_end(
            packet, idx, 0.0, not any(q.packets for q in queues)
        )
    return order


def drain_queues(sched, queues, limit: int | None = None) -> list[int]:
    """Like drain_order but returns the queue index served at each step."""
    sequence = []
    while limit is None or len(sequence) < limit:
        idx = sched.select()
        if idx is None:
            break
        packet = queues[idx].dequeue(0.0)
        sched.on_service_start(packet, idx, 0.0)
        sequence.append(idx)
        sched.on_service_end(
            packet, idx, 0.0, not any(q.packets for q in queues)
        )
    return sequence
