"""Mapping from service class to IP precedence, DSCP and output queue.

Each class owns a fixed set of precedence values; flows of one class are
spread over that set round-robin.  The DSCP is the class selector built by
shifting the precedence into the top three bits of the six-bit field.
Queue index equals precedence when there are at least eight queues; with
fewer queues the top precedences share the highest queue.
"""
from __future__ import annotations

from .core import QosClass

# Precedence values owned by each service class.  Together the sets
# partition 0..7, with BE at the bottom and UGS holding the top value.
PRECEDENCES: dict[QosClass, tuple[int, ...]] = {
    QosClass.BE: (0,),
    QosClass.NRTPS: (1, 2, 6),
    QosClass.RTPS: (3,),
    QosClass.ERTPS: (4,),
    QosClass.UGS: (5, 7),
}


def precedences_of(qos: QosClass) -> tuple[int, ...]:
    """The precedence values a class may use, in ascending order."""
    return PRECEDENCES[qos]


def assign_precedence(qos: QosClass, flow_ordinal: int) -> int:
    """Precedence for the flow_ordinal-th flow of a class (0-based).

    Flows cycle through the class's precedence set, so e.g. the fifth
    nrtPS flow (ordinal 4) lands on the second value of (1, 2, 6).
    """
    if flow_ordinal < 0:
        raise ValueError(f"flow ordinal must be >= 0, got {flow_ordinal}")
    values = PRECEDENCES[qos]
    return values[flow_ordinal % len(values)]


def dscp_of(precedence: int) -> int:
    """Class-selector DSCP for a precedence: the value shifted up 3 bits."""
    if not 0 <= precedence <= 7:
        raise ValueError(f"precedence out of range: {precedence}")
    return precedence << 3


def queue_index(precedence: int, num_queues: int) -> int:
    """Output queue for a precedence given the configured queue count.

    With num_queues >= 8 the mapping is the identity; with fewer queues
    everything above the top queue collapses onto it.
    """
    if not 0 <= precedence <= 7:
        raise ValueError(f"precedence out of range: {precedence}")
    if num_queues < 1:
        raise ValueError(f"need at least one queue, got {num_queues}")
    return min(precedence, num_queues - 1)


def expedited_queues(num_queues: int) -> frozenset[int]:
    """Queues belonging to the expedited tier of the DiffServ discipline.

    A queue is expedited when every precedence feeding it is 5 or above.
    Queues beyond index 7 receive no precedence at all and sit above the
    expedited ones, so they are counted in (they stay empty regardless).
    """
    fed: dict[int, list[int]] = {}
    for p in range(8):
        fed.setdefault(queue_index(p, num_queues), []).append(p)
    tier = set()
    for q in range(num_queues):
        feeding = fed.get(q)
        if feeding is None or min(feeding) >= 5:
            tier.add(q)
    return frozenset(tier)
