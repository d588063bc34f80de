"""Brute-force fluid generalized-processor-sharing reference.

Independent of the package: the server is modeled as a fluid pipe that
splits its rate across backlogged queues in proportion to their weights,
each queue draining its packets head first.  All arithmetic is exact
(fractions.Fraction), so completion times and ties are decided
mathematically, not by float luck.

Used as the ground truth that the packetized fair-queuing disciplines
must reproduce on batch instances: every packet is present before
service starts, which is the regime where the packetized service order
provably equals the fluid completion order.
"""
from __future__ import annotations

from fractions import Fraction


def gps_completion_order(
    packets: list[tuple[int, int]],
    weights: list[int],
    rate: int = 100000,
) -> list[int]:
    """Fluid completion order for a batch of (queue_index, size_bytes).

    Packet ids are 1-based positions in the input list.  Simultaneous
    fluid completions break toward the higher queue index, then the
    lower packet id, matching the packetized tie rule.
    """
    n = len(weights)
    fifo: list[list[tuple[int, Fraction]]] = [[] for _ in range(n)]
    for pid, (q, size_bytes) in enumerate(packets, start=1):
        fifo[q].append((pid, Fraction(size_bytes * 8)))

    order: list[int] = []
    remaining = [list(queue) for queue in fifo]
    while any(remaining):
        active = [q for q in range(n) if remaining[q]]
        total_w = sum(weights[q] for q in active)
        # Head-of-line drain rate for each active queue.
        rates = {q: Fraction(rate * weights[q], total_w) for q in active}
        dt = min(remaining[q][0][1] / rates[q] for q in active)
        finished: list[tuple[int, int]] = []
        for q in active:
            pid, bits = remaining[q][0]
            bits -= rates[q] * dt
            if bits == 0:
                finished.append((q, pid))
                remaining[q].pop(0)
            else:
                remaining[q][0] = (pid, bits)
        finished.sort(key=lambda item: (-item[0], item[1]))
        order.extend(pid for _, pid in finished)
    return order


def self_clocked_order(
    packets: list[tuple[int, int]],
    weights: list[int],
) -> list[int]:
    """Tag order for the same batch under per-queue cumulative tags.

    With every arrival landing in an idle system, each queue's tags are
    the running sum of size/weight; service order sorts by (tag, higher
    queue first, packet id).
    """
    last: dict[int, Fraction] = {}
    tagged: list[tuple[Fraction, int, int]] = []
    for pid, (q, size_bytes) in enumerate(packets, start=1):
        tag = last.get(q, Fraction(0)) + Fraction(size_bytes * 8, weights[q])
        last[q] = tag
        tagged.append((tag, -q, pid))
    tagged.sort()
    return [pid for _, _, pid in tagged]
