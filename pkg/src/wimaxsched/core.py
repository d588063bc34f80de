"""Core value types shared by every part of the simulator.

Simulation time is a plain float in seconds.  Packet sizes are whole bytes;
the server drains bits, so `packet_bits` is the one conversion point.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


# Simulated wall-clock, in seconds.
SimTime = float


class QosClass(Enum):
    """The five 802.16-style service classes carried by the downlink."""

    UGS = "UGS"
    ERTPS = "ertPS"
    RTPS = "rtPS"
    NRTPS = "nrtPS"
    BE = "BE"

    def __str__(self) -> str:
        return self.value


# Fixed ordering used when assigning classes to subscriber stations.
CLASS_ORDER = (
    QosClass.UGS,
    QosClass.ERTPS,
    QosClass.RTPS,
    QosClass.NRTPS,
    QosClass.BE,
)


@dataclass
class Packet:
    """One downlink packet and the timestamps it picks up along the way.

    `arrival_time` is stamped when the packet reaches the base station,
    `enqueue_time` when a queue accepts it (dropped packets never get one),
    `dequeue_time` when the server starts transmitting it and
    `delivery_time` when transmission finishes.  Timestamps that have not
    happened yet are None, and they are non-decreasing in that order.
    """

    id: int
    flow_id: int
    qos: QosClass
    precedence: int
    size_bytes: int
    arrival_time: SimTime
    enqueue_time: SimTime | None = None
    dequeue_time: SimTime | None = None
    delivery_time: SimTime | None = None


def packet_bits(packet: Packet) -> int:
    """Size of the packet on the wire, in bits."""
    return packet.size_bytes * 8


def end_to_end_delay(packet: Packet) -> SimTime:
    """Delivery minus arrival for a delivered packet.

    Asking for the delay of an undelivered packet is a reporting bug, so it
    raises instead of guessing.
    """
    if packet.delivery_time is None:
        raise ValueError(f"packet {packet.id} was never delivered")
    return packet.delivery_time - packet.arrival_time
