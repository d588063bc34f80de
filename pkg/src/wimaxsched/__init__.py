"""Downlink scheduling simulator for a WiMAX-style base station.

A deterministic discrete-event model of one base station draining five
802.16 traffic classes through a bank of drop-tail queues under six
scheduling disciplines, with sweep experiments over queue capacity and
queue count and trend verdicts over the resulting curves.
"""
from .core import CLASS_ORDER, Packet, QosClass, end_to_end_delay, packet_bits
from .classify import (
    PRECEDENCES,
    assign_precedence,
    dscp_of,
    expedited_queues,
    precedences_of,
    queue_index,
)
from .queueing import BoundedQueue
from .sched import SchedulerKind, default_weights, make_scheduler
from .traffic import (
    ConstantBitRate,
    OnOffBitRate,
    PeriodicVariable,
    PoissonArrivals,
    ServiceFlow,
    arrival_stream,
    build_flows,
    profile_for,
)
from .engine import (
    ConfigError,
    LinkModel,
    RunConfig,
    RunResult,
    simulate,
    validate_config,
)
from .metrics import (
    METRIC_UNITS,
    ClassBits,
    MetricsReport,
    MetricsSample,
    QueueStats,
    build_report,
    jain_fairness,
    run,
)
from .scenarios import (
    AXIS_QUEUE_COUNT,
    AXIS_QUEUE_SIZE,
    SCHEDULER_ORDER,
    Sweep,
    TrendVerdict,
    build_sweep,
    evaluate_trends,
)
from .scenario import (
    Scenario,
    ScenarioError,
    find_scenario,
    load_scenario,
    parse_scenario,
    parse_scheduler,
    preset_names,
)

__version__ = "0.1.0"

__all__ = [
    "AXIS_QUEUE_COUNT",
    "AXIS_QUEUE_SIZE",
    "BoundedQueue",
    "CLASS_ORDER",
    "ClassBits",
    "ConfigError",
    "ConstantBitRate",
    "LinkModel",
    "METRIC_UNITS",
    "MetricsReport",
    "MetricsSample",
    "OnOffBitRate",
    "PRECEDENCES",
    "Packet",
    "PeriodicVariable",
    "PoissonArrivals",
    "QosClass",
    "QueueStats",
    "RunConfig",
    "RunResult",
    "SCHEDULER_ORDER",
    "Scenario",
    "ScenarioError",
    "SchedulerKind",
    "ServiceFlow",
    "Sweep",
    "TrendVerdict",
    "arrival_stream",
    "assign_precedence",
    "build_flows",
    "build_report",
    "build_sweep",
    "default_weights",
    "dscp_of",
    "end_to_end_delay",
    "evaluate_trends",
    "expedited_queues",
    "find_scenario",
    "jain_fairness",
    "load_scenario",
    "make_scheduler",
    "packet_bits",
    "parse_scenario",
    "parse_scheduler",
    "precedences_of",
    "preset_names",
    "profile_for",
    "queue_index",
    "run",
    "simulate",
    "validate_config",
]
