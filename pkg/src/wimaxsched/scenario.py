"""Scenario files: a small TOML schema describing one run or sweep.

Sections, all optional, with documented defaults:

  [link]   rate (bit/s, default 500000)
  [run]    scheduler, duration (s), seed, num_queues,
           queue_capacity_bytes, weights
  [flows]  stations (default 40), plus one table per traffic class
           ([flows.UGS], [flows.ertPS], [flows.rtPS], [flows.nrtPS],
           [flows.BE]) overriding that class's profile; each class table
           names its generator ``kind`` and the generator's parameters,
           and may cap the class's share of stations with ``stations``
  [sweep]  name ("queue_size" or "queue_count"), optional axis override

Unknown sections or keys are rejected: a typo should fail loudly, not
silently fall back to a default.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace
from importlib import resources
from typing import Any, Mapping

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .core import CLASS_ORDER, QosClass
from .engine import LinkModel, RunConfig
from .sched import SchedulerKind, default_weights
from .scenarios import SWEEP_NAMES
from .traffic import (
    ConstantBitRate,
    OnOffBitRate,
    PeriodicVariable,
    PoissonArrivals,
    Profile,
    build_flows,
)

_SCHEDULER_ALIASES = {"SCFQ": "SCF", "DIFFSERV": "DS"}


class ScenarioError(ValueError):
    """The scenario file cannot be used; nothing was simulated."""


@dataclass(frozen=True)
class Scenario:
    """A parsed scenario: the base run plus how to rebuild or sweep it."""

    base: RunConfig
    stations: int
    profiles: Mapping[QosClass, Profile]
    class_counts: Mapping[QosClass, int] | None
    sweep_name: str | None = None
    sweep_axis: tuple[int, ...] | None = None

    def reseed(self, seed: int) -> "Scenario":
        """Same scenario under a different master seed (flows re-derived)."""
        flows = tuple(
            build_flows(
                self.stations,
                seed,
                dict(self.profiles),
                dict(self.class_counts) if self.class_counts is not None else None,
            )
        )
        return replace(self, base=replace(self.base, seed=seed, flows=flows))


def parse_scheduler(name: str) -> SchedulerKind:
    label = _SCHEDULER_ALIASES.get(name.upper(), name.upper())
    try:
        return SchedulerKind(label)
    except ValueError:
        valid = ", ".join(k.value for k in SchedulerKind)
        raise ScenarioError(
            f"unknown scheduler {name!r}; expected one of {valid} (SCFQ and"
            " DiffServ are accepted aliases)"
        ) from None


def _section(doc: Mapping[str, Any], name: str) -> dict[str, Any]:
    value = doc.get(name, {})
    if not isinstance(value, dict):
        raise ScenarioError(f"[{name}] must be a table")
    return dict(value)


def _reject_unknown(table: dict[str, Any], where: str) -> None:
    if table:
        keys = ", ".join(sorted(table))
        raise ScenarioError(f"unknown key(s) in {where}: {keys}")


def _pop_number(table, key, where, default=None, minimum=None):
    if key not in table:
        if default is None:
            raise ScenarioError(f"{where} needs key {key!r}")
        return default
    value = table.pop(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where}.{key} must be a number, got {value!r}")
    if minimum is not None and value <= minimum:
        raise ScenarioError(f"{where}.{key} must be > {minimum}, got {value}")
    return value


def _pop_int(table, key, where, default=None, minimum=None):
    if key not in table:
        if default is None:
            raise ScenarioError(f"{where} needs key {key!r}")
        return default
    value = table.pop(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{where}.{key} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ScenarioError(f"{where}.{key} must be >= {minimum}, got {value}")
    return value


def _parse_profile(table: dict[str, Any], where: str) -> Profile:
    kind = table.pop("kind", None)
    if kind is None:
        raise ScenarioError(f"{where} needs a 'kind'")
    if kind == "cbr":
        profile: Profile = ConstantBitRate(
            packet_bytes=_pop_int(table, "packet_bytes", where, minimum=1),
            period_s=float(_pop_number(table, "period_s", where, minimum=0)),
        )
    elif kind == "on_off_cbr":
        profile = OnOffBitRate(
            packet_bytes=_pop_int(table, "packet_bytes", where, minimum=1),
            period_s=float(_pop_number(table, "period_s", where, minimum=0)),
            mean_on_s=float(_pop_number(table, "mean_on_s", where, minimum=0)),
            mean_off_s=float(_pop_number(table, "mean_off_s", where, minimum=0)),
        )
    elif kind == "periodic_vbr":
        profile = PeriodicVariable(
            period_s=float(_pop_number(table, "period_s", where, minimum=0)),
            size_min_bytes=_pop_int(table, "size_min_bytes", where, minimum=1),
            size_max_bytes=_pop_int(table, "size_max_bytes", where, minimum=1),
        )
    elif kind == "poisson":
        profile = PoissonArrivals(
            mean_rate_bps=float(_pop_number(table, "mean_rate_bps", where, minimum=0)),
            size_min_bytes=_pop_int(table, "size_min_bytes", where, minimum=1),
            size_max_bytes=_pop_int(table, "size_max_bytes", where, minimum=1),
        )
    else:
        raise ScenarioError(
            f"{where}.kind must be one of cbr, on_off_cbr, periodic_vbr,"
            f" poisson; got {kind!r}"
        )
    if hasattr(profile, "size_min_bytes"):
        if profile.size_min_bytes > profile.size_max_bytes:
            raise ScenarioError(f"{where}: size_min_bytes exceeds size_max_bytes")
    _reject_unknown(table, where)
    return profile


def parse_scenario(text: str) -> Scenario:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"scenario is not valid TOML: {exc}") from None

    unknown = set(doc) - {"link", "run", "flows", "sweep"}
    if unknown:
        raise ScenarioError(f"unknown section(s): {', '.join(sorted(unknown))}")

    link_tbl = _section(doc, "link")
    rate = float(_pop_number(link_tbl, "rate", "[link]", default=500000.0, minimum=0))
    _reject_unknown(link_tbl, "[link]")

    run_tbl = _section(doc, "run")
    sched_name = run_tbl.pop("scheduler", "WFQ")
    if not isinstance(sched_name, str):
        raise ScenarioError(f"[run].scheduler must be a string, got {sched_name!r}")
    scheduler = parse_scheduler(sched_name)
    duration = float(_pop_number(run_tbl, "duration", "[run]", default=30.0, minimum=0))
    seed = _pop_int(run_tbl, "seed", "[run]", default=42)
    num_queues = _pop_int(run_tbl, "num_queues", "[run]", default=8, minimum=1)
    capacity = _pop_int(
        run_tbl, "queue_capacity_bytes", "[run]", default=1280000, minimum=1
    )
    raw_weights = run_tbl.pop("weights", None)
    if raw_weights is None:
        weights = default_weights(num_queues)
    else:
        if not isinstance(raw_weights, list) or not raw_weights:
            raise ScenarioError("[run].weights must be a non-empty array")
        for w in raw_weights:
            if isinstance(w, bool) or not isinstance(w, (int, float)):
                raise ScenarioError(f"[run].weights entries must be numbers, got {w!r}")
        weights = tuple(float(w) for w in raw_weights)
    _reject_unknown(run_tbl, "[run]")

    flows_tbl = _section(doc, "flows")
    stations = _pop_int(flows_tbl, "stations", "[flows]", default=40, minimum=0)
    profiles: dict[QosClass, Profile] = {}
    class_counts: dict[QosClass, int] = {}
    for qos in QosClass:
        key = str(qos)
        if key not in flows_tbl:
            continue
        sub = flows_tbl.pop(key)
        if not isinstance(sub, dict):
            raise ScenarioError(f"[flows.{key}] must be a table")
        sub = dict(sub)
        where = f"[flows.{key}]"
        if "stations" in sub:
            class_counts[qos] = _pop_int(sub, "stations", where, minimum=0)
        if sub:
            profiles[qos] = _parse_profile(sub, where)
    _reject_unknown(flows_tbl, "[flows]")

    counts = None
    if class_counts:
        share, extra = divmod(stations, len(CLASS_ORDER))
        counts = {
            qos: class_counts.get(qos, share + (1 if i < extra else 0))
            for i, qos in enumerate(CLASS_ORDER)
        }

    sweep_tbl = _section(doc, "sweep")
    sweep_name = None
    sweep_axis = None
    if sweep_tbl:
        sweep_name = sweep_tbl.pop("name", None)
        if sweep_name is not None:
            if sweep_name not in SWEEP_NAMES:
                raise ScenarioError(
                    f"[sweep].name must be one of {SWEEP_NAMES}, got {sweep_name!r}"
                )
        axis = sweep_tbl.pop("axis", None)
        if axis is not None:
            if (
                not isinstance(axis, list)
                or not axis
                or any(isinstance(v, bool) or not isinstance(v, int) for v in axis)
            ):
                raise ScenarioError("[sweep].axis must be a non-empty array of integers")
            if any(v <= 0 for v in axis):
                raise ScenarioError("[sweep].axis values must be positive")
            if sorted(axis) != list(axis) or len(set(axis)) != len(axis):
                raise ScenarioError("[sweep].axis must be strictly increasing")
            sweep_axis = tuple(axis)
        _reject_unknown(sweep_tbl, "[sweep]")

    flows = tuple(build_flows(stations, seed, profiles, counts))
    base = RunConfig(
        scheduler=scheduler,
        num_queues=num_queues,
        queue_capacity_bytes=capacity,
        weights=weights,
        link=LinkModel(rate),
        duration_s=duration,
        seed=seed,
        flows=flows,
    )
    return Scenario(
        base=base,
        stations=stations,
        profiles=profiles,
        class_counts=counts,
        sweep_name=sweep_name,
        sweep_axis=sweep_axis,
    )


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_scenario(fh.read())
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path!r}: {exc}") from None


def _data_dir():
    return resources.files("wimaxsched").joinpath("data")


def preset_names() -> list[str]:
    return sorted(
        p.name[: -len(".toml")]
        for p in _data_dir().iterdir()
        if p.name.endswith(".toml")
    )


def find_scenario(ref: str) -> Scenario:
    """Load a scenario from a path, or from the shipped presets by name."""
    if os.path.exists(ref):
        return load_scenario(ref)
    candidate = _data_dir().joinpath(f"{ref}.toml")
    if candidate.is_file():
        return parse_scenario(candidate.read_text(encoding="utf-8"))
    raise ScenarioError(
        f"{ref!r} is neither a file nor a preset; presets: "
        + ", ".join(preset_names())
    )
