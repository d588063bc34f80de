"""Figure rendering for sweep curves and occupancy traces.

matplotlib is imported lazily with the Agg backend so the library and
tests never need a display; the CLI calls in here only when plots are
wanted.
"""
from __future__ import annotations

from typing import Mapping, Sequence


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_metric_figure(
    path: str,
    axis_label: str,
    axis_values: Sequence[int],
    series: Mapping[str, Sequence[float]],
    metric: str,
    unit: str,
    logx: bool = False,
) -> None:
    """One metric against the sweep axis, one line per discipline."""
    plt = _pyplot()
    from matplotlib.ticker import ScalarFormatter

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name, values in series.items():
        ax.plot(axis_values, values, marker="o", label=name)
    if logx:
        ax.set_xscale("log")
    ax.set_xticks(list(axis_values))
    ax.get_xaxis().set_major_formatter(ScalarFormatter())
    ax.set_xlabel(axis_label)
    ax.set_ylabel(f"{metric} [{unit}]")
    ax.set_title(f"{metric} vs {axis_label}")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_occupancy_figure(
    path: str,
    trace: Sequence[tuple[float, int, int]],
    num_queues: int,
    title: str = "queue occupancy",
) -> None:
    """Step plot of each queue's byte occupancy over the run."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for q in range(num_queues):
        points = [(t, b) for t, idx, b in trace if idx == q]
        if not points:
            continue
        times = [t for t, _ in points]
        sizes = [b for _, b in points]
        ax.step([0.0] + times, [0] + sizes, where="post", label=f"queue {q}")
    ax.set_xlabel("time [s]")
    ax.set_ylabel("occupancy [bytes]")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize="small", ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
