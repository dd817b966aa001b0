"""CSV and SVG writers used by the command line."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .scheme import Trajectory  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "nsfd-predprey"


def fmt(value: float) -> str:
    """Shortest round-trip representation, '.' decimal separator."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    return repr(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, (int, str)) else fmt(v) for v in row])
    return buf.getvalue()


def trajectory_csv(traj: Trajectory) -> str:
    rows = ((k, traj.t0 + k * traj.h, s.x, s.y) for k, s in enumerate(traj.states))
    return csv_text(["k", "t", "x", "y"], rows)


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="")


def plot_svg(
    path: str | Path,
    series: dict[str, tuple[Sequence[float], Sequence[float], Sequence[float]]],
    equilibria: Sequence[tuple[str, float, float]] = (),
    title: str = "",
) -> None:
    """Time series of both species and an x-y phase portrait.

    ``series`` maps a method label to (t, x, y) sequences.
    """
    fig, (ax_t, ax_p) = plt.subplots(1, 2, figsize=(11, 4.5))
    for label, (t, x, y) in series.items():
        ax_t.plot(t, x, label=f"prey ({label})", lw=1.2)
        ax_t.plot(t, y, "--", label=f"predator ({label})", lw=1.2)
        ax_p.plot(x, y, label=label, lw=1.2)
    for name, ex, ey in equilibria:
        ax_p.plot([ex], [ey], "ko", ms=5)
        ax_p.annotate(name, (ex, ey), textcoords="offset points", xytext=(4, 4), fontsize=8)
    ax_t.set_xlabel("t")
    ax_t.set_ylabel("density")
    ax_t.legend(fontsize=7)
    ax_p.set_xlabel("prey x")
    ax_p.set_ylabel("predator y")
    ax_p.legend(fontsize=7)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
