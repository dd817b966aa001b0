"""Explicit Euler and classical RK4 reference integrators.

These work on plain (x, y) tuples rather than PopulationState so that the
negative excursions they produce at large step sizes can be observed.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .equilibria import enumerate_equilibria
from .errors import NonFiniteValue, NsfdError, ReferenceUnstable
from .model import PreyPredatorModel, eval_vector_field
from .scheme import DEFAULT_SCHEME, LINEAR, Denominator, DiscreteMap, SchemeParams

METHODS = ("nsfd", "euler", "rk4")


def _field(model, x, y):
    try:
        fx, fy = eval_vector_field(model, (x, y))
    except (ZeroDivisionError, OverflowError) as exc:
        raise NonFiniteValue(f"vector field undefined at ({x!r}, {y!r}): {exc}") from None
    return fx, fy


def _finite(x: float, y: float, label: str) -> tuple[float, float]:
    if not (math.isfinite(x) and math.isfinite(y)):
        raise NonFiniteValue(f"{label} step diverged to ({x!r}, {y!r})")
    return x, y


def euler_step(model: PreyPredatorModel, state, h: float) -> tuple[float, float]:
    x, y = state
    fx, fy = _field(model, x, y)
    return _finite(x + h * fx, y + h * fy, "euler")


def rk4_step(model: PreyPredatorModel, state, h: float) -> tuple[float, float]:
    x, y = state
    k1x, k1y = _field(model, x, y)
    k2x, k2y = _field(model, x + 0.5 * h * k1x, y + 0.5 * h * k1y)
    k3x, k3y = _field(model, x + 0.5 * h * k2x, y + 0.5 * h * k2y)
    k4x, k4y = _field(model, x + h * k3x, y + h * k3y)
    return _finite(
        x + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x),
        y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y),
        "rk4",
    )


def _stepper(method: str, model, h, scheme, denominator):
    if method == "euler":
        return lambda s: euler_step(model, s, h)
    if method == "rk4":
        return lambda s: rk4_step(model, s, h)
    if method == "nsfd":
        map_ = DiscreteMap(model, scheme, h, denominator)
        return lambda s: map_.step(s).as_tuple()
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def run_method(
    method: str,
    model: PreyPredatorModel,
    state0,
    h: float,
    n: int,
    scheme: SchemeParams = DEFAULT_SCHEME,
    denominator: Denominator = LINEAR,
) -> np.ndarray:
    """(n + 1, 2) array of states; raises on divergence."""
    step = _stepper(method, model, h, scheme, denominator)
    out = np.empty((n + 1, 2))
    state = (float(state0[0]), float(state0[1]))
    out[0] = state
    for k in range(n):
        state = step(state)
        out[k + 1] = state
    return out


@dataclass(frozen=True)
class ComparisonRow:
    k: int
    t: float
    nsfd: tuple[float, float]
    euler: tuple[float, float]
    rk4: tuple[float, float]


@dataclass
class MethodSummary:
    first_negative: int | None = None
    diverged_at: int | None = None
    error: str | None = None
    terminal_distance: float | None = None
    # smallest doubling-search step size that leaves the quadrant
    violation_threshold: float | None = None


@dataclass
class Comparison:
    h: float
    rows: list[ComparisonRow]
    summary: dict[str, MethodSummary] = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "t", "x_nsfd", "y_nsfd", "x_euler", "y_euler", "x_rk4", "y_rk4"])
        for row in self.rows:
            writer.writerow(
                [row.k, repr(row.t), *map(repr, row.nsfd), *map(repr, row.euler), *map(repr, row.rk4)]
            )
        return buf.getvalue()


def attractors(model: PreyPredatorModel) -> list[tuple[float, float]]:
    """Equilibria the continuous theory predicts trajectories settle on."""
    out = []
    for eq in enumerate_equilibria(model):
        if eq.continuous_verdict.is_stable or eq.globally_stable:
            out.append(eq.location.as_tuple())
    return out


def compare_trajectories(
    model: PreyPredatorModel,
    scheme: SchemeParams,
    h: float,
    n: int,
    state0,
    denominator: Denominator = LINEAR,
    search_thresholds: bool = False,
) -> Comparison:
    """Run NSFD, Euler and RK4 side by side from the same start.

    A method that fails (non-finite value, bad denominator) is recorded in the
    summary and padded with NaN from that index on. With
    ``search_thresholds`` each method also gets a doubling search for the
    smallest step size that breaks positivity within n steps.
    """
    nan = (math.nan, math.nan)
    start = (float(state0[0]), float(state0[1]))
    tracks: dict[str, list[tuple[float, float]]] = {}
    summary: dict[str, MethodSummary] = {}
    for method in METHODS:
        step = _stepper(method, model, h, scheme, denominator)
        info = MethodSummary()
        states = [start]
        state = start
        for k in range(n):
            try:
                state = step(state)
            except (NsfdError, ValueError) as exc:
                info.diverged_at = k + 1
                info.error = str(exc)
                states.extend([nan] * (n - k))
                break
            states.append(state)
            if info.first_negative is None and (state[0] < 0 or state[1] < 0):
                info.first_negative = k + 1
        tracks[method] = states
        summary[method] = info

    targets = attractors(model)
    for method, info in summary.items():
        last = tracks[method][-1]
        if targets and info.diverged_at is None:
            info.terminal_distance = min(
                max(abs(last[0] - tx), abs(last[1] - ty)) for tx, ty in targets
            )

    if search_thresholds:
        for method, info in summary.items():
            found = find_positivity_violation(
                method, model, start, max(n, 1), scheme=scheme, denominator=denominator
            )
            info.violation_threshold = found.threshold_h

    rows = [
        ComparisonRow(k, k * h, tracks["nsfd"][k], tracks["euler"][k], tracks["rk4"][k])
        for k in range(n + 1)
    ]
    return Comparison(h, rows, summary)


@dataclass(frozen=True)
class ViolationSearch:
    method: str
    threshold_h: float | None
    first_negative: int | None
    tried: tuple[float, ...]


def find_positivity_violation(
    method: str,
    model: PreyPredatorModel,
    state0,
    n: int,
    h_start: float = 0.01,
    h_max: float = 1e4,
    scheme: SchemeParams = DEFAULT_SCHEME,
    denominator: Denominator = LINEAR,
) -> ViolationSearch:
    """Smallest h in h_start * 2^j whose trajectory leaves the quadrant within n steps.

    Divergence to a non-finite value counts as leaving.
    """
    tried = []
    h = h_start
    while h <= h_max:
        tried.append(h)
        step = _stepper(method, model, h, scheme, denominator)
        state = (float(state0[0]), float(state0[1]))
        for k in range(n):
            try:
                state = step(state)
            except (NsfdError, ValueError):
                return ViolationSearch(method, h, k + 1, tuple(tried))
            if state[0] < 0 or state[1] < 0:
                return ViolationSearch(method, h, k + 1, tuple(tried))
        h *= 2
    return ViolationSearch(method, None, None, tuple(tried))


@dataclass(frozen=True)
class OrderEstimate:
    order: float
    h: tuple[float, ...]
    errors: tuple[float, ...]


def _steps_for(t_end: float, h: float) -> int:
    n = round(t_end / h)
    if n < 1 or abs(n * h - t_end) > 1e-9 * max(1.0, abs(t_end)):
        raise ValueError(f"step {h!r} does not divide t_end = {t_end!r}")
    return n


def estimate_order(
    method: str,
    model: PreyPredatorModel,
    state0,
    t_end: float,
    h_list: Sequence[float],
    scheme: SchemeParams = DEFAULT_SCHEME,
    denominator: Denominator = LINEAR,
) -> OrderEstimate:
    """Observed convergence order from errors at t_end against a fine RK4 run.

    The order is the least-squares slope of log(error) against log(h).
    """
    hs = sorted(float(h) for h in h_list)
    if len(hs) < 3:
        raise ValueError("need at least three step sizes")
    h_ref = hs[0] / 100.0
    ref_track = run_method("rk4", model, state0, h_ref, _steps_for(t_end, h_ref))
    if np.any(ref_track < 0):
        raise ReferenceUnstable("reference RK4 trajectory left the nonnegative quadrant")
    ref = ref_track[-1]

    errors = []
    for h in hs:
        end = run_method(method, model, state0, h, _steps_for(t_end, h), scheme, denominator)[-1]
        errors.append(float(np.max(np.abs(end - ref))))
    slope = np.polyfit(np.log(hs), np.log(errors), 1)[0]
    return OrderEstimate(float(slope), tuple(hs), tuple(errors))
