"""Lyapunov certificate for global stability of the extinction point.

Candidate function: V(x, y) = a x y + b x^2 + g x + d y with positive
weights. When m1 >= r(0), m2 >= s(0) and alpha4 + beta4 < 0, V strictly
decreases along the map provided

    max{c, B} < b/a,   max{c, B} < g/d,   c alpha4 phi(0)/(beta6 m2) < a/d,

where B = (-alpha2 c r(0) + alpha6 c m1)/(beta6 m2).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .conditions import check_global_stability_condition
from .errors import DecreaseViolated, InfeasibleScheme, NonpositiveDenominator
from .model import PopulationState, PreyPredatorModel, RationalVitalRates
from .scheme import DiscreteMap, PositivityLost, SchemeParams

ORIGIN_TOL = 1e-14


@dataclass(frozen=True)
class LyapunovParams:
    a_V: float
    b_V: float
    g_V: float
    d_V: float

    def __post_init__(self):
        for name in ("a_V", "b_V", "g_V", "d_V"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")

    def scaled(self, factor: float) -> "LyapunovParams":
        return LyapunovParams(
            self.a_V * factor, self.b_V * factor, self.g_V * factor, self.d_V * factor
        )


def _bounds(model: PreyPredatorModel, scheme: SchemeParams) -> tuple[float, float]:
    _, a2, _, a4, _, a6 = scheme.alpha
    b6 = scheme.beta[5]
    c, m1, m2 = model.c, model.m1, model.m2
    if b6 == 0:
        raise InfeasibleScheme("beta6 = 0 leaves the weight conditions undefined")
    b1 = max(c, (-a2 * c * model.r0 + a6 * c * m1) / (b6 * m2))
    b2 = c * a4 * model.phi0 / (b6 * m2)
    return b1, b2


def lyapunov_conditions(
    model: PreyPredatorModel, scheme: SchemeParams, params: LyapunovParams
) -> dict[str, bool]:
    """Re-evaluate each weight inequality for a given choice of V."""
    b1, b2 = _bounds(model, scheme)
    return {
        "b/a": b1 < params.b_V / params.a_V,
        "g/d": b1 < params.g_V / params.d_V,
        "a/d": b2 < params.a_V / params.d_V,
        "alpha4+beta4<0": check_global_stability_condition(scheme),
    }


def select_lyapunov_params(model: PreyPredatorModel, scheme: SchemeParams) -> LyapunovParams:
    """Weights meeting every inequality with a factor-two margin."""
    if not (model.m1 >= model.r0 and model.m2 >= model.s0):
        raise InfeasibleScheme(
            f"certificate needs m1 >= r(0) and m2 >= s(0); got m1={model.m1}, m2={model.m2}"
        )
    if not check_global_stability_condition(scheme):
        raise InfeasibleScheme(
            f"alpha4 + beta4 = {scheme.alpha[3] + scheme.beta[3]!r} is not negative"
        )
    b1, b2 = _bounds(model, scheme)
    d = 1.0
    a = 2.0 * max(b2, 1.0)
    return LyapunovParams(a_V=a, b_V=2.0 * b1 * a, g_V=2.0 * b1, d_V=d)


def lyapunov_value(params: LyapunovParams, state) -> float:
    x, y = state
    return params.a_V * x * y + params.b_V * x * x + params.g_V * x + params.d_V * y


@dataclass
class DecreaseReport:
    start: PopulationState
    steps: int
    checked: int
    min_delta: float
    max_delta: float
    final: PopulationState
    reached_radius: bool
    trace: list[tuple[int, float, float, float, float]] = field(default_factory=list, repr=False)

    @property
    def final_distance(self) -> float:
        return max(self.final.x, self.final.y)

    def trace_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "x", "y", "V", "dV"])
        for k, x, y, v, dv in self.trace:
            writer.writerow([k, repr(x), repr(y), repr(v), "" if math.isnan(dv) else repr(dv)])
        return buf.getvalue()


def _python_decrease(map_, params, state0, n, stop_radius, origin_tol, keep_trace):
    x, y = state0
    v = lyapunov_value(params, (x, y))
    trace = [(0, x, y, v, math.nan)] if keep_trace else []
    lo, hi = math.inf, -math.inf
    checked = 0
    k = 0
    while k < n:
        if stop_radius is not None and max(x, y) < stop_radius:
            break
        try:
            nxt = map_.step((x, y))
        except (NonpositiveDenominator, PositivityLost) as exc:
            raise type(exc)(f"step {k}: {exc}") from None
        xn, yn = nxt.x, nxt.y
        vn = lyapunov_value(params, (xn, yn))
        dv = vn - v
        if max(x, y) > origin_tol:
            checked += 1
            lo, hi = min(lo, dv), max(hi, dv)
            if not dv < 0:
                raise DecreaseViolated(
                    f"V did not decrease at step {k} from ({x!r}, {y!r}): dV = {dv!r}",
                    k, PopulationState(x, y), dv,
                )
        x, y, v = xn, yn, vn
        k += 1
        if keep_trace:
            trace.append((k, x, y, v, dv))
    return k, checked, lo, hi, x, y, trace


# Mirrors DiscreteMap._parts operation for operation, so both paths produce
# bitwise-identical trajectories for rational rates.
@numba.njit(cache=True)
def _rational_kernel(x, y, n, stop_radius, origin_tol, ph, a, b, m1, m2, c,
                     ar, br, as_, bs, bphi, av, bv, gv, dv_):
    v = av * x * y + bv * x * x + gv * x + dv_ * y
    lo = np.inf
    hi = -np.inf
    checked = 0
    k = 0
    status = 0
    while k < n:
        if stop_radius > 0 and max(x, y) < stop_radius:
            break
        r = ar / (x + br)
        s = as_ / (y + bs)
        phx = 1.0 / (x + bphi)
        num_x = x + ph * a[0] * x * r - ph * a[2] * x * y * phx - ph * a[4] * m1 * x
        den_x = 1 - ph * a[1] * r + ph * a[3] * y * phx + ph * a[5] * m1
        num_y = y + ph * b[0] * y * s + ph * b[2] * c * x * y * phx - ph * b[4] * m2 * y
        den_y = 1 - ph * b[1] * s - ph * b[3] * c * x * phx + ph * b[5] * m2
        if not (den_x > 0 and den_y > 0):
            status = 2
            break
        xn = num_x / den_x
        yn = num_y / den_y
        vn = av * xn * yn + bv * xn * xn + gv * xn + dv_ * yn
        d = vn - v
        if max(x, y) > origin_tol:
            checked += 1
            lo = min(lo, d)
            hi = max(hi, d)
            if not d < 0:
                status = 1
                break
        x = xn
        y = yn
        v = vn
        k += 1
    return status, k, checked, lo, hi, x, y


@numba.njit(cache=True, parallel=True)
def _rational_batch(xs, ys, n, stop_radius, origin_tol, ph, a, b, m1, m2, c,
                    ar, br, as_, bs, bphi, av, bv, gv, dv_):
    m = xs.shape[0]
    status = np.zeros(m, dtype=np.int64)
    steps = np.zeros(m, dtype=np.int64)
    checked = np.zeros(m, dtype=np.int64)
    lo = np.empty(m)
    hi = np.empty(m)
    fx = np.empty(m)
    fy = np.empty(m)
    for i in numba.prange(m):
        out = _rational_kernel(xs[i], ys[i], n, stop_radius, origin_tol, ph, a, b, m1, m2, c,
                               ar, br, as_, bs, bphi, av, bv, gv, dv_)
        status[i], steps[i], checked[i], lo[i], hi[i], fx[i], fy[i] = out
    return status, steps, checked, lo, hi, fx, fy


def _kernel_args(map_: DiscreteMap, params: LyapunovParams):
    rates, p = map_.model.rates, map_.model.params
    return (
        map_.phi_h,
        np.asarray(map_.scheme.alpha, dtype=np.float64),
        np.asarray(map_.scheme.beta, dtype=np.float64),
        p.m1, p.m2, p.c,
        rates.a_r, rates.b_r, rates.a_s, rates.b_s, rates.b_phi,
        params.a_V, params.b_V, params.g_V, params.d_V,
    )


def verify_lyapunov_decrease(
    map_: DiscreteMap,
    params: LyapunovParams,
    state0,
    n: int,
    stop_radius: float | None = None,
    origin_tol: float = ORIGIN_TOL,
    trace: bool = False,
    fast: bool | None = None,
) -> DecreaseReport:
    """Iterate the map and require V(next) - V(current) < 0 at every step.

    Steps taken from a state already within ``origin_tol`` of the origin are
    not checked. Iteration stops early once both coordinates fall below
    ``stop_radius``. Rational rates without a trace run through a compiled
    kernel unless ``fast`` is False.
    """
    start = state0 if isinstance(state0, PopulationState) else PopulationState(*state0)
    if fast is None:
        fast = isinstance(map_.model.rates, RationalVitalRates) and not trace
    if fast and not trace:
        status, k, checked, lo, hi, x, y = _rational_kernel(
            start.x, start.y, int(n), -1.0 if stop_radius is None else float(stop_radius),
            float(origin_tol), *_kernel_args(map_, params),
        )
        if status == 1:
            raise DecreaseViolated(
                f"V did not decrease at step {k} from ({x!r}, {y!r})",
                k, PopulationState(x, y), hi,
            )
        if status == 2:
            raise NonpositiveDenominator(f"step {k}: map denominator <= 0 at ({x!r}, {y!r})",
                                         state=(x, y), index=k)
        trail: list = []
    else:
        k, checked, lo, hi, x, y, trail = _python_decrease(
            map_, params, start.as_tuple(), n, stop_radius, origin_tol, trace
        )
    final = PopulationState(x, y)
    reached = stop_radius is not None and max(x, y) < stop_radius
    return DecreaseReport(start, k, checked, lo, hi, final, reached, trail)


def verify_lyapunov_decrease_many(
    map_: DiscreteMap,
    params: LyapunovParams,
    starts,
    n: int,
    stop_radius: float | None = None,
    origin_tol: float = ORIGIN_TOL,
) -> list[DecreaseReport]:
    """Batch form of verify_lyapunov_decrease for rational rates.

    Trajectories run in parallel across cores. The first failing start, in
    input order, raises as in the single-start version.
    """
    if not isinstance(map_.model.rates, RationalVitalRates):
        return [
            verify_lyapunov_decrease(map_, params, s, n, stop_radius, origin_tol) for s in starts
        ]
    pts = [s if isinstance(s, PopulationState) else PopulationState(*s) for s in starts]
    xs = np.array([p.x for p in pts], dtype=np.float64)
    ys = np.array([p.y for p in pts], dtype=np.float64)
    status, steps, checked, lo, hi, fx, fy = _rational_batch(
        xs, ys, int(n), -1.0 if stop_radius is None else float(stop_radius),
        float(origin_tol), *_kernel_args(map_, params),
    )
    reports = []
    for i, start in enumerate(pts):
        k, x, y = int(steps[i]), float(fx[i]), float(fy[i])
        if status[i] == 1:
            raise DecreaseViolated(
                f"start {i}: V did not decrease at step {k} from ({x!r}, {y!r})",
                k, PopulationState(x, y), float(hi[i]),
            )
        if status[i] == 2:
            raise NonpositiveDenominator(
                f"start {i}, step {k}: map denominator <= 0 at ({x!r}, {y!r})",
                state=(x, y), index=k,
            )
        final = PopulationState(x, y)
        reached = stop_radius is not None and max(x, y) < stop_radius
        reports.append(
            DecreaseReport(start, k, int(checked[i]), float(lo[i]), float(hi[i]), final, reached)
        )
    return reports
