"""Equilibria of the continuous model and their stability.

Four kinds can occur: extinction (0, 0), predator extinction (K, 0) with
r(K) = m1, prey extinction (0, M) with s(M) = m2, and coexistence (x*, y*).
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from .errors import BracketNotFound, NoSignChange
from .model import PopulationState, PreyPredatorModel

X_MAX = 1e6
TOL_HYPERBOLIC = 1e-9
TOL_ROOT = 1e-12
SCAN_INTERVALS = 1024

_EPS = np.finfo(float).eps


class Kind(enum.Enum):
    EXTINCTION = "P0"
    PREDATOR_EXTINCTION = "P1"
    PREY_EXTINCTION = "P2"
    COEXISTENCE = "P3"


class Verdict(enum.Enum):
    GLOBALLY_STABLE = "globally_stable"
    LOCALLY_STABLE = "locally_stable"
    UNSTABLE = "unstable"
    NON_HYPERBOLIC = "non_hyperbolic"

    @property
    def is_stable(self) -> bool:
        return self in (Verdict.GLOBALLY_STABLE, Verdict.LOCALLY_STABLE)


@dataclass(frozen=True)
class Equilibrium:
    kind: Kind
    location: PopulationState
    continuous_verdict: Verdict | None = None
    # Global stability of P0 still holds on the non-hyperbolic boundary.
    globally_stable: bool = False
    notes: tuple[str, ...] = field(default=())

    @property
    def x(self) -> float:
        return self.location.x

    @property
    def y(self) -> float:
        return self.location.y


def _root(f, a: float, b: float) -> float:
    # Run bisection until the bracket collapses to a couple of ulps.
    return bisect(f, a, b, xtol=1e-300, rtol=4 * _EPS, maxiter=5000)


def _decreasing_root(fn, target: float, x_max: float, name: str) -> float:
    """Solve fn(x) = target on [0, x_max] for a strictly decreasing fn."""
    g = lambda x: float(fn(x)) - target
    if g(x_max) >= 0:
        raise BracketNotFound(
            f"{name}({x_max:g}) = {fn(x_max):.6g} is not below {target:g}; increase X_max"
        )
    return _root(g, 0.0, x_max)


def find_K(model: PreyPredatorModel, generic: bool = False, x_max: float = X_MAX) -> float | None:
    """Prey carrying level K with r(K) = m1, or None unless m1 < r(0).

    The closed-form inverse of the rates is used when available, unless
    ``generic`` forces bisection.
    """
    m1 = model.m1
    if not m1 < model.r0:
        return None
    if not generic:
        k = model.rates.r_inverse(m1)
        if k is not None:
            return float(k)
    return _decreasing_root(model.rates.r, m1, x_max, "r")


def find_M(model: PreyPredatorModel, generic: bool = False, x_max: float = X_MAX) -> float | None:
    """Predator level M with s(M) = m2, or None unless m2 < s(0)."""
    m2 = model.m2
    if not m2 < model.s0:
        return None
    if not generic:
        m = model.rates.s_inverse(m2)
        if m is not None:
            return float(m)
    return _decreasing_root(model.rates.s, m2, x_max, "s")


def interior_exists(model: PreyPredatorModel) -> bool:
    """Existence condition for the coexistence equilibrium (strict comparisons)."""
    m1, m2 = model.m1, model.m2
    r0, s0 = model.r0, model.s0
    M = find_M(model)
    K = find_K(model)
    if M is not None and m1 < r0 - M * model.phi0 and m2 < s0:
        return True
    if K is not None and s0 < m2 < s0 + model.c * K * float(model.rates.phi(K)):
        return True
    return False


def interior_function(model: PreyPredatorModel):
    """psi(x) = c x phi(x) + s((r(x) - m1)/phi(x)) - m2, whose roots give x*."""
    rates, m1, m2, c = model.rates, model.m1, model.m2, model.c

    def psi(x):
        phi_x = rates.phi(x)
        return c * x * phi_x + rates.s((rates.r(x) - m1) / phi_x) - m2

    return psi


def interior_brackets(model: PreyPredatorModel, intervals: int = SCAN_INTERVALS):
    """All sign-change brackets of psi over a uniform scan of [0, K]."""
    K = find_K(model)
    if K is None:
        return []
    psi = interior_function(model)
    grid = np.linspace(0.0, K, intervals + 1)
    values = np.array([float(psi(x)) for x in grid])
    brackets = []
    for i in range(intervals):
        a, b = values[i], values[i + 1]
        if a == 0.0 and 0 < i:
            continue  # already reported as the right end of the previous bracket
        if a == 0.0 or b == 0.0 or (a < 0) != (b < 0):
            brackets.append((float(grid[i]), float(grid[i + 1])))
    return brackets


def _y_star(model: PreyPredatorModel, x: float) -> float:
    return (float(model.rates.r(x)) - model.m1) / float(model.rates.phi(x))


def find_interior_roots(model: PreyPredatorModel, intervals: int = SCAN_INTERVALS) -> list[PopulationState]:
    """Every coexistence point located by the scan, left to right.

    Returns an empty list when the existence condition fails. Raises
    NoSignChange if the condition holds but the scan finds no bracket.
    """
    if not interior_exists(model):
        return []
    brackets = interior_brackets(model, intervals)
    if not brackets:
        raise NoSignChange(
            f"coexistence predicted for m1={model.m1}, m2={model.m2} "
            f"but psi has no sign change on {intervals} subintervals"
        )
    psi = interior_function(model)
    roots = []
    for a, b in brackets:
        fa, fb = float(psi(a)), float(psi(b))
        if fa == 0.0:
            x = a
        elif fb == 0.0:
            x = b
        else:
            x = _root(lambda t: float(psi(t)), a, b)
        y = _y_star(model, x)
        if x > 0 and y > 0:
            roots.append(PopulationState(x, y))
    if not roots:
        raise NoSignChange("psi brackets found but none yields a positive interior point")
    return roots


def find_interior(model: PreyPredatorModel, intervals: int = SCAN_INTERVALS) -> PopulationState | None:
    """Leftmost coexistence equilibrium, or None when it does not exist."""
    roots = find_interior_roots(model, intervals)
    return roots[0] if roots else None


def classify_continuous(
    model: PreyPredatorModel, eq: Equilibrium, tol_hyperbolic: float = TOL_HYPERBOLIC
) -> tuple[Verdict, bool]:
    """Stability of an equilibrium of the ODE.

    Returns ``(verdict, globally_stable)``. The second element is only ever
    True for the extinction point when m1 >= r(0) and m2 >= s(0).
    """
    m1, m2 = model.m1, model.m2
    r0, s0, c = model.r0, model.s0, model.c
    if eq.kind is Kind.EXTINCTION:
        glob = m1 >= r0 and m2 >= s0
        if abs(m1 - r0) <= tol_hyperbolic or abs(m2 - s0) <= tol_hyperbolic:
            return Verdict.NON_HYPERBOLIC, glob
        if glob:
            return Verdict.GLOBALLY_STABLE, True
        return Verdict.UNSTABLE, False
    if eq.kind is Kind.PREDATOR_EXTINCTION:
        K = eq.x
        threshold = s0 + c * K * float(model.rates.phi(K))
        if abs(m2 - threshold) <= tol_hyperbolic:
            return Verdict.NON_HYPERBOLIC, False
        stable = m1 < r0 and m2 > threshold
        return (Verdict.LOCALLY_STABLE if stable else Verdict.UNSTABLE), False
    if eq.kind is Kind.PREY_EXTINCTION:
        M = eq.y
        threshold = r0 - M * model.phi0
        if abs(m1 - threshold) <= tol_hyperbolic:
            return Verdict.NON_HYPERBOLIC, False
        stable = m1 > threshold and m2 < s0
        return (Verdict.LOCALLY_STABLE if stable else Verdict.UNSTABLE), False
    return Verdict.LOCALLY_STABLE, False


def enumerate_equilibria(
    model: PreyPredatorModel, tol_hyperbolic: float = TOL_HYPERBOLIC
) -> list[Equilibrium]:
    """All equilibria in the nonnegative quadrant, each with its continuous verdict."""
    found: list[tuple[Kind, PopulationState, tuple[str, ...]]] = [
        (Kind.EXTINCTION, PopulationState(0.0, 0.0), ())
    ]
    K = find_K(model)
    if K is not None:
        found.append((Kind.PREDATOR_EXTINCTION, PopulationState(K, 0.0), ()))
    M = find_M(model)
    if M is not None:
        found.append((Kind.PREY_EXTINCTION, PopulationState(0.0, M), ()))
    roots = find_interior_roots(model)
    if roots:
        notes = ()
        if len(roots) > 1:
            others = ", ".join(f"({p.x:.6g}, {p.y:.6g})" for p in roots[1:])
            notes = (f"{len(roots)} interior roots found; using leftmost, others: {others}",)
        found.append((Kind.COEXISTENCE, roots[0], notes))

    result = []
    for kind, loc, notes in found:
        bare = Equilibrium(kind, loc)
        verdict, glob = classify_continuous(model, bare, tol_hyperbolic)
        result.append(Equilibrium(kind, loc, verdict, glob, notes))
    return result


def equilibria_to_csv(equilibria: list[Equilibrium]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["kind", "x", "y", "verdict"])
    for e in equilibria:
        verdict = e.continuous_verdict.value if e.continuous_verdict else ""
        writer.writerow([e.kind.value, repr(e.x), repr(e.y), verdict])
    return buf.getvalue()
