"""Local stability of fixed points of the discrete map.

The Jacobian is obtained by finite differences of the explicit map. The
closed-form Jacobians at the four equilibrium kinds are kept separately in
``closed_form_jacobian`` so that each route can check the other.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .equilibria import Equilibrium, Kind
from .errors import NonpositiveDenominator, NotAFixedPoint
from .scheme import DiscreteMap

FD_REL_STEP = 1e-6
TOL_UNIT_CIRCLE = 1e-9
FIXED_POINT_TOL = 1e-8


@dataclass(frozen=True)
class Jacobian2:
    j11: float
    j12: float
    j21: float
    j22: float

    @property
    def trace(self) -> float:
        return self.j11 + self.j22

    @property
    def determinant(self) -> float:
        return self.j11 * self.j22 - self.j12 * self.j21

    def rows(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return ((self.j11, self.j12), (self.j21, self.j22))


@dataclass(frozen=True)
class JuryVerdict:
    det_lt_1: bool
    one_minus_tr_plus_det_pos: bool
    one_plus_tr_plus_det_pos: bool
    stable: bool
    unstable: bool
    inconclusive: bool


class DiscreteVerdict(enum.Enum):
    LOCALLY_STABLE = "locally_stable"
    UNSTABLE = "unstable"
    NON_HYPERBOLIC = "non_hyperbolic"


@dataclass(frozen=True)
class DiscreteClassification:
    verdict: DiscreteVerdict
    jury: JuryVerdict
    jacobian: Jacobian2
    eigenvalues: tuple[complex, complex]
    moduli: tuple[float, float]
    non_hyperbolic: bool


def eigenvalues_2x2(jac: Jacobian2) -> tuple[complex, complex]:
    """Roots of lambda^2 - tr lambda + det, avoiding cancellation."""
    tr, det = jac.trace, jac.determinant
    disc = tr * tr - 4.0 * det
    if disc < 0:
        half = complex(tr / 2.0, math.sqrt(-disc) / 2.0)
        return half, half.conjugate()
    root = math.sqrt(disc)
    q = 0.5 * (tr + math.copysign(root, tr))
    if q == 0.0:
        return complex(0.0), complex(0.0)
    return complex(q), complex(det / q)


def jury_test(jac: Jacobian2) -> JuryVerdict:
    tr, det = jac.trace, jac.determinant
    c1, c2, c3 = det, 1.0 - tr + det, 1.0 + tr + det
    stable = c1 < 1.0 and c2 > 0.0 and c3 > 0.0
    unstable = c1 > 1.0 or c2 < 0.0 or c3 < 0.0
    return JuryVerdict(
        det_lt_1=c1 < 1.0,
        one_minus_tr_plus_det_pos=c2 > 0.0,
        one_plus_tr_plus_det_pos=c3 > 0.0,
        stable=stable,
        unstable=unstable,
        inconclusive=not (stable or unstable),
    )


def _increment(map_: DiscreteMap, x: float, y: float) -> tuple[float, float]:
    dx, dy, den_x, den_y = map_.increment(x, y)
    if not (den_x > 0 and den_y > 0):
        raise NonpositiveDenominator(
            f"finite-difference probe at ({x!r}, {y!r}) hit denominators ({den_x!r}, {den_y!r})",
            state=(x, y),
        )
    return dx, dy


def _partial(fn, v: float) -> tuple[float, float]:
    # Central difference, or a second-order one-sided formula near the axis.
    d = FD_REL_STEP * max(1.0, abs(v))
    if v - d >= 0.0:
        fp, fm = fn(v + d), fn(v - d)
        return ((fp[0] - fm[0]) / (2 * d), (fp[1] - fm[1]) / (2 * d))
    f0, f1, f2 = fn(v), fn(v + d), fn(v + 2 * d)
    return (
        (-3 * f0[0] + 4 * f1[0] - f2[0]) / (2 * d),
        (-3 * f0[1] + 4 * f1[1] - f2[1]) / (2 * d),
    )


def discrete_jacobian(map_: DiscreteMap, point) -> Jacobian2:
    """Finite-difference Jacobian of the map, as identity plus that of the increment."""
    x, y = (float(v) for v in point)
    dfx, dgx = _partial(lambda t: _increment(map_, t, y), x)
    dfy, dgy = _partial(lambda t: _increment(map_, x, t), y)
    return Jacobian2(1.0 + dfx, dfy, dgx, 1.0 + dgy)


def closed_form_jacobian(map_: DiscreteMap, eq: Equilibrium) -> Jacobian2:
    """Analytic Jacobian of the map at an equilibrium of the given kind."""
    model = map_.model
    rates, m1, m2, c = model.rates, model.m1, model.m2, model.c
    a1, a2, _, a4, a5, a6 = map_.scheme.alpha
    b1, b2, _, b4, b5, b6 = map_.scheme.beta
    p = map_.phi_h
    x, y = eq.x, eq.y
    r0, s0, phi0 = model.r0, model.s0, model.phi0

    if eq.kind is Kind.EXTINCTION:
        l1 = (1 + p * a1 * r0 - p * a5 * m1) / (1 - p * a2 * r0 + p * m1 * a6)
        l2 = (1 + p * b1 * s0 - p * b5 * m2) / (1 - p * b2 * s0 + p * b6 * m2)
        return Jacobian2(l1, 0.0, 0.0, l2)
    if eq.kind is Kind.PREDATOR_EXTINCTION:
        K = x
        phK = float(rates.phi(K))
        u = 1 - p * a2 * float(rates.r(K)) + p * a6 * m1
        v = 1 - p * b2 * s0 - p * b4 * c * K * phK + p * b6 * m2
        return Jacobian2(
            1 + p * K * float(rates.r_prime(K)) / u,
            -p * K * phK / u,
            0.0,
            1 + p * (s0 - m2 + c * K * phK) / v,
        )
    if eq.kind is Kind.PREY_EXTINCTION:
        M = y
        u = 1 - p * a2 * r0 + p * a4 * M * phi0 + p * a6 * m1
        v = 1 - p * b2 * float(rates.s(M)) + p * b6 * m2
        return Jacobian2(
            1 + p * (r0 - M * phi0 - m1) / u,
            0.0,
            p * c * M * phi0 / v,
            1 + p * M * float(rates.s_prime(M)) / v,
        )
    ph, php = float(rates.phi(x)), float(rates.phi_prime(x))
    u = 1 - p * a2 * float(rates.r(x)) + p * a4 * y * ph + p * a6 * m1
    v = 1 - p * b2 * float(rates.s(y)) - p * b4 * c * x * ph + p * b6 * m2
    return Jacobian2(
        1 + p * x * (float(rates.r_prime(x)) - y * php) / u,
        -p * x * ph / u,
        p * c * y * (ph + x * php) / v,
        1 + p * y * float(rates.s_prime(y)) / v,
    )


def classify_discrete(
    map_: DiscreteMap, eq: Equilibrium, tol: float = TOL_UNIT_CIRCLE
) -> DiscreteClassification:
    """Jury test on the numerical Jacobian at a fixed point of the map."""
    nxt = map_.step(eq.location)
    if nxt.distance(eq.location) > FIXED_POINT_TOL:
        raise NotAFixedPoint(
            f"{eq.kind.value} at ({eq.x!r}, {eq.y!r}) moves by {nxt.distance(eq.location):.3g}"
        )
    jac = discrete_jacobian(map_, eq.location)
    jury = jury_test(jac)
    eig = eigenvalues_2x2(jac)
    moduli = (abs(eig[0]), abs(eig[1]))
    non_hyperbolic = any(abs(m - 1.0) <= tol for m in moduli)

    if any(m > 1.0 + tol for m in moduli):
        verdict = DiscreteVerdict.UNSTABLE
    elif non_hyperbolic:
        verdict = DiscreteVerdict.NON_HYPERBOLIC
    elif jury.stable:
        verdict = DiscreteVerdict.LOCALLY_STABLE
    elif jury.unstable:
        verdict = DiscreteVerdict.UNSTABLE
    else:
        verdict = DiscreteVerdict.NON_HYPERBOLIC
    return DiscreteClassification(verdict, jury, jac, eig, moduli, non_hyperbolic)


def spectral_radius(jac: Jacobian2) -> float:
    return max(abs(v) for v in eigenvalues_2x2(jac))


__all__ = [
    "Jacobian2",
    "JuryVerdict",
    "DiscreteVerdict",
    "DiscreteClassification",
    "eigenvalues_2x2",
    "jury_test",
    "discrete_jacobian",
    "closed_form_jacobian",
    "classify_discrete",
    "spectral_radius",
]
