"""Sufficient conditions on the scheme weights for dynamic consistency.

The (m1, m2) plane splits into five regimes. Positivity needs the same sign
conditions everywhere; each regime then adds its own stability condition:

1. m1 >= r(0), m2 >= s(0)                       alpha4 + beta4 < 0
2. m1 < r(0), m2 > s(0) + c K phi(K)            T1, T2 > 0
3. m1 > r(0) - M phi(0), m2 < s(0)              T3, T4 > 0
4. m1 < r(0) - M phi(0), m2 < s(0)              T5, T6, T7 > 0
5. m1 < r(0), s(0) < m2 < s(0) + c K phi(K)     T5, T6, T7 > 0
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .equilibria import TOL_HYPERBOLIC, find_interior, find_K, find_M
from .errors import AmbiguousRegime, MissingEquilibrium
from .model import PopulationState, PreyPredatorModel
from .scheme import SchemeParams

REGIME_LABELS = {
    1: "m1 >= r(0) and m2 >= s(0)",
    2: "m1 < r(0) and m2 > s(0) + c K phi(K)",
    3: "m1 > r(0) - M phi(0) and m2 < s(0)",
    4: "m1 < r(0) - M phi(0) and m2 < s(0)",
    5: "m1 < r(0) and s(0) < m2 < s(0) + c K phi(K)",
}


@dataclass(frozen=True)
class ConditionEntry:
    name: str
    passed: bool
    values: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class ConditionReport:
    regime: int
    entries: tuple[ConditionEntry, ...]

    @property
    def consistent(self) -> bool:
        return all(e.passed for e in self.entries)

    def __getitem__(self, name: str) -> ConditionEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_text(self) -> str:
        lines = [f"regime = {self.regime} ({REGIME_LABELS[self.regime]})"]
        for e in self.entries:
            status = "PASS" if e.passed else "FAIL"
            lines.append(f"{e.name} = {status}")
            for key, value in e.values.items():
                lines.append(f"{key} = {value!r}")
        lines.append(f"dynamically_consistent = {'true' if self.consistent else 'false'}")
        return "\n".join(lines) + "\n"


_POSITIVITY_SIGNS = (
    ("alpha", (1, -1, -1, 1, -1, 1)),
    ("beta", (1, -1, 1, -1, -1, 1)),
)


def check_positivity_conditions(scheme: SchemeParams) -> ConditionEntry:
    """Sign conditions on the weights that keep both coordinates nonnegative."""
    ok = True
    for name, signs in _POSITIVITY_SIGNS:
        weights = getattr(scheme, name)
        for w, sign in zip(weights, signs):
            if (sign > 0 and w < 0) or (sign < 0 and w > 0):
                ok = False
    return ConditionEntry("positivity", ok)


def check_global_stability_condition(scheme: SchemeParams) -> bool:
    return scheme.alpha[3] + scheme.beta[3] < 0


def predator_extinction_values(model: PreyPredatorModel, scheme: SchemeParams) -> dict[str, float]:
    K = find_K(model)
    if K is None:
        raise MissingEquilibrium(f"no (K, 0) equilibrium: m1 = {model.m1} >= r(0) = {model.r0}")
    rates, m1, m2, c = model.rates, model.m1, model.m2, model.c
    _, a2, _, _, _, a6 = scheme.alpha
    _, b2, _, b4, _, b6 = scheme.beta
    s0 = model.s0
    ckphi = c * K * float(rates.phi(K))
    t1 = 2 * a6 * m1 - 2 * a2 * float(rates.r(K)) + K * float(rates.r_prime(K))
    t2 = s0 - m2 + ckphi - 2 * b2 * s0 - 2 * b4 * ckphi + 2 * b6 * m2
    return {"T1": t1, "T2": t2}


def check_predator_extinction_conditions(model, scheme) -> ConditionEntry:
    values = predator_extinction_values(model, scheme)
    return ConditionEntry("predator_extinction", all(v > 0 for v in values.values()), values)


def prey_extinction_values(model: PreyPredatorModel, scheme: SchemeParams) -> dict[str, float]:
    M = find_M(model)
    if M is None:
        raise MissingEquilibrium(f"no (0, M) equilibrium: m2 = {model.m2} >= s(0) = {model.s0}")
    rates, m1, m2 = model.rates, model.m1, model.m2
    _, a2, _, a4, _, a6 = scheme.alpha
    _, b2, _, _, _, b6 = scheme.beta
    r0, phi0 = model.r0, model.phi0
    t3 = r0 - M * phi0 - m1 - 2 * a2 * r0 + 2 * a4 * M * phi0 + 2 * a6 * m1
    t4 = M * float(rates.s_prime(M)) - 2 * b2 * float(rates.s(M)) + 2 * b6 * m2
    return {"T3": t3, "T4": t4}


def check_prey_extinction_conditions(model, scheme) -> ConditionEntry:
    values = prey_extinction_values(model, scheme)
    return ConditionEntry("prey_extinction", all(v > 0 for v in values.values()), values)


def coexistence_values(
    model: PreyPredatorModel, scheme: SchemeParams, point: PopulationState | None = None
) -> dict[str, float]:
    if point is None:
        point = find_interior(model)
    if point is None:
        raise MissingEquilibrium(f"no coexistence equilibrium for m1 = {model.m1}, m2 = {model.m2}")
    x, y = point
    rates, m1, m2, c = model.rates, model.m1, model.m2, model.c
    _, a2, _, a4, _, a6 = scheme.alpha
    _, b2, _, b4, _, b6 = scheme.beta
    r, rp = float(rates.r(x)), float(rates.r_prime(x))
    s, sp = float(rates.s(y)), float(rates.s_prime(y))
    ph, php = float(rates.phi(x)), float(rates.phi_prime(x))

    prey_weight = -a2 * r + a4 * y * ph + a6 * m1
    pred_weight = -b2 * s - b4 * c * x * ph + b6 * m2
    slope = rp - y * php
    t5 = (
        -x * slope * pred_weight
        - y * sp * prey_weight
        - x * y * sp * slope
        - c * x * y * ph * (ph + x * php)
    )
    t6 = prey_weight + x * slope
    t7 = pred_weight + y * sp
    return {"T5": t5, "T6": t6, "T7": t7}


def check_coexistence_conditions(model, scheme, point=None) -> ConditionEntry:
    values = coexistence_values(model, scheme, point)
    return ConditionEntry("coexistence", all(v > 0 for v in values.values()), values)


def regime_of(model: PreyPredatorModel, tol: float = TOL_HYPERBOLIC) -> int:
    """Index 1..5 of the (m1, m2) regime.

    Regime 1 is closed (non-strict inequalities), so points exactly on its
    boundary are unambiguous. Any other point within ``tol`` of one of its
    regime's strict inequalities raises AmbiguousRegime.
    """
    m1, m2 = model.m1, model.m2
    r0, s0, phi0, c = model.r0, model.s0, model.phi0, model.c
    K, M = find_K(model), find_M(model)

    if m1 >= r0 and m2 >= s0:
        return 1
    # (index, margins of its strict inequalities) for the candidate regimes
    candidates: list[tuple[int, list[float]]] = []
    if K is not None:
        window = s0 + c * K * float(model.rates.phi(K))
        candidates.append((2, [r0 - m1, m2 - window]))
        candidates.append((5, [r0 - m1, m2 - s0, window - m2]))
    if M is not None:
        prey_threshold = r0 - M * phi0
        candidates.append((3, [m1 - prey_threshold, s0 - m2]))
        candidates.append((4, [prey_threshold - m1, s0 - m2]))

    for index, margins in candidates:
        if all(m > 0 for m in margins):
            if min(margins) <= tol:
                raise AmbiguousRegime(
                    f"(m1, m2) = ({m1}, {m2}) lies within {tol:g} of a boundary of regime {index}"
                )
            return index
    raise AmbiguousRegime(f"(m1, m2) = ({m1}, {m2}) lies on a regime boundary")


def consistency_report(
    model: PreyPredatorModel, scheme: SchemeParams, tol: float = TOL_HYPERBOLIC
) -> ConditionReport:
    """Evaluate every condition the model's regime requires."""
    regime = regime_of(model, tol)
    entries = [
        ConditionEntry("equilibria_preserved", True),
        check_positivity_conditions(scheme),
    ]
    if regime == 1:
        a4, b4 = scheme.alpha[3], scheme.beta[3]
        entries.append(
            ConditionEntry(
                "global_stability",
                check_global_stability_condition(scheme),
                {"alpha4+beta4": a4 + b4},
            )
        )
    elif regime == 2:
        entries.append(check_predator_extinction_conditions(model, scheme))
    elif regime == 3:
        entries.append(check_prey_extinction_conditions(model, scheme))
    else:
        entries.append(check_coexistence_conditions(model, scheme))
    return ConditionReport(regime, tuple(entries))
