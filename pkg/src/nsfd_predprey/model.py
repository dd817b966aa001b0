"""Continuous predator-prey model with general recruitment and functional response.

The system is

    x' = x [r(x) - y phi(x) - m1]
    y' = y [s(y) + c x phi(x) - m2]

where ``r`` and ``s`` are per-capita recruitment rates and ``x phi(x)`` is the
number of prey consumed per predator per unit time.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import EmptyGrid

DEFAULT_PROBE_GRID = (0.0, 0.5, 1.0, 5.0, 10.0, 50.0, 100.0)
DEFAULT_DECAY_PROBE = 1e6
DEFAULT_DECAY_EPS = 1e-3


@dataclass(frozen=True)
class PopulationState:
    """A point of the invariant quadrant x >= 0, y >= 0."""

    x: float
    y: float

    def __post_init__(self):
        x, y = float(self.x), float(self.y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"non-finite state ({x}, {y})")
        if x < 0.0 or y < 0.0:
            raise ValueError(f"state ({x}, {y}) lies outside the nonnegative quadrant")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __iter__(self):
        yield self.x
        yield self.y

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)

    def distance(self, other: "PopulationState | Sequence[float]") -> float:
        """Max-norm distance to another state."""
        ox, oy = other
        return max(abs(self.x - ox), abs(self.y - oy))


@dataclass(frozen=True)
class MortalityParams:
    m1: float
    m2: float
    c: float

    def __post_init__(self):
        if not self.m1 > 0:
            raise ValueError(f"m1 must be positive, got {self.m1}")
        if not self.m2 > 0:
            raise ValueError(f"m2 must be positive, got {self.m2}")
        if not 0 < self.c < 1:
            raise ValueError(f"c must lie in (0, 1), got {self.c}")


class VitalRates(ABC):
    """Recruitment rates r, s and response phi together with their derivatives.

    Implementations should accept scalars as well as numpy arrays so that the
    vectorized map evaluations work.
    """

    @abstractmethod
    def r(self, x): ...

    @abstractmethod
    def r_prime(self, x): ...

    @abstractmethod
    def s(self, y): ...

    @abstractmethod
    def s_prime(self, y): ...

    @abstractmethod
    def phi(self, x): ...

    @abstractmethod
    def phi_prime(self, x): ...

    # Closed-form inverses are optional; root finders fall back to bisection.
    def r_inverse(self, value: float) -> float | None:
        return None

    def s_inverse(self, value: float) -> float | None:
        return None


@dataclass(frozen=True)
class FunctionalVitalRates(VitalRates):
    """Vital rates assembled from plain callables."""

    r_fn: Callable
    r_prime_fn: Callable
    s_fn: Callable
    s_prime_fn: Callable
    phi_fn: Callable
    phi_prime_fn: Callable

    def r(self, x):
        return self.r_fn(x)

    def r_prime(self, x):
        return self.r_prime_fn(x)

    def s(self, y):
        return self.s_fn(y)

    def s_prime(self, y):
        return self.s_prime_fn(y)

    def phi(self, x):
        return self.phi_fn(x)

    def phi_prime(self, x):
        return self.phi_prime_fn(x)


@dataclass(frozen=True)
class RationalVitalRates(VitalRates):
    """r(x) = a_r/(x + b_r), s(y) = a_s/(y + b_s), phi(x) = 1/(x + b_phi)."""

    a_r: float = 15.0
    b_r: float = 10.0
    a_s: float = 5.0
    b_s: float = 10.0
    b_phi: float = 30.0

    def __post_init__(self):
        for name in ("a_r", "b_r", "a_s", "b_s", "b_phi"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")

    def r(self, x):
        return self.a_r / (x + self.b_r)

    def r_prime(self, x):
        return -self.a_r / (x + self.b_r) ** 2

    def s(self, y):
        return self.a_s / (y + self.b_s)

    def s_prime(self, y):
        return -self.a_s / (y + self.b_s) ** 2

    def phi(self, x):
        return 1.0 / (x + self.b_phi)

    def phi_prime(self, x):
        return -1.0 / (x + self.b_phi) ** 2

    @property
    def r0(self) -> float:
        return self.a_r / self.b_r

    @property
    def s0(self) -> float:
        return self.a_s / self.b_s

    @property
    def phi0(self) -> float:
        return 1.0 / self.b_phi

    def r_inverse(self, value: float) -> float:
        return self.a_r / value - self.b_r

    def s_inverse(self, value: float) -> float:
        return self.a_s / value - self.b_s


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    worst_value: float
    where: float


@dataclass(frozen=True)
class BiologicalReport:
    checks: tuple[ConditionCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> ConditionCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _pointwise(name, fn, grid, ok) -> ConditionCheck:
    # worst_value is the first failing value, or the value closest to failing
    worst, where = None, None
    for p in grid:
        v = float(fn(p))
        if not ok(v):
            return ConditionCheck(name, False, v, p)
        if worst is None or abs(v) < abs(worst):
            worst, where = v, p
    return ConditionCheck(name, True, worst, where)


def verify_biological_conditions(
    rates: VitalRates,
    probe_grid: Sequence[float] = DEFAULT_PROBE_GRID,
    decay_probe: float = DEFAULT_DECAY_PROBE,
    decay_eps: float = DEFAULT_DECAY_EPS,
) -> BiologicalReport:
    """Check the admissibility conditions on the vital rates at probe points.

    Monotonicity of x r(x), y s(y) and x phi(x) is checked through the product
    rule with the supplied derivatives. The limits r, s -> 0 are replaced by
    ``r(decay_probe) < decay_eps``.
    """
    grid = [float(p) for p in probe_grid]
    if not grid:
        raise EmptyGrid("probe grid must contain at least one point")
    if any(p < 0 for p in grid):
        raise ValueError("probe grid must be nonnegative")

    checks = [
        _pointwise("r(x) > 0", rates.r, grid, lambda v: v > 0),
        _pointwise("r'(x) < 0", rates.r_prime, grid, lambda v: v < 0),
        _pointwise(
            "[x r(x)]' >= 0",
            lambda x: rates.r(x) + x * rates.r_prime(x),
            grid,
            lambda v: v >= 0,
        ),
        ConditionCheck(
            "r(x) -> 0",
            float(rates.r(decay_probe)) < decay_eps,
            float(rates.r(decay_probe)),
            decay_probe,
        ),
        _pointwise("s(y) > 0", rates.s, grid, lambda v: v > 0),
        _pointwise("s'(y) < 0", rates.s_prime, grid, lambda v: v < 0),
        _pointwise(
            "[y s(y)]' >= 0",
            lambda y: rates.s(y) + y * rates.s_prime(y),
            grid,
            lambda v: v >= 0,
        ),
        ConditionCheck(
            "s(y) -> 0",
            float(rates.s(decay_probe)) < decay_eps,
            float(rates.s(decay_probe)),
            decay_probe,
        ),
        _pointwise("phi(x) > 0", rates.phi, grid, lambda v: v > 0),
        _pointwise("phi'(x) <= 0", rates.phi_prime, grid, lambda v: v <= 0),
        _pointwise(
            "[x phi(x)]' >= 0",
            lambda x: rates.phi(x) + x * rates.phi_prime(x),
            grid,
            lambda v: v >= 0,
        ),
    ]
    return BiologicalReport(tuple(checks))


@dataclass(frozen=True)
class PreyPredatorModel:
    """Vital rates plus mortality parameters.

    Construction never rejects a model that violates the admissibility
    conditions; the outcome is stored in ``verification``.
    """

    rates: VitalRates
    params: MortalityParams
    verification: BiologicalReport = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "verification", verify_biological_conditions(self.rates))

    @classmethod
    def rational(
        cls,
        m1: float,
        m2: float,
        c: float = 0.003,
        a_r: float = 15.0,
        b_r: float = 10.0,
        a_s: float = 5.0,
        b_s: float = 10.0,
        b_phi: float = 30.0,
    ) -> "PreyPredatorModel":
        return cls(RationalVitalRates(a_r, b_r, a_s, b_s, b_phi), MortalityParams(m1, m2, c))

    @property
    def verified(self) -> bool:
        return self.verification.passed

    @property
    def m1(self) -> float:
        return self.params.m1

    @property
    def m2(self) -> float:
        return self.params.m2

    @property
    def c(self) -> float:
        return self.params.c

    @property
    def r0(self) -> float:
        return float(self.rates.r(0.0))

    @property
    def s0(self) -> float:
        return float(self.rates.s(0.0))

    @property
    def phi0(self) -> float:
        return float(self.rates.phi(0.0))


def eval_vector_field(model: PreyPredatorModel, state) -> tuple[float, float]:
    """Right-hand side (dx/dt, dy/dt) at ``state``.

    ``state`` may be any (x, y) pair; the formula is applied verbatim, so
    negative coordinates produced by standard integrators are accepted.
    """
    x, y = state
    rates, p = model.rates, model.params
    phi_x = rates.phi(x)
    return (
        x * (rates.r(x) - y * phi_x - p.m1),
        y * (rates.s(y) + p.c * x * phi_x - p.m2),
    )
