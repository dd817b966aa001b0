"""Nonstandard finite difference map for the predator-prey system.

Each right-hand-side term is split between the old and the new time level
with weights alpha_j + alpha_{j+1} = 1 (and likewise beta). Since the new
value appears linearly, the implicit scheme reduces to the explicit map

    x_{k+1} = (x + p a1 x r - p a3 x y phi - p a5 m1 x)
              / (1 - p a2 r + p a4 y phi + p a6 m1)
    y_{k+1} = (y + p b1 y s + p b3 c x y phi - p b5 m2 y)
              / (1 - p b2 s - p b4 c x phi + p b6 m2)

with p = denominator(h).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NonpositiveDenominator, NsfdError
from .model import PopulationState, PreyPredatorModel

PAIRING_TOL = 1e-12


class PositivityLost(NsfdError):
    """The map produced a negative coordinate (only possible for unsafe weights)."""


@dataclass(frozen=True)
class SchemeParams:
    alpha: tuple[float, ...]
    beta: tuple[float, ...]

    def __post_init__(self):
        alpha = tuple(float(a) for a in self.alpha)
        beta = tuple(float(b) for b in self.beta)
        if len(alpha) != 6 or len(beta) != 6:
            raise ValueError("alpha and beta need exactly six weights each")
        for name, w in (("alpha", alpha), ("beta", beta)):
            for j in (0, 2, 4):
                if abs(w[j] + w[j + 1] - 1.0) > PAIRING_TOL:
                    raise ValueError(
                        f"{name}{j + 1} + {name}{j + 2} = {w[j] + w[j + 1]!r}, must equal 1"
                    )
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @classmethod
    def from_mapping(cls, values) -> "SchemeParams":
        return cls(
            tuple(values[f"alpha{j}"] for j in range(1, 7)),
            tuple(values[f"beta{j}"] for j in range(1, 7)),
        )

    def as_mapping(self) -> dict[str, float]:
        out = {f"alpha{j + 1}": a for j, a in enumerate(self.alpha)}
        out.update({f"beta{j + 1}": b for j, b in enumerate(self.beta)})
        return out


# Satisfies the pairing constraint, the sign conditions for positivity, and
# alpha4 + beta4 = -1 < 0.
DEFAULT_SCHEME = SchemeParams(alpha=(2, -1, -1, 2, -1, 2), beta=(2, -1, 4, -3, -1, 2))


class DenominatorForm(enum.Enum):
    LINEAR = "linear"
    MICKENS = "mickens"


@dataclass(frozen=True)
class Denominator:
    """phi(h) = h, or (1 - exp(-q h))/q for the exponential form."""

    form: DenominatorForm = DenominatorForm.LINEAR
    q: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "form", DenominatorForm(self.form))
        if self.form is DenominatorForm.MICKENS and not self.q > 0:
            raise ValueError(f"q must be positive, got {self.q}")

    def __call__(self, h: float) -> float:
        if self.form is DenominatorForm.LINEAR:
            return float(h)
        return -math.expm1(-self.q * h) / self.q


LINEAR = Denominator()


@dataclass(frozen=True)
class DiscreteMap:
    model: PreyPredatorModel
    scheme: SchemeParams = DEFAULT_SCHEME
    h: float = 1.0
    denominator: Denominator = LINEAR
    phi_h: float = field(init=False, repr=False)

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError(f"step size must be positive, got {self.h}")
        object.__setattr__(self, "phi_h", self.denominator(self.h))

    def with_h(self, h: float) -> "DiscreteMap":
        return DiscreteMap(self.model, self.scheme, h, self.denominator)

    def _parts(self, x, y):
        rates, p = self.model.rates, self.model.params
        a1, a2, a3, a4, a5, a6 = self.scheme.alpha
        b1, b2, b3, b4, b5, b6 = self.scheme.beta
        ph, m1, m2, c = self.phi_h, p.m1, p.m2, p.c
        r = rates.r(x)
        s = rates.s(y)
        phx = rates.phi(x)
        num_x = x + ph * a1 * x * r - ph * a3 * x * y * phx - ph * a5 * m1 * x
        den_x = 1 - ph * a2 * r + ph * a4 * y * phx + ph * a6 * m1
        num_y = y + ph * b1 * y * s + ph * b3 * c * x * y * phx - ph * b5 * m2 * y
        den_y = 1 - ph * b2 * s - ph * b4 * c * x * phx + ph * b6 * m2
        return num_x, den_x, num_y, den_y

    def increment(self, x, y):
        """(F - x, G - y) written without the leading x, y terms.

        Uses the pairing constraint to cancel them analytically, which keeps
        finite differences of the map free of cancellation error.
        """
        rates, p = self.model.rates, self.model.params
        _, den_x, _, den_y = self._parts(x, y)
        phx = rates.phi(x)
        dx = self.phi_h * (x * (rates.r(x) - p.m1) - x * y * phx) / den_x
        dy = self.phi_h * (y * (rates.s(y) - p.m2) + p.c * x * y * phx) / den_y
        return dx, dy, den_x, den_y

    def denominators(self, state) -> tuple[float, float]:
        x, y = state
        _, den_x, _, den_y = self._parts(x, y)
        return float(den_x), float(den_y)

    def step(self, state) -> PopulationState:
        """One application of the explicit map."""
        x, y = state
        num_x, den_x, num_y, den_y = self._parts(float(x), float(y))
        if not (den_x > 0 and den_y > 0):
            raise NonpositiveDenominator(
                f"map denominators ({den_x!r}, {den_y!r}) at ({x!r}, {y!r})", state=(x, y)
            )
        xn, yn = num_x / den_x, num_y / den_y
        if xn < 0 or yn < 0:
            raise PositivityLost(f"step from ({x!r}, {y!r}) gave ({xn!r}, {yn!r})")
        return PopulationState(xn, yn)

    def step_arrays(self, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized step over many states; no domain checks beyond denominators."""
        num_x, den_x, num_y, den_y = self._parts(x, y)
        if not (np.all(den_x > 0) and np.all(den_y > 0)):
            bad = int(np.argmin(np.minimum(den_x, den_y)))
            raise NonpositiveDenominator(
                f"map denominator <= 0 at state index {bad}", state=(x[bad], y[bad])
            )
        return num_x / den_x, num_y / den_y

    def iterate(self, state0, n: int, t0: float = 0.0) -> "Trajectory":
        return iterate(self, state0, n, t0)


@dataclass
class Trajectory:
    t0: float
    h: float
    states: list[PopulationState]

    def __len__(self) -> int:
        return len(self.states)

    def __getitem__(self, k: int) -> PopulationState:
        return self.states[k]

    @property
    def final(self) -> PopulationState:
        return self.states[-1]

    def times(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(len(self.states))

    def as_array(self) -> np.ndarray:
        return np.array([s.as_tuple() for s in self.states])


def step(map_: DiscreteMap, state) -> PopulationState:
    return map_.step(state)


def iterate(map_: DiscreteMap, state0, n: int, t0: float = 0.0) -> Trajectory:
    """Apply the map n times; errors carry the index of the failing step."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    state = state0 if isinstance(state0, PopulationState) else PopulationState(*state0)
    states = [state]
    for k in range(n):
        try:
            state = map_.step(state)
        except NonpositiveDenominator as exc:
            raise exc.with_index(k) from None
        except PositivityLost as exc:
            raise PositivityLost(f"step {k}: {exc}") from None
        states.append(state)
    return Trajectory(t0, map_.h, states)


def iterate_many(map_: DiscreteMap, x0: Sequence[float], y0: Sequence[float], n: int):
    """Iterate a batch of starts; yields (k, x, y) after every step."""
    x = np.asarray(x0, dtype=float).copy()
    y = np.asarray(y0, dtype=float).copy()
    for k in range(1, n + 1):
        x, y = map_.step_arrays(x, y)
        yield k, x, y
