"""Scenario configuration: built-in cases and the flat ``key = value`` file format."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError
from .model import PreyPredatorModel
from .scheme import DEFAULT_SCHEME, Denominator, SchemeParams

# (m1, m2) for the six worked examples with the rational rates below.
CASES: dict[str, tuple[float, float]] = {
    "i": (1.53, 0.622),
    "ii": (1.53, 0.4789),
    "iii": (1.4925, 0.4789),
    "iv": (1.38, 0.4789),
    "v": (0.3, 0.501),
    "vi": (1.38, 0.622),
}

_SCHEME_KEYS = tuple(f"alpha{j}" for j in range(1, 7)) + tuple(f"beta{j}" for j in range(1, 7))


@dataclass(frozen=True)
class Scenario:
    name: str = "custom"
    a_r: float = 15.0
    b_r: float = 10.0
    a_s: float = 5.0
    b_s: float = 10.0
    b_phi: float = 30.0
    c: float = 0.003
    m1: float | None = None
    m2: float | None = None
    scheme: SchemeParams = DEFAULT_SCHEME
    denominator: str = "linear"
    q: float = 1.0
    h: float = 1.0
    n: int | None = None
    t_end: float | None = None
    x0: float = 10.0
    y0: float = 10.0
    csv: str = "trajectory.csv"
    svg: str = "trajectory.svg"
    methods: tuple[str, ...] = ("nsfd",)
    # keys explicitly set by the user, for diagnostics only
    given: frozenset = field(default=frozenset(), compare=False)

    def validate(self, need_run: bool = False) -> "Scenario":
        if self.m1 is None or self.m2 is None:
            raise ConfigError("m1 and m2 are required (use --case or a config file)")
        if not self.h > 0:
            raise ConfigError(f"h must be positive, got {self.h}")
        if self.x0 < 0 or self.y0 < 0:
            raise ConfigError(f"initial state ({self.x0}, {self.y0}) must be nonnegative")
        if self.n is not None and self.t_end is not None:
            raise ConfigError("give exactly one of n or t_end, not both")
        if need_run and self.n is None and self.t_end is None:
            raise ConfigError("give exactly one of n or t_end")
        if self.n is not None and self.n < 0:
            raise ConfigError(f"n must be nonnegative, got {self.n}")
        if self.denominator not in ("linear", "mickens"):
            raise ConfigError(f"denominator must be 'linear' or 'mickens', got {self.denominator!r}")
        unknown = set(self.methods) - {"nsfd", "euler", "rk4"}
        if unknown:
            raise ConfigError(f"unknown methods: {', '.join(sorted(unknown))}")
        try:
            self.model()
            self.denominator_fn()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return self

    def model(self) -> PreyPredatorModel:
        return PreyPredatorModel.rational(
            self.m1, self.m2, self.c, self.a_r, self.b_r, self.a_s, self.b_s, self.b_phi
        )

    def denominator_fn(self) -> Denominator:
        return Denominator(self.denominator, self.q)

    @property
    def steps(self) -> int:
        if self.n is not None:
            return self.n
        n = round(self.t_end / self.h)
        return n

    def to_text(self) -> str:
        lines = [f"name = {self.name}"]
        for key in ("a_r", "b_r", "a_s", "b_s", "b_phi", "c", "m1", "m2"):
            lines.append(f"{key} = {getattr(self, key)!r}")
        for key, value in self.scheme.as_mapping().items():
            lines.append(f"{key} = {value!r}")
        lines.append(f"denominator = {self.denominator}")
        lines.append(f"q = {self.q!r}")
        lines.append(f"h = {self.h!r}")
        if self.n is not None:
            lines.append(f"n = {self.n}")
        if self.t_end is not None:
            lines.append(f"t_end = {self.t_end!r}")
        lines.append(f"x0 = {self.x0!r}")
        lines.append(f"y0 = {self.y0!r}")
        lines.append(f"csv = {self.csv}")
        lines.append(f"svg = {self.svg}")
        lines.append(f"methods = {','.join(self.methods)}")
        return "\n".join(lines) + "\n"


_FLOAT_KEYS = {"a_r", "b_r", "a_s", "b_s", "b_phi", "c", "m1", "m2", "q", "h", "t_end", "x0", "y0"}
_STR_KEYS = {"denominator", "csv", "svg", "name"}


def _coerce(key: str, raw: str):
    try:
        if key in _FLOAT_KEYS or key in _SCHEME_KEYS:
            return float(raw)
        if key == "n":
            return int(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as a number") from None
    if key == "methods":
        return tuple(m.strip() for m in raw.split(",") if m.strip())
    if key in _STR_KEYS:
        return raw
    raise ConfigError(f"unknown key {key!r}")


def apply_updates(base: Scenario, updates: dict[str, object]) -> Scenario:
    """Return ``base`` with ``updates`` applied; scheme weights may be partial."""
    updates = dict(updates)
    weights = {k: updates.pop(k) for k in list(updates) if k in _SCHEME_KEYS}
    if weights:
        merged = base.scheme.as_mapping()
        merged.update(weights)
        try:
            updates["scheme"] = SchemeParams.from_mapping(merged)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    valid = {f.name for f in fields(Scenario)}
    bad = set(updates) - valid
    if bad:
        raise ConfigError(f"unknown keys: {', '.join(sorted(bad))}")
    given = base.given | set(updates) | set(weights)
    return replace(base, **updates, given=frozenset(given))


def parse_config_text(text: str) -> dict[str, object]:
    out: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        out[key] = _coerce(key, value)
    return out


def load_config(path: str | Path) -> dict[str, object]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config_text(text)


def builtin_case(key: str) -> dict[str, object]:
    if key not in CASES:
        raise ConfigError(f"unknown case {key!r}; choose from {', '.join(CASES)}")
    m1, m2 = CASES[key]
    return {
        "name": f"case_{key}",
        "a_r": 15.0, "b_r": 10.0, "a_s": 5.0, "b_s": 10.0, "b_phi": 30.0,
        "c": 0.003, "m1": m1, "m2": m2,
    }
