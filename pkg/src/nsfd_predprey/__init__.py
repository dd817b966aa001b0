"""Positivity-preserving nonstandard finite difference integration of a
general predator-prey model, with equilibrium, stability and Lyapunov tools."""

from .conditions import ConditionReport, consistency_report, regime_of
from .equilibria import Equilibrium, Kind, Verdict, enumerate_equilibria, find_K, find_M
from .errors import ConfigError, NsfdError
from .integrators import compare_trajectories, estimate_order, find_positivity_violation
from .lyapunov import LyapunovParams, select_lyapunov_params, verify_lyapunov_decrease
from .model import (
    PopulationState,
    PreyPredatorModel,
    RationalVitalRates,
    eval_vector_field,
    verify_biological_conditions,
)
from .scheme import DEFAULT_SCHEME, Denominator, DiscreteMap, SchemeParams, iterate, step
from .stability import classify_discrete, discrete_jacobian, jury_test

__version__ = "0.1.0"

__all__ = [
    "ConditionReport", "consistency_report", "regime_of",
    "Equilibrium", "Kind", "Verdict", "enumerate_equilibria", "find_K", "find_M",
    "ConfigError", "NsfdError",
    "compare_trajectories", "estimate_order", "find_positivity_violation",
    "LyapunovParams", "select_lyapunov_params", "verify_lyapunov_decrease",
    "PopulationState", "PreyPredatorModel", "RationalVitalRates",
    "eval_vector_field", "verify_biological_conditions",
    "DEFAULT_SCHEME", "Denominator", "DiscreteMap", "SchemeParams", "iterate", "step",
    "classify_discrete", "discrete_jacobian", "jury_test",
]
