"""Acceptance criteria 1-8, one test each; each prints a PASS/FAIL line."""

import time
from fractions import Fraction

import numpy as np

from nsfd_predprey.conditions import (
    check_global_stability_condition,
    check_positivity_conditions,
    coexistence_values,
    consistency_report,
    predator_extinction_values,
    prey_extinction_values,
)
from nsfd_predprey.equilibria import Kind, Verdict, enumerate_equilibria, find_interior
from nsfd_predprey.integrators import compare_trajectories, estimate_order, run_method
from nsfd_predprey.lyapunov import select_lyapunov_params, verify_lyapunov_decrease_many
from nsfd_predprey.model import PreyPredatorModel
from nsfd_predprey.scheme import DEFAULT_SCHEME, DiscreteMap
from nsfd_predprey.stability import DiscreteVerdict, classify_discrete, closed_form_jacobian, discrete_jacobian

from conftest import H_VALUES, case_model

CASE_KEYS = ("i", "ii", "iii", "iv", "v", "vi")


def test_criterion_1_equilibrium_preservation(criterion):
    worst = 0.0
    for key in CASE_KEYS:
        model = case_model(key)
        for h in H_VALUES:
            map_ = DiscreteMap(model, DEFAULT_SCHEME, h)
            for eq in enumerate_equilibria(model):
                e = eq.location
                gap = map_.step(e).distance(e) / (1 + max(e.x, e.y))
                worst = max(worst, gap)
    ok = worst <= 1e-12
    criterion(1, ok, f"max ||step(e) - e|| / (1 + ||e||) = {worst:.3g} (limit 1e-12)")
    assert ok


def test_criterion_2_unconditional_positivity(criterion):
    rng = np.random.default_rng(2)
    starts = rng.uniform(0, 100, (1000, 2))
    negatives = 0
    minimum = np.inf
    for key in CASE_KEYS:
        model = case_model(key)
        for h in H_VALUES:
            map_ = DiscreteMap(model, DEFAULT_SCHEME, h)
            x, y = starts[:, 0].copy(), starts[:, 1].copy()
            for _ in range(10_000):
                x, y = map_.step_arrays(x, y)
                negatives += int(np.count_nonzero(x < 0) + np.count_nonzero(y < 0))
                minimum = min(minimum, x.min(), y.min())
    ok = negatives == 0
    criterion(
        2, ok,
        f"6 cases x 4 h x 1000 starts x 1e4 steps: {negatives} negative components, min {minimum:.3g}",
    )
    assert ok


def _expected_discrete(eq):
    if eq.continuous_verdict is Verdict.NON_HYPERBOLIC:
        return DiscreteVerdict.NON_HYPERBOLIC
    if eq.continuous_verdict.is_stable:
        return DiscreteVerdict.LOCALLY_STABLE
    return DiscreteVerdict.UNSTABLE


def test_criterion_3_elementary_stability(criterion):
    checked = mismatches = 0
    stable_max_modulus = 0.0
    for key in CASE_KEYS:
        model = case_model(key)
        if not consistency_report(model, DEFAULT_SCHEME).consistent:
            continue
        for h in H_VALUES:
            map_ = DiscreteMap(model, DEFAULT_SCHEME, h)
            for eq in enumerate_equilibria(model):
                cls = classify_discrete(map_, eq)
                checked += 1
                if cls.verdict is not _expected_discrete(eq):
                    mismatches += 1
                if eq.continuous_verdict.is_stable:
                    stable_max_modulus = max(stable_max_modulus, max(cls.moduli))
    ok = checked > 0 and mismatches == 0 and stable_max_modulus < 1
    criterion(
        3, ok,
        f"{checked} (case, h, equilibrium) triples, {mismatches} verdict mismatches, "
        f"max modulus at stable points {stable_max_modulus:.12f}",
    )
    assert ok


def test_criterion_4_lyapunov_global_stability(criterion):
    rng = np.random.default_rng(4)
    models = {"case i": case_model("i"), "boundary (1.5, 0.5)": PreyPredatorModel.rational(1.5, 0.5)}
    starts = rng.uniform(0, 100, (100, 2))
    failures = []
    longest = 0
    t0 = time.perf_counter()
    for label, model in models.items():
        params = select_lyapunov_params(model, DEFAULT_SCHEME)
        for h in (1.0, 100.0):
            map_ = DiscreteMap(model, DEFAULT_SCHEME, h)
            # raises DecreaseViolated on the first non-decreasing step
            reports = verify_lyapunov_decrease_many(map_, params, starts, 10**9, stop_radius=1e-6)
            for rep in reports:
                longest = max(longest, rep.steps)
                if not (rep.reached_radius and rep.max_delta < 0):
                    failures.append((label, h, rep.start))
    elapsed = time.perf_counter() - t0
    ok = not failures
    criterion(
        4, ok,
        f"2 models x 2 h x 100 starts: strict decrease into radius 1e-6, "
        f"{len(failures)} failures, longest run {longest} steps, {elapsed:.1f} s",
    )
    assert ok


def test_criterion_5_standard_scheme_failure(criterion):
    model = case_model("i")
    comp = compare_trajectories(
        model, DEFAULT_SCHEME, 1.0, 200, (10.0, 10.0), search_thresholds=True
    )
    threshold = comp.summary["euler"].violation_threshold
    nsfd_ok = False
    if threshold is not None:
        nsfd_track = run_method("nsfd", model, (10.0, 10.0), threshold, 200)
        nsfd_ok = bool(np.all(nsfd_track >= 0))
    ok = threshold is not None and nsfd_ok and comp.summary["nsfd"].violation_threshold is None
    criterion(
        5, ok,
        f"Euler first leaves the quadrant at h = {threshold} (doubling from 0.01, 200 steps "
        f"from (10, 10)); NSFD at that h stays nonnegative: {nsfd_ok}; "
        f"NSFD threshold up to h = 1e4: {comp.summary['nsfd'].violation_threshold}",
    )
    assert ok


def test_criterion_6_convergence_order(criterion):
    model = case_model("v")
    h_list = [0.1, 0.05, 0.025, 0.0125]
    bounds = {"nsfd": (0.7, 1.3), "euler": (0.7, 1.3), "rk4": (3.5, 4.5)}
    orders = {m: estimate_order(m, model, (5.0, 5.0), 10.0, h_list).order for m in bounds}
    ok = all(lo <= orders[m] <= hi for m, (lo, hi) in bounds.items())
    criterion(6, ok, ", ".join(f"{m} p = {p:.4f}" for m, p in orders.items()))
    assert ok


def _exact_T(key):
    """T values by direct substitution in rational arithmetic (P3 from the package)."""
    F = Fraction
    a = [F(v) for v in DEFAULT_SCHEME.alpha]
    b = [F(v) for v in DEFAULT_SCHEME.beta]
    p = case_model(key).params
    m1, m2, c = F(p.m1), F(p.m2), F(p.c)
    r = lambda x: 15 / (x + 10)
    rp = lambda x: -15 / (x + 10) ** 2
    s = lambda y: 5 / (y + 10)
    sp = lambda y: -5 / (y + 10) ** 2
    ph = lambda x: 1 / (x + 30)
    php = lambda x: -1 / (x + 30) ** 2
    out = {}
    if m1 < F(3, 2):
        K = 15 / m1 - 10
        out["T1"] = 2 * a[5] * m1 - 2 * a[1] * r(K) + K * rp(K)
        out["T2"] = (s(F(0)) - m2 + c * K * ph(K) - 2 * b[1] * s(F(0))
                     - 2 * b[3] * c * K * ph(K) + 2 * b[5] * m2)
    if m2 < F(1, 2):
        M = 5 / m2 - 10
        out["T3"] = (r(F(0)) - M * ph(F(0)) - m1 - 2 * a[1] * r(F(0))
                     + 2 * a[3] * M * ph(F(0)) + 2 * a[5] * m1)
        out["T4"] = M * sp(M) - 2 * b[1] * s(M) + 2 * b[5] * m2
    p3 = find_interior(case_model(key))
    if p3 is not None:
        x, y = F(p3.x), F(p3.y)
        u = -a[1] * r(x) + a[3] * y * ph(x) + a[5] * m1
        v = -b[1] * s(y) - b[3] * c * x * ph(x) + b[5] * m2
        out["T5"] = (-x * (rp(x) - y * php(x)) * v - y * sp(y) * u
                     - x * y * sp(y) * (rp(x) - y * php(x)) - c * x * y * ph(x) * (ph(x) + x * php(x)))
        out["T6"] = u + x * (rp(x) - y * php(x))
        out["T7"] = v + y * sp(y)
    return {k: float(v) for k, v in out.items()}


def test_criterion_7_condition_certificates(criterion):
    required = {"vi": ("T1", "T2"), "ii": ("T3", "T4"), "iii": ("T3", "T4"),
                "iv": ("T5", "T6", "T7"), "v": ("T5", "T6", "T7")}
    getters = {"T1": predator_extinction_values, "T3": prey_extinction_values, "T5": coexistence_values}
    ok = check_positivity_conditions(DEFAULT_SCHEME).passed and check_global_stability_condition(DEFAULT_SCHEME)
    parts = [f"positivity signs {'ok' if ok else 'fail'}, alpha4+beta4 = "
             f"{DEFAULT_SCHEME.alpha[3] + DEFAULT_SCHEME.beta[3]:g}"]
    for key, names in required.items():
        got = getters[names[0]](case_model(key), DEFAULT_SCHEME)
        exact = _exact_T(key)
        for name in names:
            agree = abs(got[name] - exact[name]) <= 1e-12 * max(1.0, abs(exact[name]))
            ok = ok and got[name] > 0 and agree
            parts.append(f"{key}:{name}={got[name]:.10g}")
    criterion(7, ok, "; ".join(parts))
    assert ok


def test_criterion_8_jacobian_cross_check(criterion):
    worst = 0.0
    count = 0
    for key in CASE_KEYS:
        model = case_model(key)
        for h in H_VALUES:
            map_ = DiscreteMap(model, DEFAULT_SCHEME, h)
            for eq in enumerate_equilibria(model):
                if eq.kind is Kind.COEXISTENCE:
                    continue
                num = discrete_jacobian(map_, eq.location)
                ref = closed_form_jacobian(map_, eq)
                for n, r in zip((num.j11, num.j12, num.j21, num.j22), (ref.j11, ref.j12, ref.j21, ref.j22)):
                    err = abs(n - r) / abs(r) if r != 0 else (0.0 if n == 0 else np.inf)
                    worst = max(worst, err)
                count += 1
    ok = worst <= 1e-5
    criterion(8, ok, f"{count} Jacobians at P0/P1/P2, max entrywise relative error {worst:.3g} (limit 1e-5)")
    assert ok
