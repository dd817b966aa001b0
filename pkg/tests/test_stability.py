
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nsfd_predprey.equilibria import Equilibrium, Kind, Verdict, enumerate_equilibria
from nsfd_predprey.errors import NotAFixedPoint
from nsfd_predprey.model import PopulationState, PreyPredatorModel
from nsfd_predprey.scheme import DEFAULT_SCHEME, DiscreteMap
from nsfd_predprey.stability import (
    DiscreteVerdict,
    Jacobian2,
    classify_discrete,
    closed_form_jacobian,
    discrete_jacobian,
    eigenvalues_2x2,
    jury_test,
    spectral_radius,
)

from conftest import H_VALUES, case_model


def test_trace_and_determinant():
    j = Jacobian2(1.5, -2.0, 0.25, 3.0)
    assert j.trace == 4.5
    assert j.determinant == 1.5 * 3.0 + 2.0 * 0.25


def test_eigenvalues_simple_matrices():
    assert eigenvalues_2x2(Jacobian2(1, 0, 0, 1)) == (1, 1)
    assert sorted(v.real for v in eigenvalues_2x2(Jacobian2(0.3, 0, 0, -2.0))) == [-2.0, 0.3]
    ev = eigenvalues_2x2(Jacobian2(0, -1, 1, 0))
    assert sorted(v.imag for v in ev) == [-1.0, 1.0]
    assert all(abs(v) == 1.0 for v in ev)


def test_eigenvalues_no_cancellation():
    # tr^2 >> det: the small root must keep full relative accuracy
    ev = sorted(abs(v) for v in eigenvalues_2x2(Jacobian2(1e8, 0, 0, 1e-8)))
    assert ev[0] == pytest.approx(1e-8, rel=1e-14)


@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4))
def test_eigenvalues_match_numpy(entries):
    j = Jacobian2(*entries)
    got = sorted(eigenvalues_2x2(j), key=lambda z: (z.real, z.imag))
    want = sorted(np.linalg.eigvals(np.array(j.rows())), key=lambda z: (z.real, z.imag))
    for g, w in zip(got, want):
        assert abs(g - w) <= 1e-7 * max(1.0, abs(w))


def test_jury_examples():
    assert jury_test(Jacobian2(0, 0, 0, 0)).stable
    v = jury_test(Jacobian2(2, 0, 0, 0))
    assert v.unstable and not v.one_minus_tr_plus_det_pos
    v = jury_test(Jacobian2(0, -1, 1, 0))
    assert v.inconclusive and not v.stable and not v.unstable


def test_jury_matches_eigenvalue_moduli_on_random_matrices():
    rng = np.random.default_rng(11)
    seen_stable = seen_unstable = 0
    for _ in range(1000):
        j = Jacobian2(*rng.uniform(-2, 2, 4))
        moduli = np.abs(np.linalg.eigvals(np.array(j.rows())))
        verdict = jury_test(j)
        if np.any(np.abs(moduli - 1) <= 1e-12):
            continue
        assert verdict.stable == bool(np.all(moduli < 1 - 1e-12))
        if np.any(moduli > 1 + 1e-12):
            assert verdict.unstable
        seen_stable += verdict.stable
        seen_unstable += verdict.unstable
    assert seen_stable > 50 and seen_unstable > 50


def test_jacobian_tends_to_identity():
    map_ = DiscreteMap(case_model("iv"), DEFAULT_SCHEME, 1.0)
    norms = []
    for h in (1e-2, 1e-3, 1e-4):
        j = discrete_jacobian(map_.with_h(h), (5.0, 3.0))
        norms.append(max(abs(j.j11 - 1), abs(j.j12), abs(j.j21), abs(j.j22 - 1)))
    assert norms[1] <= 0.11 * norms[0] + 1e-9
    assert norms[2] <= 0.11 * norms[1] + 1e-9


def test_numeric_jacobian_matches_closed_form_everywhere(case):
    _, model = case
    for h in H_VALUES:
        map_ = DiscreteMap(model, DEFAULT_SCHEME, h)
        for eq in enumerate_equilibria(model):
            num = discrete_jacobian(map_, eq.location)
            ref = closed_form_jacobian(map_, eq)
            scale = max(abs(v) for v in (ref.j11, ref.j12, ref.j21, ref.j22))
            for a, b in zip(
                (num.j11, num.j12, num.j21, num.j22), (ref.j11, ref.j12, ref.j21, ref.j22)
            ):
                assert abs(a - b) <= 1e-5 * max(abs(b), 1e-3 * scale)


def test_closed_form_origin_diagonal_by_hand():
    # case i, h = 10: lambda1 = (1 + 10*2*1.5 - 10*(-1)*1.53)/(1 + 10*1.5 + 10*2*1.53)
    map_ = DiscreteMap(case_model("i"), DEFAULT_SCHEME, 10.0)
    p0 = enumerate_equilibria(case_model("i"))[0]
    j = closed_form_jacobian(map_, p0)
    assert j.j11 == pytest.approx((1 + 30 + 15.3) / (1 + 15 + 30.6), rel=1e-14)
    assert j.j22 == pytest.approx((1 + 10 + 6.22) / (1 + 5 + 12.44), rel=1e-14)


def test_case_i_origin_stable_at_h10():
    model = case_model("i")
    cls = classify_discrete(DiscreteMap(model, DEFAULT_SCHEME, 10.0), enumerate_equilibria(model)[0])
    assert cls.verdict is DiscreteVerdict.LOCALLY_STABLE
    assert max(cls.moduli) < 1


def test_boundary_origin_is_non_hyperbolic():
    model = PreyPredatorModel.rational(1.5, 0.7)
    cls = classify_discrete(DiscreteMap(model, DEFAULT_SCHEME, 1.0), enumerate_equilibria(model)[0])
    assert cls.verdict is DiscreteVerdict.NON_HYPERBOLIC
    assert cls.non_hyperbolic


@pytest.mark.parametrize("h", H_VALUES)
def test_case_vi_prey_only_state_stable(h):
    model = case_model("vi")
    p1 = enumerate_equilibria(model)[1]
    assert p1.kind is Kind.PREDATOR_EXTINCTION
    cls = classify_discrete(DiscreteMap(model, DEFAULT_SCHEME, h), p1)
    assert cls.verdict is DiscreteVerdict.LOCALLY_STABLE
    assert spectral_radius(cls.jacobian) < 1


def test_discrete_verdicts_track_continuous(case):
    _, model = case
    for h in H_VALUES:
        map_ = DiscreteMap(model, DEFAULT_SCHEME, h)
        for eq in enumerate_equilibria(model):
            cls = classify_discrete(map_, eq)
            if eq.continuous_verdict.is_stable:
                assert cls.verdict is DiscreteVerdict.LOCALLY_STABLE
            elif eq.continuous_verdict is Verdict.UNSTABLE:
                assert cls.verdict is DiscreteVerdict.UNSTABLE


def test_not_a_fixed_point():
    bogus = Equilibrium(Kind.COEXISTENCE, PopulationState(3.0, 3.0))
    with pytest.raises(NotAFixedPoint):
        classify_discrete(DiscreteMap(case_model("iv")), bogus)
