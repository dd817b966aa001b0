import pytest

from nsfd_predprey.config import (
    CASES,
    Scenario,
    apply_updates,
    builtin_case,
    load_config,
    parse_config_text,
)
from nsfd_predprey.errors import ConfigError
from nsfd_predprey.scheme import DEFAULT_SCHEME

# The six published parameter sets, typed in independently of the package.
PUBLISHED = {
    "i": (1.53, 0.622), "ii": (1.53, 0.4789), "iii": (1.4925, 0.4789),
    "iv": (1.38, 0.4789), "v": (0.3, 0.501), "vi": (1.38, 0.622),
}


def test_builtin_cases_match_published_sets():
    assert CASES == PUBLISHED
    for key, (m1, m2) in PUBLISHED.items():
        s = apply_updates(Scenario(), builtin_case(key))
        assert (s.m1, s.m2, s.c) == (m1, m2, 0.003)
        assert (s.a_r, s.b_r, s.a_s, s.b_s, s.b_phi) == (15, 10, 5, 10, 30)


def test_unknown_case():
    with pytest.raises(ConfigError):
        builtin_case("vii")


def test_parse_flat_text():
    text = """
    # a comment
    m1 = 1.38   # trailing comment
    m2 = 0.622
    n = 10
    alpha1 = 3
    alpha2 = -2
    methods = nsfd, euler
    denominator = mickens
    """
    values = parse_config_text(text)
    assert values["m1"] == 1.38 and values["n"] == 10
    assert values["methods"] == ("nsfd", "euler")
    s = apply_updates(Scenario(), values)
    assert s.scheme.alpha[:2] == (3.0, -2.0)
    assert s.scheme.beta == DEFAULT_SCHEME.beta
    assert s.denominator == "mickens"


@pytest.mark.parametrize(
    "text", ["m1 1.3", "= 3", "m1 = abc", "n = 1.5", "colour = red", "alpha1 = 5"]
)
def test_parse_errors(text):
    with pytest.raises(ConfigError):
        apply_updates(Scenario(), parse_config_text(text))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.cfg")


@pytest.mark.parametrize(
    "updates",
    [
        {},
        {"m1": 1.0, "m2": 0.5, "h": 0.0, "n": 1},
        {"m1": 1.0, "m2": 0.5, "x0": -1.0, "n": 1},
        {"m1": 1.0, "m2": 0.5, "n": 1, "t_end": 1.0},
        {"m1": 1.0, "m2": 0.5},
        {"m1": 1.0, "m2": 0.5, "n": 1, "methods": ("nsfd", "heun")},
        {"m1": -1.0, "m2": 0.5, "n": 1},
        {"m1": 1.0, "m2": 0.5, "n": 1, "denominator": "mickens", "q": -1.0},
    ],
)
def test_validation_failures(updates):
    with pytest.raises(ConfigError):
        apply_updates(Scenario(), updates).validate(need_run=True)


def test_t_end_resolves_step_count():
    s = apply_updates(Scenario(), {"m1": 1.0, "m2": 0.5, "t_end": 10.0, "h": 0.25})
    assert s.validate(need_run=True).steps == 40


def test_to_text_roundtrip():
    s = apply_updates(Scenario(), builtin_case("iv"))
    s = apply_updates(s, {"n": 7})
    again = apply_updates(Scenario(), parse_config_text(s.to_text()))
    assert again.to_text() == s.to_text()
