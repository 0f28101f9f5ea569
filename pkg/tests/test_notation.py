import numpy as np
import pytest
from conftest import PRIMES, random_formal, random_group
from hypothesis import given
from hypothesis import strategies as st

from nottingham.errors import PrecisionError, SeriesSyntaxError
from nottingham.notation import parse_series, print_series, series_from_json, series_to_json
from nottingham.series import FormalSeries, GroupSeries


def test_parse_examples():
    assert parse_series("t", 3, 10) == GroupSeries.identity(3, 10)
    s = parse_series("t + 2*t^4 + t^7", 3, 10)
    assert dict(s.terms()) == {1: 1, 4: 2, 7: 1}
    assert print_series(parse_series("t + 3*t^4", 3, 10)) == "t"


def test_print_examples():
    assert print_series(GroupSeries.identity(3, 20)) == "t"
    assert print_series(GroupSeries.from_terms(3, 20, {16: 1})) == "t + t^16"
    assert print_series(FormalSeries.from_terms(3, 20, {2: 2})) == "2*t^2"


def test_syntax_error_reports_position():
    with pytest.raises(SeriesSyntaxError) as err:
        parse_series("t + + t^4", 3, 10)
    assert err.value.position == 2


def test_exponent_beyond_precision():
    with pytest.raises(PrecisionError):
        parse_series("t + t^11", 3, 10)
    assert parse_series("t + t^11", 3, 10, truncate=True).is_identity()


@given(st.integers(0, 2**32 - 1), st.sampled_from(PRIMES), st.integers(2, 128))
def test_text_and_json_round_trip(seed, p, n):
    rng = np.random.default_rng(seed)
    for s in (random_group(p, n, rng, density=0.4), random_formal(p, n, rng)):
        assert parse_series(print_series(s), p, n) == s
        assert series_from_json(series_to_json(s)) == s


def test_json_rejects_unsorted_pairs():
    with pytest.raises(ValueError):
        series_from_json({"p": 3, "precision": 10, "kind": "group", "coefficients": [[4, 1], [2, 1]]})
