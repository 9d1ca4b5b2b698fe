"""Generators against independently computed reference values."""
from fractions import Fraction

import pytest

from app.core.exceptions import ParameterError
from app.services.oracles import (
    bernoulli_numbers,
    euler_recurrence,
    motzkin_paths,
    oracle_window,
    schroder_paths,
    secant_series,
    tangent_series,
    trinomial_expansion,
)

MAX_N = 60


@pytest.mark.parametrize(
    "family, r",
    [
        ("bernoulli-abs", ()),
        ("tangent-abs", ()),
        ("euler-abs", ()),
        ("motzkin", ()),
        ("schroder", ()),
        ("trinomial", ()),
        ("sfam", (2,)),
        ("sfam", (3,)),
        ("sfam", (1, 1)),
        ("sfam", (2, 2)),
        ("sfam", (1, 0, 2)),
    ],
)
def test_generator_matches_oracle(sequences, seq, family, r):
    id = seq(family, *r)
    start = id.family.first_index
    count = MAX_N - start + 1
    generated = sequences.window(id, start, count).values
    expected = oracle_window(id, start, count)
    assert [v.as_fraction() for v in generated] == [v.as_fraction() for v in expected]


def test_bernoulli_recurrence_signs():
    numbers = bernoulli_numbers(9)
    assert numbers[:3] == [Fraction(1), Fraction(-1, 2), Fraction(1, 6)]
    assert numbers[3] == numbers[5] == numbers[7] == 0
    assert numbers[8] == Fraction(-1, 30)


def test_two_secant_oracles_agree():
    assert secant_series(25) == euler_recurrence(25)


def test_small_reference_values():
    assert tangent_series(4) == [1, 2, 16, 272]
    assert [motzkin_paths(n) for n in range(6)] == [1, 1, 2, 4, 9, 21]
    assert [schroder_paths(n) for n in range(5)] == [1, 2, 6, 22, 90]
    assert [trinomial_expansion(n) for n in range(5)] == [1, 1, 3, 7, 19]


def test_oracle_window_rejects_bad_start(seq):
    with pytest.raises(ParameterError):
        oracle_window(seq("tangent-abs"), 0, 3)
