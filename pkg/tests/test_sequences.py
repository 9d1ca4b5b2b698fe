from fractions import Fraction
from math import comb

import pytest
from pydantic import ValidationError

from app.core.exceptions import ParameterError
from app.schemas.sequence import ExactValue, SequenceFamily, SequenceId, ValueKind
from app.services.sequence_service import BinomialTable, SequenceService, ZigzagTable, make_sequence_id


def values(sequences, id, start, count):
    return [v.as_fraction() for v in sequences.window(id, start, count).values]


@pytest.mark.parametrize(
    "family, start, expected",
    [
        ("motzkin", 0, [1, 1, 2, 4, 9, 21, 51, 127, 323, 835, 2188]),
        ("schroder", 0, [1, 2, 6, 22, 90, 394, 1806]),
        ("trinomial", 0, [1, 1, 3, 7, 19, 51, 141]),
        ("tangent-abs", 1, [1, 2, 16, 272, 7936]),
        ("euler-abs", 0, [1, 1, 5, 61, 1385, 50521]),
    ],
)
def test_integer_families(sequences, seq, family, start, expected):
    assert values(sequences, seq(family), start, len(expected)) == expected


def test_bernoulli_abs_is_rational(sequences, seq):
    window = sequences.window(seq("bernoulli-abs"), 1, 5)
    assert [v.as_fraction() for v in window.values] == [
        Fraction(1, 6), Fraction(1, 30), Fraction(1, 42), Fraction(1, 30), Fraction(5, 66),
    ]
    assert all(v.kind == ValueKind.RATIONAL for v in window.values)
    assert sequences.bernoulli_abs(6).render() == "691/2730"


@pytest.mark.parametrize(
    "r, expected",
    [
        ((1,), [1, 2, 4, 8, 16, 32]),
        ((2,), [1, 2, 6, 20, 70, 252]),
        ((3,), [1, 2, 10, 56, 346, 2252]),
        ((1, 1), [1, 3, 13, 63, 321, 1683]),
        ((2, 2), [1, 5, 73, 1445, 33001, 819005]),
        ((1, 0), [1, 2, 4, 8, 16, 32]),
    ],
)
def test_s_family_specialisations(sequences, seq, r, expected):
    assert values(sequences, seq("sfam", *r), 0, len(expected)) == expected


def test_window_indices(sequences, seq):
    window = sequences.window(seq("motzkin"), 3, 4)
    assert window.start == 3
    assert window.stop == 7
    assert window.term(6).numerator == 51
    with pytest.raises(IndexError):
        window.term(7)


def test_window_rejects_indices_before_first(sequences, seq):
    with pytest.raises(ParameterError):
        sequences.window(seq("bernoulli-abs"), 0, 3)
    with pytest.raises(ParameterError):
        sequences.window(seq("motzkin"), 0, 0)


@pytest.mark.parametrize(
    "family, r",
    [("sfam", None), ("sfam", "0,1"), ("sfam", "2,-1"), ("motzkin", "2"), ("catalan", None), ("sfam", "a,b")],
)
def test_make_sequence_id_rejects_bad_input(family, r):
    with pytest.raises(ParameterError):
        make_sequence_id(family, r)


def test_sequence_id_labels():
    id = make_sequence_id("sfam", "r=2,2")
    assert id.r == (2, 2)
    assert id.params == "r=2,2"
    assert id.label == "sfam[r=2,2]"
    assert make_sequence_id("motzkin").label == "motzkin"
    assert SequenceFamily.TANGENT_ABS_ODD.first_index == 1
    assert SequenceFamily.EULER_ABS_EVEN.first_index == 0


def test_exact_value_lowest_terms():
    with pytest.raises(ValidationError):
        ExactValue(kind=ValueKind.RATIONAL, numerator=2, denominator=4)
    with pytest.raises(ValidationError):
        ExactValue(kind=ValueKind.INTEGER, numerator=1, denominator=3)
    assert ExactValue.rational(Fraction(2, 4)).render() == "1/2"
    assert ExactValue.integer(0).is_positive() is False


def test_binomial_table_matches_comb():
    table = BinomialTable()
    for n in range(0, 40, 3):
        for k in range(-1, n + 2):
            assert table(n, k) == (comb(n, k) if 0 <= k <= n else 0)


def test_zigzag_numbers():
    table = ZigzagTable()
    assert [table.number(k) for k in range(11)] == [1, 1, 1, 2, 5, 16, 61, 272, 1385, 7936, 50521]


def test_term_cache_returns_same_value(sequences, seq):
    id = seq("sfam", 3)
    assert sequences.term(id, 30) is sequences.term(id, 30)


def test_large_index_is_exact(sequences, seq):
    # M_200 from the defining sum must satisfy the three-term recurrence
    m = [sequences.term(seq("motzkin"), n).numerator for n in (198, 199, 200)]
    n = 200
    assert (n + 2) * m[2] == (2 * n + 1) * m[1] + 3 * (n - 1) * m[0]


def test_binomial_table_keeps_bounded_rows():
    table = BinomialTable(max_rows=4)
    for n in range(30):
        assert table(n, n // 2) == comb(n, n // 2)
        assert len(table) <= 4
    assert table(3, 1) == 3
    assert len(table) == 4


def test_term_memo_is_bounded(seq):
    service = SequenceService(capacity=8)
    id = seq("motzkin")
    for n in range(40):
        service.term(id, n)
        assert service.cached_terms <= 8
    assert service.term(id, 0).numerator == 1


def test_window_grows_term_memo(seq):
    service = SequenceService(capacity=8)
    window = service.window(seq("trinomial"), 0, 20)
    assert service.capacity == 22
    assert service.cached_terms == 20
    assert window.values[6].numerator == 141


@pytest.mark.slow
@pytest.mark.parametrize("family", ["motzkin", "schroder", "trinomial"])
def test_path_families_stay_integral(sequences, seq, family):
    # generators raise IntegralityError on a non-integer sum
    values = sequences.window(seq(family), 0, 501).values
    assert all(v.kind == ValueKind.INTEGER for v in values)
    terms = [v.numerator for v in values]
    if family == "motzkin":
        for n in range(2, 501):
            assert (n + 2) * terms[n] == (2 * n + 1) * terms[n - 1] + 3 * (n - 1) * terms[n - 2]
