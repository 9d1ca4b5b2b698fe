import json
import os
from decimal import ROUND_CEILING, ROUND_FLOOR
from fractions import Fraction

import pytest
from pydantic import ValidationError

from app.core.exceptions import ParameterError
from app.schemas.interval import IntervalValue, format_endpoint
from app.services.comparator_service import iterated_difference
from app.services.interval_service import (
    exp_interval,
    interval_context,
    iv_sign,
    log_interval,
    log_iv,
    rational_iv,
    to_interval_value,
)

LN2_LO = Fraction("0.69314718055994530941")
LN2_HI = Fraction("0.69314718055994530942")


def test_log_interval_encloses_ln2():
    value = log_interval(2, 128)
    assert LN2_LO <= value.lo <= value.hi <= LN2_HI
    assert value.width <= Fraction(1, 2 ** 124)
    assert value.precision_bits == 128


def test_log_interval_relative_width_near_one():
    x = Fraction(10 ** 30 + 1, 10 ** 30)
    value = log_interval(x, 128)
    assert value.lo > 0
    assert value.width <= value.lo / 2 ** 100


def test_log_interval_of_one_is_exact():
    value = log_interval(1, 64)
    assert value.lo == value.hi == 0


@pytest.mark.parametrize("x", [0, -3, Fraction(-1, 2)])
def test_log_interval_rejects_non_positive(x):
    with pytest.raises(ParameterError):
        log_interval(x, 128)


def test_exp_of_log_returns_to_value():
    value = exp_interval(log_interval(Fraction(7, 3), 128))
    assert value.contains(Fraction(7, 3))
    assert value.width < Fraction(1, 10 ** 30)


def test_rational_enclosure_is_tight():
    ctx = interval_context(64)
    third = to_interval_value(rational_iv(ctx, Fraction(1, 3)), 64)
    assert third.lo < Fraction(1, 3) < third.hi
    assert third.width <= Fraction(1, 2 ** 64)
    exact = to_interval_value(rational_iv(ctx, Fraction(3, 4)), 64)
    assert exact.lo == exact.hi == Fraction(3, 4)


def test_iv_sign():
    ctx = interval_context(64)
    assert iv_sign(rational_iv(ctx, Fraction(1, 10 ** 12))) == 1
    assert iv_sign(rational_iv(ctx, -5)) == -1
    assert iv_sign(ctx.mpf((-1, 1))) is None


def test_interval_value_validation():
    with pytest.raises(ValidationError):
        IntervalValue(lo=Fraction(1), hi=Fraction(0), precision_bits=64)
    with pytest.raises(ValidationError):
        IntervalValue(lo=Fraction(0), hi=Fraction(1), precision_bits=0)
    value = IntervalValue(lo=Fraction(-1, 4), hi=Fraction(1, 2), precision_bits=64)
    assert value.sign() is None
    assert value.magnitude() == Fraction(1, 2)
    assert value.midpoint == Fraction(1, 8)


def test_endpoint_formatting_rounds_outward():
    assert format_endpoint(Fraction(1, 3), ROUND_FLOOR) == "3.3333333333333333333E-1"
    assert format_endpoint(Fraction(1, 3), ROUND_CEILING) == "3.3333333333333333334E-1"
    assert format_endpoint(Fraction(-1, 3), ROUND_FLOOR) == "-3.3333333333333333334E-1"
    assert format_endpoint(Fraction(0)) == "0"
    dumped = IntervalValue(lo=Fraction(2, 3), hi=Fraction(2, 3), precision_bits=8).model_dump(mode="json")
    assert dumped["lo"] == "6.6666666666666666666E-1"
    assert dumped["hi"] == "6.6666666666666666667E-1"


class TestIteratedDifference:
    def test_integer_sequences(self):
        squares = [n * n for n in range(1, 7)]
        assert iterated_difference(squares, 1) == [3, 5, 7, 9, 11]
        assert iterated_difference(squares, 2) == [2, 2, 2, 2]
        assert iterated_difference(squares, 3) == [0, 0, 0]

    def test_fractions(self):
        u = [Fraction(1, n) for n in range(1, 5)]
        assert iterated_difference(u, 2) == [Fraction(1, 3), Fraction(1, 12)]

    def test_interval_values(self):
        u = [log_interval(n, 128) for n in range(1, 5)]
        diffs = iterated_difference(u, 1)
        assert all(isinstance(d, IntervalValue) for d in diffs)
        assert LN2_LO <= diffs[0].hi and diffs[0].lo <= LN2_HI
        second = iterated_difference(u, 2)
        assert all(d.hi < 0 for d in second)

    def test_mixed_interval_and_rational(self):
        u = [Fraction(0), log_interval(2, 128)]
        (d,) = iterated_difference(u, 1)
        assert d.lo <= LN2_HI and LN2_LO <= d.hi

    @pytest.mark.parametrize("k, u", [(0, [1, 2]), (2, [1, 2])])
    def test_rejects_bad_order(self, k, u):
        with pytest.raises(ParameterError):
            iterated_difference(u, k)

    def test_linearity(self):
        u = [Fraction(n * n * n, n + 1) for n in range(1, 9)]
        w = [Fraction(3, n) for n in range(1, 9)]
        a, b = Fraction(2, 3), -5
        mixed = [a * x + b * y for x, y in zip(u, w)]
        for k in (1, 2, 3):
            expected = [a * x + b * y for x, y in zip(iterated_difference(u, k), iterated_difference(w, k))]
            assert iterated_difference(mixed, k) == expected

    @pytest.mark.parametrize("k", [2, 3])
    def test_higher_order_is_repeated_first_order(self, k):
        u = [Fraction(7 ** n, n + 2) for n in range(10)]
        repeated = u
        for _ in range(k):
            repeated = iterated_difference(repeated, 1)
        assert iterated_difference(u, k) == repeated

    def test_bernoulli_log_root_is_concave(self, sequences, seq):
        # ln|B_2n| / n for n = 4 .. 22 has negative second differences
        ctx = interval_context(256)
        id = seq("bernoulli-abs")
        u = [
            to_interval_value(log_iv(ctx, sequences.term(id, n).as_fraction()) / n, 256)
            for n in range(4, 23)
        ]
        second = iterated_difference(u, 2)
        assert len(second) == 17
        assert all(d.hi < 0 for d in second)


class TestBuiltinEndpoints:
    def test_computed_endpoints_are_ints(self):
        value = log_interval(3, 128)
        for endpoint in (value.lo, value.hi):
            assert type(endpoint.numerator) is int
            assert type(endpoint.denominator) is int
        json.loads(value.model_dump_json())

    def test_mpmath_runs_on_gmpy(self):
        pytest.importorskip("gmpy2")
        if os.environ.get("MPMATH_NOGMPY"):
            pytest.skip("gmpy backend disabled")
        from mpmath import libmp

        assert libmp.BACKEND == "gmpy"
        value = to_interval_value(rational_iv(interval_context(64), Fraction(1, 3)), 64)
        assert type(value.lo.numerator) is int

    def test_mpz_fractions_are_normalized(self):
        gmpy2 = pytest.importorskip("gmpy2")
        third = Fraction(gmpy2.mpz(1), gmpy2.mpz(3))
        assert format_endpoint(third) == "3.3333333333333333333E-1"
        assert format_endpoint(third, ROUND_CEILING) == "3.3333333333333333334E-1"
        value = IntervalValue(lo=third, hi=Fraction(gmpy2.mpz(1), gmpy2.mpz(2)), precision_bits=64)
        assert type(value.lo.numerator) is int and type(value.hi.denominator) is int
        assert json.loads(value.model_dump_json())["lo"] == "3.3333333333333333333E-1"
