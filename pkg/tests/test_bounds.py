from fractions import Fraction

import pytest

from app.core.exceptions import EnclosureError, ParameterError, UndecidableError
from app.schemas.bounds import BoundClaim, BoundKind
from app.schemas.interval import IntervalValue
from app.services.bounds_service import BoundsService, intersect

KINDS = list(BoundKind)


def test_stirling_bracket(bounds):
    results = bounds.check_grid("stirling", 1, 200)
    assert all(r.holds for r in results)
    first = results[0]
    assert first.claim == BoundClaim.IN_BRACKET
    assert (first.bracket_lo, first.bracket_hi) == (Fraction(1, 13), Fraction(1, 12))


@pytest.mark.parametrize("kind", KINDS)
def test_eta_tails(bounds, kind):
    results = bounds.check_grid("eta", 1, 30, kind)
    assert all(r.holds for r in results)
    assert {"identity", "series"} <= set(results[0].details)


def test_eta_needs_escalation_at_large_n(bounds):
    result = bounds.eta_bound(BoundKind.EULER, 50)
    assert result.holds
    assert result.value.precision_bits > 128


def test_euler_bracket(bounds):
    assert all(r.holds for r in bounds.check_grid("euler-bracket", 1, 50))


def test_difference_bounds_grid(bounds):
    assert all(r.holds for r in bounds.check_grid("delta1", 3, 500))
    assert all(r.holds for r in bounds.check_grid("delta2", 4, 500))


def test_delta1_fails_below_three(bounds):
    result = bounds.check_grid("delta1", 1, 1)[0]
    assert not result.holds
    assert result.value.hi < 0


@pytest.mark.parametrize("kind", [BoundKind.TANGENT, BoundKind.EULER])
def test_reconstructed_kinds(bounds, kind):
    first = bounds.check_grid("delta1", 3, 100, kind)
    second = bounds.check_grid("delta2", 4, 100, kind)
    assert all(r.holds and r.reconstructed for r in first + second)


@pytest.mark.parametrize("kind", KINDS)
def test_delta_consistency(bounds, kind):
    results = bounds.check_grid("delta-consistency", 4, 30, kind)
    assert all(r.holds for r in results)
    details = results[0].details
    assert details["delta1_positive"] == "true"
    assert details["delta2_negative"] == "true"


def test_delta_consistency_at_three_uses_first_difference_only(bounds):
    result = bounds.delta_consistency(BoundKind.BERNOULLI, 3)
    assert result.holds
    assert "delta2" not in result.details
    with pytest.raises(ParameterError):
        bounds.delta_consistency(BoundKind.BERNOULLI, 2)


def test_elementary_inequalities(bounds):
    xs = [Fraction(k, 20) for k in range(11)]
    results = bounds.elementary_inequalities(xs, range(1, 30))
    assert results and all(r.holds for r in results)
    names = {r.name for r in results}
    assert names == {"log1p-le-x", "log1p-bracket", "log1m-le-2x", "log-recip-ge-half"}
    zero = [r for r in results if r.point == "0"]
    assert all(r.value.lo == r.value.hi == 0 for r in zero)


def test_elementary_rejects_points_outside_range(bounds):
    with pytest.raises(ParameterError):
        bounds.elementary_inequalities([Fraction(3, 4)])


def test_unknown_bound(bounds):
    with pytest.raises(ParameterError):
        bounds.check_grid("zeta", 1, 3)
    with pytest.raises(ParameterError):
        bounds.check_grid("stirling", 5, 4)


def test_low_precision_is_undecidable():
    coarse = BoundsService(schedule=[16])
    with pytest.raises(UndecidableError):
        coarse.eta_bound(BoundKind.BERNOULLI, 30)


def test_intersect():
    a = IntervalValue(lo=Fraction(0), hi=Fraction(2), precision_bits=64)
    b = IntervalValue(lo=Fraction(1), hi=Fraction(3), precision_bits=32)
    both = intersect(a, b)
    assert (both.lo, both.hi, both.precision_bits) == (1, 2, 32)
    with pytest.raises(EnclosureError):
        intersect(a, IntervalValue(lo=Fraction(5), hi=Fraction(6), precision_bits=64))


@pytest.mark.slow
def test_full_difference_grid(bounds):
    assert all(r.holds for r in bounds.check_grid("delta1", 3, 10_000))
    assert all(r.holds for r in bounds.check_grid("delta2", 4, 10_000))
