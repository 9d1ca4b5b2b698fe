from fractions import Fraction
from math import comb

import pytest

from app.core.exceptions import ParameterError
from app.schemas.sequence import SequenceFamily, SequenceId
from app.services.asymptotics_service import EXPANSIONS, get_expansion

INV_SQRT2 = Fraction("0.70710678118654752440")
DELANNOY_MU = Fraction("5.8284271247461900976")
APERY_MU = Fraction("33.970562748477140585")
TOL = Fraction(1, 10 ** 10)


def near(value, target, tol=TOL):
    return value.lo - tol <= target <= value.hi + tol and value.width <= tol


@pytest.fixture(scope="module")
def models():
    from app.services.asymptotics_service import AsymptoticsService

    service = AsymptoticsService()
    return {r: service.solve_lambda(r) for r in [(1,), (2,), (3,), (4,), (1, 1), (2, 2)]}


class TestSolver:
    @pytest.mark.parametrize("r, mu", [((1,), 2), ((2,), 4), ((3,), 8), ((4,), 16)])
    def test_single_exponent_closed_forms(self, models, r, mu):
        model = models[r]
        assert model.lam.contains(Fraction(1, 2))
        assert near(model.mu, Fraction(mu))

    def test_delannoy(self, models):
        model = models[(1, 1)]
        assert near(model.lam, INV_SQRT2)
        assert near(model.mu, DELANNOY_MU)

    def test_apery(self, models):
        assert near(models[(2, 2)].mu, APERY_MU)

    def test_residual_within_tolerance(self, models):
        for model in models.values():
            assert model.residual <= Fraction(1, 10 ** 12)
            assert model.lam.width <= Fraction(1, 10 ** 12)
            assert 0 < model.lam.lo and model.lam.hi < 1

    @pytest.mark.parametrize("r", [(0, 1), (), (1, -1)])
    def test_invalid_vectors(self, asymptotics, r):
        with pytest.raises(ParameterError):
            asymptotics.solve_lambda(r)

    def test_non_positive_tolerance(self, asymptotics):
        with pytest.raises(ParameterError):
            asymptotics.solve_lambda((2,), tolerance=0)

    def test_serialises_lambda_alias(self, models):
        dumped = models[(2,)].model_dump(mode="json", by_alias=True)
        assert set(dumped) >= {"lambda", "mu", "nu", "residual"}
        assert dumped["lambda"]["lo"].startswith("4.99999")


class TestLeadingTerm:
    def test_powers_of_two_are_exact(self, asymptotics, models):
        assert asymptotics.leading_term(models[(1,)], 7).contains(128)

    def test_central_binomial_correction(self, asymptotics, models):
        evaluation = asymptotics.s_family_evaluation(models[(2,)], 100)
        assert Fraction(12, 10 ** 4) < evaluation.relative_error.lo
        assert evaluation.relative_error.hi < Fraction(13, 10 ** 4)
        assert evaluation.exact == str(comb(200, 100))

    def test_estimate_r_tends_to_minus_one_eighth(self, asymptotics, models):
        id = SequenceId(family=SequenceFamily.S_FAMILY, r=(2,))
        value = asymptotics.estimate_r(id, models[(2,)], 1000)
        assert Fraction(-13, 100) < value.lo and value.hi < Fraction(-12, 100)

    def test_growth_rate(self, asymptotics, models):
        assert asymptotics.growth_rate(models[(2,)], 200).contains(Fraction(401, 402))

    def test_model_must_match_sequence(self, asymptotics, models):
        with pytest.raises(ParameterError):
            asymptotics.correction_factor(SequenceId(family=SequenceFamily.S_FAMILY, r=(3,)), models[(2,)], 10)


class TestExpansions:
    def test_motzkin_four_terms(self, asymptotics):
        evaluation = asymptotics.relative_error(SequenceFamily.MOTZKIN, 100, 4)
        assert evaluation.relative_error.hi < Fraction(1, 10 ** 8)
        assert abs(Fraction(evaluation.exact) / evaluation.approximation.midpoint - 1) < Fraction(1, 10 ** 8)

    def test_motzkin_leading_term_small_index(self, asymptotics):
        approx = asymptotics.evaluate_expansion(EXPANSIONS[SequenceFamily.MOTZKIN], 10, 4)
        assert abs(approx.midpoint - 2188) < 5

    @pytest.mark.parametrize("family", [SequenceFamily.MOTZKIN, SequenceFamily.SCHROEDER, SequenceFamily.TRINOMIAL])
    def test_more_terms_reduce_error(self, asymptotics, family):
        spec = get_expansion(family)
        errors = [asymptotics.relative_error(family, 200, k).relative_error.hi for k in range(spec.available_terms + 1)]
        assert errors == sorted(errors, reverse=True)

    @pytest.mark.parametrize("family", [SequenceFamily.MOTZKIN, SequenceFamily.SCHROEDER, SequenceFamily.TRINOMIAL])
    @pytest.mark.parametrize("n", [100, 200])
    def test_remainder_scaling(self, asymptotics, family, n):
        terms = get_expansion(family).available_terms
        target = Fraction(1, 2 ** (terms + 1))
        ratio = asymptotics.remainder_scaling(family, n, terms)
        assert target / 2 <= ratio.lo and ratio.hi <= 2 * target

    def test_term_count_is_checked(self, asymptotics):
        with pytest.raises(ParameterError):
            asymptotics.evaluate_expansion(get_expansion(SequenceFamily.SCHROEDER), 50, 3)
        with pytest.raises(ParameterError):
            asymptotics.evaluate_expansion(get_expansion(SequenceFamily.TRINOMIAL), 0, 1)

    def test_no_expansion_for_number_families(self):
        with pytest.raises(ParameterError):
            get_expansion(SequenceFamily.EULER_ABS_EVEN)
