"""Asymptotic constants for the S family and the explicit expansions.

The implicit equation for lambda is solved on the logarithmic form

    g(lam) = sum_j r_j * (j*ln(1 + j*lam) - ln(lam) - (j-1)*ln(1 + (j-1)*lam)) = 0

which tends to +inf at 0+ and -inf at 1- whenever r_0 > 0.
"""
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import ParameterError, SolverError, UndecidableError
from app.core.logging import certification, get_logger, log_function_call
from app.schemas.asymptotics import AsymptoticModel, ExpansionEvaluation, ExpansionSpec, QuadraticSurd
from app.schemas.interval import IntervalValue
from app.schemas.sequence import SequenceFamily, SequenceId
from app.services.interval_service import (
    interval_context,
    interval_iv,
    iv_sign,
    rational_iv,
    surd_iv,
    to_interval_value,
)
from app.services.sequence_service import get_sequence_service

logger = get_logger(__name__)

_S = QuadraticSurd.of

EXPANSIONS: Dict[SequenceFamily, ExpansionSpec] = {
    # Expansion of M_{N-1}: evaluated at N = n + 1.
    SequenceFamily.MOTZKIN: ExpansionSpec(
        family=SequenceFamily.MOTZKIN,
        growth_base=_S(3),
        prefactor_radicand=_S(3),
        prefactor_power=3,
        correction_coeffs=[
            _S(Fraction(-15, 16)),
            _S(Fraction(505, 512)),
            _S(Fraction(-8085, 8192)),
            _S(Fraction(505659, 524288)),
        ],
        index_shift=1,
    ),
    SequenceFamily.SCHROEDER: ExpansionSpec(
        family=SequenceFamily.SCHROEDER,
        growth_base=_S(3, 2),
        prefactor_radicand=_S(4, 3),
        prefactor_power=3,
        correction_coeffs=[
            _S(Fraction(-24, 32), Fraction(-9, 32)),
            _S(Fraction(665, 1024), Fraction(360, 1024)),
        ],
    ),
    SequenceFamily.TRINOMIAL: ExpansionSpec(
        family=SequenceFamily.TRINOMIAL,
        growth_base=_S(3),
        prefactor_radicand=_S(3),
        prefactor_power=1,
        correction_coeffs=[_S(Fraction(-3, 16))],
    ),
}


def get_expansion(family: SequenceFamily) -> ExpansionSpec:
    try:
        return EXPANSIONS[family]
    except KeyError:
        raise ParameterError(f"no explicit expansion for {family.value}") from None


def _g(ctx, r: Sequence[int], lam):
    """Logarithm of the implicit product at ``lam`` (an interval)."""
    total = ctx.mpf(0)
    ln_lam = ctx.ln(lam)
    for j, rj in enumerate(r):
        if not rj:
            continue
        term = -ln_lam
        if j:
            term = term + j * ctx.ln(1 + j * lam)
        if j != 1:
            term = term - (j - 1) * ctx.ln(1 + (j - 1) * lam)
        total = total + rj * term
    return total


def _mu(ctx, r: Sequence[int], lam):
    value = ctx.mpf(1)
    for j, rj in enumerate(r):
        if rj:
            value = value * ((1 + j * lam) / (1 + (j - 1) * lam)) ** rj
    return value


def _nu(ctx, r: Sequence[int], lam):
    value = ctx.mpf(0)
    for j, rj in enumerate(r):
        if rj:
            value = value + rj / ((1 + (j - 1) * lam) * (1 + j * lam))
    return value


class AsymptoticsService:
    """Solver for (lambda, mu, nu), leading terms and the explicit expansions."""

    def __init__(self, schedule: Optional[Sequence[int]] = None):
        self.schedule = list(schedule or settings.precision_schedule)
        self.guard_bits = settings.GUARD_BITS
        self.mesh = settings.LAMBDA_MESH
        self.sequences = get_sequence_service()

    # ---- lambda solver -------------------------------------------------

    def _sign_at(self, r: Sequence[int], point: Fraction, bits: int) -> Optional[int]:
        ctx = interval_context(bits)
        return iv_sign(_g(ctx, r, rational_iv(ctx, point)))

    def _brackets(self, r: Sequence[int], bits: int) -> List[Tuple[Fraction, Fraction, int]]:
        """Sign changes of g on the mesh; the ends carry the known limits (+ at 0, - at 1)."""
        points: List[Tuple[Fraction, int]] = [(Fraction(0), 1)]
        for i in range(1, self.mesh):
            point = Fraction(i, self.mesh)
            sign = self._sign_at(r, point, bits)
            if sign is None:
                continue
            points.append((point, sign))
        points.append((Fraction(1), -1))
        return [
            (a, b, sa)
            for (a, sa), (b, sb) in zip(points, points[1:])
            if sa != sb
        ]

    @log_function_call()
    def solve_lambda(self, r: Sequence[int], tolerance: Optional[float] = None) -> AsymptoticModel:
        r = tuple(r)
        try:
            SequenceId(family=SequenceFamily.S_FAMILY, r=r)
        except ValidationError as e:
            raise ParameterError(f"invalid exponent vector {r}: {e}") from e
        tol = Fraction(tolerance if tolerance is not None else settings.LAMBDA_TOLERANCE)
        if tol <= 0:
            raise ParameterError("tolerance must be positive")

        brackets = self._brackets(r, self.schedule[0])
        if not brackets:
            raise SolverError("no sign change on the search mesh", mesh=self.mesh)
        if len(brackets) > 1:
            raise SolverError(
                f"{len(brackets)} sign changes on the search mesh; lambda is not unique",
                brackets=[(a, b) for a, b, _ in brackets],
                mesh=self.mesh,
            )
        a, b, sign_a = brackets[0]

        level = 0
        iterations = 0
        while True:
            bits = self.schedule[level]
            ctx = interval_context(bits)
            if 0 < a and b < 1:
                lam = ctx.mpf((rational_iv(ctx, a), rational_iv(ctx, b)))
                enclosure = to_interval_value(ctx.exp(_g(ctx, r, lam)), bits)
                if enclosure.contains(1) and enclosure.width <= tol and b - a <= tol / 64:
                    break

            width = b - a
            m = (a + b) / 2
            probes = [m, m - width / 1024, m + width / 1024]
            decided = None
            for probe in probes:
                sign = self._sign_at(r, probe, bits)
                if sign is not None:
                    decided = (probe, sign)
                    break
            if decided is None or width < Fraction(1, 2 ** (bits - 8)):
                if level + 1 >= len(self.schedule):
                    raise SolverError(
                        "tolerance unreachable at maximum precision",
                        brackets=[(a, b)],
                        mesh=self.mesh,
                    )
                level += 1
                logger.debug("lambda_precision_escalated", r=str(r), precision_bits=self.schedule[level])
                continue
            probe, sign = decided
            if sign == sign_a:
                a = probe
            else:
                b = probe
            iterations += 1

        residual = max(1 - enclosure.lo, enclosure.hi - 1)
        model = self._model(r, a, b, bits, residual, tol, iterations)
        certification.log_solver(
            r=",".join(str(x) for x in r),
            iterations=iterations,
            precision_bits=bits,
            residual=str(float(residual)),
        )
        return model

    def _model(self, r, a: Fraction, b: Fraction, bits: int, residual, tol, iterations) -> AsymptoticModel:
        ctx = interval_context(bits + self.guard_bits)
        lam = ctx.mpf((rational_iv(ctx, a), rational_iv(ctx, b)))
        return AsymptoticModel(
            r=r,
            lam=IntervalValue(lo=a, hi=b, precision_bits=bits),
            mu=to_interval_value(_mu(ctx, r, lam), bits),
            nu=to_interval_value(_nu(ctx, r, lam), bits),
            residual=residual,
            tolerance=tol,
            iterations=iterations,
        )

    # ---- S family asymptotics -----------------------------------------

    def _leading_iv(self, ctx, model: AsymptoticModel, n: int):
        mu = interval_iv(ctx, model.mu)
        nu = interval_iv(ctx, model.nu)
        lam = interval_iv(ctx, model.lam)
        growth = ctx.exp((n + ctx.mpf(1) / 2) * ctx.ln(mu))
        scale = nu * (2 * ctx.pi * lam * n) ** (model.weight - 1)
        return growth / ctx.sqrt(scale)

    def leading_term(self, model: AsymptoticModel, n: int) -> IntervalValue:
        """mu^(n+1/2) / sqrt(nu * (2*pi*lam*n)^(r-1))."""
        if n < 1:
            raise ParameterError(f"leading term needs n >= 1, got {n}")
        bits = model.precision_bits
        ctx = interval_context(bits + self.guard_bits)
        return to_interval_value(self._leading_iv(ctx, model, n), bits)

    def _check_model(self, id: SequenceId, model: AsymptoticModel):
        if id.family != SequenceFamily.S_FAMILY or tuple(id.r) != tuple(model.r):
            raise ParameterError(f"model for r={model.r} does not describe {id.label}")

    def correction_factor(self, id: SequenceId, model: AsymptoticModel, n: int) -> IntervalValue:
        """f(n) = exact / leading term."""
        self._check_model(id, model)
        if n < 1:
            raise ParameterError(f"correction factor needs n >= 1, got {n}")
        bits = model.precision_bits
        ctx = interval_context(bits + self.guard_bits)
        exact = rational_iv(ctx, self.sequences.term(id, n))
        return to_interval_value(exact / self._leading_iv(ctx, model, n), bits)

    def estimate_r(self, id: SequenceId, model: AsymptoticModel, n: int) -> IntervalValue:
        """n * (f(n) - 1), the empirical first-order correction."""
        f = self.correction_factor(id, model, n)
        return IntervalValue(lo=n * (f.lo - 1), hi=n * (f.hi - 1), precision_bits=f.precision_bits)

    def growth_rate(self, model: AsymptoticModel, n: int) -> IntervalValue:
        """(S(n+1) / S(n)) / mu."""
        id = SequenceId(family=SequenceFamily.S_FAMILY, r=model.r)
        bits = model.precision_bits
        ctx = interval_context(bits + self.guard_bits)
        ratio = self.sequences.term(id, n + 1).as_fraction() / self.sequences.term(id, n).as_fraction()
        return to_interval_value(rational_iv(ctx, ratio) / interval_iv(ctx, model.mu), bits)

    # ---- explicit expansions ------------------------------------------

    def _expansion_iv(self, ctx, spec: ExpansionSpec, n: int, terms: int):
        big_n = n + spec.index_shift
        radicand = surd_iv(ctx, spec.prefactor_radicand)
        prefactor = ctx.sqrt(radicand / (4 * ctx.pi * ctx.mpf(big_n) ** spec.prefactor_power))
        series = ctx.mpf(1)
        for k, coeff in enumerate(spec.correction_coeffs[:terms], start=1):
            series = series + surd_iv(ctx, coeff) / ctx.mpf(big_n) ** k
        return prefactor * surd_iv(ctx, spec.growth_base) ** big_n * series

    def evaluate_expansion(
        self, spec: ExpansionSpec, n: int, terms: int, precision_bits: Optional[int] = None
    ) -> IntervalValue:
        if n < 1:
            raise ParameterError(f"expansions need n >= 1, got {n}")
        if not 0 <= terms <= spec.available_terms:
            raise ParameterError(
                f"{spec.family.value} expansion has {spec.available_terms} correction terms, got {terms}"
            )
        bits = precision_bits or self.schedule[0]
        ctx = interval_context(bits + self.guard_bits)
        return to_interval_value(self._expansion_iv(ctx, spec, n, terms), bits)

    def relative_error(self, family: SequenceFamily, n: int, terms: int) -> ExpansionEvaluation:
        """|exact / expansion - 1| as an enclosure."""
        spec = get_expansion(family)
        approximation = self.evaluate_expansion(spec, n, terms)
        bits = approximation.precision_bits
        ctx = interval_context(bits + self.guard_bits)
        exact = self.sequences.term(SequenceId(family=family), n)
        error = abs(rational_iv(ctx, exact) / self._expansion_iv(ctx, spec, n, terms) - 1)
        return ExpansionEvaluation(
            label=family.value,
            n=n,
            terms=terms,
            exact=exact.render(),
            approximation=approximation,
            relative_error=to_interval_value(error, bits),
        )

    def remainder_scaling(self, family: SequenceFamily, n: int, terms: int) -> IntervalValue:
        """relative_error(2n) / relative_error(n); about 2^-(terms+1) when the next term is O(1/n^(terms+1))."""
        small = self.relative_error(family, n, terms).relative_error
        large = self.relative_error(family, 2 * n, terms).relative_error
        if small.lo <= 0:
            raise UndecidableError(f"relative error at n={n} is not separated from zero")
        return IntervalValue(lo=large.lo / small.hi, hi=large.hi / small.lo, precision_bits=small.precision_bits)

    def s_family_evaluation(self, model: AsymptoticModel, n: int) -> ExpansionEvaluation:
        """Exact S^(r)(n) against the leading term."""
        id = SequenceId(family=SequenceFamily.S_FAMILY, r=model.r)
        lead = self.leading_term(model, n)
        f = self.correction_factor(id, model, n)
        ctx = interval_context(f.precision_bits)
        error = abs(interval_iv(ctx, f) - 1)
        return ExpansionEvaluation(
            label=id.label,
            n=n,
            terms=0,
            exact=self.sequences.term(id, n).render(),
            approximation=lead,
            relative_error=to_interval_value(error, f.precision_bits),
            model=model,
        )


# Singleton instance
_asymptotics_service = None


def get_asymptotics_service() -> AsymptoticsService:
    """Get asymptotics service singleton."""
    global _asymptotics_service
    if _asymptotics_service is None:
        _asymptotics_service = AsymptoticsService()
    return _asymptotics_service
