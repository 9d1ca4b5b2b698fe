"""Certified re-verification of the explicit inequalities behind the monotonicity proofs."""
import threading
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.core.config import settings
from app.core.exceptions import EnclosureError, ParameterError, UndecidableError
from app.core.logging import certification, get_logger, log_function_call
from app.schemas.bounds import BoundCheckResult, BoundClaim, BoundKind, decided, satisfies
from app.schemas.interval import IntervalValue
from app.schemas.sequence import SequenceFamily, SequenceId
from app.services.interval_service import (
    interval_context,
    iv_sign,
    log_iv,
    rational_iv,
    to_interval_value,
)
from app.services.sequence_service import get_sequence_service

logger = get_logger(__name__)

DIRECT_SERIES_TERMS = 32

# 4^-n tail coefficients of the first and second difference bounds
DELTA_TAIL_COEFFS = {
    BoundKind.BERNOULLI: (6, 12),
    BoundKind.TANGENT: (6, 12),
    BoundKind.EULER: (12, 24),
}

KIND_FAMILIES = {
    BoundKind.BERNOULLI: SequenceFamily.BERNOULLI_ABS_2N,
    BoundKind.TANGENT: SequenceFamily.TANGENT_ABS_ODD,
    BoundKind.EULER: SequenceFamily.EULER_ABS_EVEN,
}

Evaluation = Tuple[IntervalValue, Optional[Dict[str, str]]]


def intersect(first: IntervalValue, second: IntervalValue) -> IntervalValue:
    lo, hi = max(first.lo, second.lo), min(first.hi, second.hi)
    if lo > hi:
        raise EnclosureError(f"independent enclosures disagree: [{first.lo}, {first.hi}] vs [{second.lo}, {second.hi}]")
    return IntervalValue(lo=lo, hi=hi, precision_bits=min(first.precision_bits, second.precision_bits))


def _delta_log_constant(ctx, kind: BoundKind):
    if kind == BoundKind.BERNOULLI:
        return ctx.ln(16 * ctx.pi)
    if kind == BoundKind.TANGENT:
        return ctx.ln(4 * ctx.pi)
    return ctx.ln(64 / ctx.pi)


class _LnFactorial:
    """Cumulative ln k! enclosures summed from certified ln k, one table per precision."""

    def __init__(self):
        self._tables: Dict[int, list] = {}
        self._lock = threading.Lock()

    def __call__(self, ctx, n: int):
        bits = ctx.prec
        table = self._tables.get(bits)
        if table is None or len(table) <= n:
            with self._lock:
                table = self._tables.setdefault(bits, [ctx.mpf(0)])
                while len(table) <= n:
                    k = len(table)
                    table.append(table[-1] + ctx.ln(k))
        return table[n]


class BoundsService:
    """Interval checks with automatic precision escalation; undecided claims raise."""

    def __init__(self, schedule: Optional[Sequence[int]] = None):
        self.schedule = list(schedule or settings.precision_schedule)
        self.guard_bits = settings.GUARD_BITS
        self.sequences = get_sequence_service()
        self._ln_factorial = _LnFactorial()

    def _schedule_from(self, precision_bits: Optional[int]) -> List[int]:
        if precision_bits is None:
            return self.schedule
        return [bits for bits in self.schedule if bits >= precision_bits] or [precision_bits]

    def _certify(
        self,
        name: str,
        claim: BoundClaim,
        evaluate: Callable[[int], Evaluation],
        index: Optional[int] = None,
        point: Optional[str] = None,
        bracket: Tuple[Optional[Fraction], Optional[Fraction]] = (None, None),
        precision_bits: Optional[int] = None,
        reconstructed: bool = False,
    ) -> BoundCheckResult:
        lo, hi = bracket
        for bits in self._schedule_from(precision_bits):
            value, details = evaluate(bits)
            if decided(value, claim, lo, hi):
                return BoundCheckResult(
                    name=name,
                    index=index,
                    point=point,
                    value=value,
                    claim=claim,
                    holds=satisfies(value, claim, lo, hi),
                    bracket_lo=lo,
                    bracket_hi=hi,
                    reconstructed=reconstructed,
                    details=details,
                )
            logger.debug("bound_escalated", name=name, index=index, point=point, precision_bits=bits)
        raise UndecidableError(
            f"{name} undecided at {self.schedule[-1]} bits",
            {"name": name, "index": index, "point": point},
        )

    def _ctx(self, bits: int):
        return interval_context(bits + self.guard_bits)

    @staticmethod
    def _require_n(n: int, minimum: int = 1):
        if n < minimum:
            raise ParameterError(f"n must be >= {minimum}, got {n}")

    # ---- Stirling --------------------------------------------------------

    def stirling_theta(self, n: int, precision_bits: Optional[int] = None) -> BoundCheckResult:
        """theta_n = ln n! - n ln(n/e) - ln sqrt(2 pi n) inside (1/(12n+1), 1/(12n))."""
        self._require_n(n)

        def evaluate(bits: int) -> Evaluation:
            ctx = self._ctx(bits)
            ln_n = ctx.ln(n)
            theta = self._ln_factorial(ctx, n) - n * ln_n + n - ctx.ln(2 * ctx.pi * n) / 2
            return to_interval_value(theta, bits), None

        return self._certify(
            "stirling",
            BoundClaim.IN_BRACKET,
            evaluate,
            index=n,
            bracket=(Fraction(1, 12 * n + 1), Fraction(1, 12 * n)),
            precision_bits=precision_bits,
        )

    # ---- zeta / beta tails ---------------------------------------------

    def _zeta_identity(self, ctx, n: int):
        """zeta(2n) = |B_2n| (2 pi)^(2n) / (2 (2n)!)."""
        b = self.sequences.bernoulli_abs(n).as_fraction()
        return rational_iv(ctx, b / (2 * factorial(2 * n))) * (2 * ctx.pi) ** (2 * n)

    @staticmethod
    def _zeta_series(ctx, n: int):
        """Partial sum to K plus the tail bound K^(1-2n) / (2n-1)."""
        s = 2 * n
        partial = ctx.mpf(0)
        for k in range(1, DIRECT_SERIES_TERMS + 1):
            partial = partial + rational_iv(ctx, Fraction(1, k ** s))
        tail = rational_iv(ctx, Fraction(1, (s - 1) * DIRECT_SERIES_TERMS ** (s - 1)))
        return ctx.mpf((partial, partial + tail))

    def _beta_identity(self, ctx, n: int):
        """|E_2n| pi^(2n+1) / (4^(n+1) (2n)!), the Dirichlet beta value beta(2n+1)."""
        e = self.sequences.euler_abs(n).as_fraction()
        return rational_iv(ctx, e / (4 ** (n + 1) * factorial(2 * n))) * ctx.pi ** (2 * n + 1)

    @staticmethod
    def _beta_series(ctx, n: int):
        """Alternating series; the first omitted term bounds the truncation error."""
        s = 2 * n + 1
        partial = ctx.mpf(0)
        for k in range(DIRECT_SERIES_TERMS):
            term = rational_iv(ctx, Fraction(1, (2 * k + 1) ** s))
            partial = partial + term if k % 2 == 0 else partial - term
        omitted = rational_iv(ctx, Fraction(1, (2 * DIRECT_SERIES_TERMS + 1) ** s))
        if DIRECT_SERIES_TERMS % 2 == 0:
            return ctx.mpf((partial, partial + omitted))
        return ctx.mpf((partial - omitted, partial))

    def _two_way(self, ctx, bits: int, identity, series) -> Tuple[IntervalValue, Dict[str, str]]:
        first = to_interval_value(identity, bits)
        second = to_interval_value(series, bits)
        details = {
            "identity": f"[{float(first.lo)!r}, {float(first.hi)!r}]",
            "series": f"[{float(second.lo)!r}, {float(second.hi)!r}]",
        }
        return intersect(first, second), details

    def eta_bound(self, kind: BoundKind, n: int, precision_bits: Optional[int] = None) -> BoundCheckResult:
        self._require_n(n)
        kind = BoundKind(kind)

        def evaluate(bits: int) -> Evaluation:
            ctx = self._ctx(bits)
            if kind == BoundKind.EULER:
                beta, details = self._two_way(ctx, bits, self._beta_identity(ctx, n), self._beta_series(ctx, n))
                return IntervalValue(lo=beta.lo - 1, hi=beta.hi - 1, precision_bits=bits), details
            zeta, details = self._two_way(ctx, bits, self._zeta_identity(ctx, n), self._zeta_series(ctx, n))
            if kind == BoundKind.BERNOULLI:
                return IntervalValue(lo=zeta.lo - 1, hi=zeta.hi - 1, precision_bits=bits), details
            factor = 1 - Fraction(1, 4 ** n)
            return IntervalValue(lo=factor * zeta.lo - 1, hi=factor * zeta.hi - 1, precision_bits=bits), details

        if kind == BoundKind.EULER:
            bracket = (-Fraction(1, 3 ** (2 * n + 1)), Fraction(0))
        else:
            bracket = (Fraction(0), Fraction(3, 4 ** n))
        return self._certify(
            f"eta-{kind.value}",
            BoundClaim.IN_BRACKET,
            evaluate,
            index=n,
            bracket=bracket,
            precision_bits=precision_bits,
        )

    def euler_bracket(self, n: int, precision_bits: Optional[int] = None) -> BoundCheckResult:
        """4^(n+1)(2n)!/pi^(2n+1) > |E_2n| > that / (1 + 3^(-2n-1)), checked on the quotient."""
        self._require_n(n)

        def evaluate(bits: int) -> Evaluation:
            ctx = self._ctx(bits)
            return to_interval_value(self._beta_identity(ctx, n), bits), None

        third = Fraction(1, 3 ** (2 * n + 1))
        return self._certify(
            "euler-bracket",
            BoundClaim.IN_BRACKET,
            evaluate,
            index=n,
            bracket=(1 / (1 + third), Fraction(1)),
            precision_bits=precision_bits,
        )

    # ---- explicit difference bounds --------------------------------------

    def _delta1_iv(self, ctx, n: int, kind: BoundKind):
        """Lower bound of the first difference of ln(a_n)/n.

        Both kinds carry the Bernoulli log n terms; only the constant and the
        tail coefficient change with ``kind``. For tangent numbers the bound is
        valid and looser than a tangent-specific expansion.
        """
        c1, _ = DELTA_TAIL_COEFFS[kind]
        big_l = _delta_log_constant(ctx, kind)
        return (
            ctx.mpf(1) / n
            - ctx.ln(n + 1) / (2 * n * n)
            - big_l / (2 * n * (n + 1))
            - ctx.mpf(1) / (12 * n * n)
            - ctx.ldexp(ctx.mpf(c1) / n, -2 * n)
        )

    def _delta2_iv(self, ctx, n: int, kind: BoundKind):
        """Upper bound of the second difference; same log n terms for both kinds as _delta1_iv."""
        _, c2 = DELTA_TAIL_COEFFS[kind]
        big_l = _delta_log_constant(ctx, kind)
        return (
            -ctx.mpf(2) / ((n + 1) * (n + 1))
            + (ctx.ln(n) + 2 + 2 * big_l) / (2 * n * (n + 1) * (n + 2))
            + ctx.mpf(1) / (6 * n * n)
            + ctx.ldexp(ctx.mpf(c2) / n, -2 * n)
        )

    def delta1_lower_bound(
        self, n: int, kind: BoundKind = BoundKind.BERNOULLI, precision_bits: Optional[int] = None
    ) -> BoundCheckResult:
        self._require_n(n)
        kind = BoundKind(kind)
        return self._certify(
            f"delta1-{kind.value}",
            BoundClaim.POSITIVE,
            lambda bits: (to_interval_value(self._delta1_iv(self._ctx(bits), n, kind), bits), None),
            index=n,
            precision_bits=precision_bits,
            reconstructed=kind != BoundKind.BERNOULLI,
        )

    def delta2_upper_bound(
        self, n: int, kind: BoundKind = BoundKind.BERNOULLI, precision_bits: Optional[int] = None
    ) -> BoundCheckResult:
        self._require_n(n)
        kind = BoundKind(kind)
        return self._certify(
            f"delta2-{kind.value}",
            BoundClaim.NEGATIVE,
            lambda bits: (to_interval_value(self._delta2_iv(self._ctx(bits), n, kind), bits), None),
            index=n,
            precision_bits=precision_bits,
            reconstructed=kind != BoundKind.BERNOULLI,
        )

    def delta_consistency(
        self, kind: BoundKind, n: int, precision_bits: Optional[int] = None
    ) -> BoundCheckResult:
        """True differences of ln(a_n)/n against the explicit bounds.

        The value is the smaller of the two margins Delta1 - bound1 and
        bound2 - Delta2 (only the first for n = 3); it must be positive.
        """
        self._require_n(n, 3)
        kind = BoundKind(kind)
        id = SequenceId(family=KIND_FAMILIES[kind])
        with_second = n >= 4

        def evaluate(bits: int) -> Evaluation:
            ctx = self._ctx(bits)
            w = [log_iv(ctx, self.sequences.term(id, k)) / k for k in (n, n + 1, n + 2)]
            delta1 = w[1] - w[0]
            margin1 = delta1 - self._delta1_iv(ctx, n, kind)
            details = {
                "delta1": repr(float(to_interval_value(delta1, bits))),
                "delta1_positive": str(iv_sign(delta1) == 1).lower(),
            }
            margin = to_interval_value(margin1, bits)
            if with_second:
                delta2 = w[2] - 2 * w[1] + w[0]
                margin2 = to_interval_value(self._delta2_iv(ctx, n, kind) - delta2, bits)
                details["delta2"] = repr(float(to_interval_value(delta2, bits)))
                details["delta2_negative"] = str(iv_sign(delta2) == -1).lower()
                margin = IntervalValue(
                    lo=min(margin.lo, margin2.lo), hi=min(margin.hi, margin2.hi), precision_bits=bits
                )
            return margin, details

        return self._certify(
            f"delta-consistency-{kind.value}",
            BoundClaim.POSITIVE,
            evaluate,
            index=n,
            precision_bits=precision_bits,
            reconstructed=kind != BoundKind.BERNOULLI,
        )

    # ---- elementary logarithm inequalities -----------------------------

    def elementary_inequalities(
        self, xs: Sequence[Fraction] = (), ns: Sequence[int] = ()
    ) -> List[BoundCheckResult]:
        xs = [Fraction(x) for x in xs]
        for x in xs:
            if not 0 <= x <= Fraction(1, 2):
                raise ParameterError(f"sample point {x} outside [0, 1/2]")
        for n in ns:
            self._require_n(n)

        results: List[BoundCheckResult] = []
        for x in xs:
            point = str(x)

            def log1p_gap(bits: int, x=x) -> Evaluation:
                ctx = self._ctx(bits)
                return to_interval_value(rational_iv(ctx, x) - log_iv(ctx, 1 + x), bits), None

            def log1m_gap(bits: int, x=x) -> Evaluation:
                ctx = self._ctx(bits)
                return to_interval_value(rational_iv(ctx, 2 * x) - abs(log_iv(ctx, 1 - x)), bits), None

            results.append(self._certify("log1p-le-x", BoundClaim.NON_NEGATIVE, log1p_gap, point=point))
            if 0 < x < Fraction(1, 2):
                results.append(
                    self._certify(
                        "log1p-bracket",
                        BoundClaim.IN_BRACKET,
                        lambda bits, x=x: (to_interval_value(log_iv(self._ctx(bits), 1 + x), bits), None),
                        point=point,
                        bracket=(x - x * x, x),
                    )
                )
            results.append(self._certify("log1m-le-2x", BoundClaim.NON_NEGATIVE, log1m_gap, point=point))

        for n in ns:

            def reciprocal_gap(bits: int, n=n) -> Evaluation:
                ctx = self._ctx(bits)
                value = log_iv(ctx, Fraction(n + 1, n)) - rational_iv(ctx, Fraction(1, 2 * n))
                return to_interval_value(value, bits), None

            results.append(self._certify("log-recip-ge-half", BoundClaim.NON_NEGATIVE, reciprocal_gap, index=n))
        return results

    # ---- grids -----------------------------------------------------------

    @log_function_call()
    def check_grid(
        self,
        which: str,
        n_lo: int,
        n_hi: int,
        kind: BoundKind = BoundKind.BERNOULLI,
        precision_bits: Optional[int] = None,
    ) -> List[BoundCheckResult]:
        if n_hi < n_lo:
            raise ParameterError(f"empty range [{n_lo}, {n_hi}]")
        kind = BoundKind(kind)
        checks: Dict[str, Callable[[int], BoundCheckResult]] = {
            "stirling": lambda n: self.stirling_theta(n, precision_bits),
            "eta": lambda n: self.eta_bound(kind, n, precision_bits),
            "euler-bracket": lambda n: self.euler_bracket(n, precision_bits),
            "delta1": lambda n: self.delta1_lower_bound(n, kind, precision_bits),
            "delta2": lambda n: self.delta2_upper_bound(n, kind, precision_bits),
            "delta-consistency": lambda n: self.delta_consistency(kind, n, precision_bits),
        }
        if which not in checks:
            raise ParameterError(f"unknown bound {which!r}; expected one of {', '.join(BOUND_NAMES)}")
        results = [checks[which](n) for n in range(n_lo, n_hi + 1)]
        failures = [r.index for r in results if not r.holds]
        certification.log_bound_grid(
            name=which if which == "stirling" else f"{which}-{kind.value}",
            n_lo=n_lo,
            n_hi=n_hi,
            failures=len(failures),
            details={"first_failure": failures[0]} if failures else None,
        )
        return results


BOUND_NAMES = ("stirling", "eta", "euler-bracket", "delta1", "delta2", "delta-consistency")


# Singleton instance
_bounds_service = None


def get_bounds_service() -> BoundsService:
    """Get bounds service singleton."""
    global _bounds_service
    if _bounds_service is None:
        _bounds_service = BoundsService()
    return _bounds_service
