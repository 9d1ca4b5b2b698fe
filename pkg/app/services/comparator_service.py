"""Root- and ratio-monotonicity certification.

Every verdict is decided by a sign: the interval fast path runs through the
precision schedule and, when the enclosure still contains zero at the last
precision, an exact big-integer comparison settles it.
"""
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import gmpy2

from app.core.config import settings
from app.core.exceptions import NonPositiveTermError, ParameterError
from app.core.logging import certification, get_logger, log_function_call
from app.schemas.certificate import Certificate, Claim, DecisionMethod, Direction, Verdict
from app.schemas.interval import IntervalValue
from app.schemas.sequence import SequenceId
from app.services.interval_service import (
    interval_context,
    interval_iv,
    iv_sign,
    log_iv,
    rational_iv,
    to_interval_value,
)
from app.services.sequence_service import get_sequence_service

logger = get_logger(__name__)


def _cmp(lhs, rhs) -> int:
    return (lhs > rhs) - (lhs < rhs)


def exact_root_sign(a0: Fraction, a1: Fraction, n: int) -> int:
    """sign(a1^n - a0^(n+1)), i.e. the sign of a1^(1/(n+1)) - a0^(1/n)."""
    p0, q0 = gmpy2.mpz(a0.numerator), gmpy2.mpz(a0.denominator)
    p1, q1 = gmpy2.mpz(a1.numerator), gmpy2.mpz(a1.denominator)
    return _cmp(p1 ** n * q0 ** (n + 1), p0 ** (n + 1) * q1 ** n)


def exact_ratio_sign(a0: Fraction, a1: Fraction, a2: Fraction, n: int) -> int:
    """sign(a2^(n(n+1)) a0^((n+1)(n+2)) - a1^(2n(n+2))), the sign of r_{n+1} - r_n."""
    e0, e1, e2 = (n + 1) * (n + 2), 2 * n * (n + 2), n * (n + 1)
    p0, q0 = gmpy2.mpz(a0.numerator), gmpy2.mpz(a0.denominator)
    p1, q1 = gmpy2.mpz(a1.numerator), gmpy2.mpz(a1.denominator)
    p2, q2 = gmpy2.mpz(a2.numerator), gmpy2.mpz(a2.denominator)
    return _cmp(p2 ** e2 * p0 ** e0 * q1 ** e1, p1 ** e1 * q2 ** e2 * q0 ** e0)


class _LogCache:
    """ln a_n enclosures, computed once per (index, precision)."""

    def __init__(self, terms: Dict[int, Fraction]):
        self.terms = terms
        self._logs: Dict[Tuple[int, int], object] = {}

    def log(self, n: int, bits: int):
        key = (n, bits)
        if key not in self._logs:
            self._logs[key] = log_iv(interval_context(bits), self.terms[n])
        return self._logs[key]


def _interval_expression(cache: _LogCache, is_ratio: bool, n: int, bits: int):
    """n(n+1)(n+2) * Delta^2(ln a_k / k) for ratios, n(n+1) * Delta^1 for roots."""
    if is_ratio:
        return (
            n * (n + 1) * cache.log(n + 2, bits)
            - 2 * n * (n + 2) * cache.log(n + 1, bits)
            + (n + 1) * (n + 2) * cache.log(n, bits)
        )
    return n * cache.log(n + 1, bits) - (n + 1) * cache.log(n, bits)


def decide_sign(
    cache: _LogCache, is_ratio: bool, n: int, schedule: Sequence[int]
) -> Tuple[int, DecisionMethod, Optional[int]]:
    for bits in schedule:
        sign = iv_sign(_interval_expression(cache, is_ratio, n, bits))
        if sign is not None:
            return sign, DecisionMethod.INTERVAL_CERTIFIED, bits
        logger.debug("verdict_escalated", index=n, precision_bits=bits)
    terms = cache.terms
    if is_ratio:
        sign = exact_ratio_sign(terms[n], terms[n + 1], terms[n + 2], n)
    else:
        sign = exact_root_sign(terms[n], terms[n + 1], n)
    return sign, DecisionMethod.EXACT_BIGINT, None


def _verdict(claim: Claim, n: int, sign: int, method: DecisionMethod, bits: Optional[int]) -> Verdict:
    wanted = 1 if claim.direction == Direction.INCREASING else -1
    return Verdict(index=n, claim=claim, holds=sign == wanted, method=method, precision_bits=bits)


def _decide_chunk(args) -> List[Tuple[int, int, str, Optional[int]]]:
    """Worker entry point: decide a contiguous block of indices."""
    terms, is_ratio, indices, schedule = args
    cache = _LogCache(terms)
    results = []
    for n in indices:
        sign, method, bits = decide_sign(cache, is_ratio, n, schedule)
        results.append((n, sign, method.value, bits))
    return results


class ComparatorService:
    """Decides monotonicity claims over finite index ranges."""

    def __init__(self, schedule: Optional[Sequence[int]] = None, workers: Optional[int] = None):
        self.schedule = list(schedule or settings.precision_schedule)
        self.workers = workers or settings.CHECK_WORKERS
        self.sequences = get_sequence_service()

    def _terms(self, id: SequenceId, n_lo: int, n_hi: int, extra: int) -> Dict[int, Fraction]:
        if n_lo < max(1, id.family.first_index):
            raise ParameterError(f"monotonicity ranges start at n >= 1, got {n_lo}")
        if n_hi < n_lo:
            raise ParameterError(f"empty range [{n_lo}, {n_hi}]")
        terms: Dict[int, Fraction] = {}
        for n in range(n_lo, n_hi + extra + 1):
            value = self.sequences.term(id, n)
            if not value.is_positive():
                raise NonPositiveTermError(n, value.render())
            terms[n] = value.as_fraction()
        return terms

    def _decide_all(self, terms: Dict[int, Fraction], is_ratio: bool, indices: List[int]):
        if self.workers > 1 and len(indices) > self.workers:
            size = -(-len(indices) // self.workers)
            chunks = [indices[i:i + size] for i in range(0, len(indices), size)]
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                parts = pool.map(_decide_chunk, [(terms, is_ratio, chunk, self.schedule) for chunk in chunks])
                return [row for part in parts for row in part]
        return _decide_chunk((terms, is_ratio, indices, self.schedule))

    @log_function_call()
    def check(self, id: SequenceId, claim: Claim, n_lo: int, n_hi: int) -> Certificate:
        is_ratio = claim.is_ratio
        terms = self._terms(id, n_lo, n_hi, 2 if is_ratio else 1)
        rows = self._decide_all(terms, is_ratio, list(range(n_lo, n_hi + 1)))
        verdicts = [
            _verdict(claim, n, sign, DecisionMethod(method), bits)
            for n, sign, method, bits in sorted(rows)
        ]
        certificate = Certificate.assemble(id, claim, n_lo, n_hi, verdicts)
        certification.log_certificate(
            sequence=id.label,
            claim=claim.value,
            n_lo=n_lo,
            n_hi=n_hi,
            all_hold=certificate.all_hold,
            first_failure=certificate.first_failure,
            exact_verdicts=certificate.exact_count,
        )
        return certificate

    def check_root_monotone(self, id: SequenceId, direction: Direction, n_lo: int, n_hi: int) -> Certificate:
        return self.check(id, Claim.of("root", direction), n_lo, n_hi)

    def check_ratio_monotone(self, id: SequenceId, direction: Direction, n_lo: int, n_hi: int) -> Certificate:
        return self.check(id, Claim.of("ratio", direction), n_lo, n_hi)


def iterated_difference(u: Sequence, k: int) -> List:
    """k-th forward difference: out[i] = sum_j (-1)^j C(k, j) u[i+k-j].

    Elements may be numbers, ``mpmath`` intervals or IntervalValue instances
    (which come back as IntervalValue at the coarsest input precision).
    """
    if k < 1:
        raise ParameterError(f"difference order must be positive, got {k}")
    if len(u) <= k:
        raise ParameterError(f"need more than {k} values, got {len(u)}")
    if any(isinstance(x, IntervalValue) for x in u):
        bits = min(x.precision_bits for x in u if isinstance(x, IntervalValue))
        ctx = interval_context(bits)
        lifted = [interval_iv(ctx, x) if isinstance(x, IntervalValue) else rational_iv(ctx, x) for x in u]
        return [to_interval_value(v, bits) for v in iterated_difference(lifted, k)]
    coefficients = [(-1) ** j * comb(k, j) for j in range(k + 1)]
    out = []
    for i in range(len(u) - k):
        acc = coefficients[0] * u[i + k]
        for j in range(1, k + 1):
            acc = acc + coefficients[j] * u[i + k - j]
        out.append(acc)
    return out


# Singleton instance
_comparator_service = None


def get_comparator_service() -> ComparatorService:
    """Get comparator service singleton."""
    global _comparator_service
    if _comparator_service is None:
        _comparator_service = ComparatorService()
    return _comparator_service
