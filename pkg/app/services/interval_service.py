"""Outward-rounded interval arithmetic on top of ``mpmath``'s interval context."""
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext

from app.core.exceptions import EnclosureError, ParameterError
from app.schemas.asymptotics import QuadraticSurd
from app.schemas.interval import IntervalValue
from app.schemas.sequence import ExactValue

Real = Union[int, Fraction, ExactValue]


@lru_cache(maxsize=64)
def interval_context(precision_bits: int) -> MPIntervalContext:
    """One interval context per working precision; contexts are never re-configured."""
    if precision_bits < 2:
        raise ParameterError(f"precision must be at least 2 bits, got {precision_bits}")
    ctx = MPIntervalContext()
    ctx.prec = precision_bits
    return ctx


def _as_fraction(x: Real) -> Fraction:
    if isinstance(x, ExactValue):
        return x.as_fraction()
    return Fraction(x)


def rational_iv(ctx: MPIntervalContext, x: Real):
    """Tightest enclosure of the rational ``x`` at the context precision."""
    q = _as_fraction(x)
    prec = ctx.prec
    lo = libmp.from_rational(q.numerator, q.denominator, prec, libmp.round_floor)
    hi = libmp.from_rational(q.numerator, q.denominator, prec, libmp.round_ceiling)
    return ctx.make_mpf((lo, hi))


def surd_iv(ctx: MPIntervalContext, s: QuadraticSurd):
    value = rational_iv(ctx, s.a)
    if s.b:
        value = value + rational_iv(ctx, s.b) * ctx.sqrt(2)
    return value


def interval_iv(ctx: MPIntervalContext, value: IntervalValue):
    """Re-enter an IntervalValue into ``ctx`` (endpoints rounded outward if needed)."""
    lo = libmp.from_rational(value.lo.numerator, value.lo.denominator, ctx.prec, libmp.round_floor)
    hi = libmp.from_rational(value.hi.numerator, value.hi.denominator, ctx.prec, libmp.round_ceiling)
    return ctx.make_mpf((lo, hi))


def _exact(value) -> Fraction:
    """Exact value of an mpf; the gmpy backend hands back mpz parts, stored here as int."""
    p, q = libmp.to_rational(value)
    return Fraction(int(p), int(q))


def to_interval_value(x, precision_bits: int) -> IntervalValue:
    """Capture an interval result with its exact binary endpoints."""
    lo, hi = x._mpi_
    if lo in (libmp.fninf, libmp.finf, libmp.fnan) or hi in (libmp.fninf, libmp.finf, libmp.fnan):
        raise EnclosureError("interval evaluation overflowed to an unbounded enclosure")
    return IntervalValue(
        lo=_exact(lo),
        hi=_exact(hi),
        precision_bits=precision_bits,
    )


def iv_sign(x) -> Optional[int]:
    """+1 or -1 when the interval excludes zero, else None."""
    lo, hi = x._mpi_
    if libmp.mpf_sign(lo) > 0:
        return 1
    if libmp.mpf_sign(hi) < 0:
        return -1
    return None


def _log_guard_bits(q: Fraction) -> int:
    """Extra working bits so that ln(q) keeps its relative accuracy when q is close to 1."""
    distance = abs(q - 1)
    if distance >= Fraction(1, 2):
        return 4
    return 8 + (distance.denominator.bit_length() - distance.numerator.bit_length())


def log_iv(ctx: MPIntervalContext, x: Real):
    """ln x for a positive exact value; rationals use ln(num) - ln(den)."""
    q = _as_fraction(x)
    if q <= 0:
        raise ParameterError(f"logarithm of a non-positive value {q}")
    if q == 1:
        return ctx.mpf(0)
    if q.denominator == 1:
        return ctx.ln(rational_iv(ctx, q.numerator))
    return ctx.ln(rational_iv(ctx, q.numerator)) - ctx.ln(rational_iv(ctx, q.denominator))


def log_interval(x: Real, precision_bits: int) -> IntervalValue:
    """Certified enclosure of ln x whose width is at most 2^-(precision_bits-4) * |ln x|."""
    q = _as_fraction(x)
    if q <= 0:
        raise ParameterError(f"logarithm of a non-positive value {q}")
    if q == 1:
        return IntervalValue(lo=Fraction(0), hi=Fraction(0), precision_bits=precision_bits)
    ctx = interval_context(precision_bits + _log_guard_bits(q))
    return to_interval_value(ctx.ln(rational_iv(ctx, q)), precision_bits)


def exp_interval(x: IntervalValue, precision_bits: Optional[int] = None) -> IntervalValue:
    bits = precision_bits or x.precision_bits
    ctx = interval_context(bits)
    return to_interval_value(ctx.exp(interval_iv(ctx, x)), bits)
