"""Exact generators for the supported sequence families."""
import threading
from collections import OrderedDict
from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import IntegralityError, ParameterError
from app.core.logging import get_logger, log_function_call
from app.schemas.sequence import ExactValue, SequenceFamily, SequenceId, SequenceWindow

logger = get_logger(__name__)


class BinomialTable:
    """Row-incremental binomial coefficients; each row grows only as far as requested.

    At most ``max_rows`` rows are kept, least recently used rows are dropped first.
    """

    def __init__(self, max_rows: Optional[int] = None):
        self.max_rows = max_rows or settings.BINOMIAL_CACHE_ROWS
        self._rows: "OrderedDict[int, List[int]]" = OrderedDict()
        self._lock = threading.Lock()

    def __call__(self, n: int, k: int) -> int:
        if k < 0 or k > n:
            return 0
        k = min(k, n - k)
        with self._lock:
            row = self._rows.get(n)
            if row is None:
                row = self._rows[n] = [1]
                while len(self._rows) > self.max_rows:
                    self._rows.popitem(last=False)
            else:
                self._rows.move_to_end(n)
            while len(row) <= k:
                j = len(row)
                row.append(row[-1] * (n - j + 1) // j)
            return row[k]

    def __len__(self) -> int:
        return len(self._rows)

    def clear(self):
        with self._lock:
            self._rows.clear()


class ZigzagTable:
    """Seidel boustrophedon triangle; ``number(k)`` is the k-th zigzag number A_k.

    A_{2n-1} are the tangent numbers and A_{2n} the secant (Euler) numbers.
    Holds A_0 .. A_k for the largest k requested and the last triangle row.
    """

    def __init__(self):
        self._numbers: List[int] = [1]
        self._row: List[int] = [1]
        self._lock = threading.Lock()

    def number(self, k: int) -> int:
        if k < len(self._numbers):
            return self._numbers[k]
        with self._lock:
            while len(self._numbers) <= k:
                row = [0]
                for v in reversed(self._row):
                    row.append(row[-1] + v)
                self._row = row
                self._numbers.append(row[-1])
            return self._numbers[k]


def make_sequence_id(family: str, r: Optional[str] = None) -> SequenceId:
    """Build a SequenceId from user-facing tokens, raising ParameterError on bad input."""
    try:
        return SequenceId.parse(family, r)
    except (ValueError, ValidationError) as e:
        raise ParameterError(f"invalid sequence {family!r} (r={r!r}): {e}") from e


class SequenceService:
    """Exact term generation. All methods are pure; caches are shared and locked.

    The term memo holds at most ``capacity`` values. ``capacity`` starts at
    TERM_CACHE_SIZE and grows to the largest window requested (plus the two
    look-ahead terms a ratio check needs); older terms are evicted first.
    """

    def __init__(self, capacity: Optional[int] = None):
        self.binomial = BinomialTable()
        self.zigzag = ZigzagTable()
        self.capacity = capacity or settings.TERM_CACHE_SIZE
        self._terms: "OrderedDict[Tuple[SequenceId, int], ExactValue]" = OrderedDict()
        self._lock = threading.Lock()

    @staticmethod
    def _require(condition: bool, message: str):
        if not condition:
            raise ParameterError(message)

    def bernoulli_abs(self, n: int) -> ExactValue:
        """|B_{2n}| = 2n |T_{2n-1}| / (4^n (4^n - 1))."""
        self._require(n >= 1, f"bernoulli-abs needs n >= 1, got {n}")
        four_n = 4 ** n
        return ExactValue.rational(Fraction(2 * n * self.zigzag.number(2 * n - 1), four_n * (four_n - 1)))

    def tangent_abs(self, n: int) -> ExactValue:
        self._require(n >= 1, f"tangent-abs needs n >= 1, got {n}")
        return ExactValue.integer(self.zigzag.number(2 * n - 1))

    def euler_abs(self, n: int) -> ExactValue:
        self._require(n >= 0, f"euler-abs needs n >= 0, got {n}")
        return ExactValue.integer(self.zigzag.number(2 * n))

    def s_family(self, r, n: int) -> ExactValue:
        r = tuple(r)
        self._require(bool(r) and r[0] > 0 and all(x >= 0 for x in r), f"invalid exponent vector {r}")
        self._require(n >= 0, f"sfam needs n >= 0, got {n}")
        total = 0
        for k in range(n + 1):
            term = 1
            for j, exponent in enumerate(r):
                if exponent:
                    term *= self.binomial(n + k * j, k) ** exponent
            total += term
        return ExactValue.integer(total)

    def motzkin(self, n: int) -> ExactValue:
        self._require(n >= 0, f"motzkin needs n >= 0, got {n}")
        total = sum(
            Fraction(self.binomial(n, 2 * k) * self.binomial(2 * k, k), k + 1)
            for k in range(n // 2 + 1)
        )
        return ExactValue.integer(self._integral("motzkin", n, total))

    def schroder(self, n: int) -> ExactValue:
        self._require(n >= 0, f"schroder needs n >= 0, got {n}")
        total = sum(
            Fraction(self.binomial(n, k) * self.binomial(n + k, k), k + 1)
            for k in range(n + 1)
        )
        return ExactValue.integer(self._integral("schroder", n, total))

    def trinomial(self, n: int) -> ExactValue:
        self._require(n >= 0, f"trinomial needs n >= 0, got {n}")
        return ExactValue.integer(
            sum(self.binomial(n, k) * self.binomial(n - k, k) for k in range(n // 2 + 1))
        )

    @staticmethod
    def _integral(name: str, n: int, total: Fraction) -> int:
        if total.denominator != 1:
            raise IntegralityError(f"{name}({n}) summed to non-integer {total}", {"index": n})
        return total.numerator

    def term(self, id: SequenceId, n: int) -> ExactValue:
        key = (id, n)
        with self._lock:
            value = self._terms.get(key)
            if value is not None:
                self._terms.move_to_end(key)
                return value
        value = self._generate(id, n)
        with self._lock:
            self._terms[key] = value
            while len(self._terms) > self.capacity:
                self._terms.popitem(last=False)
        return value

    @property
    def cached_terms(self) -> int:
        return len(self._terms)

    def _generate(self, id: SequenceId, n: int) -> ExactValue:
        family = id.family
        if family == SequenceFamily.BERNOULLI_ABS_2N:
            return self.bernoulli_abs(n)
        if family == SequenceFamily.TANGENT_ABS_ODD:
            return self.tangent_abs(n)
        if family == SequenceFamily.EULER_ABS_EVEN:
            return self.euler_abs(n)
        if family == SequenceFamily.S_FAMILY:
            return self.s_family(id.r, n)
        if family == SequenceFamily.MOTZKIN:
            return self.motzkin(n)
        if family == SequenceFamily.SCHROEDER:
            return self.schroder(n)
        return self.trinomial(n)

    @log_function_call()
    def window(self, id: SequenceId, start: int, count: int) -> SequenceWindow:
        """Terms ``a_start .. a_{start+count-1}``."""
        self._require(count >= 1, f"count must be positive, got {count}")
        self._require(
            start >= id.family.first_index,
            f"{id.family.value} starts at index {id.family.first_index}, got {start}",
        )
        with self._lock:
            self.capacity = max(self.capacity, count + 2)
        values = [self.term(id, n) for n in range(start, start + count)]
        logger.debug("window_generated", sequence=id.label, start=start, count=count)
        return SequenceWindow(id=id, start=start, values=values)


# Singleton instance
_sequence_service = None


def get_sequence_service() -> SequenceService:
    """Get sequence service singleton."""
    global _sequence_service
    if _sequence_service is None:
        _sequence_service = SequenceService()
    return _sequence_service
