"""Independent reference implementations used to cross-check the generators.

Each family is recomputed by a different method from the one in
``sequence_service``: defining recurrences, exact power-series division,
lattice-path dynamic programs and polynomial expansion.
"""
from fractions import Fraction
from math import comb, factorial
from typing import List, Sequence

from app.core.exceptions import ParameterError
from app.schemas.sequence import ExactValue, SequenceFamily, SequenceId


def bernoulli_numbers(count: int) -> List[Fraction]:
    """Signed B_0..B_{count-1} from sum_{k=0}^{m} C(m+1, k) B_k = 0."""
    numbers: List[Fraction] = []
    for m in range(count):
        if m == 0:
            numbers.append(Fraction(1))
            continue
        acc = sum(comb(m + 1, k) * numbers[k] for k in range(m))
        numbers.append(-acc / (m + 1))
    return numbers


def _series_divide(numerator: Sequence[Fraction], denominator: Sequence[Fraction], order: int) -> List[Fraction]:
    """Coefficients of numerator/denominator up to z^order (denominator[0] != 0)."""
    quotient: List[Fraction] = []
    for i in range(order + 1):
        acc = numerator[i] if i < len(numerator) else Fraction(0)
        for j in range(1, min(i, len(denominator) - 1) + 1):
            acc -= denominator[j] * quotient[i - j]
        quotient.append(acc / denominator[0])
    return quotient


def _sin_cos(order: int):
    sin = [Fraction(0)] * (order + 1)
    cos = [Fraction(0)] * (order + 1)
    for k in range(order + 1):
        sign = -1 if (k // 2) % 2 else 1
        if k % 2:
            sin[k] = Fraction(sign, factorial(k))
        else:
            cos[k] = Fraction(sign, factorial(k))
    return sin, cos


def tangent_series(n_max: int) -> List[int]:
    """|T_{2n-1}| for n = 1..n_max from the series of tan z = sin z / cos z."""
    order = 2 * n_max
    sin, cos = _sin_cos(order)
    tan = _series_divide(sin, cos, order)
    return [abs(tan[2 * n - 1] * factorial(2 * n - 1)).numerator for n in range(1, n_max + 1)]


def secant_series(n_max: int) -> List[int]:
    """|E_{2n}| for n = 0..n_max from the series of sec z = 1 / cos z."""
    order = 2 * n_max
    _, cos = _sin_cos(order)
    sec = _series_divide([Fraction(1)], cos, order)
    return [abs(sec[2 * n] * factorial(2 * n)).numerator for n in range(n_max + 1)]


def euler_recurrence(n_max: int) -> List[int]:
    """|E_{2n}| for n = 0..n_max from sum_k C(2n, 2k) E_{2k} = 0."""
    signed = [1]
    for n in range(1, n_max + 1):
        signed.append(-sum(comb(2 * n, 2 * k) * signed[k] for k in range(n)))
    return [abs(e) for e in signed]


def motzkin_paths(n: int) -> int:
    """Paths (0,0) -> (n,0) with steps (1,0), (1,1), (1,-1) that stay at height >= 0."""
    heights = [1] + [0] * n
    for _ in range(n):
        nxt = [0] * (n + 1)
        for h, ways in enumerate(heights):
            if not ways:
                continue
            nxt[h] += ways
            if h + 1 <= n:
                nxt[h + 1] += ways
            if h > 0:
                nxt[h - 1] += ways
        heights = nxt
    return heights[0]


def schroder_paths(n: int) -> int:
    """Paths (0,0) -> (n,n) with steps (1,0), (0,1), (1,1) that never rise above y = x."""
    grid = [[0] * (n + 1) for _ in range(n + 1)]
    grid[0][0] = 1
    for x in range(n + 1):
        for y in range(x + 1):
            if x == 0 and y == 0:
                continue
            ways = 0
            if x > 0 and y <= x - 1:
                ways += grid[x - 1][y]
            if y > 0:
                ways += grid[x][y - 1]
            if x > 0 and y > 0:
                ways += grid[x - 1][y - 1]
            grid[x][y] = ways
    return grid[n][n]


def trinomial_expansion(n: int) -> int:
    """Coefficient of x^n in (x^2 + x + 1)^n."""
    poly = [1]
    for _ in range(n):
        nxt = [0] * (len(poly) + 2)
        for i, c in enumerate(poly):
            nxt[i] += c
            nxt[i + 1] += c
            nxt[i + 2] += c
        poly = nxt
    return poly[n]


def s_family_direct(r: Sequence[int], n: int) -> int:
    total = 0
    for k in range(n + 1):
        term = 1
        for j, exponent in enumerate(r):
            term *= comb(n + k * j, k) ** exponent
        total += term
    return total


def oracle_window(id: SequenceId, start: int, count: int) -> List[ExactValue]:
    """Reference values for indices start..start+count-1."""
    if start < id.family.first_index or count < 1:
        raise ParameterError(f"invalid oracle window start={start} count={count} for {id.label}")
    stop = start + count
    family = id.family
    if family == SequenceFamily.BERNOULLI_ABS_2N:
        numbers = bernoulli_numbers(2 * stop)
        return [ExactValue.rational(abs(numbers[2 * n])) for n in range(start, stop)]
    if family == SequenceFamily.TANGENT_ABS_ODD:
        values = tangent_series(stop - 1)
        return [ExactValue.integer(values[n - 1]) for n in range(start, stop)]
    if family == SequenceFamily.EULER_ABS_EVEN:
        values = euler_recurrence(stop - 1)
        return [ExactValue.integer(values[n]) for n in range(start, stop)]
    if family == SequenceFamily.S_FAMILY:
        return [ExactValue.integer(s_family_direct(id.r, n)) for n in range(start, stop)]
    if family == SequenceFamily.MOTZKIN:
        return [ExactValue.integer(motzkin_paths(n)) for n in range(start, stop)]
    if family == SequenceFamily.SCHROEDER:
        return [ExactValue.integer(schroder_paths(n)) for n in range(start, stop)]
    return [ExactValue.integer(trinomial_expansion(n)) for n in range(start, stop)]
