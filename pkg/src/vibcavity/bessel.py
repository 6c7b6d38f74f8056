"""Bessel functions of the first kind and integer order."""
from __future__ import annotations

import math

_SERIES_LIMIT = 1.0
_BIG = 1e250


def _series(n: int, x: float) -> float:
    # sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)
    half = 0.5 * x
    term = half ** n / math.factorial(n) if n else 1.0
    total = term
    q = -half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + n))
        total += term
        if abs(term) <= 1e-17 * abs(total) or term == 0.0:
            return total


def _miller(n: int, x: float) -> float:
    """Backward recurrence normalised by ``J0 + 2 sum J_2k = 1`` (x > 0)."""
    top = max(n, int(x))
    start = 2 * ((top + 20 + int(math.sqrt(40 * top))) // 2)
    j_above, j_here = 0.0, 1e-300
    norm = 0.0
    result = 0.0
    for k in range(start, 0, -1):
        j_below = 2 * k / x * j_here - j_above
        j_above, j_here = j_here, j_below
        if abs(j_here) > _BIG:
            j_here /= _BIG
            j_above /= _BIG
            norm /= _BIG
            result /= _BIG
        if k - 1 == n:
            result = j_here
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2 * j_here
    norm += j_here
    return result / norm


def bessel_j(n: int, x: float) -> float:
    """``J_n(x)`` for integer ``n``.

    Power series for ``|x| <= 1`` (absolute error near 1e-16), Miller's backward
    recurrence beyond.
    """
    n = int(n)
    x = float(x)
    sign = 1.0
    if n < 0:
        n = -n
        sign = -1.0 if n % 2 else 1.0
    if x < 0:
        x = -x
        if n % 2:
            sign = -sign
    if x == 0.0:
        return sign * (1.0 if n == 0 else 0.0)
    if x <= _SERIES_LIMIT:
        return sign * _series(n, x)
    return sign * _miller(n, x)
