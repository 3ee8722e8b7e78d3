"""Slow but independent reference computations used by the tests."""

from fractions import Fraction
from itertools import product
from math import gcd


def sylvester_resultant(p: list, q: list) -> Fraction:
    """Resultant from the Sylvester matrix via fraction-free Bareiss elimination.

    p and q are coefficient lists, lowest degree first.
    """
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(p)):
            row[i + j] = Fraction(c)
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(q)):
            row[i + j] = Fraction(c)
        rows.append(row)
    return _det(rows)


def _det(a: list) -> Fraction:
    a = [r[:] for r in a]
    n = len(a)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def order_n_pairs(n: int) -> int:
    """Number of elements of exact order n in (Z/n)^2, by enumeration."""
    count = 0
    for a, b in product(range(n), repeat=2):
        if gcd(gcd(a, b), n) == 1:
            count += 1
    return count
