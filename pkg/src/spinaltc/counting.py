"""Exact counters for spinal tree-child networks and their word classes.

Every function returns an :class:`ExactCount` (a plain ``int`` subclass that
remembers how the value was obtained).  Arguments outside the combinatorial
range (k too large) give 0; negative arguments raise ``ValueError``.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Iterable

from .series import BiSeries, sqrt_series


class ExactCount(int):
    provenance: str

    def __new__(cls, value: int, provenance: str = "formula"):
        if value < 0:
            raise ValueError(f"negative count {value}")
        obj = super().__new__(cls, value)
        obj.provenance = provenance
        return obj

    def __repr__(self):
        return f"ExactCount({int(self)}, {self.provenance!r})"


def _check(n: int, k: int, n_min: int = 0) -> None:
    if n < n_min or k < 0:
        raise ValueError(f"parameters out of range: n={n}, k={k} (need n >= {n_min}, k >= 0)")


def _ratio(num: list[int], den: list[int]) -> int:
    """prod(num)! / prod(den)! -style quotient; raises if it is not an integer."""
    top = 1
    for x in num:
        top *= x
    bottom = 1
    for x in den:
        bottom *= x
    q, r = divmod(top, bottom)
    if r:
        raise ArithmeticError(f"{top}/{bottom} is not an integer")
    return q


def count_bessel(n: int, k: int) -> ExactCount:
    """|B_{n,k}| = (n+k)! / (2^k (n-k)! k!), partitions of an (n+k)-set into k pairs."""
    _check(n, k)
    if k > n:
        return ExactCount(0)
    return ExactCount(_ratio([factorial(n + k)], [2 ** k, factorial(n - k), factorial(k)]))


def count_c1_classes(n: int, k: int) -> ExactCount:
    return count_bessel(n, k)


def count_c2_classes(n: int, k: int) -> ExactCount:
    """binom(n+2k, n-k) (2k)! / (2^k k!)."""
    _check(n, k)
    if k > n:
        return ExactCount(0)
    return ExactCount(comb(n + 2 * k, n - k) * _ratio([factorial(2 * k)], [2 ** k, factorial(k)]))


def count_nlstc(n: int, k: int) -> ExactCount:
    _check(n, k, 1)
    if k > n - 1:
        return ExactCount(0)
    return ExactCount(_ratio([factorial(n - 1 + k)], [2 ** k, factorial(n - 1 - k), factorial(k)]))


def count_nlsctc(n: int, k: int) -> ExactCount:
    _check(n, k, 1)
    if k > n - 1:
        return ExactCount(0)
    return ExactCount(comb(n - 1 + 2 * k, n - 1 - k) * _ratio([factorial(2 * k)], [2 ** k, factorial(k)]))


def count_stc(n: int, k: int) -> ExactCount:
    """n! (n-2+k)! (n-1+3k) / (2^{k+1} k! (n-1-k)!), with the boundary value 1 at n = 1."""
    _check(n, k, 1)
    if n == 1:
        return ExactCount(1)
    if k > n - 1:
        return ExactCount(0)
    return ExactCount(_ratio(
        [factorial(n), factorial(n - 2 + k), n - 1 + 3 * k],
        [2 ** (k + 1), factorial(k), factorial(n - 1 - k)],
    ))


def count_stc_factored(n: int, k: int) -> ExactCount:
    """The same count written as n!(n+k-2)!(n+3k-1) / (2^{k+1} k! (n-k-1)!)."""
    _check(n, k, 2)
    if k > n - 1:
        return ExactCount(0)
    return ExactCount(_ratio(
        [factorial(n), factorial(n + k - 2), n + 3 * k - 1],
        [2 ** (k + 1), factorial(k), factorial(n - k - 1)],
    ))


def count_stc_via_unlabeled(n: int, k: int) -> ExactCount:
    """n! |NLSTC_{n,k}| - (n!/2) |NLSTC_{n-1,k}|."""
    _check(n, k, 2)
    value = factorial(n) * count_nlstc(n, k) - (factorial(n) // 2) * count_nlstc(n - 1, k)
    return ExactCount(value, "relation")


def s_coef(n: int, k: int) -> ExactCount:
    """Number of leaf-labeled marked trees with n leaves and k labeled elementary vertices.

    s_{n,0} = 0, matching S(x, 0) = 0.
    """
    _check(n, k)
    if k == 0 or n < k:
        return ExactCount(0)
    return ExactCount(_ratio(
        [factorial(n), factorial(n + k - 2)],
        [2 ** (k - 1), factorial(k - 1), factorial(n - k)],
    ))


def d_coef(n: int, k: int) -> ExactCount:
    """Leaf-unlabeled marked trees: s_{n,k} / n!."""
    _check(n, k)
    if k == 0 or n < k:
        return ExactCount(0)
    return ExactCount(_ratio([factorial(n + k - 2)], [2 ** (k - 1), factorial(k - 1), factorial(n - k)]))


def count_stc_via_marked(n: int, k: int) -> ExactCount:
    """(n/2) s_{n-1,k+1} + n (n+k-2) s_{n-1,k}: cherry plus non-cherry networks."""
    _check(n, k, 2)
    value = Fraction(n, 2) * s_coef(n - 1, k + 1) + n * (n + k - 2) * s_coef(n - 1, k)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral marked-tree count {value}")
    return ExactCount(int(value), "relation")


def count_nlstc_via_marked(n: int, k: int) -> ExactCount:
    """d_{n-1,k+1} + (n+k-2) d_{n-1,k}."""
    _check(n, k, 2)
    return ExactCount(d_coef(n - 1, k + 1) + (n + k - 2) * d_coef(n - 1, k), "relation")


FAMILIES: dict[str, Callable[[int, int], ExactCount]] = {
    "stc": count_stc,
    "nlstc": count_nlstc,
    "nlsctc": count_nlsctc,
    "c1": count_c1_classes,
    "c2": count_c2_classes,
    "bessel": count_bessel,
    "s": s_coef,
    "d": d_coef,
}

MIN_N = {"stc": 1, "nlstc": 1, "nlsctc": 1}


def count_table(family: str, max_n: int, max_k: int) -> list[tuple[int, int, ExactCount]]:
    fn = FAMILIES[family]
    lo = MIN_N.get(family, 0)
    return [(n, k, fn(n, k)) for n in range(lo, max_n + 1) for k in range(max_k + 1)]


def table_csv(rows: Iterable[tuple[int, int, ExactCount]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "k", "value", "provenance"])
    for n, k, value in rows:
        writer.writerow([n, k, int(value), getattr(value, "provenance", "formula")])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# generating function S(x, z) = 1 - x - sqrt((1 - x)^2 - 2xz)
# ---------------------------------------------------------------------------

def series_expand_s(max_n: int, max_k: int) -> BiSeries:
    """Exact Taylor coefficients of S through x^max_n z^max_k."""
    if max_n < 1 or max_k < 1:
        raise ValueError("series caps must be at least 1")
    x = BiSeries.variable(0, max_n, max_k)
    z = BiSeries.variable(1, max_n, max_k)
    one = BiSeries.constant(1, max_n, max_k)
    radicand = (one - x) * (one - x) - 2 * x * z
    return one - x - sqrt_series(radicand)


def check_ode_residual(s: BiSeries) -> bool:
    """True iff dS/dz * (1 - x - S) - x vanishes wherever the truncation determines it.

    Differentiating in z loses the top z-degree, so the residual is checked
    for x-degree <= max_n and z-degree < max_k.
    """
    one = BiSeries.constant(1, s.max_n, s.max_k)
    x = BiSeries.variable(0, s.max_n, s.max_k)
    residual = s.dz() * (one - x - s) - x
    return all(residual[i, j] == 0 for i in range(s.max_n + 1) for j in range(s.max_k))


def series_coefficient_as_count(s: BiSeries, n: int, k: int) -> Fraction:
    """n! k! [x^n z^k] S, which should reproduce s_{n,k}."""
    return s[n, k] * factorial(n) * factorial(k)


def double_factorial_odd(m: int) -> int:
    """(2m-3)!!, with the empty product 1 for m = 1."""
    out = 1
    for j in range(2 * m - 3, 0, -2):
        out *= j
    return out


def derivative_row(m: int, max_n: int) -> list[Fraction]:
    """Coefficients of x^0..x^max_n in (2m-3)!! x^m / (1-x)^{2m-1}."""
    c = double_factorial_odd(m)
    return [Fraction(c * comb(n + m - 2, 2 * m - 2)) if n >= m else Fraction(0) for n in range(max_n + 1)]
