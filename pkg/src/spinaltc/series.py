"""Truncated bivariate power series with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction


class BiSeries:
    """Coefficients c[i][j] of x^i z^j for i <= max_n, j <= max_k."""

    def __init__(self, coeffs, max_n: int, max_k: int):
        self.max_n = max_n
        self.max_k = max_k
        self.c = [[Fraction(coeffs[i][j]) for j in range(max_k + 1)] for i in range(max_n + 1)]

    @classmethod
    def zero(cls, max_n, max_k):
        return cls([[0] * (max_k + 1) for _ in range(max_n + 1)], max_n, max_k)

    @classmethod
    def constant(cls, value, max_n, max_k):
        s = cls.zero(max_n, max_k)
        s.c[0][0] = Fraction(value)
        return s

    @classmethod
    def variable(cls, which: int, max_n, max_k):
        s = cls.zero(max_n, max_k)
        if which == 0 and max_n >= 1:
            s.c[1][0] = Fraction(1)
        elif which == 1 and max_k >= 1:
            s.c[0][1] = Fraction(1)
        return s

    def __getitem__(self, ij):
        i, j = ij
        return self.c[i][j]

    def _like(self, other):
        if (self.max_n, self.max_k) != (other.max_n, other.max_k):
            raise ValueError("series truncated at different orders")

    def __add__(self, other):
        if not isinstance(other, BiSeries):
            other = BiSeries.constant(other, self.max_n, self.max_k)
        self._like(other)
        return BiSeries([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.c, other.c)],
                        self.max_n, self.max_k)

    __radd__ = __add__

    def __neg__(self):
        return BiSeries([[-a for a in row] for row in self.c], self.max_n, self.max_k)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, BiSeries):
            f = Fraction(other)
            return BiSeries([[a * f for a in row] for row in self.c], self.max_n, self.max_k)
        self._like(other)
        out = [[Fraction(0)] * (self.max_k + 1) for _ in range(self.max_n + 1)]
        for i1, row1 in enumerate(self.c):
            for j1, a in enumerate(row1):
                if not a:
                    continue
                for i2 in range(self.max_n + 1 - i1):
                    row2 = other.c[i2]
                    out_row = out[i1 + i2]
                    for j2 in range(self.max_k + 1 - j1):
                        b = row2[j2]
                        if b:
                            out_row[j1 + j2] += a * b
        return BiSeries(out, self.max_n, self.max_k)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, BiSeries) and self.c == other.c

    def dz(self):
        """Derivative in z; the top z-coefficient becomes undetermined and is set to 0."""
        out = [[(j + 1) * row[j + 1] if j < self.max_k else Fraction(0) for j in range(self.max_k + 1)]
               for row in self.c]
        return BiSeries(out, self.max_n, self.max_k)

    def degree(self) -> int:
        return self.max_n + self.max_k


def inverse_series(f: BiSeries) -> BiSeries:
    """1/f by Newton iteration g <- g (2 - f g); needs f(0, 0) != 0."""
    if f[0, 0] == 0:
        raise ZeroDivisionError("series has zero constant term")
    g = BiSeries.constant(1 / f[0, 0], f.max_n, f.max_k)
    for _ in range(_newton_steps(f)):
        g = g * (2 - f * g)
    return g


def sqrt_series(f: BiSeries) -> BiSeries:
    """Square root with constant term 1 by Newton iteration g <- (g + f/g) / 2."""
    if f[0, 0] != 1:
        raise ValueError("sqrt_series expects constant term 1")
    g = BiSeries.constant(1, f.max_n, f.max_k)
    for _ in range(_newton_steps(f)):
        g = (g + f * inverse_series(g)) * Fraction(1, 2)
    return g


def _newton_steps(f: BiSeries) -> int:
    # each step doubles the number of correct total degrees
    steps, prec = 0, 1
    while prec <= f.degree():
        prec *= 2
        steps += 1
    return steps + 1
