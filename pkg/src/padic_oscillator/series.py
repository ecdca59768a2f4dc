"""Dense truncated power series with exact rational coefficients.

A series of order N stores the N+1 coefficients a_0..a_N.  Binary
operations truncate to the smaller operand order, which is the order
through which the result's coefficients are trustworthy; ``mul_full``
keeps the whole polynomial product for the places where exact endpoint
evaluation matters more than tail hygiene.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Union

Scalar = Union[Fraction, int]


def _frac(x: Scalar) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class RationalSeries:
    coeffs: tuple[Fraction, ...]
    var: str = "t"

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(_frac(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("a series needs at least the constant coefficient")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_coeffs(cls, values: Iterable[Scalar], order: int | None = None, var: str = "t") -> "RationalSeries":
        coeffs = [_frac(v) for v in values]
        if order is not None:
            if order + 1 < len(coeffs):
                coeffs = coeffs[: order + 1]
            else:
                coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        return cls(tuple(coeffs), var)

    @classmethod
    def constant(cls, value: Scalar, order: int, var: str = "t") -> "RationalSeries":
        return cls.from_coeffs([value], order=order, var=var)

    @classmethod
    def identity(cls, order: int, var: str = "t") -> "RationalSeries":
        return cls.from_coeffs([0, 1], order=order, var=var)

    # -- basic queries ------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n <= self.order else Fraction(0)

    def is_zero_through(self, n: int) -> bool:
        return all(c == 0 for c in self.coeffs[: n + 1])

    def truncate(self, order: int) -> "RationalSeries":
        if order > self.order:
            raise ValueError("truncation cannot extend a series")
        return RationalSeries(self.coeffs[: order + 1], self.var)

    # -- ring structure ----------------------------------------------

    def _align(self, other: "RationalSeries") -> int:
        if self.var != other.var:
            raise ValueError("variable mismatch")
        return min(self.order, other.order)

    def __add__(self, other: "RationalSeries | Scalar") -> "RationalSeries":
        if not isinstance(other, RationalSeries):
            other = RationalSeries.constant(other, self.order, self.var)
        n = self._align(other)
        return RationalSeries(
            tuple(self.coeffs[k] + other.coeffs[k] for k in range(n + 1)), self.var
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalSeries":
        return RationalSeries(tuple(-c for c in self.coeffs), self.var)

    def __sub__(self, other: "RationalSeries | Scalar") -> "RationalSeries":
        if not isinstance(other, RationalSeries):
            other = RationalSeries.constant(other, self.order, self.var)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "RationalSeries":
        return (-self) + other

    def scale(self, factor: Scalar) -> "RationalSeries":
        f = _frac(factor)
        return RationalSeries(tuple(f * c for c in self.coeffs), self.var)

    def __mul__(self, other: "RationalSeries | Scalar") -> "RationalSeries":
        if not isinstance(other, RationalSeries):
            return self.scale(other)
        n = self._align(other)
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return RationalSeries(tuple(out), self.var)

    __rmul__ = __mul__

    def mul_full(self, other: "RationalSeries") -> "RationalSeries":
        """Exact polynomial product: no truncation, order = sum of orders."""
        if self.var != other.var:
            raise ValueError("variable mismatch")
        out = [Fraction(0)] * (self.order + other.order + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] += a * b
        return RationalSeries(tuple(out), self.var)

    def __truediv__(self, other: "RationalSeries | Scalar") -> "RationalSeries":
        if not isinstance(other, RationalSeries):
            return self.scale(Fraction(1) / _frac(other))
        n = self._align(other)
        if other.coeffs[0] == 0:
            raise ZeroDivisionError("constant term of the divisor vanishes")
        out: list[Fraction] = []
        for k in range(n + 1):
            acc = self.coeffs[k]
            for i in range(k):
                acc -= out[i] * other.coeffs[k - i]
            out.append(acc / other.coeffs[0])
        return RationalSeries(tuple(out), self.var)

    def __rtruediv__(self, other: Scalar) -> "RationalSeries":
        return RationalSeries.constant(other, self.order, self.var) / self

    # -- calculus -----------------------------------------------------

    def differentiate(self) -> "RationalSeries":
        if self.order == 0:
            return RationalSeries((Fraction(0),), self.var)
        return RationalSeries(
            tuple(Fraction(k) * self.coeffs[k] for k in range(1, self.order + 1)), self.var
        )

    def integrate(self, constant: Scalar = 0) -> "RationalSeries":
        out = [_frac(constant)]
        out.extend(self.coeffs[k] / (k + 1) for k in range(self.order + 1))
        return RationalSeries(tuple(out), self.var)

    def compose(self, inner: "RationalSeries") -> "RationalSeries":
        """self(inner(t)); the inner series must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("composition requires a vanishing inner constant term")
        n = min(self.order, inner.order)
        out = [Fraction(0)] * (n + 1)
        out[0] = self.coeffs[0]
        power = [Fraction(1)] + [Fraction(0)] * n  # running inner**k, truncated
        for k in range(1, n + 1):
            nxt = [Fraction(0)] * (n + 1)
            for i, a in enumerate(power):
                if a == 0:
                    continue
                for j in range(n + 1 - i):
                    b = inner.coeffs[j]
                    if b:
                        nxt[i + j] += a * b
            power = nxt
            ak = self.coeffs[k]
            if ak:
                for idx in range(n + 1):
                    if power[idx]:
                        out[idx] += ak * power[idx]
        return RationalSeries(tuple(out), self.var)

    def evaluate(self, point: Scalar) -> Fraction:
        """Exact partial-sum evaluation (Horner)."""
        t = _frac(point)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __str__(self) -> str:
        terms = [f"({c}){self.var}^{k}" for k, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


# -- standard expansions ---------------------------------------------


def sin_series(order: int, var: str = "t") -> RationalSeries:
    coeffs = [
        Fraction((-1) ** (k // 2), factorial(k)) if k % 2 else Fraction(0)
        for k in range(order + 1)
    ]
    return RationalSeries.from_coeffs(coeffs, order=order, var=var)


def cos_series(order: int, var: str = "t") -> RationalSeries:
    coeffs = [
        Fraction((-1) ** (k // 2), factorial(k)) if k % 2 == 0 else Fraction(0)
        for k in range(order + 1)
    ]
    return RationalSeries.from_coeffs(coeffs, order=order, var=var)


def exp_series(order: int, var: str = "t") -> RationalSeries:
    return RationalSeries.from_coeffs(
        [Fraction(1, factorial(k)) for k in range(order + 1)], order=order, var=var
    )


def log1p_series(order: int, var: str = "t") -> RationalSeries:
    """log(1 + t)."""
    coeffs = [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, order + 1)]
    return RationalSeries.from_coeffs(coeffs, order=order, var=var)


def atan_series(order: int, var: str = "t") -> RationalSeries:
    coeffs = [
        Fraction((-1) ** (k // 2), k) if k % 2 else Fraction(0) for k in range(order + 1)
    ]
    return RationalSeries.from_coeffs(coeffs, order=order, var=var)


def binomial_series(exponent: Scalar, order: int, scale: Scalar = 1, var: str = "t") -> RationalSeries:
    """(1 + scale*t)**exponent for a rational exponent."""
    e = _frac(exponent)
    s = _frac(scale)
    coeffs = [Fraction(1)]
    for n in range(1, order + 1):
        coeffs.append(coeffs[-1] * (e - n + 1) / n * s)
    return RationalSeries.from_coeffs(coeffs, order=order, var=var)
