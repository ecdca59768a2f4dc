"""Exact arithmetic over the rationals and their p-adic norms.

Everything in this module is exact: inputs and outputs are
``fractions.Fraction`` values, digit vectors, or rational character
angles.  Floating point appears only when a :class:`UnitPhase` or a
:class:`HalfPower` is rendered as a ``complex``/``float`` at the very
end of a computation.

Conventions
-----------
* ``padic_norm(x, p) == Fraction(p) ** -padic_valuation(x, p)`` with
  ``padic_norm(0, p) == 0``.
* ``fractional_part(u, p)`` is the unique rational ``k / p**m`` in
  ``[0, 1)`` with ``u - k/p**m`` a p-adic integer.
* ``chi(u, p)`` is the additive character ``exp(2*pi*i*{u}_p)`` kept as
  an exact angle.  The real-place character ``exp(-2*pi*i*u)`` is
  handled by the propagator layer with the same :class:`UnitPhase`
  container.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

#: default digit count for canonical expansions and square roots
DEFAULT_DIGITS = 32

_PRIME_CACHE: set[int] = set()


def is_prime(n: int) -> bool:
    if n in _PRIME_CACHE:
        return True
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    _PRIME_CACHE.add(n)
    return True


def primes_upto(limit: int) -> list[int]:
    """All primes <= limit, by sieve."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for q in range(2, int(limit**0.5) + 1):
        if flags[q]:
            flags[q * q :: q] = bytearray(len(flags[q * q :: q]))
    return [q for q in range(limit + 1) if flags[q]]


def _require_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"not a prime: {p!r}")


def prime_power(p: int, k: int) -> Fraction:
    """p**k as an exact Fraction, k may be negative."""
    return Fraction(p**k) if k >= 0 else Fraction(1, p**-k)


def padic_valuation(x: Fraction | int, p: int) -> int | float:
    """Exponent of p in x; +inf for x == 0."""
    _require_prime(p)
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    num = x.numerator
    while num % p == 0:
        num //= p
        v += 1
    if v:
        return v
    den = x.denominator
    while den % p == 0:
        den //= p
        v -= 1
    return v


def padic_norm(x: Fraction | int, p: int) -> Fraction:
    """|x|_p as an exact Fraction (a power of p, or 0 for x == 0)."""
    v = padic_valuation(x, p)
    if v == math.inf:
        return Fraction(0)
    return prime_power(p, -int(v))


def fractional_part(u: Fraction | int, p: int) -> Fraction:
    """{u}_p: the p-power-denominator representative of u modulo Z_p in [0, 1)."""
    u = Fraction(u)
    v = padic_valuation(u, p)
    if v >= 0:  # covers u == 0, where v is +inf
        return Fraction(0)
    m = -int(v)
    pm = p**m
    unit = u * pm  # numerator and denominator now both coprime to p
    k = unit.numerator * pow(unit.denominator, -1, pm) % pm
    return Fraction(k, pm)


def omega(norm: Fraction | int) -> int:
    """Indicator of the unit ball: 1 if norm <= 1 else 0."""
    return 1 if norm <= 1 else 0


@dataclass(frozen=True)
class UnitPhase:
    """A point on the unit circle with exact rational angle.

    The represented value is ``exp(2*pi*i*angle)``; multiplication of
    phases is addition of angles mod 1 and stays exact.
    """

    angle: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "angle", Fraction(self.angle) % 1)

    def __mul__(self, other: "UnitPhase") -> "UnitPhase":
        return UnitPhase(self.angle + other.angle)

    def conjugate(self) -> "UnitPhase":
        return UnitPhase(-self.angle)

    def to_complex(self) -> complex:
        theta = 2.0 * math.pi * (self.angle.numerator / self.angle.denominator)
        return complex(math.cos(theta), math.sin(theta))


PHASE_ONE = UnitPhase(Fraction(0))


def chi(u: Fraction | int, p: int) -> UnitPhase:
    """Rank-zero additive character of Q_p evaluated at u, as an exact phase."""
    return UnitPhase(fractional_part(u, p))


@dataclass(frozen=True)
class HalfPower:
    """An exact value base**exponent with exponent a half-integer.

    Used for the magnitudes |.|_v**(1/2) that appear in quadratic
    integrals: the base/exponent pair is exact, only ``value()`` rounds.
    """

    base: Fraction
    exponent: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", Fraction(self.base))
        object.__setattr__(self, "exponent", Fraction(self.exponent))
        if self.exponent.denominator not in (1, 2):
            raise ValueError("exponent must be integer or half-integer")
        if self.base <= 0:
            raise ValueError("base must be positive")

    def value(self) -> float:
        whole = self.base ** (self.exponent.numerator // self.exponent.denominator)
        rem = self.exponent - self.exponent.numerator // self.exponent.denominator
        out = whole.numerator / whole.denominator
        if rem:
            out *= math.sqrt(self.base.numerator / self.base.denominator)
        return out

    def __mul__(self, other: "HalfPower") -> "HalfPower":
        if other.base == self.base:
            return HalfPower(self.base, self.exponent + other.exponent)
        raise ValueError("cannot merge half powers with different bases")

    def to_json(self) -> dict:
        return {"base": frac_str(self.base), "exponent": frac_str(self.exponent)}


@dataclass(frozen=True)
class PAdicApprox:
    """Truncated canonical digit expansion p**valuation * sum(d_i p**i).

    ``digits[0] != 0`` unless the value is exactly zero; all digits lie
    in ``range(p)``.
    """

    prime: int
    valuation: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        _require_prime(self.prime)
        object.__setattr__(self, "digits", tuple(self.digits))
        if not self.digits:
            raise ValueError("at least one digit required")
        if any(not 0 <= d < self.prime for d in self.digits):
            raise ValueError("digits out of range")
        if self.digits[0] == 0 and any(self.digits):
            raise ValueError("leading digit must be nonzero")

    @property
    def precision(self) -> int:
        return len(self.digits)

    def to_rational(self) -> Fraction:
        acc = 0
        for d in reversed(self.digits):
            acc = acc * self.prime + d
        return prime_power(self.prime, self.valuation) * acc

    def to_json(self) -> dict:
        return {"p": self.prime, "valuation": self.valuation, "digits": list(self.digits)}

    def __str__(self) -> str:
        body = " ".join(str(d) for d in self.digits)
        return f"({body}) * {self.prime}^{self.valuation}"


def _digits_of(n: int, p: int, count: int) -> tuple[int, ...]:
    out = []
    for _ in range(count):
        out.append(n % p)
        n //= p
    return tuple(out)


def canonical_expansion(x: Fraction | int, p: int, digits: int = DEFAULT_DIGITS) -> PAdicApprox:
    """First ``digits`` coefficients of the canonical p-adic expansion of x.

    The reconstruction ``result.to_rational()`` differs from x by a
    p-adic norm of at most ``p**-(valuation + digits)``.
    """
    _require_prime(p)
    if digits < 1:
        raise ValueError("need at least one digit")
    x = Fraction(x)
    if x == 0:
        return PAdicApprox(p, 0, (0,) * digits)
    v = int(padic_valuation(x, p))
    unit = x / prime_power(p, v)
    m = p**digits
    r = unit.numerator * pow(unit.denominator, -1, m) % m
    return PAdicApprox(p, v, _digits_of(r, p, digits))


def padic_sqrt(x: Fraction | int, p: int, digits: int = DEFAULT_DIGITS) -> PAdicApprox | None:
    """A square root of x in Q_p to ``digits`` digits, or None if none exists.

    Existence: the valuation must be even and the unit part a square
    (for odd p a quadratic residue mod p; for p = 2 congruent 1 mod 8).
    Of the two roots the one whose leading digit is at most (p-1)/2 is
    returned; for p = 2, where both roots lead with digit 1, the root
    congruent 1 mod 4.
    """
    _require_prime(p)
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no unit digit expansion")
    v = padic_valuation(x, p)
    if v % 2:
        return None
    unit = x / prime_power(p, int(v))

    if p == 2:
        work = digits + 2
        modulus = 1 << work
        u = unit.numerator * pow(unit.denominator, -1, modulus) % modulus
        if u % 8 != 1:
            return None
        root = 1
        for k in range(3, work):
            if (root * root - u) % (1 << (k + 1)):
                root += 1 << (k - 1)
        if root % 4 != 1:
            root = modulus - root
        root %= 1 << digits
    else:
        u0 = unit.numerator * pow(unit.denominator, -1, p) % p
        if pow(u0, (p - 1) // 2, p) != 1:
            return None
        root = next(r for r in range(1, p) if r * r % p == u0)
        k = 1
        while k < digits:
            k = min(2 * k, digits)
            modulus = p**k
            u = unit.numerator * pow(unit.denominator, -1, modulus) % modulus
            root = (root + u * pow(root, -1, modulus)) * pow(2, -1, modulus) % modulus
        if root % p > (p - 1) // 2:
            root = p**digits - root

    return PAdicApprox(p, int(v) // 2, _digits_of(root, p, digits))


def real_norm(x: Fraction | int) -> Fraction:
    """|x| at the archimedean place, exact."""
    return abs(Fraction(x))


def frac_str(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse 'n' or 'n/d' with optional sign; rejects floats and spaces."""
    body = text.strip()
    sign = 1
    if body.startswith(("+", "-")):
        sign = -1 if body[0] == "-" else 1
        body = body[1:]
    if "/" in body:
        num, _, den = body.partition("/")
        if not (num.isdigit() and den.isdigit() and int(den) != 0):
            raise ValueError(f"not a rational literal: {text!r}")
        return Fraction(sign * int(num), int(den))
    if not body.isdigit():
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(sign * int(body))
