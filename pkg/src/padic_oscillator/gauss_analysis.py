"""Quadratic character integrals over p-adic balls.

Evaluates I(alpha, beta, nu) = integral over |x|_p <= p^nu of
chi_p(alpha*x^2 + beta*x) dx three ways:

* a two-branch closed form (small-alpha branch and stationary-phase
  branch with the unimodular factor lambda_p),
* an independent brute-force coset sum with exact phase bookkeeping,
* and, for the unimodular factor itself, a normalized oracle sum.

Haar measure is normalized so the unit ball has measure 1.  The brute
force sum collects exact rational angles (denominator a power of p)
into a histogram and converts to floating point once, at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DepthTooSmallError, IndeterminateBranchError
from .exact_numbers import (
    PHASE_ONE,
    HalfPower,
    UnitPhase,
    _require_prime,
    chi,
    frac_str,
    omega,
    padic_norm,
    padic_valuation,
    prime_power,
)

# Above this modulus the vectorized histogram would need too much memory;
# fall back to a plain python loop.
_VECTOR_LIMIT = 1 << 21


@dataclass(frozen=True)
class GaussIntegralSpec:
    """Integral of chi_p(alpha*x^2 + beta*x) over the ball |x|_p <= p^ball_exponent."""

    prime: int
    alpha: Fraction
    beta: Fraction
    ball_exponent: int = 0

    def __post_init__(self) -> None:
        _require_prime(self.prime)
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))


@dataclass(frozen=True)
class AmplitudeValue:
    """Closed-form integral value split into exact factors.

    ``magnitude`` is None when an indicator factor vanished and the
    whole integral is exactly 0.  Otherwise the value is
    magnitude * lambda_factor * phase with both phases exact.
    """

    branch: int
    magnitude: HalfPower | None
    phase: UnitPhase
    lambda_factor: UnitPhase

    @property
    def value(self) -> complex:
        if self.magnitude is None:
            return 0j
        return self.magnitude.value() * (self.lambda_factor * self.phase).to_complex()

    def to_json(self) -> dict:
        v = self.value
        return {
            "branch": self.branch,
            "magnitude": None if self.magnitude is None else self.magnitude.to_json(),
            "phase_angle": frac_str(self.phase.angle),
            "lambda_angle": frac_str(self.lambda_factor.angle),
            "value": {"re": v.real, "im": v.imag},
        }


def branch_of(spec: GaussIntegralSpec) -> int:
    """Which closed-form branch applies: 1 (flat) or 2 (stationary phase).

    For p = 2 the two conditions |alpha| <= p^(-2 nu) and |4 alpha| > p^(-2 nu)
    leave a two-valuation-wide gap where neither applies; that gap raises
    IndeterminateBranchError and callers fall back to the brute-force oracle.
    """
    if spec.alpha == 0:
        return 1
    v_alpha = padic_valuation(spec.alpha, spec.prime)
    target = 2 * spec.ball_exponent
    if v_alpha >= target:
        return 1
    if v_alpha + padic_valuation(4, spec.prime) < target:
        return 2
    raise IndeterminateBranchError(
        f"p={spec.prime}: |alpha|_p in the uncovered band between the branch "
        f"conditions (valuation {v_alpha}, ball exponent {spec.ball_exponent})"
    )


def gauss_closed_form(spec: GaussIntegralSpec) -> AmplitudeValue:
    p, alpha, beta, nu = spec.prime, spec.alpha, spec.beta, spec.ball_exponent
    branch = branch_of(spec)
    if branch == 1:
        # ball measure times the indicator that beta pairs trivially with it
        if omega(prime_power(p, nu) * padic_norm(beta, p)) == 0:
            return AmplitudeValue(1, None, PHASE_ONE, PHASE_ONE)
        return AmplitudeValue(1, HalfPower(Fraction(p), Fraction(nu)), PHASE_ONE, PHASE_ONE)
    lam = lambda_p(alpha, p)
    if omega(prime_power(p, -nu) * padic_norm(beta / (2 * alpha), p)) == 0:
        return AmplitudeValue(2, None, PHASE_ONE, lam)
    v2a = padic_valuation(2 * alpha, p)
    magnitude = HalfPower(Fraction(p), Fraction(v2a, 2))  # |2 alpha|_p**(-1/2)
    phase = chi(-beta * beta / (4 * alpha), p)
    return AmplitudeValue(branch, magnitude, phase, lam)


def local_constancy_depth(spec: GaussIntegralSpec) -> int:
    """Smallest m such that the integrand is constant on cosets of p^m Z_p.

    Constancy requires |2 alpha x eps|, |alpha eps^2| and |beta eps| all
    <= 1 for x in the ball and eps in p^m Z_p, plus m >= -nu so the
    sample grid is at least as fine as the ball itself.
    """
    p, alpha, beta, nu = spec.prime, spec.alpha, spec.beta, spec.ball_exponent
    bounds = [0, -nu]
    if alpha:
        v_alpha = padic_valuation(alpha, p)
        bounds.append(nu - padic_valuation(2 * alpha, p))
        bounds.append(-(v_alpha // 2))  # ceil(-v_alpha / 2)
    if beta:
        bounds.append(-padic_valuation(beta, p))
    return max(bounds)


def _mod_reduce(x: Fraction, modulus: int) -> int:
    """x mod modulus for a rational with denominator prime to the modulus."""
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


def phase_histogram(spec: GaussIntegralSpec, depth: int) -> tuple[int, dict[int, int], Fraction]:
    """Exact multiset of phase angles for the coset sum at the given depth.

    Returns (modulus M, counts {k: multiplicity}, weight) such that the
    integral equals weight * sum_k counts[k] * exp(2 pi i k / M).  The sum
    over all p^(nu+depth) sample cosets x_j = j * p^(-nu) is folded by the
    exact periodicity of the angle in j mod M, which multiplies every count
    by the same power of p.
    """
    p, alpha, beta, nu = spec.prime, spec.alpha, spec.beta, spec.ball_exponent
    floor = local_constancy_depth(spec)
    if depth < floor:
        raise DepthTooSmallError(
            f"depth {depth} below the local-constancy requirement {floor}"
        )
    samples_exp = nu + depth  # ball splits into p**samples_exp sample cosets
    angle_exp = [0]
    if alpha:
        angle_exp.append(2 * nu - padic_valuation(alpha, p))
    if beta:
        angle_exp.append(nu - padic_valuation(beta, p))
    level = max(angle_exp)
    modulus = p**level
    a_red = _mod_reduce(alpha * prime_power(p, level - 2 * nu), modulus) if alpha else 0
    b_red = _mod_reduce(beta * prime_power(p, level - nu), modulus) if beta else 0
    # depth >= floor guarantees samples_exp >= level
    fold = p ** (samples_exp - level)
    if modulus <= _VECTOR_LIMIT:
        j = np.arange(modulus, dtype=np.int64)
        k = ((a_red * j) % modulus * j + b_red * j) % modulus
        raw = np.bincount(k, minlength=modulus)
        counts = {int(key): int(raw[key]) * fold for key in np.nonzero(raw)[0]}
    else:
        counts = {}
        for j in range(modulus):
            k = ((a_red * j) % modulus * j + b_red * j) % modulus
            counts[k] = counts.get(k, 0) + fold
    weight = prime_power(p, -depth)
    return modulus, counts, weight


def gauss_brute_force(spec: GaussIntegralSpec, depth: int | None = None) -> complex:
    """Coset-sum value of the integral; exact up to one final float rendering."""
    if depth is None:
        depth = local_constancy_depth(spec)
    modulus, counts, weight = phase_histogram(spec, depth)
    total = 0j
    for k, count in counts.items():
        theta = 2.0 * math.pi * k / modulus
        total += count * complex(math.cos(theta), math.sin(theta))
    return total * (weight.numerator / weight.denominator)


# The unimodular factor depends on alpha only through its square class,
# i.e. on the parity of the valuation and the unit residue (mod p for odd
# p, mod 8 for p = 2).  The cache key encodes exactly that.  Concurrent
# writers at worst duplicate a computation of the same value.
_LAMBDA_CACHE: dict[tuple[int, int, int], UnitPhase] = {}


def lambda_p(alpha: Fraction, p: int) -> UnitPhase:
    """Unimodular factor of the stationary-phase branch, an 8th root of unity.

    Computed operationally: brute-force the pure-quadratic integral over a
    ball large enough for the stationary-phase branch, then strip the known
    magnitude |2 alpha|_p**(-1/2) and snap the remaining unit complex
    number to the nearest exact phase.
    """
    _require_prime(p)
    alpha = Fraction(alpha)
    if alpha == 0:
        return PHASE_ONE
    v_alpha = padic_valuation(alpha, p)
    unit = alpha / prime_power(p, v_alpha)
    key = (p, v_alpha % 2, _mod_reduce(unit, 8 if p == 2 else p))
    cached = _LAMBDA_CACHE.get(key)
    if cached is not None:
        return cached
    v4a = padic_valuation(4 * alpha, p)
    spec = GaussIntegralSpec(p, alpha, Fraction(0), v4a // 2 + 1)
    raw = gauss_brute_force(spec)
    v2a = padic_valuation(2 * alpha, p)
    scaled = raw * HalfPower(Fraction(p), Fraction(-v2a, 2)).value()
    best = min(range(8), key=lambda k: abs(scaled - UnitPhase(Fraction(k, 8)).to_complex()))
    result = UnitPhase(Fraction(best, 8))
    drift = abs(scaled - result.to_complex())
    if drift > 1e-6:
        raise ArithmeticError(f"phase snap failed: residual {drift:g}")
    _LAMBDA_CACHE[key] = result
    return result
