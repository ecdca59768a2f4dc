"""Quantum propagator for quadratic actions at the real place and every p-adic place.

The kernel K_v(x_out, x_in) = lambda_v(-B/2h) |B/h|_v^(1/2)
chi_v(-S(x_out, x_in)/h) is assembled from the exact quadratic action
S = A x_out^2 + B x_out x_in + D x_in^2 of the classical module.  The
character convention puts the sign at the real place:
chi_real(u) = exp(-2 pi i u), chi_p(u) = exp(2 pi i {u}_p), so the
real kernel phase angle is +S/h while p-adic angles are {-S/h}_p; both
are exact rationals here.

The composition oracle integrates the product of two kernels over a
p-adic ball by brute force and compares against the direct kernel —
the semigroup property checked with no reference to the closed form
under test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .classical_oscillator import (
    DEFAULT_ORDER,
    AmplitudePhase,
    EndpointData,
    OscillatorModel,
    action_coefficients,
    classical_action,
    endpoint_data,
    solve_amplitude_phase,
)
from .errors import DivergenceError, PrecisionError
from .exact_numbers import (
    PHASE_ONE,
    HalfPower,
    UnitPhase,
    chi,
    fractional_part,
    is_prime,
    padic_valuation,
)
from .gauss_analysis import (
    GaussIntegralSpec,
    gauss_brute_force,
    lambda_p,
    local_constancy_depth,
)

REAL_PLACE = "real"


def _check_place(place) -> None:
    if place == REAL_PLACE:
        return
    if isinstance(place, int) and not isinstance(place, bool) and is_prime(place):
        return
    raise ValueError(f"place must be {REAL_PLACE!r} or a prime, got {place!r}")


def lambda_real(alpha) -> UnitPhase:
    """Real-place unimodular factor (1 - i sign(alpha)) / sqrt(2)."""
    alpha = Fraction(alpha)
    if alpha == 0:
        return PHASE_ONE
    return UnitPhase(Fraction(-1, 8)) if alpha > 0 else UnitPhase(Fraction(1, 8))


@dataclass(frozen=True)
class QuadraticKernel:
    """Propagator data at one place: quadratic action coefficients plus m, h."""

    place: object
    coef_out: Fraction
    coef_cross: Fraction
    coef_in: Fraction
    mass: Fraction = Fraction(1)
    planck: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        _check_place(self.place)
        for name in ("coef_out", "coef_cross", "coef_in", "mass", "planck"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.coef_cross == 0:
            raise ValueError("degenerate kernel: vanishing cross coefficient")
        if self.planck == 0:
            raise ValueError("planck constant must be nonzero")

    @classmethod
    def free(cls, place, duration, mass=1, planck=1) -> "QuadraticKernel":
        """Closed-form free kernel: A = D = m/(2T), B = -m/T."""
        duration = Fraction(duration)
        if duration == 0:
            raise ValueError("free kernel needs a nonzero time interval")
        mass = Fraction(mass)
        half = mass / (2 * duration)
        return cls(place, half, -mass / duration, half, mass, Fraction(planck))

    def action(self, x_out, x_in) -> Fraction:
        x_out, x_in = Fraction(x_out), Fraction(x_in)
        return (self.coef_out * x_out * x_out + self.coef_cross * x_out * x_in
                + self.coef_in * x_in * x_in)


@dataclass(frozen=True)
class KernelValue:
    """One kernel evaluation, split into exact factors."""

    lambda_factor: UnitPhase
    norm: HalfPower
    phase: UnitPhase

    @property
    def complex_value(self) -> complex:
        return self.norm.value() * (self.lambda_factor * self.phase).to_complex()

    def to_json(self) -> dict:
        value = self.complex_value
        return {
            "lambda_angle": f"{self.lambda_factor.angle.numerator}/{self.lambda_factor.angle.denominator}",
            "norm": self.norm.to_json(),
            "phase_angle": f"{self.phase.angle.numerator}/{self.phase.angle.denominator}",
            "value": {"re": value.real, "im": value.imag},
        }


def _is_free(model: OscillatorModel) -> bool:
    return model.freq_sq.is_zero_through(model.freq_sq.order)


def kernel_from_action(place, ap: AmplitudePhase, ep: EndpointData,
                       mass=None, planck=1) -> QuadraticKernel:
    """Kernel coefficients at a place from solved classical data.

    A p-adic place requires the endpoint data to carry its certificate.
    A frequency profile that is identically zero short-circuits to the
    closed-form free kernel, which depends only on the time interval —
    the amplitude/phase frame for the free particle is exact as a
    function but its truncated series would pollute the coefficients.
    """
    _check_place(place)
    mass = ap.model.mass if mass is None else Fraction(mass)
    planck = Fraction(planck)
    if _is_free(ap.model):
        return QuadraticKernel.free(place, ep.t_dprime - ep.t_prime, mass, planck)
    if place != REAL_PLACE and place not in ep.certified:
        raise DivergenceError(f"endpoint data not certified at p={place}")
    coef_out, coef_cross, coef_in = action_coefficients(ap, ep, mass)
    return QuadraticKernel(place, coef_out, coef_cross, coef_in, mass, planck)


def oscillator_kernel(place, model: OscillatorModel, t_prime, t_dprime,
                      planck=1, order: int = DEFAULT_ORDER) -> QuadraticKernel:
    """Convenience: solve the model and build the kernel over [t', t'']."""
    ap = solve_amplitude_phase(model, min(order, model.freq_sq.order + 2))
    primes = () if _is_free(model) or place == REAL_PLACE else (place,)
    ep = endpoint_data(ap, t_prime, t_dprime, 0, 0, primes=primes)
    return kernel_from_action(place, ap, ep, planck=planck)


def evaluate_kernel(kernel: QuadraticKernel, x_out, x_in) -> KernelValue:
    """Exact factor decomposition of K(x_out, x_in) at the kernel's place."""
    action = kernel.action(x_out, x_in)
    scaled_action = action / kernel.planck
    lam_arg = -kernel.coef_cross / (2 * kernel.planck)
    cross_scale = kernel.coef_cross / kernel.planck
    if kernel.place == REAL_PLACE:
        lam = lambda_real(lam_arg)
        norm = HalfPower(abs(cross_scale), Fraction(1, 2))
        phase = UnitPhase(scaled_action)  # chi_real(-S/h) = exp(+2 pi i S/h)
    else:
        p = kernel.place
        lam = lambda_p(lam_arg, p)
        norm = HalfPower(Fraction(p), Fraction(-padic_valuation(cross_scale, p), 2))
        phase = chi(-scaled_action, p)
    return KernelValue(lam, norm, phase)


# ---------------------------------------------------------------------------
# Brute-force semigroup check


@dataclass(frozen=True)
class CompositionReport:
    prime: int
    depth: int
    ball_exponents: tuple[int, ...]
    samples: tuple[tuple[Fraction, Fraction], ...]
    max_deviation: float


def compose_oracle(late: QuadraticKernel, early: QuadraticKernel,
                   direct: QuadraticKernel,
                   samples: Sequence[tuple[Fraction, Fraction]] | None = None,
                   depth: int | None = None) -> CompositionReport:
    """Integrate K_late(x_out, x) K_early(x, x_in) dx against the direct kernel.

    The intermediate integral runs over a ball chosen per sample so the
    pure-quadratic part dominates and the linear part's indicator is
    saturated; the integral itself is the brute-force coset sum, so the
    only closed-form ingredients on the left side are the two factor
    kernels' own prefactors.
    """
    p = late.place
    if p == REAL_PLACE or early.place != p or direct.place != p:
        raise ValueError("composition oracle needs three kernels at one prime")
    if (late.planck, late.mass) != (early.planck, early.mass) or \
            (late.planck, late.mass) != (direct.planck, direct.mass):
        raise ValueError("kernels disagree on mass or planck")
    h = late.planck
    alpha = -(early.coef_out + late.coef_in) / h
    if alpha == 0:
        raise ValueError("degenerate composition: vanishing intermediate quadratic term")
    if samples is None:
        samples = [
            (Fraction(0), Fraction(0)),
            (Fraction(1), Fraction(0)),
            (Fraction(0), Fraction(1)),
            (Fraction(1), Fraction(1)),
            (Fraction(1, p), Fraction(0)),
            (Fraction(1), Fraction(1, p)),
            (Fraction(p), Fraction(1)),
        ]
    samples = tuple((Fraction(a), Fraction(b)) for a, b in samples)
    base_exp = padic_valuation(4 * alpha, p) // 2 + 1
    outer_late = evaluate_kernel(late, 0, 0)
    outer_early = evaluate_kernel(early, 0, 0)
    prefactor = (outer_late.norm.value() * outer_early.norm.value()
                 * (outer_late.lambda_factor * outer_early.lambda_factor).to_complex())
    worst = 0.0
    depth_used = 0
    exponents = []
    for x_out, x_in in samples:
        beta = -(late.coef_cross * x_out + early.coef_cross * x_in) / h
        ball = base_exp
        if beta:
            ball = max(ball, padic_valuation(2 * alpha, p) - padic_valuation(beta, p) + 1)
        exponents.append(ball)
        spec = GaussIntegralSpec(p, alpha, beta, ball)
        inner = gauss_brute_force(spec, depth)
        constant = -(late.coef_out * x_out * x_out + early.coef_in * x_in * x_in) / h
        left = prefactor * chi(constant, p).to_complex() * inner
        right = evaluate_kernel(direct, x_out, x_in).complex_value
        worst = max(worst, abs(left - right))
        depth_used = max(depth_used, depth if depth is not None else local_constancy_depth(spec))
    return CompositionReport(p, depth_used, tuple(exponents), samples, worst)


# ---------------------------------------------------------------------------
# Truncation-stability gate for character phases


def phase_doubling_check(build_model: Callable[[int], OscillatorModel],
                         t_prime, t_dprime, x_prime, x_dprime,
                         places: Sequence, planck=1, order: int = DEFAULT_ORDER,
                         real_tolerance: float = 1e-9) -> dict:
    """Re-solve at doubled order and require stable action phase angles.

    Returns {place: angle} with the real-place angle S/h mod 1 and
    p-adic angles {-S/h}_p.  p-adic angles must agree EXACTLY between
    order N and 2N (p-adic characters are locally constant, so any
    truncation dust must already lie in Z_p); the real-place angle only
    needs to agree within real_tolerance (the real character is
    continuous).  A violation raises PrecisionError.
    """
    planck = Fraction(planck)
    places = tuple(places)
    snapshots = []
    for n in (order, 2 * order):
        model = build_model(n)
        if _is_free(model):
            duration = Fraction(t_dprime) - Fraction(t_prime)
            spread = Fraction(x_dprime) - Fraction(x_prime)
            action = model.mass * spread * spread / (2 * duration)
        else:
            ap = solve_amplitude_phase(model, n)
            ep = endpoint_data(ap, t_prime, t_dprime, x_prime, x_dprime)
            action = classical_action(ap, ep)
        angles: dict = {}
        for place in places:
            if place == REAL_PLACE:
                angles[place] = (action / planck) % 1
            else:
                angles[place] = fractional_part(-action / planck, place)
        snapshots.append(angles)
    first, second = snapshots
    for place in places:
        if place == REAL_PLACE:
            gap = abs(float(first[place] - second[place]))
            gap = min(gap, 1.0 - gap)
            if gap > real_tolerance:
                raise PrecisionError(
                    f"real action angle unstable under order doubling "
                    f"({order} -> {2 * order}): moved by {gap:g}"
                )
        elif first[place] != second[place]:
            raise PrecisionError(
                f"p={place} action angle unstable under order doubling "
                f"({order} -> {2 * order}): {first[place]} vs {second[place]}"
            )
    return first
