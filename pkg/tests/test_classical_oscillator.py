"""Amplitude/phase solutions, two-point data, momenta and actions."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_oscillator.classical_oscillator import (
    momentum_series,
    amplitude_residual,
    boundary_action,
    classical_action,
    convergence_certificate,
    endpoint_data,
    endpoint_momenta,
    evolution_matrix,
    evolve_initial,
    model_from_omega_coeffs,
    momentum,
    parse_preset,
    phase_residual,
    preset_constant,
    preset_example1,
    preset_example2,
    preset_free,
    solve_amplitude_phase,
    trajectory_endpoints,
    trajectory_residual,
)
from padic_oscillator.errors import CausticError, DivergenceError
from padic_oscillator.series import RationalSeries, binomial_series

F = Fraction


def _solve(model, order=18):
    return solve_amplitude_phase(model, order=order)


def test_rational_amplitude_profile_closed_form():
    # G = b(1+at) and gamma = t / (b^2 (1+at)), checked coefficient by coefficient
    for a, b in ((1, 1), (2, 3), (3, 2)):
        ap = _solve(preset_example1(a, b), order=16)
        expect_amp = RationalSeries.from_coeffs([b, a * b], order=16)
        assert ap.amp.coeffs == expect_amp.coeffs
        geometric = binomial_series(-1, 15, scale=a)  # (1+at)^-1
        expect_phase = (RationalSeries.identity(15) * geometric).scale(F(1, b * b))
        assert ap.phase.coeffs[: 16] == expect_phase.coeffs[: 16]


def test_residuals_vanish_identically_for_all_presets():
    models = [
        preset_example1(1, 2),
        preset_example2(1, 1),
        preset_example2(F(1, 2), 2),
        preset_constant(2),
        preset_free(),
    ]
    for model in models:
        ap = _solve(model, order=20)
        amp_res = amplitude_residual(ap)
        ph_res = phase_residual(ap)
        assert amp_res.is_zero_through(amp_res.order)
        assert ph_res.is_zero_through(ph_res.order)


def test_square_root_amplitude_profile_matches_series():
    a, b = F(1), F(2)
    ap = _solve(preset_example2(a, b), order=14)
    expect = binomial_series(F(1, 2), 14, scale=a).scale(b)  # b (1+at)^{1/2}
    assert ap.amp.coeffs == expect.coeffs


def test_free_motion_cartesian_frame_is_polynomial():
    # G cos(gamma) = 1 and G sin(gamma) = t exactly, order by order
    ap = _solve(preset_free(), order=20)
    u = ap.amp * ap.cos_phase
    v = ap.amp * ap.sin_phase
    assert u.coefficient(0) == 1 and u.is_zero_through(u.order) is False
    assert all(u.coefficient(k) == 0 for k in range(1, u.order + 1))
    assert v.coefficient(1) == 1
    assert all(v.coefficient(k) == 0 for k in range(v.order + 1) if k != 1)


def test_wronskian_identity_from_scalar_convention():
    # G^2 gamma' = W as series
    for model in (preset_example1(2, 1), preset_constant(3), preset_free()):
        ap = _solve(model, order=16)
        product = ap.amp * ap.amp * ap.phase_vel
        assert product.coefficient(0) == model.wronskian
        assert all(product.coefficient(k) == 0 for k in range(1, product.order + 1))


def test_two_point_trajectory_interpolates_exactly():
    ap = _solve(preset_example1(1, 1), order=18)
    ep = endpoint_data(ap, F(0), F(1, 2), x_prime=F(1), x_dprime=F(3, 4))
    path = trajectory_endpoints(ap, ep)
    assert path.evaluate(F(0)) == 1
    assert path.evaluate(F(1, 2)) == F(3, 4)
    res = trajectory_residual(ap, path)
    assert res.is_zero_through(ap.order - 2)


def test_endpoint_momenta_match_trajectory_derivative():
    ap = _solve(preset_example1(1, 2), order=24)
    ep = endpoint_data(ap, F(0), F(1, 4), x_prime=F(2), x_dprime=F(-1))
    k1, k2 = endpoint_momenta(ap, ep)
    path = trajectory_endpoints(ap, ep)
    m = ap.model.mass
    # the left endpoint sits at t=0, where evaluation sees no truncation tail
    assert k1 == m * path.differentiate().evaluate(F(0))
    assert momentum(ap, ep, F(0)) == k1
    # the closed momentum form tracks m x' coefficient-by-coefficient
    deriv = path.differentiate().scale(m)
    closed = momentum_series(ap, ep)
    assert all(closed.coefficient(n) == deriv.coefficient(n) for n in range(ap.order - 1))
    # interior endpoint: tails only
    gap = k2 - m * path.differentiate().evaluate(F(1, 4))
    assert abs(float(gap)) < 1e-9


@given(
    st.sampled_from(["example1(1,1)", "example1(2,3)", "example2(1,2)", "constant(2)", "free"]),
    st.fractions(min_value=-2, max_value=2, max_denominator=6),
    st.fractions(min_value=-2, max_value=2, max_denominator=6),
)
@settings(max_examples=60, deadline=None)
def test_action_quadratic_form_equals_boundary_form(preset, x1, x2):
    ap = _solve(parse_preset(preset, order=14), order=14)
    t1, t2 = F(0), F(1, 4)
    try:
        ep = endpoint_data(ap, t1, t2, x_prime=x1, x_dprime=x2)
    except CausticError:
        return
    lhs = classical_action(ap, ep)
    rhs = boundary_action(ap, ep)
    assert lhs == rhs and isinstance(lhs, Fraction)


def test_action_cross_term_identity():
    # (G2 pv2 / G1 + G1 pv1 / G2)^2 == 4 pv1 pv2 for the scalar convention
    for preset in ("example1(1,1)", "example2(1,1)", "constant(3)"):
        ap = _solve(parse_preset(preset, order=14), order=14)
        ep = endpoint_data(ap, F(0), F(1, 5), x_prime=F(1), x_dprime=F(1, 2))
        lhs = (ep.amp2 * ep.phase_vel2 / ep.amp1 + ep.amp1 * ep.phase_vel1 / ep.amp2) ** 2
        assert lhs == 4 * ep.phase_vel1 * ep.phase_vel2


def test_coincident_endpoints_are_a_caustic():
    ap = _solve(preset_free(), order=12)
    with pytest.raises(CausticError):
        endpoint_data(ap, F(1, 2), F(1, 2), x_prime=F(0), x_dprime=F(1))


def test_evolution_matrix_is_symplectic_and_composes():
    # Point values of order-24 truncations: identities hold to tail size.
    ap = _solve(preset_example1(1, 1), order=24)
    t0, t1, t2 = F(0), F(1, 8), F(1, 4)
    (a, b), (c, d) = evolution_matrix(ap, t0, t2)
    assert abs(float(a * d - b * c - 1)) < 1e-10
    (p, q), (r, s) = evolution_matrix(ap, t0, t1)
    (e, f), (g, h) = evolution_matrix(ap, t1, t2)
    for got, want in zip((e * p + f * r, e * q + f * s, g * p + h * r, g * q + h * s),
                         (a, b, c, d)):
        assert abs(float(got - want)) < 1e-10
    assert evolution_matrix(ap, t1, t1) == ((1, 0), (0, 1))


def test_evolution_round_trip_restores_initial_data():
    ap = _solve(preset_constant(2), order=18)
    x1, k1 = evolve_initial(ap, F(3, 2), F(-1), F(0), F(1, 4))
    x0, k0 = evolve_initial(ap, x1, k1, F(1, 4), F(0))
    assert abs(float(x0 - F(3, 2))) < 1e-15 and abs(float(k0 + 1)) < 1e-15


def test_certificate_gates_padic_evaluation():
    ap = _solve(preset_constant(1), order=16)
    ok = endpoint_data(ap, F(0), F(5), primes=(5,))
    assert 5 in ok.certified
    with pytest.raises(DivergenceError):
        endpoint_data(ap, F(0), F(1, 5), primes=(5,))


def test_certificate_checks_tail_window_per_prime():
    geometric = binomial_series(-1, 20, scale=1)  # coefficients (-1)^k
    granted = convergence_certificate(geometric, (3,), F(3), strict=False)
    assert granted.granted and granted.entries == ((3, True),)
    refused = convergence_certificate(geometric, (3,), F(1, 3), strict=False)
    assert not refused.granted
    with pytest.raises(DivergenceError):
        convergence_certificate(geometric, (3,), F(1, 3))
    both = convergence_certificate(geometric, (3, 5), F(15), strict=False)
    assert both.granted and [p for p, _ in both.entries] == [3, 5]


def test_preset_parsing_round_trip_and_rejects():
    assert parse_preset("example1(2,3)").label == "example1(2,3)"
    assert parse_preset(" free ").label == "free"
    assert parse_preset("constant(0)").label == "free"
    for bad in ("example3(1)", "example1(1)", "constant()", "constant(1,2)", "example1(x,y)"):
        with pytest.raises(ValueError):
            parse_preset(bad)


def test_inline_polynomial_frequency_square():
    model = model_from_omega_coeffs([2, 1], order=10)
    assert model.freq_sq.coeffs[:3] == (F(4), F(4), F(1))
    ap = _solve(model, order=12)
    res = amplitude_residual(ap)
    assert res.is_zero_through(res.order)
