"""Multi-place assembly: adeles, vacuum invariance, products, discreteness."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_oscillator.adelic import (
    Adele,
    AdelicState,
    GaussianGroundState,
    PAdicFactor,
    adelic_propagator_product,
    discreteness_profile,
    eigen_evolution_check,
    omega_product,
    probability_reduction,
    vacuum_check,
    vacuum_state,
)
from padic_oscillator.classical_oscillator import (
    parse_preset,
    preset_constant,
    preset_free,
)
from padic_oscillator.errors import (
    DivergenceError,
    NormalizationError,
    PrimeCutoffError,
    VacuumAbsentError,
)
from padic_oscillator.exact_numbers import fractional_part
from padic_oscillator.propagator import REAL_PLACE

F = Fraction


# -- adeles ----------------------------------------------------------------


def test_adele_accepts_integral_components_everywhere():
    a = Adele(F(1, 2), {3: F(2), 7: F(14)})
    assert a.component(3) == 2
    assert a.component(11) == 0  # unlisted primes default to 0
    assert a.norm_at(7) == F(1, 7)


def test_adele_requires_exception_listing_for_large_components():
    with pytest.raises(ValueError):
        Adele(F(0), {5: F(1, 5)})
    ok = Adele(F(0), {5: F(1, 5)}, exception_set=frozenset({5}))
    assert ok.norm_at(5) == 5
    payload = ok.to_json()
    assert payload["S"] == [5] and payload["exceptions"] == {"5": "1/5"}


@given(st.integers(-40, 40), st.sampled_from([2, 3, 5, 7]))
@settings(max_examples=60)
def test_adele_integer_components_never_need_exceptions(n, p):
    a = Adele(F(n), {p: F(n)})
    assert a.exception_set == frozenset()
    assert a.norm_at(p) <= 1


# -- certified indicator products ------------------------------------------


def test_indicator_product_is_the_integer_indicator():
    assert omega_product(F(4), 100).value == 1
    assert omega_product(F(0), 100).value == 1
    assert omega_product(F(1, 2), 100).value == 0
    assert omega_product(F(3, 10), 100).vanishing_primes == (2, 5)


def test_indicator_product_demands_complete_factorization():
    with pytest.raises(PrimeCutoffError):
        omega_product(F(1, 101), 100)
    # 101 is prime, so a cutoff that includes it certifies the zero
    assert omega_product(F(1, 101), 101).value == 0


@given(st.integers(-500, 500), st.integers(1, 97))
@settings(max_examples=80)
def test_indicator_product_matches_integrality(num, den):
    x = F(num, den)
    got = omega_product(x, 100)
    assert got.value == (1 if x.denominator == 1 else 0)
    assert all(x.denominator % p == 0 for p in got.vanishing_primes)


# -- vacuum invariance ------------------------------------------------------


def test_vacuum_holds_for_small_frequency_both_methods():
    model = preset_constant(3, order=16)
    for method in ("closed-form", "brute-force"):
        report = vacuum_check(3, model, F(0), F(1), method=method)
        assert report.holds and report.witness is None
        assert report.method == method
        # x''=0 plus 7 valuation shells times the 2 unit classes mod 3
        assert len(report.cases) == 15


def test_vacuum_methods_agree_also_through_the_oscillating_regime():
    model = preset_constant(3, order=16)
    closed = vacuum_check(3, model, F(0), F(3), method="closed-form")
    brute = vacuum_check(3, model, F(0), F(3), method="brute-force")
    assert closed.holds and brute.holds
    assert closed.sufficient_condition is True
    assert brute.max_deviation < 1e-9


def test_vacuum_fails_with_witness_when_planck_breaks_the_scale():
    model = preset_constant(3, order=16)
    for method in ("closed-form", "brute-force"):
        report = vacuum_check(3, model, F(0), F(1), planck=F(2, 3), method=method)
        assert not report.holds
        assert report.witness == 0  # already the center point leaks mass


def test_vacuum_sufficient_condition_is_one_way():
    # holds=True while the sufficient criterion fails: strict > misses ties
    model = preset_constant(3, order=16)
    report = vacuum_check(3, model, F(0), F(1), method="closed-form")
    assert report.holds and report.sufficient_condition is False


def test_vacuum_sufficient_condition_undefined_at_two():
    model = preset_constant(2, order=16)
    report = vacuum_check(2, model, F(0), F(2), method="brute-force")
    assert report.holds and report.sufficient_condition is None


def test_vacuum_for_free_motion():
    report = vacuum_check(3, preset_free(order=12), F(0), F(3), method="closed-form")
    assert report.holds


def test_vacuum_rejects_trig_domain_violations():
    model = preset_constant(3, order=16)
    with pytest.raises(DivergenceError):
        vacuum_check(5, model, F(0), F(3))


# -- eigen-evolution of the finite factors ---------------------------------


def test_evolution_of_vacuum_factor_reports_trivial_phase():
    state = vacuum_state(1, 1)
    model = preset_constant(3, order=16)
    out = eigen_evolution_check(state, model, F(0), F(1), p=3)
    assert out["identity"] is False
    assert out["trivial_phase"] is True and out["alpha"] == 0
    assert out["deviation"] < 1e-9


def test_evolution_with_declared_eigenvalue_tracks_phase_fraction():
    state = AdelicState(GaussianGroundState(1, 1), alpha={3: F(1, 3)})
    model = preset_constant(3, order=16)
    out = eigen_evolution_check(state, model, F(0), F(1), p=3)
    assert out["phase_jump"] != 0
    assert out["alpha_phase_fraction"] == fractional_part(out["alpha"] * out["phase_jump"], 3)
    assert out["trivial_phase"] == (out["alpha_phase_fraction"] == 0)


def test_evolution_identity_when_times_coincide():
    state = vacuum_state(1, 1)
    out = eigen_evolution_check(state, preset_constant(3, order=16), F(1), F(1), p=3)
    assert out["identity"] is True and out["deviation"] == 0.0


def test_evolution_refuses_non_vacuum_factors():
    state = AdelicState(GaussianGroundState(1, 1),
                        {3: PAdicFactor("declared", F(1))})
    with pytest.raises(ValueError):
        eigen_evolution_check(state, preset_constant(3, order=16), F(0), F(1), p=3)


def test_evolution_raises_when_invariance_is_absent():
    state = vacuum_state(1, 1)
    model = preset_constant(3, order=16)
    with pytest.raises(VacuumAbsentError):
        eigen_evolution_check(state, model, F(0), F(1), p=3, planck=F(2, 3))


# -- restricted products ----------------------------------------------------


def test_free_product_over_three_places_is_exact_eighth_root():
    product = adelic_propagator_product((REAL_PLACE, 3, 5), preset_free(order=12),
                                        F(0), F(2), F(4), F(1))
    assert product.places == (REAL_PLACE, 3, 5)
    assert product.phase_angle == F(1, 8)
    assert abs(product.norm_value() - 1 / math.sqrt(2)) < 1e-12
    assert abs(product.product_value - complex(0.5, 0.5)) < 1e-12


def test_product_requires_unit_wronskian():
    with pytest.raises(ValueError):
        adelic_propagator_product((3,), preset_constant(3, order=12),
                                  F(0), F(1), F(0), F(0))


def test_product_over_no_places_is_one():
    product = adelic_propagator_product((), preset_free(order=12),
                                        F(0), F(1), F(0), F(0))
    assert product.product_value == 1 and product.phase_angle == 0


def test_product_errors_carry_the_place_label():
    model = parse_preset("example1(1,1)", order=16)
    with pytest.raises(DivergenceError, match=r"\[place 3\]"):
        adelic_propagator_product((REAL_PLACE, 3), model, F(0), F(1, 3),
                                  F(1), F(0), order=16)


# -- reduction and discreteness ---------------------------------------------


def test_reduction_returns_real_marginal_for_omega_tail():
    state = vacuum_state(1, 2, planck=1)
    real = probability_reduction(state, 100)
    assert real is state.real_factor
    assert abs(real.density(0) - math.sqrt(4.0)) < 1e-12


def test_reduction_enforces_declared_normalization():
    bad = AdelicState(GaussianGroundState(1, 1),
                      {3: PAdicFactor("declared", F(2))})
    with pytest.raises(NormalizationError):
        probability_reduction(bad, 100)
    good = AdelicState(GaussianGroundState(1, 1),
                       {3: PAdicFactor("declared", F(1))})
    assert probability_reduction(good, 100) is good.real_factor
    with pytest.raises(PrimeCutoffError):
        probability_reduction(good, 2)


def test_discreteness_supports_exactly_the_integers():
    state = vacuum_state(1, 1)
    xs = [F(k, d) for d in (1, 2, 3, 5) for k in range(-6, 7)]
    rows = discreteness_profile(state, xs, prime_cutoff=100)
    for row in rows:
        if row["x"].denominator == 1:
            assert row["value"] > 0
            assert row["vanishing_primes"] == []
        else:
            assert row["value"] == 0.0
            assert row["vanishing_primes"]


def test_discreteness_mixed_state_has_no_sharp_support():
    state = AdelicState(GaussianGroundState(1, 1), mixed=True)
    rows = discreteness_profile(state, [F(0), F(1, 2)])
    assert all(row["value"] is None and "note" in row for row in rows)


def test_discreteness_rejects_declared_factors():
    state = AdelicState(GaussianGroundState(1, 1),
                        {3: PAdicFactor("declared", F(1))})
    with pytest.raises(ValueError):
        discreteness_profile(state, [F(0)])
