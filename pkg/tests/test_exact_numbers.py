"""Scalar layer: norms, characters, expansions, square roots."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_oscillator.exact_numbers import (
    HalfPower,
    PHASE_ONE,
    UnitPhase,
    canonical_expansion,
    chi,
    frac_str,
    fractional_part,
    omega,
    padic_norm,
    padic_sqrt,
    padic_valuation,
    parse_rational,
    primes_upto,
    real_norm,
)

PRIMES = st.sampled_from([2, 3, 5, 7, 11, 13])
rationals = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)
nonzero_rationals = rationals.filter(bool)


@given(PRIMES, rationals, rationals)
@settings(max_examples=100)
def test_ultrametric_inequality_with_equality_case(p, x, y):
    nx, ny = padic_norm(x, p), padic_norm(y, p)
    nsum = padic_norm(x + y, p)
    assert nsum <= max(nx, ny)
    if nx != ny:
        # the strong triangle inequality is an equality off the diagonal
        assert nsum == max(nx, ny)


@given(PRIMES, rationals, rationals)
@settings(max_examples=100)
def test_norm_multiplicative(p, x, y):
    assert padic_norm(x * y, p) == padic_norm(x, p) * padic_norm(y, p)


@given(PRIMES, rationals, rationals)
@settings(max_examples=120)
def test_character_additive(p, x, y):
    assert (chi(x, p) * chi(y, p)).angle == chi(x + y, p).angle


@given(st.fractions(min_value=-3000, max_value=3000, max_denominator=3000).filter(bool))
@settings(max_examples=120, deadline=None)
def test_product_formula_over_all_places(x):
    total = real_norm(x)
    for p in primes_upto(max(abs(x.numerator), x.denominator) + 1):
        total *= padic_norm(x, p)
    assert total == 1


@given(PRIMES, rationals)
@settings(max_examples=120)
def test_fractional_part_lands_in_unit_interval_with_integral_difference(p, x):
    f = fractional_part(x, p)
    assert 0 <= f < 1
    assert padic_norm(x - f, p) <= 1
    # denominator is a pure p power
    d = f.denominator
    while d % p == 0:
        d //= p
    assert d == 1


def test_fractional_part_frozen_values():
    assert fractional_part(Fraction(7, 4), 2) == Fraction(3, 4)
    assert fractional_part(Fraction(1, 3), 3) == Fraction(1, 3)
    assert fractional_part(Fraction(5), 7) == 0
    assert fractional_part(Fraction(-1, 5), 5) == Fraction(4, 5)


def test_valuation_of_zero_is_infinite():
    assert padic_valuation(0, 5) == float("inf")
    assert padic_norm(0, 5) == 0
    assert omega(padic_norm(0, 5)) == 1  # zero sits inside the unit ball


@given(PRIMES, rationals)
@settings(max_examples=100)
def test_canonical_expansion_reconstructs_to_stated_precision(p, x):
    approx = canonical_expansion(x, p, digits=12)
    err = x - approx.to_rational()
    assert padic_norm(err, p) <= Fraction(1, p**12) * padic_norm(x, p) or err == 0


def test_canonical_expansion_frozen_digit_strings():
    minus_one = canonical_expansion(-1, 3, digits=4)
    assert minus_one.valuation == 0 and minus_one.digits == (2, 2, 2, 2)
    half = canonical_expansion(Fraction(1, 2), 3, digits=3)
    assert half.valuation == 0 and half.digits == (2, 1, 1)


def test_square_root_existence_matches_quadratic_residues():
    # 2 is a non-residue mod 5 and mod 3, a residue mod 7
    assert padic_sqrt(2, 5) is None
    assert padic_sqrt(2, 3) is None
    root7 = padic_sqrt(2, 7, digits=6)
    assert root7 is not None
    square = root7.to_rational() ** 2
    assert padic_norm(square - 2, 7) <= Fraction(1, 7**6)


def test_square_root_picks_small_leading_digit():
    root = padic_sqrt(4, 5, digits=3)
    assert root.digits[0] == 2  # not the conjugate root leading with 3


def test_square_root_at_two_needs_one_mod_eight():
    assert padic_sqrt(17, 2, digits=8) is not None
    assert padic_sqrt(3, 2) is None
    assert padic_sqrt(5, 2) is None
    root = padic_sqrt(17, 2, digits=8)
    # chosen branch is 1 mod 4: second digit zero
    assert root.valuation == 0 and root.digits[0] == 1 and root.digits[1] == 0


@given(PRIMES, st.integers(1, 200))
@settings(max_examples=100)
def test_square_of_returned_root_recovers_input(p, n):
    x = Fraction(n * n)
    root = padic_sqrt(x, p, digits=10)
    assert root is not None
    assert padic_norm(root.to_rational() ** 2 - x, p) <= Fraction(1, p**8)


def test_unit_phase_group_laws():
    a = UnitPhase(Fraction(3, 8))
    b = UnitPhase(Fraction(7, 8))
    assert (a * b).angle == Fraction(1, 4)
    assert (a * a.conjugate()).angle == 0
    assert PHASE_ONE.to_complex() == 1


def test_half_power_merging_and_value():
    h = HalfPower(Fraction(3), Fraction(-1, 2))
    assert abs(h.value() - 3 ** -0.5) < 1e-15
    merged = h * HalfPower(Fraction(3), Fraction(5, 2))
    assert merged.exponent == 2 and merged.value() == 9
    with pytest.raises(ValueError):
        h * HalfPower(Fraction(5), Fraction(1, 2))
    with pytest.raises(ValueError):
        HalfPower(Fraction(3), Fraction(1, 3))


def test_rational_parsing_round_trip_and_rejects():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-5") == -5
    assert parse_rational(frac_str(Fraction(-22, 7))) == Fraction(-22, 7)
    for bad in ("x/3", "1.5", "1/0", "2/-3", ""):
        with pytest.raises(ValueError):
            parse_rational(bad)
