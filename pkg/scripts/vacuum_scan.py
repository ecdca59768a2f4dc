#!/usr/bin/env python3
"""Scan oscillator configurations for presence of the unit-ball vacuum.

Walks a grid of presets, primes, horizons and Planck constants and
prints one line per configuration: whether the kernel preserves the
unit-ball indicator, whether both evaluation routes agree, and what the
one-way sufficient criterion says.

    python3 scripts/vacuum_scan.py --primes 3,5 --planck 1 --planck 2/3
"""

import argparse
import sys
from fractions import Fraction

from padic_oscillator.classical_oscillator import parse_preset
from padic_oscillator.errors import PadicOscillatorError
from padic_oscillator.exact_numbers import frac_str, parse_rational
from padic_oscillator.adelic import vacuum_check


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--primes", default="3,5,7")
    parser.add_argument("--presets", default=None,
                        help="comma-free list separated by ';', e.g. "
                             "'constant(3);example1(1,1)'")
    parser.add_argument("--planck", action="append", default=None,
                        help="repeatable; num/den")
    parser.add_argument("--order", type=int, default=16)
    args = parser.parse_args(argv)

    primes = [int(piece) for piece in args.primes.split(",")]
    presets = (args.presets.split(";") if args.presets
               else ["constant(3)", "constant(5)", "example1(1,1)", "free"])
    plancks = [parse_rational(text) for text in (args.planck or ["1"])]

    print(f"{'preset':16s} {'p':>3s} {'T':>6s} {'h':>6s} {'holds':>6s} "
          f"{'agree':>6s} {'suff':>5s}")
    disagreements = 0
    for preset_text in presets:
        model = parse_preset(preset_text.strip(), args.order)
        for p in primes:
            # horizon p keeps |phase jump|_p < 1 for every stock preset
            horizon = Fraction(p)
            for planck in plancks:
                try:
                    closed = vacuum_check(p, model, Fraction(0), horizon,
                                          planck=planck, method="closed-form",
                                          order=args.order)
                    brute = vacuum_check(p, model, Fraction(0), horizon,
                                         planck=planck, method="brute-force",
                                         order=args.order)
                except PadicOscillatorError as exc:
                    print(f"{preset_text:16s} {p:3d} {frac_str(horizon):>6s} "
                          f"{frac_str(planck):>6s}  -- {type(exc).__name__}: {exc}")
                    continue
                agree = closed.holds == brute.holds
                disagreements += 0 if agree else 1
                suff = {True: "yes", False: "no", None: "n/a"}[closed.sufficient_condition]
                print(f"{preset_text:16s} {p:3d} {frac_str(horizon):>6s} "
                      f"{frac_str(planck):>6s} {str(closed.holds):>6s} "
                      f"{str(agree):>6s} {suff:>5s}")
    return 1 if disagreements else 0


if __name__ == "__main__":
    sys.exit(main())
