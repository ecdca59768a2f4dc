"""Error types shared across the package.

Each error maps to a CLI exit code, see ``cli.EXIT_CODES``.
"""


class PadicOscillatorError(Exception):
    """Base class for all package errors."""


class IndeterminateBranchError(PadicOscillatorError):
    """Neither closed-form branch of the quadratic integral applies.

    Only possible at p = 2, where the two branch conditions leave a gap
    of two valuations.  Callers should fall back to the brute-force
    evaluator.
    """


class DepthTooSmallError(PadicOscillatorError):
    """A brute-force coset sum was requested below its exactness depth."""


class CausticError(PadicOscillatorError):
    """The two endpoints are conjugate: sin of the phase difference vanishes."""


class DivergenceError(PadicOscillatorError):
    """An evaluation point lies outside the certified convergence region."""


class PrecisionError(PadicOscillatorError):
    """A character-feeding quantity changed under doubling of the truncation order."""


class PrimeCutoffError(PadicOscillatorError):
    """A denominator carries a prime factor above the declared cutoff."""


class VacuumAbsentError(PadicOscillatorError):
    """The kernel does not preserve the unit-ball vacuum at this prime."""


class NormalizationError(PadicOscillatorError):
    """A state factor declares a norm different from 1."""
