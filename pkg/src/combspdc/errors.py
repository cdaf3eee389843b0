"""Exception types raised by the combspdc package."""


class CombSpdcError(Exception):
    """Base class for all package errors."""


class WavelengthRangeError(CombSpdcError, ValueError):
    """A wavelength fell outside the validity range of a dispersion model."""


class PhaseMatchingError(CombSpdcError, RuntimeError):
    """No phase-matching cut angle exists for the requested configuration."""


class DegenerateInputError(CombSpdcError, ValueError):
    """An operation received an input with no usable content
    (all-zero amplitude, empty isolation window, ...)."""


class ContractError(CombSpdcError, ValueError):
    """A documented precondition was violated (non-normalized grid,
    invalid coefficient distribution, inconsistent axes, ...)."""


class NotDisjointError(CombSpdcError, ValueError):
    """Peaks of a multi-peak model overlap, so the analytic Schmidt
    structure for disjoint sums does not apply."""


class UndefinedTiltError(CombSpdcError, RuntimeError):
    """The intensity distribution is isotropic; a principal-axis tilt
    is not defined."""


class SeparationNotApplicableError(CombSpdcError, ValueError):
    """Peak-separation conditions require a positive ridge tilt."""


class ConfigError(CombSpdcError, ValueError):
    """A run configuration failed validation."""
