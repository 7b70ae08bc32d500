"""Exception hierarchy and warning category shared by every casimag module."""


class CasimagError(Exception):
    """Base class for errors raised by casimag."""


class InputError(CasimagError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError(InputError):
    """The run configuration cannot be parsed or is inconsistent."""


class MaterialError(InputError):
    """A material model or spectrum is invalid."""


class RegimeError(InputError):
    """A point or distance lies outside the window of a limiting formula."""


class UnitError(CasimagError, TypeError):
    """Arithmetic between quantities of incompatible dimensions."""


class QuadratureError(CasimagError):
    """The integrand left the domain where it is defined."""


class ValidityWarning(UserWarning):
    """A physical approximation is used outside its stated validity range."""
