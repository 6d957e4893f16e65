"""Exception types shared across the package."""


class ZeroStateError(ValueError):
    """Amplitudes cannot be normalized because their norm is (numerically) zero."""


class NonUnitaryOperatorError(ValueError):
    """An operator that must be unitary failed the unitarity check."""


class DegenerateTableError(ValueError):
    """A sweep table cannot support the requested analysis (e.g. all zeros)."""


class ConfigError(ValueError):
    """Invalid experiment configuration; the message carries the field path."""
