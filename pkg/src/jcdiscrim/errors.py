"""Exception types raised by the simulator."""


class ConfigError(ValueError):
    """Invalid run configuration or parameter combination."""


class NumericalGuardError(RuntimeError):
    """A numerical safety guard tripped (truncation cap, small denominator, norm drift)."""


class TruncationError(NumericalGuardError):
    pass


class SmallDenominatorError(NumericalGuardError):
    pass


class NormalizationError(NumericalGuardError):
    pass


class OracleError(NumericalGuardError):
    pass
