"""Exception types raised by the library."""


class ContractError(ValueError):
    """An operation was called with inputs that break its contract."""


class DimensionError(ContractError):
    """Vectors of mismatched dimension were combined."""


class UnsupportedDimensionError(ContractError):
    """The orthogonal construction needs at least two dimensions."""


class ConfigError(ValueError):
    """A game, player or sweep configuration is invalid."""
