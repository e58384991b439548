"""Exception types shared across the package."""


class DimensionMismatchError(ValueError):
    """Operands live over different ambient dimensions."""


class DegreeError(ValueError):
    """Form degree out of range or incompatible for the requested operation."""


class SingularityError(ValueError):
    """Kernel evaluated at its singular point."""


class SupportError(ValueError):
    """Grid form does not vanish on the required boundary margin."""


class RewriteBudgetError(RuntimeError):
    """Rewrite engine exceeded its step budget without reaching a fixed point."""


class UnsupportedConfigurationError(ValueError):
    """Requested operator configuration is outside the supported cases."""


class IncompleteTraceError(ValueError):
    """Boundary trace is missing component values or derivatives."""


class ConfigError(ValueError):
    """Bad run configuration (unknown key, unparsable value, guard violation)."""


class OperatorParseError(ValueError):
    """Syntax or typing error in the textual operator language."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
