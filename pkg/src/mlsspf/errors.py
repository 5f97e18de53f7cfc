"""Exception types shared across the package."""


class MlsspfError(Exception):
    """Base class for all library errors."""


class LimitExceeded(MlsspfError):
    """An exponential operator would produce more than the allowed number of sets."""

    def __init__(self, what, needed, limit):
        super().__init__(f"{what} would produce {needed} sets, limit is {limit}")
        self.needed = needed
        self.limit = limit


class NotTransitive(MlsspfError):
    """A transitive partition or universe was required."""


class UnboundVariable(MlsspfError):
    """A literal mentions a variable the assignment does not bind."""


class FormulaSyntaxError(MlsspfError):
    """Concrete-syntax error, with position information."""

    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ArityError(MlsspfError):
    """A literal was built with the wrong number of operands."""


class NoLocalTrash(MlsspfError):
    """A surplus-bearing powerset node has no usable dump place in the closed set."""


class CardinalityDeficit(MlsspfError):
    """The fresh material available cannot match the step cardinalities to copy."""


class NoClosedCover(MlsspfError):
    """No closed set of green places contains the cycle."""


class NotAWitness(MlsspfError):
    """The assignment falsifies a literal other than a negated finiteness literal."""


class NoEvent(MlsspfError):
    """No usable pumping event exists on the board/process."""


class CoverMissesVariable(MlsspfError):
    """The cycle places miss some variable that must become infinite."""

    def __init__(self, var):
        super().__init__(f"cycle places do not meet the region of variable {var!r}")
        self.var = var


class CannotWarmUp(MlsspfError):
    """The pumping cycle cannot reach the required element thresholds."""
