"""Exception types shared across the package."""


class GroundFieldError(Exception):
    """Base class for all package errors."""


class InvalidInput(GroundFieldError, ValueError):
    """Malformed parameters or specs (CLI exit code 2)."""


class NumericalFailure(GroundFieldError, ArithmeticError):
    """A numerical routine could not deliver a trustworthy answer (CLI exit code 3)."""


# expression language

class ExprSyntaxError(InvalidInput):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownIdentifier(InvalidInput):
    pass


class VariableOutOfRange(InvalidInput):
    pass


class DomainError(GroundFieldError, ArithmeticError):
    """log/sqrt of a negative number, division by zero, etc."""


class SingularPoint(DomainError):
    """Evaluation at a declared singularity of a field or expression."""


# fields and states

class NotAdmissible(InvalidInput):
    pass


class InvalidScale(InvalidInput):
    pass


class NotGradient(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class NonPositiveState(DomainError):
    pass


class NotNormalizable(NumericalFailure):
    pass


class NoGroundState(InvalidInput):
    pass


class UnsupportedFamily(InvalidInput):
    pass


# numerics

class QuadratureDivergence(NumericalFailure):
    pass


class NodeSingularity(NumericalFailure):
    pass


class NoConvergence(NumericalFailure):
    pass
