"""Exception hierarchy shared by the algebra, geometry and text layers."""


class NilfolError(Exception):
    """Base class for every error raised by this package."""


class ContextMismatchError(NilfolError, ValueError):
    """Operands live over different variable contexts."""


class DegreeError(NilfolError, ValueError):
    """A form has the wrong degree for the requested operation."""


class ValidationError(NilfolError, ValueError):
    """Input is well-formed but violates a model or operation precondition."""


class NotClosedError(ValidationError):
    """A 1-form that was required to be closed is not.

    ``witness`` holds ``(basis, coefficient)`` for one nonzero coefficient
    of the exterior derivative.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ShapeError(ValidationError):
    """A form does not have the expected polynomial shape in ``z``.

    ``witness`` identifies the offending coefficient.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
