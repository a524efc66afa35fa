"""Exception types shared across the solver."""


class FrozenSLError(Exception):
    """Base class for all solver errors."""


class DomainError(FrozenSLError, ValueError):
    """A point was used that does not belong to the time scale."""


class ValidationError(FrozenSLError, ValueError):
    """A problem description violates an invariant.

    Carries ``field`` so config-level callers can point at the offending key.
    """

    def __init__(self, message: str, field: str = ""):
        super().__init__(message)
        self.field = field


class DegenerateProblemError(FrozenSLError):
    """The characteristic function vanishes identically.

    Every complex number is then an eigenvalue; callers must report this
    outcome explicitly instead of returning an empty spectrum.
    """


class ConvergenceError(FrozenSLError):
    """An iterative solver hit its iteration cap.

    ``partial`` holds whatever results were obtained before the failure.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class ContourError(FrozenSLError):
    """A zero-counting contour was rejected.

    Raised when boundary samples come too close to a zero or when the
    winding quadrature defect is too large; the caller should shrink,
    shift, or refine the box.
    """
