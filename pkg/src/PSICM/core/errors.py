"""
Exception hierarchy for the psi/theta numerics.

Library code raises these; only the command-line front end turns them
into exit codes.
"""

from typing import Optional, Tuple


class PSICMError(Exception):
    """
    Base class for every failure raised by the library.

    Attributes:
        message: Human readable description of the failure.
    """

    def __init__(self, message: str):
        self.message: str = message
        super().__init__(message)


class DomainError(PSICMError, ValueError):
    """Raised when an argument lies outside the domain of a function."""

    def __init__(self, name: str, value: object, requirement: str):
        self.name: str = name
        self.value: object = value
        self.requirement: str = requirement
        super().__init__(f"{name}={value!r} is invalid: {requirement}")


class OrderOutOfRangeError(PSICMError, ValueError):
    """Raised when a derivative order exceeds what an operation supports."""

    def __init__(self, order: int, lo: int, hi: int):
        self.order: int = order
        self.lo: int = lo
        self.hi: int = hi
        super().__init__(f"Derivative order {order} outside supported range [{lo}, {hi}]")


class NonConvergenceError(PSICMError):
    """
    Raised when adaptive quadrature exhausts its subdivision budget.

    Attributes:
        kernel: Label of the kernel being integrated.
        x: Laplace abscissa.
        interval: Panel carrying the largest error estimate when the budget ran out.
        error_estimate: Achieved total error estimate.
        budget: Number of subdivisions that were allowed.
    """

    def __init__(
        self,
        kernel: str,
        x: float,
        interval: Tuple[float, float],
        error_estimate: float,
        budget: int,
        original_error: Optional[Exception] = None,
    ):
        self.kernel: str = kernel
        self.x: float = x
        self.interval: Tuple[float, float] = interval
        self.error_estimate: float = error_estimate
        self.budget: int = budget
        self.original_error: Optional[Exception] = original_error
        super().__init__(
            f"Quadrature of {kernel} at x={x:.17g} did not converge after {budget} subdivisions; "
            f"worst panel [{interval[0]:.6g}, {interval[1]:.6g}], error estimate {error_estimate:.3e}"
        )


class DegenerateMeanError(PSICMError, ValueError):
    """Raised when a two-point mean is requested for coincident points."""

    def __init__(self, a: float, b: float, separation: float = 0.0):
        self.a: float = a
        self.b: float = b
        self.separation: float = separation
        super().__init__(
            f"Mean of ({a!r}, {b!r}) is degenerate: points must differ by more than {separation:g}"
        )


class NonPositiveValueError(PSICMError, ValueError):
    """Raised when a logarithmic sweep meets a non-positive function value."""

    def __init__(self, function_id: str, x: float, value: float):
        self.function_id: str = function_id
        self.x: float = x
        self.value: float = value
        super().__init__(f"{function_id}({x:.17g}) = {value!r} is not positive")


class ConfigurationError(PSICMError, ValueError):
    """
    Raised when a run configuration fails validation.

    Attributes:
        field: Dotted name of the offending field, e.g. "grid.min".
    """

    def __init__(self, field: str, detail: str):
        self.field: str = field
        self.detail: str = detail
        super().__init__(f"Invalid configuration value for '{field}': {detail}")
