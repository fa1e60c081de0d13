"""Exception types raised across the package."""


class HerglotzError(Exception):
    """Base class for all domain errors."""


class NonConvergentQuadrature(HerglotzError, ArithmeticError):
    """Adaptive quadrature could not reach the tolerance within its budget."""


class DegenerateImage(HerglotzError, ArithmeticError):
    pass


class NotEndomatrix(HerglotzError, ValueError):
    pass


class NotUnboundedCase(HerglotzError, ValueError):
    pass


class NotRealAutomatrix(HerglotzError, ValueError):
    pass


class NoConvergence(HerglotzError, ArithmeticError):
    """A boundary limit did not settle under Richardson extrapolation."""


class ViolationDetected(HerglotzError, AssertionError):
    """A boundary-limit statement failed; ``point`` is the witness."""

    def __init__(self, message, point=None, value=None):
        super().__init__(message)
        self.point = point
        self.value = value


class RootFindingFailure(HerglotzError, ArithmeticError):
    pass


class PoleInUpperHalfPlane(HerglotzError, ValueError):
    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole


class CriticalPointFailure(HerglotzError, ArithmeticError):
    pass
