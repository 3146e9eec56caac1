"""Exception types raised by the numerical routines."""


class NumericalError(RuntimeError):
    """A computation failed to reach its accuracy target."""


class IntegrationError(NumericalError):
    """The adaptive ODE integrator did not converge."""

    def __init__(self, message, achieved_tolerance=None):
        super().__init__(message)
        self.achieved_tolerance = achieved_tolerance


class CountMismatchError(NumericalError):
    """A root count in a spectral window disagrees with the predicted count.

    ``window`` holds the offending ``(lambda_lo, lambda_hi)`` interval.
    """

    def __init__(self, message, window=None, expected=None, found=None):
        super().__init__(message)
        self.window = window
        self.expected = expected
        self.found = found
