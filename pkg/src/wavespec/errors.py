"""Exception hierarchy shared by the wavespec modules."""


class WavespecError(Exception):
    pass


class DomainError(WavespecError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class NumericError(WavespecError, ArithmeticError):
    """Non-finite intermediate or failed convergence."""


class RangeError(DomainError):
    """Wave speed outside the admissible interval of a family."""

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class ContractError(WavespecError, ValueError):
    pass


class DegenerateProfileError(NumericError):
    pass


class KernelNotSimpleError(NumericError):
    """theta too close to zero to decide simplicity of the kernel."""


class AtThresholdError(WavespecError):
    """I or det(D) too small for the index count to apply."""


class NoThresholdError(WavespecError):
    pass


class ConsistencyError(WavespecError):
    """Counted inertial index disagrees with the theta-sign prediction."""


class ResolutionError(NumericError):
    """Fourier truncation too small for the potential's spectrum."""

    def __init__(self, message, suggested_n):
        super().__init__(message)
        self.suggested_n = suggested_n
