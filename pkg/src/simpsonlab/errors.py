"""Exception hierarchy shared by all simpsonlab modules."""


class SimpsonLabError(Exception):
    """Base class for every error raised by this package."""


class ExpressionSyntaxError(SimpsonLabError):
    """Malformed expression source. Carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownIdentifierError(ExpressionSyntaxError):
    """Identifier that is neither the variable x nor a known function."""

    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier {name!r}", offset)
        self.name = name


class NonConstantExponentError(ExpressionSyntaxError):
    """Exponent of ^ contains the variable; only constant real exponents parse."""


class DomainError(SimpsonLabError):
    """Evaluation left the real domain (log of non-positive, 0 division, ...)."""


class NonSmoothPointError(SimpsonLabError):
    """Derivative requested at a point where it does not exist (abs at 0)."""


class InvalidIntervalError(SimpsonLabError):
    """Integration or bound interval is empty or reversed."""


class OutOfRangeError(SimpsonLabError):
    """Argument outside the documented range (kernel t outside [0,1], ...)."""


class ToleranceNotReachedError(SimpsonLabError):
    """Adaptive integration hit its recursion cap before meeting the tolerance.

    Carries the best available value and its error estimate so callers can
    decide whether the partial answer is still usable.
    """

    def __init__(self, value: float, err_est: float, message: str = ""):
        detail = message or (
            f"recursion cap hit; best value {value!r} with estimate {err_est:.3e}"
        )
        super().__init__(detail)
        self.value = value
        self.err_est = err_est
