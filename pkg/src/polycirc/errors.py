""" Exceptions raised by the polynomial circuit library."""


class PolyCircError(Exception):
    """Base class of every domain error. The CLI maps it to exit code 1."""


class UnknownSemiring(PolyCircError, ValueError):
    pass


class NotPrime(PolyCircError, ValueError):
    pass


class BadModulus(PolyCircError, ValueError):
    pass


class InfiniteCarrier(PolyCircError, ValueError):
    pass


class SemiringOverflow(PolyCircError, OverflowError):
    pass


class ShapeMismatch(PolyCircError, ValueError):
    def __init__(self, message: str, left=None, right=None):
        super().__init__(message)
        self.left = left
        self.right = right


class DslSyntaxError(PolyCircError, ValueError):
    def __init__(self, position: int, message: str):
        super().__init__(f"position {position}: {message}")
        self.position = position
        self.message = message


class UnknownName(PolyCircError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ConstOutOfRange(PolyCircError, ValueError):
    pass


class UnsupportedGenerator(PolyCircError, ValueError):
    pass


class NonPolynomialGenerator(PolyCircError, ValueError):
    pass


class BudgetExceeded(PolyCircError, ValueError):
    pass


class IncompleteTable(PolyCircError, ValueError):
    pass


class SplitOutOfRange(PolyCircError, IndexError):
    pass


class IndexOutOfRange(PolyCircError, IndexError):
    pass


class InvalidErrorMap(PolyCircError, ValueError):
    pass
