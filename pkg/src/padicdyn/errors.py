"""Exception hierarchy shared across the package.

Three families matter for callers: input problems (bad literals, points
outside a carrier set), precision problems (an answer exists but the
working window cannot certify it), and refutations (a mathematical
assumption the computation relies on was shown false).  The CLI maps
these to distinct exit codes.
"""


class PadicError(Exception):
    pass


class PrecisionError(PadicError):
    """A result exists but cannot be certified at the working precision."""


class PrecisionExhausted(PrecisionError):
    """Cancellation consumed every known digit of an intermediate value."""


class InsufficientPrecision(PrecisionError):
    """An exact yes/no question cannot be answered from the known digits."""


class ResourceLimit(PadicError):
    """A configured cap (cell count, level, iteration budget) was hit."""


class InputError(PadicError):
    pass


class ParseError(InputError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class DigitRange(InputError):
    """A p-adic digit outside 0..p-1."""


class DegreeCap(InputError):
    """Polynomial degree beyond the configured maximum."""


class NotInCarrier(InputError):
    """Point does not lie in the ball or sphere the operation is defined on."""


class KindMismatch(InputError):
    """Structure maps require both objects to be balls or both spheres."""


class NotOnSphere(InputError):
    """Cell lookup asked for a point off the sphere."""


class OverlapDetected(InputError):
    """Clopen sets passed as disjoint turned out to intersect."""


class DivisionByZero(PadicError, ZeroDivisionError):
    """Inversion of exact zero or of a value flagged zero-at-precision."""


class Refutation(PadicError):
    """An assumption was checked and found false; carries a witness."""


class InvarianceFailed(Refutation):
    """The claimed invariant set moved under the map."""


class NotPermutation(Refutation):
    """The induced cell map sent two cells to the same cell."""
