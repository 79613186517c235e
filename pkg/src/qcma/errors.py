"""Exception types raised across the package."""


class QcmaError(Exception):
    """Base class for all errors raised by :mod:`qcma`."""


class CircuitError(QcmaError, ValueError):
    """A circuit or gate violates a structural invariant."""


class IndexOutOfRange(CircuitError, IndexError):
    pass


class DuplicateQubit(CircuitError):
    pass


class ArityMismatch(CircuitError):
    pass


class NonInjectiveMapping(CircuitError):
    pass


class CircuitSyntaxError(QcmaError, ValueError):
    """Malformed circuit text. ``lineno`` is 1-based."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class UnknownGate(CircuitSyntaxError):
    pass


class DimensionMismatch(QcmaError, ValueError):
    pass


class TooLarge(QcmaError):
    """Requested dense or brute-force work exceeds the configured cap."""


class NormDriftError(QcmaError, ArithmeticError):
    pass


class NoGap(QcmaError, ValueError):
    """Reduction parameters whose bounds do not separate."""


class VanishingOverlap(QcmaError, ValueError):
    pass


class EvenRepetition(QcmaError, ValueError):
    pass


class EmptyCircuit(QcmaError, ValueError):
    pass


class NotHermitian(QcmaError, ValueError):
    pass


class NonHermitianDetected(NotHermitian):
    pass
