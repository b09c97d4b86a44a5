"""Exception hierarchy. Everything the library raises on purpose derives from NaidemError."""


class NaidemError(RuntimeError):
    pass


class ConfigError(NaidemError):
    pass


class InputFormatError(NaidemError):
    pass


class DimensionMismatchError(NaidemError):
    pass


class CommutativityError(NaidemError):
    pass


class NotUnitalError(NaidemError):
    pass


class NotIdempotentError(NaidemError):
    pass


class DimensionTooLargeError(NaidemError):
    pass


class ChartDegenerateError(NaidemError):
    pass


class NotGenericError(NaidemError):
    pass


class DegreeTooHighError(NaidemError):
    pass


class TheoryInconsistencyError(NaidemError):
    """The computation contradicts an identity that must hold for the input class."""


class NearZeroDenominatorError(TheoryInconsistencyError):
    pass


class DivisionRemainderError(TheoryInconsistencyError):
    pass


class UnpairedIdempotentError(TheoryInconsistencyError):
    pass


class SingularFormError(NaidemError):
    pass


class FormNotAssociativeError(NaidemError):
    pass


class ZeroFormError(NaidemError):
    pass


class AllStartsNegativeError(NaidemError):
    pass


class HalfNotInSpectrumError(NaidemError):
    pass


class NotEuclideanError(NaidemError):
    pass


class CatalogError(NaidemError):
    pass


class RootIterationStalled(Exception):
    """Internal: Aberth iteration did not settle; callers fall back to companion eigenvalues."""
