"""Exception hierarchy shared by all modules."""


class BivarEvalError(Exception):
    pass


class CompositeModulus(BivarEvalError, ValueError):
    pass


class ModulusOutOfRange(BivarEvalError, ValueError):
    pass


class FieldMismatch(BivarEvalError, ValueError):
    pass


class DivisionByZero(BivarEvalError, ZeroDivisionError):
    pass


class UnsupportedTransformSize(BivarEvalError, ValueError):
    pass


class DuplicateNodes(BivarEvalError, ValueError):
    pass


class DimensionMismatch(BivarEvalError, ValueError):
    pass


class ChunkDegreeOverflow(BivarEvalError, ValueError):
    pass


class DistinctnessViolated(BivarEvalError, ValueError):
    pass


class DuplicatePoints(BivarEvalError, ValueError):
    pass


class ShearSearchExhausted(BivarEvalError, RuntimeError):
    pass


class FieldTooSmall(UserWarning):
    """Field has fewer than N^2 elements; the random shear bound no longer applies."""
