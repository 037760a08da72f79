"""Exception hierarchy.

Every error raised on purpose derives from :class:`InsepError`.  The CLI maps
:class:`ResourceGuard` to exit code 2 and every other :class:`InsepError` to
exit code 1.
"""


class InsepError(Exception):
    """Base class for all library errors."""


class ValidationError(InsepError, ValueError):
    """Malformed input: bad parameters, bad documents, bad expressions."""


class ParseError(ValidationError):
    pass


class ResourceGuard(InsepError):
    """A configured size limit (degree, dimension, enumeration) was exceeded."""


# exact arithmetic

class DivisionByZero(InsepError, ZeroDivisionError):
    pass


class NotAPower(InsepError):
    """The element has no p^e-th root in its field."""


class NoSolution(InsepError):
    pass


class UnsupportedField(InsepError):
    pass


# finite-dimensional algebras

class _AxiomError(ValidationError):
    """Carries the offending basis indices in ``indices``."""

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


class NotCommutative(_AxiomError):
    pass


class NotAssociative(_AxiomError):
    pass


class BadUnit(_AxiomError):
    pass


class NotLocal(InsepError):
    pass


class NotLambdaForm(InsepError):
    pass


class BadEmbedding(ValidationError):
    pass


# truncated algebras and their automorphisms

class WreathMismatch(InsepError):
    """Enumerated automorphism count disagrees with the wreath-product count."""


class NotBlockPermuting(InsepError):
    pass


# towers

class NotAField(InsepError):
    def __init__(self, level, message=None):
        self.level = level
        super().__init__(message or f"level {level}: right-hand side is a p-th power, "
                                    "so the tower is not a field")


class NoFiniteExponent(InsepError):
    pass


class NotGenerating(InsepError):
    pass


class MonotonicityViolation(InsepError):
    pass


class NoRepresentation(InsepError):
    pass


class IndexNotPPower(InsepError):
    pass


# essential dimension bookkeeping

class SandwichMismatch(InsepError):
    pass
