"""Exception hierarchy shared by every part of the toolkit."""


class GreenRingError(Exception):
    """Base class for all toolkit errors."""


class FieldError(GreenRingError):
    """Bad prime, reducible modulus or characteristic mismatch."""


class DimensionError(GreenRingError):
    """Shapes of matrices do not agree."""


class ModuleMismatchError(GreenRingError):
    """Two modules live over different groups or fields."""


class InvalidModuleError(GreenRingError):
    """A module (or a subspace of one) violates a structural invariant."""


class SubgroupError(GreenRingError):
    """A subgroup basis is dependent or has the wrong length."""


class NotAnEndomorphismError(GreenRingError):
    """A matrix does not commute with the generator action."""


class NotClosedError(GreenRingError):
    """A basis offered as an algebra is not closed under multiplication."""


class DecompositionError(GreenRingError):
    """Splitting a non-local module failed after every fallback."""


class UnsupportedError(GreenRingError):
    """The request is outside what the toolkit computes."""


class SignatureInconsistencyError(GreenRingError):
    """A diamond subtraction produced a negative multiplicity."""


class ModuleFormatError(GreenRingError):
    """A module file could not be parsed."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class CertificateFormatError(ModuleFormatError):
    """A certificate file could not be parsed."""
