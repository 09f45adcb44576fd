"""Exception hierarchy shared by all lcsmod modules."""


class LcsError(ValueError):
    """Base class for every error raised by lcsmod."""


class NotInvertible(LcsError):
    pass


class EvenModulus(LcsError):
    pass


class EvenDimension(EvenModulus):
    """The Pauli value map is undefined for even local dimension."""


class CompositeModulus(LcsError):
    pass


class DimensionMismatch(LcsError):
    pass


class TooLarge(LcsError):
    pass


class ParseError(LcsError):
    """Malformed input document.

    ``field`` is a JSON path such as ``constraints[2].coeffs[0]``; ``line`` and
    ``column`` are set for syntax errors.
    """

    def __init__(self, message, field=None, line=None, column=None):
        self.field = field
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if field is not None:
            where.append(f"field {field}")
        super().__init__(f"{message} ({'; '.join(where)})" if where else message)


class NonDthRootPhase(LcsError):
    pass


class NotAQuantumSolution(LcsError):
    pass


class VariantParityMismatch(LcsError):
    pass


class BadRelatorIndex(LcsError):
    pass


class NonCommutingRelator(LcsError):
    pass


class ZeroPhase(LcsError):
    pass


class InvalidCertificate(LcsError):
    pass


class ZeroCoefficient(LcsError):
    pass


class UnsupportedModulus(LcsError):
    pass


class RegimeMismatch(LcsError):
    pass


class CaseNotApplicable(LcsError):
    pass


class RecordMismatch(LcsError):
    pass
