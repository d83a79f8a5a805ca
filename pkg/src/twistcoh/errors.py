"""Exception hierarchy shared by the engine and the CLI."""


class TwistError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(TwistError, ValueError):
    pass


class AxisOutOfRange(TwistError, IndexError):
    pass


class NotInvertible(TwistError, ArithmeticError):
    pass


class UnsupportedStructure(TwistError, ValueError):
    """Raised for operations that need an even-dimensional torus."""


class NotClosed(TwistError, ValueError):
    pass


class AssemblyError(TwistError):
    """An operator image left the target truncation."""


class ComplexPropertyViolation(TwistError):
    pass


class ChainMapViolation(TwistError):
    pass


class PreconditionViolation(TwistError, ValueError):
    pass


class FixtureError(TwistError, ValueError):
    pass


class ParseError(TwistError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
