"""Exception hierarchy shared by every module."""


class SmallFusionError(Exception):
    """Base class for all errors raised by the package."""


class InconsistentPresentation(SmallFusionError):
    pass


class UnsupportedOrder(SmallFusionError):
    pass


class NotCentralInvolution(SmallFusionError):
    pass


class NotNormal(SmallFusionError):
    pass


class Singular(SmallFusionError):
    pass


class ParamOutOfRange(SmallFusionError):
    pass


class ConstructionInvalid(SmallFusionError):
    pass


class CapExceeded(SmallFusionError):
    """A search or enumeration would exceed a configured cap or node budget."""


class NotCentralInF(SmallFusionError):
    pass


class ParseError(SmallFusionError):
    """Syntax error with a 1-based line/column position."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")


class SemanticError(ParseError):
    pass
