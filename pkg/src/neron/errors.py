"""Exception hierarchy shared by all modules.

Every error carries a CLI exit code so the command-line front end can map
failures without inspecting messages.
"""


class NeronError(Exception):
    exit_code = 1


class InputError(NeronError):
    exit_code = 1


class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class UnsupportedField(InputError):
    exit_code = 3


class ZeroDenominator(NeronError, ZeroDivisionError):
    pass


class DivisionByZero(NeronError, ZeroDivisionError):
    pass


class NotExpandable(NeronError):
    pass


class PrecisionLoss(NeronError):
    exit_code = 2


class WildDegree(NeronError):
    exit_code = 3


class NegativeValuation(NeronError):
    pass


class NoRationalRoot(NeronError):
    exit_code = 3


class ExtensionBound(NeronError):
    exit_code = 3


class SingularCurve(InputError):
    pass


class WildCurve(NeronError):
    exit_code = 3


class IncompleteTower(InputError):
    pass


class PositiveSplitRank(NeronError):
    pass


class InvalidAction(InputError):
    pass
