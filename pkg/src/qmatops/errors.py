"""Exception hierarchy.

Everything that signals bad input derives from :class:`ValidationError`
(the CLI maps it to exit status 2).  :class:`PostSelectionImpossible` and
:class:`QubitCapExceeded` get their own exit codes and are kept separate.
"""


class QMatOpsError(Exception):
    pass


class ValidationError(QMatOpsError, ValueError):
    pass


class NonPowerOfTwo(ValidationError):
    pass


class ZeroMatrix(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class ColumnIndexOutOfRange(ValidationError):
    pass


class EqualColumns(ValidationError):
    pass


class DuplicateRegisterName(ValidationError):
    pass


class UnknownRegister(ValidationError, KeyError):
    pass


class ValueOutOfRange(ValidationError):
    pass


class WidthMismatch(ValidationError):
    pass


class OverlappingSupport(ValidationError):
    pass


class ResidualEntanglement(ValidationError):
    """Registers outside the decoded pair are not in a single basis state."""


class PostSelectionImpossible(QMatOpsError):
    """The requested measurement outcome has (numerically) zero probability."""


class QubitCapExceeded(QMatOpsError):
    pass
