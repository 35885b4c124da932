"""Exception hierarchy for the qspir package.

Every error raised by the library derives from QspirError, so callers can
catch one type. The CLI maps QspirError (and argparse usage errors) to exit
code 2 and property failures (failed decodes, failed audits) to exit code 1.
"""


class QspirError(Exception):
    """Base class for all qspir errors."""


class ZeroInverse(QspirError):
    """Multiplicative inverse of zero requested."""


class Singular(QspirError):
    """Matrix inversion or linear solve on a singular square matrix."""


class DimensionMismatch(QspirError):
    """Operands have incompatible shapes."""


class BadPoints(QspirError):
    """Evaluation points are not pairwise distinct (or collide across roles)."""


class NotSSO(QspirError):
    """Generator pair fails the self-orthogonality condition."""


class NotInvertible(QspirError):
    """Stacked generator pair [G H] is not invertible."""


class FieldTooSmall(QspirError):
    """The prime q cannot host the requested number of distinct points."""


class Infeasible(QspirError):
    """No regime of the selected model admits the given parameters."""


class DecodeFailure(QspirError):
    """No consistent Byzantine candidate set explains the received answers."""


class SetTooLarge(QspirError):
    """A threat placement exceeds the bound declared in the scheme config."""


class BudgetExceeded(QspirError):
    """An exhaustive audit would enumerate more states than the budget allows."""


class NotAffine(QspirError):
    """A rank certificate was requested for a view that is not affine in the noise."""
