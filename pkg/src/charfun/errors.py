"""Exception hierarchy shared by all modules."""


class CharfunError(Exception):
    """Base class; ``kind`` is echoed in CLI error records."""

    kind = "error"


class DomainError(CharfunError, ValueError):
    kind = "domain"


class PoleError(DomainError):
    """Argument hits a pole of the gamma function."""

    kind = "pole"


class MomentError(CharfunError, ArithmeticError):
    kind = "moment"


class ConvergenceError(CharfunError, ArithmeticError):
    kind = "convergence"
