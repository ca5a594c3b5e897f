"""Exception hierarchy shared across the package."""


class ProjdistError(Exception):
    pass


class ExprParseError(ProjdistError):
    """Input text does not conform to the expression grammar."""


class EvaluationError(ProjdistError):
    """Missing assignment or vanishing denominator at an evaluation point."""


class PreconditionError(ProjdistError):
    """An operation was called outside its domain (degenerate input)."""


class ConsistencyError(ProjdistError):
    """Two independent computation routes disagree; indicates a bug."""
