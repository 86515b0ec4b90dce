"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class WindtreeError(Exception):
    """Base class; ``code`` is the stable machine-readable error name."""

    code = "ERROR"


class UndecidedError(WindtreeError):
    code = "UNDECIDED"

    def __init__(self, message: str, enclosure=None):
        super().__init__(message)
        self.enclosure = enclosure


class MixedFieldError(WindtreeError):
    code = "MIXED_FIELD"


class BudgetExceededError(WindtreeError):
    code = "BUDGET_EXCEEDED"


class ScalarDivisionByZero(WindtreeError, ZeroDivisionError):
    code = "DIVISION_BY_ZERO"


class ParamRangeError(WindtreeError, ValueError):
    code = "PARAM_RANGE"


class SingularPointError(WindtreeError):
    code = "SINGULAR"


class DegenerateError(WindtreeError):
    code = "DEGENERATE"


class NotAdmissibleError(WindtreeError, ValueError):
    code = "NOT_ADMISSIBLE"


class EmptyCellError(WindtreeError):
    code = "EMPTY_CELL"


class CapacityError(WindtreeError):
    code = "CAPACITY"


class OddNError(WindtreeError):
    code = "ODD_N"


class NotPeriodicError(WindtreeError):
    code = "NOT_PERIODIC_EXACT"


class NotQuadraticError(WindtreeError):
    """An exact answer exists but does not live in a real quadratic field."""

    code = "NOT_QUADRATIC"


class OutOfDomainError(WindtreeError):
    code = "OUT_OF_DOMAIN"


class CornerHitError(WindtreeError):
    code = "CORNER_HIT"

    def __init__(self, message: str, position=None):
        super().__init__(message)
        self.position = position


class PrecisionError(WindtreeError):
    code = "PRECISION"


class LabelingMismatchError(WindtreeError):
    code = "LABELING_MISMATCH"


class InternalError(WindtreeError):
    code = "INTERNAL"
