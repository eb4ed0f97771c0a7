"""
Errors
Exception hierarchy shared by all modules, plus the CLI exit-code mapping
"""

from typing import Optional


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2
EXIT_CAP = 3


class PickRouteError(Exception):
    """Base class for every error raised by this package"""


class UsageError(PickRouteError, ValueError):
    """Bad command-line usage"""


class InstanceError(PickRouteError, ValueError):
    """Malformed instance document or violated instance invariant"""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


class TourDocumentError(PickRouteError, ValueError):
    """Malformed tour document (unknown vertex ids, non-adjacent pairs, ...)"""


class InvalidTourError(PickRouteError, ValueError):
    """A valid tour subgraph was required and the given one is not"""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class PreconditionError(PickRouteError, ValueError):
    """An operation was applied outside its precondition"""


class CapacityError(PickRouteError, RuntimeError):
    """Instance exceeds a configured size cap"""


class EliminationCapError(PickRouteError, RuntimeError):
    """
    Connecting-double elimination did not finish within its iteration cap

    Carries the partial trace; reaching this would contradict the existence
    of an optimal tour without connecting double edges.
    """

    def __init__(self, message: str, steps: Optional[list] = None):
        self.steps = steps or []
        super().__init__(message)


def exit_code_for(exc: BaseException) -> int:
    """
    Map an exception to a CLI exit code

    Args:
        exc: Raised exception

    Returns:
        1 usage/parse error, 2 invariant/verification failure, 3 cap exceeded
    """
    if isinstance(exc, (CapacityError, EliminationCapError)):
        return EXIT_CAP
    if isinstance(exc, (InvalidTourError, PreconditionError)):
        return EXIT_VERIFICATION
    if isinstance(exc, (UsageError, InstanceError, TourDocumentError, OSError, ValueError)):
        return EXIT_USAGE
    return EXIT_VERIFICATION
