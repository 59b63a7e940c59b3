"""
core/exceptions.py
Error hierarchy. "Unsolvable" is never an exception: solvers return None for it.
"""


class CmpkitError(Exception):
    """Base class for every cmpkit failure."""


# ---------------------------------------------------------------------------
# Model errors
# ---------------------------------------------------------------------------

class OutOfBounds(CmpkitError):
    def __init__(self, step: int, point: tuple[int, int]):
        super().__init__(f"route leaves the grid at step {step}, position {point}")
        self.step = step
        self.point = point


class HorizonMismatch(CmpkitError):
    pass


class BadInterval(CmpkitError):
    pass


class NonMonotoneH(CmpkitError):
    pass


# ---------------------------------------------------------------------------
# Analysis / snapshot errors
# ---------------------------------------------------------------------------

class NotACell(CmpkitError):
    pass


class NotOrganized(CmpkitError):
    pass


class OrganizeFailed(CmpkitError):
    """Wait postponement hit a configuration it cannot push forward."""


class InconsistentWitness(CmpkitError):
    pass


# ---------------------------------------------------------------------------
# Solver errors
# ---------------------------------------------------------------------------

class ResourceLimit(CmpkitError):
    """The search budget ran out before the question was settled."""

    def __init__(self, expanded: int, what: str = "search"):
        super().__init__(f"{what} exhausted its budget after {expanded} expansions")
        self.expanded = expanded


class TooLarge(CmpkitError):
    pass


class DelegatedToExact(CmpkitError):
    """Raised when the constructive scheduler hands a small grid to the exact solver.

    Carries the exact solver's result (which may be None) so callers can still use it.
    """

    def __init__(self, schedule, reason: str):
        super().__init__(reason)
        self.schedule = schedule


# ---------------------------------------------------------------------------
# Reduction / generation errors
# ---------------------------------------------------------------------------

class BoundaryBlocker(CmpkitError):
    pass


class ClearanceViolation(CmpkitError):
    pass


class LayoutOverlap(CmpkitError):
    pass


class TooManyRobots(CmpkitError):
    pass
