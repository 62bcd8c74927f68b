"""Exception hierarchy shared by all ricciflow modules.

Every domain failure derives from :class:`RicciError` so callers (and the
CLI) can distinguish domain errors (exit code 1) from I/O errors (exit 2).
"""


class RicciError(Exception):
    """Base class for all domain errors raised by this package."""


class ParseError(RicciError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DuplicateEdge(RicciError):
    def __init__(self, u, v):
        super().__init__(f"duplicate edge ({u}, {v})")
        self.u, self.v = u, v


class SelfLoop(RicciError):
    def __init__(self, u):
        super().__init__(f"self-loop at vertex {u}")
        self.u = u


class InvalidWeight(RicciError):
    pass


class InvalidScale(RicciError):
    pass


class InvalidParams(RicciError):
    pass


class NotConnected(RicciError):
    pass


class Unreachable(RicciError):
    def __init__(self, vertex):
        super().__init__(f"vertex {vertex} is unreachable from the source")
        self.vertex = vertex


class MassImbalance(RicciError):
    pass


class OracleTooLarge(RicciError):
    pass


class DegenerateNeighborhood(RicciError):
    pass


class IncompleteMatrix(RicciError):
    pass


class DualInfeasible(RicciError):
    pass


class DegenerateState(RicciError):
    pass


class InvalidMethod(RicciError):
    pass


class MissingGroup(RicciError):
    def __init__(self, vertex):
        super().__init__(f"vertex {vertex} has no group assignment")
        self.vertex = vertex
