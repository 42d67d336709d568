class PowSimError(Exception):
    """Base exception for all powsim errors"""


class InvalidParameterError(PowSimError, ValueError):
    """Raised when an operation is called outside its preconditions"""


class UnknownNodeError(PowSimError, KeyError):
    """Raised when a node id is not part of the graph or profile"""

    def __init__(self, node):
        self.node = node
        super().__init__(f"Unknown node: {node}")

    def __str__(self):
        return f"Unknown node: {self.node}"


class DisconnectedGraphError(PowSimError):
    """Raised when a distance metric needs a connected (sub)graph."""

    def __init__(self, components):
        self.components = [sorted(c) for c in components]
        summary = "; ".join(
            "{" + ", ".join(map(str, c[:8])) + (", ..." if len(c) > 8 else "") + "}"
            for c in self.components
        )
        super().__init__(
            f"Graph is disconnected ({len(self.components)} components): {summary}"
        )


class AdjacencyError(PowSimError):
    """Raised when a vertex cut is requested between adjacent nodes"""

    def __init__(self, s, t):
        self.s = s
        self.t = t
        super().__init__(f"Nodes {s} and {t} are adjacent; no vertex cut separates them")


class EmptyCandidatesError(PowSimError, ValueError):
    """Raised when fork choice is asked to pick from nothing"""


class DomainError(PowSimError, ValueError):
    """Raised when a probability argument is outside the model's domain"""


class DegenerateDataError(PowSimError, ValueError):
    """Raised when a fit has no usable signal"""


class NormalizationError(PowSimError, ValueError):
    """Raised when a probability vector does not sum to one"""


class WrongClassError(PowSimError):
    """Raised when an operation is applied to a node of the wrong class"""


class EmptyClassError(PowSimError):
    """Raised when a node class has no members in the trace"""


class GraphFormatError(PowSimError, ValueError):
    """Raised when a graph text dump cannot be parsed"""


class ConfigError(PowSimError):
    """Raised when a run or experiment config fails validation"""


class MismatchedKindError(PowSimError):
    """Raised when acceptance criteria do not fit the result bundle"""


class AcceptanceFailure(PowSimError):
    """Raised when --assert is given and a criterion fails"""

    def __init__(self, failed):
        self.failed = list(failed)
        names = ", ".join(getattr(f, "name", str(f)) for f in self.failed)
        super().__init__(f"Acceptance criteria failed: {names}")
