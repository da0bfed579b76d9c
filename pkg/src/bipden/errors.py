"""Exception types raised across the package."""


class BipdenError(Exception):
    """Base class for all package-specific errors."""


class EdgeListFormatError(BipdenError):
    """An edge-list line or row could not be parsed."""


class DuplicateEdge(BipdenError):
    """The same (u, v) pair appears more than once in an edge list."""


class WeightOutOfRange(BipdenError):
    """An edge weight falls outside [0, 1]."""


class EmptySide(BipdenError):
    """Construction produced a graph with no nodes on one side."""


class IndexOutOfRange(BipdenError):
    """A node index is not valid for the requested side."""


class PartitionGraphMismatch(BipdenError):
    """A partition's node counts disagree with the graph's."""


class EmptyOppositeSide(BipdenError):
    """Core degree requested against a community with an empty opposite side."""


class AlreadyMember(BipdenError):
    """Delta-density requested for a node already in the target community."""


class OverlappingPartition(BipdenError):
    """An operation defined only for hard partitions got a multi-membership one."""


class BudgetExceeded(BipdenError):
    """Exhaustive enumeration would exceed the assignment-evaluation budget."""


class InvalidParams(BipdenError):
    """Closed-form parameters violate their domain constraints."""


class InvalidChain(BipdenError):
    """A chain-of-bicliques request cannot be realized with the given sides."""


class MismatchBeyondTolerance(BipdenError):
    """Empirical and closed-form values disagree beyond tolerance."""
