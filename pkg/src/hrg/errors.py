"""Exception types shared across the package."""
from __future__ import annotations


class HRGError(Exception):
    """Base class for all package errors."""


class InvalidParams(HRGError, ValueError):
    pass


class UnsupportedParams(InvalidParams):
    pass


class UnsupportedFamily(InvalidParams):
    pass


class CapacityExceeded(HRGError):
    def __init__(self, projected, cap):
        super().__init__(f"projected size {projected} exceeds cap {cap}")
        self.projected = projected
        self.cap = cap


class NonClique(HRGError):
    def __init__(self, u, v):
        super().__init__(f"vertices {u} and {v} are not adjacent")
        self.pair = (u, v)


class NotHyperRegular(HRGError):
    """Two cliques of the same size whose links differ in size.

    ``witness`` is ``((clique_a, size_a), (clique_b, size_b))``; when a
    clique has an empty link the second entry repeats it with size 0.
    """

    def __init__(self, witness, message=None):
        (a, sa), (b, sb) = witness
        super().__init__(message or f"link sizes differ: {a} -> {sa}, {b} -> {sb}")
        self.witness = witness


class NotTypeRegular(HRGError):
    def __init__(self, type_set, target, witness):
        super().__init__(
            f"cliques of type {sorted(type_set)} see different counts in part {target}: {witness}"
        )
        self.type_set = type_set
        self.target = target
        self.witness = witness


class PartCountMismatch(HRGError, ValueError):
    pass


class PointsNotStabilized(HRGError):
    def __init__(self, generator):
        super().__init__(f"generator {generator} does not preserve the point set")
        self.generator = generator


class NotNormal(HRGError):
    def __init__(self, witness):
        super().__init__(f"conjugate leaves the subgroup: {witness}")
        self.witness = witness


class BijectionFailure(HRGError):
    pass


class NotPure(HRGError):
    pass


class Disconnected(HRGError):
    """Raised for a disconnected weighted graph; ``lambda2`` is then 1."""

    lambda2 = 1.0


class EmptyGraph(HRGError):
    pass


class NotBiregular(HRGError):
    pass


class BoundUndefined(HRGError):
    pass


class NotSetTransitiveWarning(UserWarning):
    pass
