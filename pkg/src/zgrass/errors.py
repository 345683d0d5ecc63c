"""Exception hierarchy shared by every module of the package."""


class ZGrassError(ValueError):
    """Base class for mathematical precondition failures."""


class NotPrime(ZGrassError):
    pass


class ModulusTooLarge(ZGrassError):
    pass


class ContextMismatch(ZGrassError):
    pass


class NotAUnit(ZGrassError):
    pass


class ZeroHasNoDecomposition(ZGrassError):
    pass


class NotInvertible(ZGrassError):
    pass


class ShapeError(ZGrassError):
    pass


class NotUnimodular(ZGrassError):
    pass


class ContainmentDegenerate(ZGrassError):
    pass


class DimensionOverflow(ZGrassError):
    pass


class ParameterRange(ZGrassError):
    pass


class DualRequiresHalfDimension(ZGrassError):
    pass


class NotMcAdjacent(ZGrassError):
    pass


class BudgetExceeded(RuntimeError):
    """An exhaustive computation would exceed the configured operation cap.

    Exact oracles either run to completion or refuse; they never sample.
    """

    def __init__(self, projected: int, budget: int, what: str = "operation"):
        self.projected = projected
        self.budget = budget
        self.what = what
        super().__init__(f"{what}: projected cost {projected} exceeds budget {budget}")
