from recspec.exceptions import RecspecError


class ZeroMassCylinderError(RecspecError):
    """Raised when a cylinder carries no mass under the equilibrium state."""

    code = "zero_mass_cylinder"

    def __init__(self, detail: str = "Cylinder has zero mass.") -> None:
        super(ZeroMassCylinderError, self).__init__(detail)


class NotExpandingError(RecspecError):
    """Raised when a map is not uniformly expanding."""

    code = "not_expanding"

    def __init__(self, detail: str = "Map is not uniformly expanding.") -> None:
        super(NotExpandingError, self).__init__(detail)


class IncompletePotentialError(RecspecError):
    """Raised when a potential misses an admissible cylinder."""

    code = "incomplete_potential"

    def __init__(self, detail: str) -> None:
        super(IncompletePotentialError, self).__init__(detail)
