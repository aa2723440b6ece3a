from recspec.exceptions import HorizonError, RecspecError


class InvalidEllSequenceError(RecspecError):
    """Raised when a sequence breaks the growth conditions."""

    code = "invalid_ell_sequence"

    def __init__(self, detail: str) -> None:
        super(InvalidEllSequenceError, self).__init__(detail)


class InfeasibleTargetError(RecspecError):
    """Raised when target rates cannot be realized up to the requested index."""

    code = "infeasible_target"

    def __init__(self, detail: str) -> None:
        super(InfeasibleTargetError, self).__init__(detail)


class HorizonTooShortError(HorizonError):
    """Raised when a source word cannot fill the requested prefix."""

    code = "horizon_too_short"

    def __init__(self, detail: str) -> None:
        super(HorizonTooShortError, self).__init__(detail)
