from recspec.exceptions import HorizonError, RecspecError


class SourceInfeasibleError(RecspecError):
    """Raised when the return-time bound leaves no usable source."""

    code = "source_infeasible"

    def __init__(self, detail: str) -> None:
        super(SourceInfeasibleError, self).__init__(detail)


class BirkhoffMissError(HorizonError):
    """Raised when no sample reaches the Birkhoff tolerance within the retry budget."""

    code = "birkhoff_miss"

    def __init__(self, attempts: int, length: int) -> None:
        super(BirkhoffMissError, self).__init__(
            f"No sample of {length} letters met the Birkhoff tolerance in {attempts} attempts.",
        )
