from recspec.exceptions import HorizonError, RecspecError


class BoundaryOrbitError(RecspecError):
    """Raised when an orbit hits a shared partition endpoint or leaves the partition."""

    code = "boundary_orbit"

    def __init__(self, x: float, step: int) -> None:
        super(BoundaryOrbitError, self).__init__(
            f"Iterate {step} of the orbit lands on {x!r}, outside the partition interiors.",
        )


class InadmissibleWordError(RecspecError):
    """Raised when a word codes no point of the repeller."""

    code = "inadmissible_word"

    def __init__(self, word: str) -> None:
        super(InadmissibleWordError, self).__init__(f"Word {word} is not admissible.")


class CensoredError(HorizonError):
    """Raised when a return time exceeds the orbit horizon."""

    code = "censored"

    def __init__(self, detail: str) -> None:
        super(CensoredError, self).__init__(detail)
