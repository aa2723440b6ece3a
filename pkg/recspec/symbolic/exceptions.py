from recspec.exceptions import RecspecError


class InvalidWordError(RecspecError):
    """Raised when a word or a word parameter is unusable."""

    code = "invalid_word"

    def __init__(self, detail: str = "Invalid word.") -> None:
        super(InvalidWordError, self).__init__(detail)


class NotInCylinderError(RecspecError):
    """Raised when a word does not start with the requested cylinder."""

    code = "not_in_cylinder"

    def __init__(self) -> None:
        super(NotInCylinderError, self).__init__("Word does not lie in the cylinder.")


class NoBranchingSymbolError(RecspecError):
    """Raised when no symbol of a subshift has two successors."""

    code = "no_branching_symbol"

    def __init__(self) -> None:
        super(NoBranchingSymbolError, self).__init__(
            "No symbol has two successors; the shift is a single cycle.",
        )


class EmptyAlphabetError(RecspecError):
    """Raised when no first-return word exists below the bound."""

    code = "empty_alphabet"

    def __init__(self) -> None:
        super(EmptyAlphabetError, self).__init__("No return word below the bound.")


class EmptySurvivorError(RecspecError):
    """Raised when removing holes leaves no admissible loop."""

    code = "empty_survivor"

    def __init__(self) -> None:
        super(EmptySurvivorError, self).__init__(
            "Surviving subshift has no admissible loop.",
        )
