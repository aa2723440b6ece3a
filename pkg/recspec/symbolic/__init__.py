"""Words, subshifts of finite type, cylinders and induced alphabets."""
from recspec.symbolic.schemas import (
    ReturnAlphabet,
    ReturnEntry,
    SubshiftOfFiniteType,
    Word,
)
from recspec.symbolic.shifts import (
    admissible_words,
    find_connecting_paths,
    induced_alphabet,
    long_return_words,
    parse_return_words,
    remove_hole,
)
from recspec.symbolic.words import (
    first_match,
    repetition_time,
    repetition_times,
    return_time_to_cylinder,
)

__all__ = [
    "ReturnAlphabet",
    "ReturnEntry",
    "SubshiftOfFiniteType",
    "Word",
    "admissible_words",
    "find_connecting_paths",
    "first_match",
    "induced_alphabet",
    "long_return_words",
    "parse_return_words",
    "remove_hole",
    "repetition_time",
    "repetition_times",
    "return_time_to_cylinder",
]
