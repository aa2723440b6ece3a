from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, root_validator, validator

from recspec.services import SYMBOL_NAMES


def _frozen_array(value: Any, dtype: type) -> np.ndarray:
    array = np.array(value, dtype=dtype)
    array.setflags(write=False)
    return array


class Word(BaseModel):
    """Finite prefix of a one-sided symbolic sequence."""

    symbols: np.ndarray
    alphabet_size: int

    class Config:
        title = "Word"
        arbitrary_types_allowed = True
        allow_mutation = False

    @validator("symbols", pre=True)
    def symbols_as_array(cls, value: Any) -> np.ndarray:
        """Store symbols as a read-only int64 vector."""
        array = _frozen_array(value, np.int64)
        if array.ndim != 1:
            raise ValueError("symbols must be one-dimensional")
        return array

    @root_validator(skip_on_failure=True)
    def symbols_in_alphabet(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """Every symbol id is below the alphabet size."""
        size = values["alphabet_size"]
        symbols = values["symbols"]
        if size < 1:
            raise ValueError("alphabet_size must be positive")
        if symbols.size and (symbols.min() < 0 or symbols.max() >= size):
            raise ValueError("symbol outside the alphabet")
        return values

    @classmethod
    def from_string(cls, text: str, alphabet_size: Optional[int] = None) -> "Word":
        """
        Parse a word written with the standard symbol names.

        Spaces are ignored.

        :param text: word such as "0110".
        :param alphabet_size: alphabet size, inferred from the text if omitted.
        :return: the word.
        """
        symbols = [SYMBOL_NAMES.index(letter) for letter in text if letter != " "]
        if alphabet_size is None:
            alphabet_size = max(symbols, default=0) + 1
        return cls(symbols=symbols, alphabet_size=alphabet_size)

    @classmethod
    def of(cls, symbols: Iterable[int], alphabet_size: int) -> "Word":
        """:return: word from any iterable of symbol ids."""
        return cls(symbols=list(symbols), alphabet_size=alphabet_size)

    def to_string(self) -> str:
        """:return: word written with the standard symbol names."""
        if self.alphabet_size > len(SYMBOL_NAMES):
            return " ".join(str(symbol) for symbol in self.symbols)
        return "".join(SYMBOL_NAMES[symbol] for symbol in self.symbols)

    @property
    def key(self) -> Tuple[int, ...]:
        """Hashable form of the symbols."""
        return tuple(int(symbol) for symbol in self.symbols)

    def startswith(self, prefix: "Word") -> bool:
        """:return: True when the word lies in the cylinder of prefix."""
        size = len(prefix)
        return size <= len(self) and bool(
            np.array_equal(self.symbols[:size], prefix.symbols),
        )

    def concat(self, *others: "Word") -> "Word":
        """:return: concatenation of this word with others."""
        parts = [self.symbols] + [other.symbols for other in others]
        size = max([self.alphabet_size] + [other.alphabet_size for other in others])
        return Word(symbols=np.concatenate(parts), alphabet_size=size)

    def __len__(self) -> int:
        return int(self.symbols.size)

    def __getitem__(self, index: Union[int, slice]) -> Union[int, "Word"]:
        if isinstance(index, slice):
            return Word(symbols=self.symbols[index], alphabet_size=self.alphabet_size)
        return int(self.symbols[index])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"Word({self.to_string()!r})"


class SubshiftOfFiniteType(BaseModel):
    """One-sided subshift given by a 0/1 transition matrix."""

    alphabet_size: int
    transitions: np.ndarray
    # for recoded shifts: the base block each symbol stands for
    blocks: Optional[Tuple[Tuple[int, ...], ...]] = None

    class Config:
        title = "SubshiftOfFiniteType"
        arbitrary_types_allowed = True
        allow_mutation = False

    @validator("transitions", pre=True)
    def transitions_as_array(cls, value: Any) -> np.ndarray:
        """Store transitions as a read-only 0/1 matrix."""
        array = _frozen_array(value, np.int8)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ValueError("transition matrix must be square")
        if not np.isin(array, (0, 1)).all():
            raise ValueError("transition matrix must be 0/1")
        return array

    @root_validator(skip_on_failure=True)
    def no_stranded_symbols(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """Every row and every column holds at least one allowed transition."""
        matrix = values["transitions"]
        if matrix.shape[0] != values["alphabet_size"]:
            raise ValueError("matrix size differs from alphabet size")
        if not (matrix.any(axis=1).all() and matrix.any(axis=0).all()):
            raise ValueError("stranded symbol in transition matrix")
        blocks = values.get("blocks")
        if blocks is not None and len(blocks) != values["alphabet_size"]:
            raise ValueError("one block label per symbol is required")
        return values

    @classmethod
    def full_shift(cls, alphabet_size: int) -> "SubshiftOfFiniteType":
        """:return: full shift on alphabet_size symbols."""
        return cls(
            alphabet_size=alphabet_size,
            transitions=np.ones((alphabet_size, alphabet_size)),
        )

    @classmethod
    def golden_mean(cls) -> "SubshiftOfFiniteType":
        """:return: shift on {0, 1} forbidding the block 11."""
        return cls(alphabet_size=2, transitions=[[1, 1], [1, 0]])

    @classmethod
    def single_cycle(cls, alphabet_size: int) -> "SubshiftOfFiniteType":
        """:return: shift following 0 -> 1 -> ... -> 0."""
        matrix = np.roll(np.eye(alphabet_size), 1, axis=1)
        return cls(alphabet_size=alphabet_size, transitions=matrix)

    def successors(self, symbol: int) -> List[int]:
        """:return: sorted successors of symbol."""
        return [int(index) for index in np.flatnonzero(self.transitions[symbol])]

    def is_admissible(self, word: Word) -> bool:
        """:return: True when every adjacent pair of the word is allowed."""
        symbols = word.symbols
        if symbols.size and symbols.max() >= self.alphabet_size:
            return False
        if symbols.size < 2:
            return True
        return bool(self.transitions[symbols[:-1], symbols[1:]].all())

    def is_primitive(self) -> bool:
        """
        Check primitivity of the transition matrix.

        Wielandt's bound: a primitive n x n matrix has a strictly positive
        power of exponent (n - 1)^2 + 1 at most.

        :return: True when some power of the matrix is strictly positive.
        """
        size = self.alphabet_size
        exponent = (size - 1) ** 2 + 1
        base = self.transitions.astype(bool)
        result = np.eye(size, dtype=bool)
        while exponent:
            if exponent & 1:
                result = (result.astype(np.int64) @ base.astype(np.int64)) > 0
            base = (base.astype(np.int64) @ base.astype(np.int64)) > 0
            exponent >>= 1
        return bool(result.all())

    def word(self, text: str) -> Word:
        """:return: word over this alphabet written with symbol names."""
        return Word.from_string(text, alphabet_size=self.alphabet_size)


class ReturnEntry(BaseModel):
    """One letter of an induced alphabet: a first-return word."""

    return_word: Word
    return_time: int

    class Config:
        title = "ReturnEntry"
        allow_mutation = False

    @root_validator(skip_on_failure=True)
    def time_matches_length(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """A return word contributes exactly return_time base letters."""
        if values["return_time"] < 1:
            raise ValueError("return time must be positive")
        if len(values["return_word"]) != values["return_time"]:
            raise ValueError("return word length differs from return time")
        return values


class ReturnAlphabet(BaseModel):
    """First-return words to a base cylinder, optionally bounded."""

    base_cylinder: Word
    entries: Tuple[ReturnEntry, ...]
    bounded_by: Optional[int] = None

    class Config:
        title = "ReturnAlphabet"
        allow_mutation = False

    @root_validator(skip_on_failure=True)
    def entries_are_consistent(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """Entries are distinct and respect the bound."""
        entries = values["entries"]
        words = {entry.return_word.key for entry in entries}
        if len(words) != len(entries):
            raise ValueError("duplicate return word")
        bound = values.get("bounded_by")
        if bound is not None and any(entry.return_time >= bound for entry in entries):
            raise ValueError("return time above the bound")
        return values

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def return_times(self) -> np.ndarray:
        """Return time of every entry, in entry order."""
        return np.array([entry.return_time for entry in self.entries], dtype=np.int64)

    def flatten(self, letters: Iterable[int]) -> Word:
        """
        Concatenate entries into a base word.

        :param letters: entry indices.
        :return: concatenation of the corresponding return words.
        """
        parts = [self.entries[letter].return_word.symbols for letter in letters]
        size = self.base_cylinder.alphabet_size
        if not parts:
            return Word(symbols=[], alphabet_size=size)
        return Word(symbols=np.concatenate(parts), alphabet_size=size)
