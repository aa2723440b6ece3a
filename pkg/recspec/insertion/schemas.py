import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, root_validator


class EllSequence(BaseModel):
    """Integer sequence l_n0, ..., l_K driving the insertion map."""

    values: Tuple[int, ...]
    n0: int
    target_lower: float
    target_upper: float
    # indices k where the running rate log(l_k)/k peaked and bottomed out
    peaks: Tuple[int, ...] = ()
    troughs: Tuple[int, ...] = ()

    class Config:
        title = "EllSequence"
        allow_mutation = False

    @root_validator(skip_on_failure=True)
    def growth_conditions(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """Check l_{n+1} >= l_n + 2n and l_n >= n^3."""
        n0 = values["n0"]
        ells = values["values"]
        if n0 < 2:
            raise ValueError("n0 must be at least 2")
        if not ells:
            raise ValueError("empty sequence")
        if not 0 <= values["target_lower"] <= values["target_upper"]:
            raise ValueError("targets must satisfy 0 <= lower <= upper")
        for offset, ell in enumerate(ells):
            index = n0 + offset
            if ell < index ** 3:
                raise ValueError(f"l_{index} = {ell} below {index}^3")
            if offset and ell < ells[offset - 1] + 2 * (index - 1):
                raise ValueError(f"l_{index} grows too slowly")
        return values

    @property
    def last_index(self) -> int:
        """The index K of the last value."""
        return self.n0 + len(self.values) - 1

    @property
    def indices(self) -> range:
        """Indices n0 .. K."""
        return range(self.n0, self.last_index + 1)

    def __getitem__(self, index: int) -> int:
        if not self.n0 <= index <= self.last_index:
            raise IndexError(f"l_{index} outside {self.n0}..{self.last_index}")
        return self.values[index - self.n0]

    def __len__(self) -> int:
        return len(self.values)

    def log_rates(self) -> np.ndarray:
        """:return: log(l_k) / k for every index."""
        return np.array(
            [math.log(ell) / index for index, ell in zip(self.indices, self.values)],
        )

    def truncated(self, last_index: int) -> "EllSequence":
        """:return: the sequence cut after last_index."""
        keep = last_index - self.n0 + 1
        return EllSequence(
            values=self.values[:keep],
            n0=self.n0,
            target_lower=self.target_lower,
            target_upper=self.target_upper,
            peaks=tuple(k for k in self.peaks if k <= last_index),
            troughs=tuple(k for k in self.troughs if k <= last_index),
        )

    def to_rows(self) -> List[Tuple[int, int]]:
        """:return: (k, l_k) rows for CSV export."""
        return list(zip(self.indices, self.values))


class InsertionSpec(BaseModel):
    """Alphabets and distinguished letters of the insertion map."""

    inner_alphabet: Tuple[int, ...]
    outer_alphabet: Tuple[int, ...]
    marker: int
    c: int
    c_bar: int

    class Config:
        title = "InsertionSpec"
        allow_mutation = False

    @root_validator(skip_on_failure=True)
    def letters_are_distinct(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """The marker is new, c and c_bar are distinct non-marker letters."""
        inner = set(values["inner_alphabet"])
        outer = set(values["outer_alphabet"])
        marker, c, c_bar = values["marker"], values["c"], values["c_bar"]
        if not inner < outer:
            raise ValueError("outer alphabet must strictly contain the inner one")
        if len(outer) < 3:
            raise ValueError("outer alphabet needs at least three letters")
        if marker in inner or marker not in outer:
            raise ValueError("marker must be an outer letter outside the inner alphabet")
        if c == c_bar or marker in (c, c_bar) or not {c, c_bar} <= outer:
            raise ValueError("c and c_bar must be distinct outer letters other than the marker")
        return values

    @classmethod
    def default(cls, inner_size: int) -> "InsertionSpec":
        """
        Spec over inner letters 0 .. inner_size - 1.

        The marker is the next letter, c and c_bar the two smallest letters.
        """
        inner = tuple(range(inner_size))
        return cls(
            inner_alphabet=inner,
            outer_alphabet=inner + (inner_size,),
            marker=inner_size,
            c=0,
            c_bar=1 if inner_size > 1 else inner_size + 1,
        )

    @property
    def outer_size(self) -> int:
        """Alphabet size of outer words."""
        return max(self.outer_alphabet) + 1


class LemmaViolation(BaseModel):
    """A block length where the repetition time is not the prescribed value."""

    k: int
    expected: int
    found: Optional[int]


class LemmaReport(BaseModel):
    """Outcome of checking R_k(g(w)) = l_k."""

    checked: Tuple[int, ...]
    violations: Tuple[LemmaViolation, ...]
    horizon: int

    @property
    def passed(self) -> bool:
        """True when no violation was found."""
        return not self.violations
