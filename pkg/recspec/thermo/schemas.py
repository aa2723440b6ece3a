import math
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, root_validator, validator

from recspec.symbolic.schemas import SubshiftOfFiniteType, Word
from recspec.symbolic.shifts import admissible_words
from recspec.thermo.exceptions import IncompletePotentialError


class Potential(BaseModel):
    """Locally constant potential: one value per cylinder of a fixed level."""

    level: int
    values: Dict[Tuple[int, ...], float]

    class Config:
        title = "Potential"
        allow_mutation = False

    @root_validator(skip_on_failure=True)
    def keys_have_level_length(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """Every key is a word of length level."""
        level = values["level"]
        if level < 1:
            raise ValueError("level must be positive")
        if not values["values"]:
            raise ValueError("potential has no values")
        if any(len(key) != level for key in values["values"]):
            raise ValueError("cylinder key length differs from level")
        return values

    @classmethod
    def constant(cls, sft: SubshiftOfFiniteType, value: float = 0.0, level: int = 1) -> "Potential":
        """:return: potential equal to value on every admissible cylinder."""
        return cls(level=level, values={word: value for word in admissible_words(sft, level)})

    @classmethod
    def from_symbol_values(cls, values: Sequence[float]) -> "Potential":
        """:return: level-1 potential with values[i] on the cylinder [i]."""
        return cls(level=1, values={(symbol,): float(value) for symbol, value in enumerate(values)})

    @classmethod
    def bernoulli(cls, probabilities: Sequence[float]) -> "Potential":
        """:return: log p_i on [i]; its equilibrium state is Bernoulli(p)."""
        return cls.from_symbol_values([math.log(p) for p in probabilities])

    def value(self, block: Sequence[int]) -> float:
        """
        Value on the cylinder of a block of length level.

        :raises IncompletePotentialError: when the block has no value.
        """
        key = tuple(int(symbol) for symbol in block)
        try:
            return self.values[key]
        except KeyError:
            raise IncompletePotentialError(f"No value for cylinder {key}.")

    def check_covers(self, sft: SubshiftOfFiniteType) -> None:
        """:raises IncompletePotentialError: when an admissible cylinder is missing."""
        missing = [word for word in admissible_words(sft, self.level) if word not in self.values]
        if missing:
            raise IncompletePotentialError(f"No value for cylinder {missing[0]}.")

    def birkhoff_sum(self, word: Word, k: int) -> float:
        """
        Sum of the potential over the first k shifts of a word.

        :param word: word of length at least k + level - 1.
        """
        if len(word) < k + self.level - 1:
            raise IncompletePotentialError(f"Word too short for {k} terms at level {self.level}.")
        symbols = word.symbols
        return float(sum(self.value(symbols[i : i + self.level]) for i in range(k)))

    def scaled(self, factor: float) -> "Potential":
        """:return: factor times the potential."""
        return Potential(level=self.level, values={key: factor * v for key, v in self.values.items()})

    def shifted(self, constant: float) -> "Potential":
        """:return: the potential plus a constant."""
        return Potential(level=self.level, values={key: v + constant for key, v in self.values.items()})

    def refined(self, sft: SubshiftOfFiniteType, level: int) -> "Potential":
        """:return: the same function written on cylinders of a finer level."""
        if level < self.level:
            raise IncompletePotentialError(f"Cannot coarsen level {self.level} to {level}.")
        return Potential(
            level=level,
            values={word: self.value(word[: self.level]) for word in admissible_words(sft, level)},
        )

    def dominated_by(self, other: "Potential") -> bool:
        """:return: True when self <= other on every shared cylinder."""
        shared = self.values.keys() & other.values.keys()
        return all(self.values[key] <= other.values[key] for key in shared)

    def to_rows(self) -> List[Tuple[str, float]]:
        """:return: (cylinder word, value) rows in lexicographic order."""
        return [
            (" ".join(str(symbol) for symbol in key), value)
            for key, value in sorted(self.values.items())
        ]


class TransferGraph(BaseModel):
    """
    Weighted automaton reading one base letter per step.

    A state is the longest suffix of the history that is tracked; moving
    from a state by a letter either lands on a state or is forbidden (-1)
    because the letter is not allowed or completes a hole word.
    """

    states: Tuple[Tuple[int, ...], ...]
    successor: np.ndarray
    weight: np.ndarray
    alphabet_size: int
    level: int

    class Config:
        title = "TransferGraph"
        arbitrary_types_allowed = True
        allow_mutation = False

    @validator("successor", "weight")
    def arrays_are_read_only(cls, value: np.ndarray) -> np.ndarray:
        """Freeze state tables."""
        value.setflags(write=False)
        return value

    def __len__(self) -> int:
        return len(self.states)

    def edges(self) -> Iterator[Tuple[int, int, int]]:
        """:return: iterator over allowed (state, letter, next state)."""
        sources, letters = np.nonzero(self.successor >= 0)
        for state, letter in zip(sources, letters):
            yield int(state), int(letter), int(self.successor[state, letter])


class EquilibriumState(BaseModel):
    """Equilibrium state of a potential as a stationary Markov chain on graph states."""

    pressure: float
    right_eigvec: np.ndarray
    left_eigvec: np.ndarray
    stationary: np.ndarray
    # probability of reading each letter from each state
    step_probabilities: np.ndarray
    graph: TransferGraph
    entropy: float
    lyapunov: Optional[float] = None

    class Config:
        title = "EquilibriumState"
        arbitrary_types_allowed = True
        allow_mutation = False

    def _advance(self, vector: np.ndarray, letter: int) -> np.ndarray:
        targets = self.graph.successor[:, letter]
        allowed = targets >= 0
        following = np.zeros_like(vector)
        np.add.at(following, targets[allowed], vector[allowed] * self.step_probabilities[allowed, letter])
        return following

    def mass(self, word: Word) -> float:
        """:return: mass of the cylinder of a base word."""
        vector = self.stationary
        for letter in word.symbols:
            if not 0 <= letter < self.graph.alphabet_size:
                return 0.0
            vector = self._advance(vector, int(letter))
            if not vector.any():
                return 0.0
        return float(vector.sum())

    def iter_cylinders(self, level: int) -> Iterator[Tuple[Tuple[int, ...], float]]:
        """:return: iterator of (cylinder word, mass) over words of positive mass."""
        stack: List[Tuple[Tuple[int, ...], np.ndarray]] = [((), self.stationary)]
        while stack:
            word, vector = stack.pop()
            if len(word) == level:
                yield word, float(vector.sum())
                continue
            for letter in reversed(range(self.graph.alphabet_size)):
                following = self._advance(vector, letter)
                if following.any():
                    stack.append((word + (letter,), following))

    def cylinder_measure(self, level: int) -> Dict[Tuple[int, ...], float]:
        """:return: mass of every cylinder of the given level that carries mass."""
        return dict(self.iter_cylinders(level))

    def integrate(self, potential: Potential) -> float:
        """:return: integral of a locally constant potential."""
        return float(
            sum(mass * potential.value(word) for word, mass in self.iter_cylinders(potential.level)),
        )

    def measure_of(self, words: Sequence[Word]) -> float:
        """:return: total mass of a disjoint family of cylinders."""
        return float(sum(self.mass(word) for word in words))


class KacReport(BaseModel):
    """Induced return-time check on a cylinder."""

    cylinder_mass: float
    mean_return_time: float
    product: float
    tail_mass: float
    t_max: int


class HoleDecay(BaseModel):
    """Masses of long-return sets with a fitted exponential rate."""

    rows: Tuple[Tuple[int, float], ...]
    log_rate: float
    intercept: float


class ScheduleRow(BaseModel):
    """One step of a boundary-removal schedule."""

    n: int
    dimension: float
    sub_shift: Optional[SubshiftOfFiniteType] = None
    removed: Tuple[Word, ...] = ()


class DimensionEstimate(BaseModel):
    """Bowen root at one level with the refinement gap to the next level."""

    value: float
    level: int
    refinement_gap: float
