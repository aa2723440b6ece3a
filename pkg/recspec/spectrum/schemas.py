from typing import Any, Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, root_validator

from recspec.geometry.schemas import MarkovExpandingMap
from recspec.insertion.schemas import EllSequence
from recspec.symbolic.schemas import ReturnAlphabet, Word
from recspec.thermo.schemas import EquilibriumState, Potential

GEOMETRIC = "geometric"
SYMBOLIC = "symbolic"


class SourceConfig(BaseModel):
    """
    Equilibrium source on the shift with returns to A shorter than n.

    The induced letters 0 .. inner_size - 1 are the first-return words with
    t < n; letter inner_size is the marker, the smallest return word with
    t = n.
    """

    fmap: MarkovExpandingMap
    n: int
    cylinder: Word
    nu: EquilibriumState
    psi: Potential
    dimension: float
    pressure: float
    lambda_n: float
    mean_return: float
    cylinder_mass: float
    birkhoff_tolerance: float
    alphabet: ReturnAlphabet
    inner_size: int
    letter_probabilities: np.ndarray

    class Config:
        title = "SourceConfig"
        arbitrary_types_allowed = True
        allow_mutation = False

    @root_validator(skip_on_failure=True)
    def source_is_usable(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """A carries mass, the Lyapunov exponent is positive and a marker exists."""
        if values["cylinder_mass"] <= 0:
            raise ValueError("cylinder carries no mass")
        if values["lambda_n"] <= 0:
            raise ValueError("lambda_n must be positive")
        if len(values["alphabet"]) != values["inner_size"] + 1:
            raise ValueError("alphabet must hold the inner letters and one marker")
        return values

    @property
    def marker(self) -> int:
        """Induced letter of the marker."""
        return self.inner_size

    @property
    def marker_word(self) -> Word:
        """Base word of the marker."""
        return self.alphabet.entries[self.marker].return_word

    @property
    def mean_return_estimate(self) -> float:
        """1 / nu(A), the mean return time by Kac."""
        return 1.0 / self.cylinder_mass

    def summary(self) -> Dict[str, Any]:
        """:return: scalar fields for reports."""
        return {
            "n": self.n,
            "cylinder": self.cylinder.to_string(),
            "marker": self.marker_word.to_string(),
            "inner_size": self.inner_size,
            "dimension": self.dimension,
            "pressure": self.pressure,
            "lambda_n": self.lambda_n,
            "mean_return": self.mean_return,
            "cylinder_mass": self.cylinder_mass,
        }


class SourceSample(BaseModel):
    """Induced word drawn from the source with its achieved averages."""

    letters: Word
    base: Word
    birkhoff_average: float
    mean_return: float
    attempts: int

    class Config:
        title = "SourceSample"
        allow_mutation = False


class RecurrenceEstimate(BaseModel):
    """Rate samples with tail-window inf/sup and a log-log slope."""

    route: str
    samples: Tuple[Tuple[float, float], ...]
    lower: float
    upper: float
    window: float
    policy: str
    slope: Optional[float] = None
    censored: Tuple[float, ...] = ()

    @root_validator(skip_on_failure=True)
    def bounds_are_ordered(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """lower <= upper."""
        if values["lower"] > values["upper"]:
            raise ValueError("lower estimate above upper estimate")
        return values


class ConstructionResult(BaseModel):
    """A point built for prescribed lower and upper rates, with diagnostics."""

    alpha: float
    beta: float
    scaled_targets: Tuple[float, float]
    word: Word
    induced: Word
    point: float
    interval: Tuple[float, float]
    ell: EllSequence
    achieved_rates: Tuple[float, float]
    marker_word: Word
    checked: Tuple[int, ...]
    induced_violations: Tuple[int, ...]
    base_violations: Tuple[int, ...]
    estimate: RecurrenceEstimate
    source: Dict[str, Any]
    source_letters: Word

    @property
    def identity_holds(self) -> bool:
        """True when both repetition identities held at every checked k."""
        return not self.induced_violations and not self.base_violations


class LadderRow(BaseModel):
    """Source data at one return-time bound."""

    n: int
    pressure: Optional[float] = None
    dimension: Optional[float] = None
    lambda_n: Optional[float] = None
    entropy: Optional[float] = None
    note: str = ""


class DimensionLadder(BaseModel):
    """Source dimensions along a schedule of n."""

    rows: Tuple[LadderRow, ...]
    full_dimension: float
    gap_rate: Optional[float] = None


class AeRow(BaseModel):
    """Rate estimate of one sampled point."""

    index: int
    seed: int
    slope: Optional[float]
    lower: float
    upper: float


class AeReport(BaseModel):
    """Rate law over sampled points."""

    rows: Tuple[AeRow, ...]
    median: float
    iqr: float
    target: float


class PerturbationReport(BaseModel):
    """Inserted-letter drift of induced return-time sums."""

    checked: int
    violations: Tuple[int, ...]
    max_ratio: float


class GridCell(BaseModel):
    """One (alpha, beta) construction of a grid run."""

    index: int
    alpha: float
    beta: float
    seed: int
    lower: Optional[float] = None
    upper: Optional[float] = None
    identity_holds: Optional[bool] = None
    last_index: Optional[int] = None
    error: Optional[str] = None
