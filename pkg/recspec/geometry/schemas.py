import math
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, root_validator, validator
from scipy.optimize import brentq

from recspec.settings import settings
from recspec.symbolic.schemas import SubshiftOfFiniteType

LINEAR = "linear"
SINE = "sine"

_TOLERANCE = 1e-12

Number = Union[float, np.ndarray]


class Branch(BaseModel):
    """
    Monotone branch of an interval map.

    Linear branches map domain affinely onto image, reversing orientation
    when orientation is -1. Sine branches follow 2x + (eps/pi) sin(2 pi x)
    minus an integer offset.
    """

    domain: Tuple[float, float]
    image: Tuple[float, float]
    kind: str = LINEAR
    orientation: int = 1
    epsilon: float = 0.0
    offset: float = 0.0

    class Config:
        title = "Branch"
        allow_mutation = False

    @validator("kind")
    def kind_is_known(cls, value: str) -> str:
        """Only linear and sine branches are modelled."""
        if value not in (LINEAR, SINE):
            raise ValueError(f"unknown branch kind {value}")
        return value

    @validator("orientation")
    def orientation_is_sign(cls, value: int) -> int:
        """Orientation is +1 or -1."""
        if value not in (1, -1):
            raise ValueError("orientation must be 1 or -1")
        return value

    @root_validator(skip_on_failure=True)
    def intervals_are_proper(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """Domain and image are non-degenerate intervals."""
        for name in ("domain", "image"):
            left, right = values[name]
            if not left < right:
                raise ValueError(f"{name} must have left < right")
        return values

    @property
    def slope(self) -> float:
        """Signed slope of a linear branch."""
        width = (self.image[1] - self.image[0]) / (self.domain[1] - self.domain[0])
        return self.orientation * width

    @property
    def min_expansion(self) -> float:
        """Infimum of |Df| on the domain."""
        if self.kind == LINEAR:
            return abs(self.slope)
        return 2.0 - 2.0 * abs(self.epsilon)

    def value(self, x: Number) -> Number:
        """Branch applied to x, clipped to the image."""
        if self.kind == LINEAR:
            start = self.image[0] if self.orientation > 0 else self.image[1]
            result = start + self.slope * (x - self.domain[0])
        else:
            result = 2 * x + self.epsilon / math.pi * np.sin(2 * math.pi * x) - self.offset
        return np.clip(result, self.image[0], self.image[1])

    def derivative(self, x: Number) -> Number:
        """Df at x."""
        if self.kind == LINEAR:
            return self.slope + 0 * x
        return 2 + 2 * self.epsilon * np.cos(2 * math.pi * x)

    def inverse(self, y: float) -> float:
        """Point of the domain mapped to y."""
        if self.kind == LINEAR:
            start = self.image[0] if self.orientation > 0 else self.image[1]
            return self.domain[0] + (y - start) / self.slope
        return float(brentq(lambda x: self.value(x) - y, self.domain[0], self.domain[1], xtol=1e-15))

    def inverse_affine(self) -> Tuple[float, float]:
        """(p, q) with inverse(y) = p + q y for a linear branch."""
        start = self.image[0] if self.orientation > 0 else self.image[1]
        return self.domain[0] - start / self.slope, 1.0 / self.slope


class MarkovExpandingMap(BaseModel):
    """Interval map with finitely many monotone branches and a Markov partition."""

    name: str
    branches: Tuple[Branch, ...]

    class Config:
        title = "MarkovExpandingMap"
        allow_mutation = False

    @root_validator(skip_on_failure=True)
    def partition_is_markov(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        """Domains are ordered and disjoint; images start and end at domain endpoints."""
        branches = values["branches"]
        if len(branches) < 1:
            raise ValueError("at least one branch is required")
        for first, second in zip(branches, branches[1:]):
            if first.domain[1] > second.domain[0] + _TOLERANCE:
                raise ValueError("branch domains must be ordered and disjoint")
        endpoints = [point for branch in branches for point in branch.domain]
        for branch in branches:
            for point in branch.image:
                if min(abs(point - end) for end in endpoints) > _TOLERANCE:
                    raise ValueError(f"image endpoint {point} is not a partition endpoint")
        return values

    def __len__(self) -> int:
        return len(self.branches)

    @property
    def is_linear(self) -> bool:
        """True when every branch is affine."""
        return all(branch.kind == LINEAR for branch in self.branches)

    @property
    def min_slope(self) -> float:
        """inf |Df| over all branches."""
        return min(branch.min_expansion for branch in self.branches)

    @property
    def domains(self) -> np.ndarray:
        """(branches x 2) array of domain endpoints."""
        return np.array([branch.domain for branch in self.branches])

    @property
    def transitions(self) -> np.ndarray:
        """0/1 matrix: i -> j when the domain of j lies in the image of i."""
        size = len(self.branches)
        matrix = np.zeros((size, size), dtype=np.int8)
        for i, source in enumerate(self.branches):
            for j, target in enumerate(self.branches):
                inside_left = target.domain[0] >= source.image[0] - _TOLERANCE
                inside_right = target.domain[1] <= source.image[1] + _TOLERANCE
                matrix[i, j] = int(inside_left and inside_right)
        return matrix

    @property
    def sft(self) -> SubshiftOfFiniteType:
        """Subshift coding the repeller."""
        return SubshiftOfFiniteType(alphabet_size=len(self.branches), transitions=self.transitions)

    def locate(self, x: float) -> Optional[int]:
        """
        Branch whose domain holds x.

        :return: branch index, or None on a shared endpoint or in a gap.
        """
        holders = [
            index
            for index, (left, right) in enumerate(self.domains)
            if left <= x <= right
        ]
        if len(holders) != 1:
            return None
        return holders[0]

    def apply(self, x: float) -> float:
        """f(x) for a point of a partition interior."""
        index = self.locate(x)
        if index is None:
            raise ValueError(f"{x} is not in a partition interior")
        return float(self.branches[index].value(x))

    def derivative(self, x: float) -> float:
        """Df(x)."""
        index = self.locate(x)
        if index is None:
            raise ValueError(f"{x} is not in a partition interior")
        return float(self.branches[index].derivative(x))

    def decode_depth(self, bits: Optional[int] = None) -> int:
        """Letters needed to pin a point to within 2^-bits."""
        bits = settings.decode_depth if bits is None else bits
        return int(math.ceil(bits * math.log(2) / math.log(self.min_slope)))


class DistortionData(BaseModel):
    """Distortion constant D, level-1 gap delta and kappa = delta / D."""

    D: float
    delta: float
    kappa: float
    full_branch_adjacent: bool = False


SKIPPED = "skipped"


def side_status(value: Optional[bool]) -> str:
    """:return: "true", "false" or "skipped" for one side of a sandwich."""
    return SKIPPED if value is None else str(value).lower()


class BallCylinderReport(BaseModel):
    """
    Comparison of an n-cylinder with the two balls around x.

    inner_holds is None when the inner side is skipped: with adjacent
    level-1 branches no kappa keeps the inner ball inside the cylinder.
    """

    x: float
    n: int
    cylinder: Tuple[float, float]
    inner_radius: float
    outer_radius: float
    inner_holds: Optional[bool]
    outer_holds: bool
    # largest kappa for the inner ball, smallest 1/kappa for the outer one
    tight_inner: float
    tight_outer: float

    @property
    def holds(self) -> bool:
        """True when no checked side fails."""
        return self.outer_holds and self.inner_holds is not False


class RecurrenceSandwichReport(BaseModel):
    """
    tau at kappa exp(-S_k psi) >= R_k >= tau at exp(-S_k psi) / kappa.

    small_holds is None when the small-radius side is skipped.
    """

    k: int
    repetition: int
    birkhoff: float
    tau_small: Optional[int]
    tau_large: int
    small_holds: Optional[bool]
    large_holds: bool

    @property
    def holds(self) -> bool:
        """True when no checked side fails."""
        return self.large_holds and self.small_holds is not False


class BranchSpec(BaseModel):
    """One branch as written in a map file."""

    domain: Tuple[float, float]
    image: Tuple[float, float]
    orientation: int = 1


class MapSpec(BaseModel):
    """Map file contents: a named family with parameters or explicit branches."""

    name: str = "map"
    family: str = LINEAR
    slopes: Optional[List[float]] = None
    epsilon: Optional[float] = None
    branch: List[BranchSpec] = []

    class Config:
        title = "MapSpec"
