import math
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, validator

from recspec.settings import settings

COMMANDS = ("pressure", "dimension", "holes", "construct", "recurrence", "spectrum", "verify")
VERIFY_CHECKS = ("lemma-g", "sandwich", "kac")
HOLE_FAMILIES = ("ones", "boundary", "returns")


class RunConfig(BaseModel):
    """Fully resolved run: command, map, parameters, seed and output place."""

    command: str
    check: Optional[str] = None
    map_spec: Optional[str] = None
    params: Dict[str, Any] = {}
    seed: int = 0
    output_dir: Path = settings.output_dir
    threads: int = 1
    dry_run: bool = False

    class Config:
        title = "RunConfig"

    @validator("command")
    def command_is_known(cls, value: str) -> str:
        """One of the subcommands."""
        if value not in COMMANDS:
            raise ValueError(f"unknown command {value}")
        return value

    @validator("check")
    def check_is_known(cls, value: Optional[str]) -> Optional[str]:
        """Verification groups."""
        if value is not None and value not in VERIFY_CHECKS:
            raise ValueError(f"unknown check {value}")
        return value

    @validator("seed")
    def seed_fits_64_bits(cls, value: int) -> int:
        """Seeds are unsigned 64-bit integers."""
        if not 0 <= value < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        return value

    @validator("threads")
    def threads_positive(cls, value: int) -> int:
        """At least one worker."""
        if value < 1:
            raise ValueError("threads must be positive")
        return value

    def resolved(self) -> Dict[str, Any]:
        """:return: JSON-ready form for the manifest."""
        payload = self.dict()
        payload["output_dir"] = str(self.output_dir)
        return payload


def split_list(value: Any) -> Any:
    """Single values and comma-separated text become lists."""
    if isinstance(value, str):
        return [item for item in value.split(",") if item]
    if isinstance(value, (int, float)):
        return [value]
    return value


class ShiftParams(BaseModel):
    """Shift and level-1 potential shared by the symbolic commands."""

    shift: str = "full:2"
    probabilities: Optional[List[float]] = None
    level: int = 1

    _probabilities_list = validator("probabilities", pre=True, allow_reuse=True)(split_list)

    @validator("probabilities")
    def probabilities_sum_to_one(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        """Weights of a Bernoulli-type potential."""
        if value is not None and (min(value) <= 0 or not math.isclose(sum(value), 1.0, rel_tol=1e-9)):
            raise ValueError("probabilities must be positive and sum to 1")
        return value


class PressureParams(ShiftParams):
    masses_level: int = 0


class DimensionParams(BaseModel):
    level: int = 1


class HolesParams(ShiftParams):
    family: str = "ones"
    n_max: int = 20

    @validator("family")
    def family_is_known(cls, value: str) -> str:
        """Supported hole families."""
        if value not in HOLE_FAMILIES:
            raise ValueError(f"unknown hole family {value}")
        return value


class ConstructParams(BaseModel):
    alpha: float = 0.0
    beta: float = 0.0
    n: int = 6
    horizon: int = 1_000_000
    birkhoff_tolerance: float = 0.05

    @validator("beta", always=True)
    def targets_are_ordered(cls, value: float, values: Dict[str, Any]) -> float:
        """0 <= alpha <= beta; beta may be inf."""
        alpha = values.get("alpha")
        if alpha is not None and not 0 <= alpha <= value:
            raise ValueError("targets must satisfy 0 <= alpha <= beta")
        return value

    @validator("n")
    def bound_at_least_two(cls, value: int) -> int:
        """Return-time bound of the source."""
        if value < 2:
            raise ValueError("n must be at least 2")
        return value

    @validator("horizon", "birkhoff_tolerance")
    def positive(cls, value: float) -> float:
        """Horizon and tolerance."""
        if value <= 0:
            raise ValueError("must be positive")
        return value


class RecurrenceParams(BaseModel):
    x: Optional[float] = None
    samples: int = 100
    horizon: int = 1_000_000
    probabilities: Optional[List[float]] = None
    r_min_exponent: int = 5
    r_max_exponent: int = 16

    _probabilities_list = validator("probabilities", pre=True, allow_reuse=True)(split_list)


class SpectrumParams(BaseModel):
    n_schedule: List[int] = [4, 6, 8, 10]
    alphas: List[float] = []
    betas: List[float] = []
    n: int = 6
    horizon: int = 1_000_000

    _lists = validator("n_schedule", "alphas", "betas", pre=True, allow_reuse=True)(split_list)


class LemmaParams(BaseModel):
    alphabet: int = 3
    trials: int = 1000
    horizon: int = 1_000_000
    n0: int = 2


class SandwichParams(BaseModel):
    points: int = 50
    k_max: int = 14
    n_max: int = 20
    horizon: int = 200_000


class KacParams(ShiftParams):
    cylinder: str = "0"
    t_max: int = 40
