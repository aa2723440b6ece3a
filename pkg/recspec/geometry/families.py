"""Named map families and map files."""
import math
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence, Tuple

import tomli
from pydantic import ValidationError

from recspec.geometry.schemas import LINEAR, SINE, Branch, MapSpec, MarkovExpandingMap

GOLDEN_RATIO = (1 + math.sqrt(5)) / 2


def linear_map(
    domains: Sequence[Tuple[float, float]],
    images: Sequence[Tuple[float, float]],
    orientations: Optional[Sequence[int]] = None,
    name: str = "linear",
) -> MarkovExpandingMap:
    """:return: piecewise-linear Markov map from explicit branches."""
    orientations = orientations or [1] * len(domains)
    branches = tuple(
        Branch(domain=domain, image=image, orientation=orientation)
        for domain, image, orientation in zip(domains, images, orientations)
    )
    return MarkovExpandingMap(name=name, branches=branches)


def doubling() -> MarkovExpandingMap:
    """x -> 2x mod 1."""
    return linear_map([(0.0, 0.5), (0.5, 1.0)], [(0.0, 1.0)] * 2, name="doubling")


def two_slope_map(first: float, second: float, name: Optional[str] = None) -> MarkovExpandingMap:
    """
    Two full branches of slopes first and second at both ends of [0, 1].

    :raises ValueError: when the branches would overlap.
    """
    if 1 / first + 1 / second > 1 + 1e-12:
        raise ValueError("branches overlap: 1/first + 1/second exceeds 1")
    return linear_map(
        [(0.0, 1 / first), (1 - 1 / second, 1.0)],
        [(0.0, 1.0)] * 2,
        name=name or f"slopes-{first:g}-{second:g}",
    )


def cantor3() -> MarkovExpandingMap:
    """Middle-third Cantor repeller."""
    return two_slope_map(3.0, 3.0, name="cantor3")


def golden_map() -> MarkovExpandingMap:
    """Slope-phi map coded by the golden-mean shift."""
    split = 1 / GOLDEN_RATIO
    return linear_map([(0.0, split), (split, 1.0)], [(0.0, 1.0), (0.0, split)], name="golden")


def sine_map(epsilon: float = 0.1) -> MarkovExpandingMap:
    """x -> 2x + (eps/pi) sin(2 pi x) mod 1, expanding for |eps| < 1/2."""
    branches = (
        Branch(domain=(0.0, 0.5), image=(0.0, 1.0), kind=SINE, epsilon=epsilon),
        Branch(domain=(0.5, 1.0), image=(0.0, 1.0), kind=SINE, epsilon=epsilon, offset=1.0),
    )
    return MarkovExpandingMap(name=f"sine-{epsilon:g}", branches=branches)


NAMED_MAPS: Dict[str, Callable[[], MarkovExpandingMap]] = {
    "doubling": doubling,
    "cantor3": cantor3,
    "golden": golden_map,
}


def map_from_spec(spec: MapSpec) -> MarkovExpandingMap:
    """
    Build a map from its file description.

    Families: a name from NAMED_MAPS, "slopes" with two slopes, "sine" with
    epsilon, or "linear" with explicit branch tables.
    """
    if spec.family in NAMED_MAPS:
        return NAMED_MAPS[spec.family]()
    if spec.family == "slopes":
        if not spec.slopes or len(spec.slopes) != 2:
            raise ValueError("slopes family needs exactly two slopes")
        return two_slope_map(*spec.slopes, name=spec.name)
    if spec.family == SINE:
        return sine_map(0.1 if spec.epsilon is None else spec.epsilon)
    if spec.family == LINEAR:
        if not spec.branch:
            raise ValueError("linear family needs branch tables")
        return linear_map(
            [branch.domain for branch in spec.branch],
            [branch.image for branch in spec.branch],
            [branch.orientation for branch in spec.branch],
            name=spec.name,
        )
    raise ValueError(f"unknown map family {spec.family}")


def load_map(path: Path) -> MarkovExpandingMap:
    """
    Read a TOML map file.

    :raises ValueError: on unreadable or invalid files.
    """
    try:
        with open(path, "rb") as handle:
            payload = tomli.load(handle)
        return map_from_spec(MapSpec(**payload))
    except (OSError, tomli.TOMLDecodeError, ValidationError) as error:
        raise ValueError(f"cannot load map {path}: {error}")
