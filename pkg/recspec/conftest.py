from pathlib import Path

import numpy as np
import pytest

from recspec.cli.schemas import RunConfig
from recspec.geometry.families import cantor3, doubling, sine_map, two_slope_map
from recspec.geometry.schemas import MarkovExpandingMap
from recspec.symbolic.schemas import SubshiftOfFiniteType


@pytest.fixture(scope="session")
def full_shift() -> SubshiftOfFiniteType:
    """
    Full shift on two symbols.

    :return: the shift.
    """
    return SubshiftOfFiniteType.full_shift(2)


@pytest.fixture(scope="session")
def golden_shift() -> SubshiftOfFiniteType:
    """
    Shift on {0, 1} forbidding 11.

    :return: the shift.
    """
    return SubshiftOfFiniteType.golden_mean()


@pytest.fixture(scope="session")
def doubling_map() -> MarkovExpandingMap:
    """:return: x -> 2x mod 1."""
    return doubling()


@pytest.fixture(scope="session")
def cantor_map() -> MarkovExpandingMap:
    """:return: the middle-third repeller."""
    return cantor3()


@pytest.fixture(scope="session")
def slopes24_map() -> MarkovExpandingMap:
    """:return: full branches of slopes 2 and 4."""
    return two_slope_map(2.0, 4.0)


@pytest.fixture(scope="session")
def slopes34_map() -> MarkovExpandingMap:
    """:return: full branches of slopes 3 and 4, separated by a gap."""
    return two_slope_map(3.0, 4.0)


@pytest.fixture(scope="session")
def sine() -> MarkovExpandingMap:
    """:return: the nonlinear test map with epsilon 0.1."""
    return sine_map(0.1)


@pytest.fixture()
def rng() -> np.random.Generator:
    """
    Seeded generator, fresh for every test.

    :return: generator.
    """
    return np.random.default_rng(20240501)


@pytest.fixture()
def run_config(tmp_path: Path) -> RunConfig:
    """
    Resolved run writing into a temporary directory.

    :param tmp_path: pytest temporary directory.
    :return: config for the pressure command; copy it with other fields.
    """
    return RunConfig(command="pressure", seed=7, output_dir=tmp_path)
