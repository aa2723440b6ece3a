import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from recspec.geometry.families import cantor3, doubling, two_slope_map
from recspec.geometry.schemas import MarkovExpandingMap
from recspec.symbolic.exceptions import EmptySurvivorError
from recspec.symbolic.schemas import SubshiftOfFiniteType, Word
from recspec.thermo.dimension import boundary_removal_schedule, bowen_dimension, dimension_refinement
from recspec.thermo.exceptions import IncompletePotentialError, ZeroMassCylinderError
from recspec.thermo.operators import build_transfer_graph, dominant_eigen
from recspec.thermo.pressure import (
    equilibrium_state,
    gibbs_constant,
    hole_eigenvalue_schedule,
    hole_measure_decay,
    kac_check,
    normalize,
    pressure,
    pressure_with_holes,
    spectral_gap,
)
from recspec.thermo.schemas import Potential

GOLDEN_RATIO = (1 + math.sqrt(5)) / 2


def avoiding_root(n: int) -> float:
    """:return: largest root of x^n = x^{n-1} + ... + 1."""
    if n == 1:
        return 1.0
    return brentq(lambda x: x ** n - sum(x ** i for i in range(n)), 1.0, 2.0, xtol=1e-15)


def ones(n: int) -> Word:
    """:return: the word 1^n over two letters."""
    return Word.of([1] * n, 2)


def test_pressure_full_shift(full_shift: SubshiftOfFiniteType) -> None:
    """
    Zero potential on the full 2-shift.

    :param full_shift: full 2-shift.
    """
    assert pressure(full_shift, Potential.constant(full_shift)) == pytest.approx(math.log(2), abs=1e-10)


def test_pressure_golden(golden_shift: SubshiftOfFiniteType) -> None:
    """
    Zero potential on the golden-mean shift.

    :param golden_shift: golden-mean shift.
    """
    value = pressure(golden_shift, Potential.constant(golden_shift))
    assert value == pytest.approx(math.log(GOLDEN_RATIO), abs=1e-10)


def test_pressure_bernoulli(full_shift: SubshiftOfFiniteType) -> None:
    """
    log p on the symbols has zero pressure.

    :param full_shift: full 2-shift.
    """
    assert pressure(full_shift, Potential.bernoulli([0.3, 0.7])) == pytest.approx(0.0, abs=1e-10)


def test_power_iteration_matches_dense(golden_shift: SubshiftOfFiniteType) -> None:
    """
    Both eigen solvers agree.

    :param golden_shift: golden-mean shift.
    """
    graph = build_transfer_graph(golden_shift, Potential.constant(golden_shift).refined(golden_shift, 4))
    dense, left, right = dominant_eigen(graph, dense_limit=1000)
    iterated, _, _ = dominant_eigen(graph, dense_limit=0)
    assert iterated == pytest.approx(dense, rel=1e-9)
    assert float(left @ right) == pytest.approx(1.0)


def test_equilibrium_uniform(full_shift: SubshiftOfFiniteType) -> None:
    """
    The zero potential gives the uniform Bernoulli measure.

    :param full_shift: full 2-shift.
    """
    state = equilibrium_state(full_shift, Potential.constant(full_shift))
    masses = state.cylinder_measure(4)
    assert len(masses) == 16
    assert all(mass == pytest.approx(2 ** -4) for mass in masses.values())
    assert state.entropy == pytest.approx(math.log(2))


def test_equilibrium_bernoulli(full_shift: SubshiftOfFiniteType) -> None:
    """
    Bernoulli(0.3, 0.7) masses and entropy.

    :param full_shift: full 2-shift.
    """
    state = equilibrium_state(full_shift, Potential.bernoulli([0.3, 0.7]))
    assert state.mass(full_shift.word("0110")) == pytest.approx(0.3 * 0.7 * 0.7 * 0.3)
    assert state.entropy == pytest.approx(-(0.3 * math.log(0.3) + 0.7 * math.log(0.7)), abs=1e-9)
    assert sum(state.cylinder_measure(3).values()) == pytest.approx(1.0)


def test_equilibrium_parry(golden_shift: SubshiftOfFiniteType) -> None:
    """
    Parry measure of the golden-mean shift.

    :param golden_shift: golden-mean shift.
    """
    state = equilibrium_state(golden_shift, Potential.constant(golden_shift))
    assert state.mass(golden_shift.word("0")) == pytest.approx(GOLDEN_RATIO ** 2 / (1 + GOLDEN_RATIO ** 2))
    assert state.mass(golden_shift.word("11")) == 0.0
    assert state.entropy == pytest.approx(math.log(GOLDEN_RATIO))


def test_equilibrium_with_lyapunov(full_shift: SubshiftOfFiniteType) -> None:
    """
    The second potential is integrated.

    :param full_shift: full 2-shift.
    """
    psi = Potential.from_symbol_values([math.log(2), math.log(4)])
    state = equilibrium_state(full_shift, Potential.bernoulli([0.5, 0.5]), psi=psi)
    assert state.lyapunov == pytest.approx(1.5 * math.log(2))


def test_incomplete_potential(golden_shift: SubshiftOfFiniteType) -> None:
    """
    A potential missing an admissible cylinder is refused.

    :param golden_shift: golden-mean shift.
    """
    with pytest.raises(IncompletePotentialError):
        pressure(golden_shift, Potential(level=2, values={(0, 0): 0.0, (0, 1): 0.0}))


def test_normalized_potential(golden_shift: SubshiftOfFiniteType) -> None:
    """
    Normalizing gives zero pressure and the same equilibrium state.

    :param golden_shift: golden-mean shift.
    """
    phi = Potential.constant(golden_shift)
    normalized = normalize(golden_shift, phi)
    assert pressure(golden_shift, normalized) == pytest.approx(0.0, abs=1e-10)
    word = golden_shift.word("0100")
    original = equilibrium_state(golden_shift, phi).mass(word)
    assert equilibrium_state(golden_shift, normalized).mass(word) == pytest.approx(original)


def test_gibbs_constant_bernoulli(full_shift: SubshiftOfFiniteType) -> None:
    """
    Bernoulli measures are exactly Gibbs.

    :param full_shift: full 2-shift.
    """
    assert gibbs_constant(full_shift, Potential.bernoulli([0.3, 0.7]), depth=8) == pytest.approx(1.0)


def test_spectral_gap(full_shift: SubshiftOfFiniteType) -> None:
    """
    The all-ones matrix has a second eigenvalue 0.

    :param full_shift: full 2-shift.
    """
    assert spectral_gap(full_shift, Potential.constant(full_shift)) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 13, 20])
def test_pressure_avoiding_ones(full_shift: SubshiftOfFiniteType, n: int) -> None:
    """
    Pressure without the block 1^n is the log of the avoiding root.

    :param full_shift: full 2-shift.
    :param n: block length.
    """
    value = pressure_with_holes(full_shift, Potential.constant(full_shift), [ones(n)])
    assert value == pytest.approx(math.log(avoiding_root(n)), abs=1e-9)


def test_hole_pressures_increase(full_shift: SubshiftOfFiniteType) -> None:
    """
    Shrinking holes raise the pressure towards log 2.

    :param full_shift: full 2-shift.
    """
    phi = Potential.constant(full_shift)
    values = [pressure_with_holes(full_shift, phi, [ones(n)]) for n in range(1, 21)]
    assert all(low < high for low, high in zip(values, values[1:]))
    assert math.log(2) - values[-1] < 0.01
    assert pressure_with_holes(full_shift, phi, []) == pytest.approx(math.log(2))


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.floats(-3.0, 3.0), min_size=2, max_size=2),
    st.lists(st.floats(0.0, 2.0), min_size=2, max_size=2),
)
def test_pressure_is_monotone(values: list, increments: list) -> None:
    """
    A larger potential has larger pressure, by at most its largest increment.

    :param values: level-1 values on the golden-mean shift.
    :param increments: non-negative amounts added to them.
    """
    sft = SubshiftOfFiniteType.golden_mean()
    low = Potential.from_symbol_values(values)
    high = Potential.from_symbol_values([value + step for value, step in zip(values, increments)])
    assert low.dominated_by(high)
    assert pressure(sft, low) <= pressure(sft, high) + 1e-9
    assert pressure(sft, high) <= pressure(sft, low) + max(increments) + 1e-9


@settings(max_examples=30, deadline=None)
@given(st.frozensets(st.sampled_from(list(itertools.product((0, 1), repeat=3))), min_size=1, max_size=5))
def test_equilibrium_ignores_holes(holes: frozenset) -> None:
    """
    Hole cylinders carry no equilibrium mass and the rest carries all of it.

    :param holes: 3-blocks of the full 2-shift.
    """
    sft = SubshiftOfFiniteType.full_shift(2)
    words = [Word.of(hole, 2) for hole in holes]
    try:
        state = equilibrium_state(sft, Potential.bernoulli([0.4, 0.6]), holes=words)
    except EmptySurvivorError:
        return
    assert all(state.mass(word) == 0.0 for word in words)
    masses = state.cylinder_measure(3)
    assert not set(masses) & holes
    assert sum(masses.values()) == pytest.approx(1.0)


def test_hole_eigenvalue_schedule(full_shift: SubshiftOfFiniteType) -> None:
    """
    Normalized leading eigenvalues climb to 1.

    :param full_shift: full 2-shift.
    """
    phi = Potential.bernoulli([0.5, 0.5])
    rows = hole_eigenvalue_schedule(full_shift, phi, [(n, [ones(n)]) for n in (2, 6, 12)])
    values = [value for _, value in rows]
    assert values == sorted(values)
    assert values[0] == pytest.approx(GOLDEN_RATIO / 2)
    assert 1 - values[-1] < 1e-3


def test_everything_removed(full_shift: SubshiftOfFiniteType) -> None:
    """
    Removing both symbols leaves no pressure.

    :param full_shift: full 2-shift.
    """
    holes = [full_shift.word("0"), full_shift.word("1")]
    assert pressure_with_holes(full_shift, Potential.constant(full_shift), holes) == -math.inf
    with pytest.raises(EmptySurvivorError):
        equilibrium_state(full_shift, Potential.constant(full_shift), holes=holes)


def test_hole_measure_decay(full_shift: SubshiftOfFiniteType) -> None:
    """
    Long returns to [0] under Bernoulli(0.3, 0.7) decay like 0.7^n.

    :param full_shift: full 2-shift.
    """
    decay = hole_measure_decay(full_shift, Potential.bernoulli([0.3, 0.7]), full_shift.word("0"), range(1, 12))
    assert decay.rows[0][1] == pytest.approx(0.3)
    assert decay.rows[3][1] == pytest.approx(0.3 * 0.7 ** 3)
    assert decay.log_rate == pytest.approx(math.log(0.7), abs=1e-9)


@pytest.mark.parametrize(
    "probabilities, expected",
    [
        ([0.5, 0.5], 2.0),
        ([0.3, 0.7], 1 / 0.3),
    ],
)
def test_kac_bernoulli(full_shift: SubshiftOfFiniteType, probabilities: list, expected: float) -> None:
    """
    Mean return time to [0] is 1 / p0.

    :param full_shift: full 2-shift.
    :param probabilities: symbol weights.
    :param expected: mean return time.
    """
    report = kac_check(full_shift, Potential.bernoulli(probabilities), full_shift.word("0"), t_max=60)
    assert report.mean_return_time == pytest.approx(expected, abs=1e-6)
    assert report.product == pytest.approx(1.0, abs=1e-6)


def test_kac_parry(golden_shift: SubshiftOfFiniteType) -> None:
    """
    Kac's formula on the Parry measure.

    :param golden_shift: golden-mean shift.
    """
    report = kac_check(golden_shift, Potential.constant(golden_shift), golden_shift.word("0"), t_max=40)
    assert report.product == pytest.approx(1.0, abs=1e-6)


def test_kac_zero_mass(golden_shift: SubshiftOfFiniteType) -> None:
    """
    A forbidden cylinder has no mass.

    :param golden_shift: golden-mean shift.
    """
    with pytest.raises(ZeroMassCylinderError):
        kac_check(golden_shift, Potential.constant(golden_shift), Word.of([1, 1], 2))


@pytest.mark.parametrize(
    "fmap, expected",
    [
        (doubling(), 1.0),
        (cantor3(), math.log(2) / math.log(3)),
        (two_slope_map(2.0, 4.0), brentq(lambda s: 2 ** -s + 4 ** -s - 1, 0.1, 1.0, xtol=1e-14)),
    ],
)
def test_bowen_dimension(fmap: MarkovExpandingMap, expected: float) -> None:
    """
    Bowen roots of linear maps.

    :param fmap: the map.
    :param expected: independent root.
    """
    assert bowen_dimension(fmap) == pytest.approx(expected, abs=1e-8)


def test_dimension_refinement_linear(cantor_map: MarkovExpandingMap) -> None:
    """
    Finer levels do not move the root of a linear map.

    :param cantor_map: middle-third repeller.
    """
    estimate = dimension_refinement(cantor_map, 1)
    assert estimate.refinement_gap < 1e-8


def test_bowen_dimension_sine(sine: MarkovExpandingMap) -> None:
    """
    A full-branch nonlinear map has dimension 1.

    :param sine: nonlinear map.
    """
    assert bowen_dimension(sine, level=6) == pytest.approx(1.0, abs=0.02)


def test_boundary_removal_doubling(doubling_map: MarkovExpandingMap) -> None:
    """
    Removing [0^n] gives log(root) / log 2, increasing to 1.

    :param doubling_map: doubling map.
    """
    rows = boundary_removal_schedule(doubling_map, 8)
    for row in rows:
        assert row.dimension == pytest.approx(math.log(avoiding_root(row.n)) / math.log(2), abs=1e-8)
    assert rows[0].sub_shift.alphabet_size == 1
    assert rows[1].sub_shift.alphabet_size == 3
    assert [row.dimension for row in rows] == sorted(row.dimension for row in rows)


def test_boundary_removal_without_holes(cantor_map: MarkovExpandingMap) -> None:
    """
    An empty boundary keeps the full dimension.

    :param cantor_map: middle-third repeller.
    """
    rows = boundary_removal_schedule(cantor_map, 3, boundary=[])
    assert all(row.dimension == pytest.approx(math.log(2) / math.log(3), abs=1e-8) for row in rows)
    assert np.array_equal(rows[0].sub_shift.transitions, cantor_map.sft.transitions)
