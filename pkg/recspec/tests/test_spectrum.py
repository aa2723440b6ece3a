import math

import numpy as np
import pytest

from recspec.geometry.families import doubling
from recspec.geometry.recurrence import radius_grid
from recspec.geometry.schemas import MarkovExpandingMap
from recspec.insertion.exceptions import HorizonTooShortError, InfeasibleTargetError
from recspec.settings import settings
from recspec.spectrum.construction import (
    construct_E_point,
    estimate_recurrence_rate,
    oscillation_ell,
    perturbation_bound_check,
    symbolic_rate_profile,
    tail_estimate,
)
from recspec.spectrum.exceptions import SourceInfeasibleError
from recspec.spectrum.experiments import ae_rate_experiment, dimension_ladder, grid_experiment
from recspec.spectrum.schemas import SYMBOLIC, SourceConfig
from recspec.spectrum.source import achieved_dimension, build_source, sample_source_point
from recspec.symbolic.schemas import Word
from recspec.symbolic.shifts import parse_return_words
from recspec.thermo.dimension import bowen_dimension
from recspec.thermo.schemas import Potential


@pytest.fixture(scope="module")
def doubling_source() -> SourceConfig:
    """
    Source of the doubling map with returns to 00 shorter than 6.

    :return: the source.
    """
    return build_source(doubling(), 6)


def test_doubling_source(doubling_source: SourceConfig) -> None:
    """
    Returns to 00 below 6 are 0, 001, 0011, 00101 and 00111.

    :param doubling_source: source at n = 6.
    """
    words = [entry.return_word.to_string() for entry in doubling_source.alphabet.entries]
    assert words == ["0", "001", "0011", "00101", "00111", "001011"]
    assert doubling_source.cylinder.to_string() == "00"
    assert doubling_source.inner_size == 5
    assert doubling_source.marker_word.to_string() == "001011"
    assert doubling_source.lambda_n == pytest.approx(math.log(2), rel=1e-9)
    assert doubling_source.letter_probabilities.sum() == pytest.approx(1.0)
    assert doubling_source.mean_return * doubling_source.cylinder_mass == pytest.approx(1.0, rel=1e-6)
    assert doubling_source.pressure < 0
    assert 0 < achieved_dimension(doubling_source) < 1


@pytest.mark.parametrize("n", [2, 3])
def test_source_needs_two_short_returns(doubling_map: MarkovExpandingMap, n: int) -> None:
    """
    Below n = 4 only the return word 0 is short.

    :param doubling_map: x -> 2x mod 1.
    :param n: return-time bound.
    """
    with pytest.raises(SourceInfeasibleError):
        build_source(doubling_map, n)


def test_source_level_bound(doubling_map: MarkovExpandingMap) -> None:
    """
    Potential levels above |A| + 1 are refused.

    :param doubling_map: x -> 2x mod 1.
    """
    with pytest.raises(SourceInfeasibleError):
        build_source(doubling_map, 6, level=4)


def test_two_slope_source(slopes24_map: MarkovExpandingMap) -> None:
    """
    Lyapunov exponent between the slopes and dimension below the repeller's.

    :param slopes24_map: full branches of slopes 2 and 4.
    """
    source = build_source(slopes24_map, 8)
    assert math.log(2) < source.lambda_n < math.log(4)
    assert achieved_dimension(source) < bowen_dimension(slopes24_map)
    assert source.dimension == pytest.approx(bowen_dimension(slopes24_map))


def test_sample_source_point(doubling_source: SourceConfig) -> None:
    """
    Samples repeat under a seed and flatten to base words ending in A.

    :param doubling_source: source at n = 6.
    """
    first = sample_source_point(doubling_source, 5000, seed=11)
    second = sample_source_point(doubling_source, 5000, seed=11)
    assert first.letters == second.letters
    assert first.letters.symbols.max() < doubling_source.inner_size
    assert first.birkhoff_average == pytest.approx(math.log(2), rel=1e-9)
    assert abs(first.mean_return - doubling_source.mean_return) <= doubling_source.birkhoff_tolerance
    assert first.base[-2:] == doubling_source.cylinder
    times = doubling_source.alphabet.return_times[first.letters.symbols]
    assert len(first.base) == int(times.sum()) + len(doubling_source.cylinder)
    assert parse_return_words(first.base, doubling_source.alphabet) == first.letters.symbols.tolist()


def test_construct_zero_rates(doubling_map: MarkovExpandingMap, doubling_source: SourceConfig) -> None:
    """
    Zero targets give cube stages and both repetition identities.

    :param doubling_map: x -> 2x mod 1.
    :param doubling_source: source at n = 6.
    """
    result = construct_E_point(doubling_map, 0.0, 0.0, 6, 100_000, seed=5, source=doubling_source)
    assert result.identity_holds
    assert result.checked == tuple(result.ell.indices)
    assert result.ell.last_index > 20
    assert result.interval[0] <= result.point <= result.interval[1]
    assert result.word[-2:] == doubling_source.cylinder
    assert result.marker_word == doubling_source.marker_word
    assert result.estimate.route == SYMBOLIC
    assert 0 <= result.estimate.lower <= result.estimate.upper < 0.5
    report = perturbation_bound_check(result, doubling_source)
    assert report.checked > 0
    assert not report.violations
    assert report.max_ratio <= 1


@pytest.mark.slow
def test_construct_early_peak(doubling_map: MarkovExpandingMap, doubling_source: SourceConfig) -> None:
    """
    Small targets reach one peak and one trough at desk scale.

    :param doubling_map: x -> 2x mod 1.
    :param doubling_source: source at n = 6.
    """
    result = construct_E_point(doubling_map, 0.15, 0.3, 6, 600_000, seed=9, source=doubling_source)
    assert result.identity_holds
    assert result.ell.peaks
    assert result.ell.troughs[-1] > result.ell.peaks[0]
    assert result.estimate.lower == pytest.approx(0.15, abs=0.1)
    assert result.estimate.upper == pytest.approx(0.3, abs=0.1)


@pytest.mark.slow
@pytest.mark.parametrize("alpha, beta", [(0.3, 0.3), (0.3, 0.8)])
def test_construct_reaches_targets(
    doubling_map: MarkovExpandingMap,
    doubling_source: SourceConfig,
    alpha: float,
    beta: float,
) -> None:
    """
    At a million letters the measured rates sit within 0.1 of both targets.

    :param doubling_map: x -> 2x mod 1.
    :param doubling_source: source at n = 6.
    :param alpha: lower target.
    :param beta: upper target.
    """
    result = construct_E_point(doubling_map, alpha, beta, 6, 1_000_000, seed=1, source=doubling_source)
    assert result.identity_holds
    assert result.estimate.lower == pytest.approx(alpha, abs=0.1)
    assert result.estimate.upper == pytest.approx(beta, abs=0.1)


@pytest.mark.slow
def test_oscillation_ell(doubling_source: SourceConfig) -> None:
    """
    The peak is followed by the trough at the last stage, inside the horizon.

    :param doubling_source: source at n = 6.
    """
    horizon = 450_000
    sample = sample_source_point(doubling_source, horizon, seed=1)
    ell = oscillation_ell(doubling_source, sample.letters.symbols, 0.3, 0.8, horizon)
    (peak,), (trough,) = ell.peaks, ell.troughs
    assert ell.n0 < peak < trough == ell.last_index
    assert ell[ell.n0] > ell.last_index
    assert ell[ell.last_index] + ell.last_index + 1 <= horizon
    assert np.all(np.diff(ell.values) > 0)


def test_oscillation_ell_needs_room(doubling_source: SourceConfig) -> None:
    """
    Short samples and out-of-reach peaks are refused.

    :param doubling_source: source at n = 6.
    """
    sample = sample_source_point(doubling_source, 10_000, seed=1)
    with pytest.raises(HorizonTooShortError):
        oscillation_ell(doubling_source, sample.letters.symbols, 0.0, 5.0, 10_000)
    with pytest.raises(HorizonTooShortError):
        oscillation_ell(doubling_source, sample.letters.symbols, 0.3, 0.8, 20_000)


def test_construct_rejects_bad_targets(doubling_map: MarkovExpandingMap, doubling_source: SourceConfig) -> None:
    """
    Decreasing targets, oversized and tiny horizons are refused.

    :param doubling_map: x -> 2x mod 1.
    :param doubling_source: source at n = 6.
    """
    with pytest.raises(InfeasibleTargetError):
        construct_E_point(doubling_map, 0.5, 0.2, 6, 10_000, seed=1, source=doubling_source)
    with pytest.raises(HorizonTooShortError):
        construct_E_point(doubling_map, 0.0, 0.0, 6, settings.horizon_cap + 1, seed=1, source=doubling_source)
    with pytest.raises(HorizonTooShortError):
        construct_E_point(doubling_map, 0.0, 0.0, 6, 50, seed=1, source=doubling_source)


def test_tail_estimate() -> None:
    """Inf and sup over the second half of the samples, or from a given start."""
    estimate = tail_estimate([(1.0, 0.5), (2.0, 0.3), (3.0, 0.4), (4.0, 0.2)], SYMBOLIC)
    assert (estimate.lower, estimate.upper) == (0.2, 0.4)
    peak = tail_estimate([(1.0, 0.5), (2.0, 0.3), (3.0, 0.4), (4.0, 0.2)], SYMBOLIC, start=1)
    assert (peak.lower, peak.upper, peak.window) == (0.2, 0.4, 0.75)
    with pytest.raises(HorizonTooShortError):
        tail_estimate([], SYMBOLIC)
    with pytest.raises(ValueError):
        tail_estimate([(1.0, 0.5)], SYMBOLIC, window=0.0)
    with pytest.raises(ValueError):
        tail_estimate([(1.0, 0.5)], SYMBOLIC, start=1)


def test_fixed_point_rate(doubling_map: MarkovExpandingMap) -> None:
    """
    The fixed point returns at once at every radius.

    :param doubling_map: x -> 2x mod 1.
    """
    estimate = estimate_recurrence_rate(doubling_map, 0.0, n_max=10)
    assert estimate.lower == estimate.upper == 0.0
    assert estimate.slope == pytest.approx(0.0)
    assert not estimate.censored


def test_periodic_word_symbolic_rate(doubling_map: MarkovExpandingMap) -> None:
    """
    R_h = 2 on 0101..., so the symbolic rate is 1 / h.

    :param doubling_map: x -> 2x mod 1.
    """
    word = Word.from_string("01" * 500)
    estimate = estimate_recurrence_rate(doubling_map, word, route=SYMBOLIC)
    assert estimate.lower >= 0
    assert estimate.upper <= 1 / 6 + 1e-9
    with pytest.raises(ValueError):
        estimate_recurrence_rate(doubling_map, 0.25, route=SYMBOLIC)


def test_symbolic_rate_profile() -> None:
    """Constant words repeat at once; blocks as long as the word are skipped."""
    assert symbolic_rate_profile(Word.from_string("0" * 50), [1, 2, 3, 50]) == [(1, 0.0), (2, 0.0), (3, 0.0)]


@pytest.mark.slow
@pytest.mark.parametrize(
    "probabilities, target",
    [(None, 1.0), ([0.3, 0.7], -(0.3 * math.log(0.3) + 0.7 * math.log(0.7)) / math.log(2))],
)
def test_ae_rate_experiment(doubling_map: MarkovExpandingMap, probabilities, target: float) -> None:
    """
    Typical points of Lebesgue and of Bernoulli(0.3, 0.7) recur at rate h / lambda.

    :param doubling_map: x -> 2x mod 1.
    :param probabilities: Bernoulli weights, None for Lebesgue.
    :param target: entropy over Lyapunov exponent.
    """
    phi = None if probabilities is None else Potential.bernoulli(probabilities)
    report = ae_rate_experiment(
        doubling_map,
        phi,
        sample_count=100,
        horizon=1_000_000,
        seed=1,
        radii=radius_grid(5, 16),
        threads=4,
    )
    assert report.target == pytest.approx(target, rel=1e-3)
    assert [row.index for row in report.rows] == list(range(100))
    assert len({row.seed for row in report.rows}) == 100
    assert report.median == pytest.approx(target, abs=0.1)
    assert report.iqr >= 0


def test_dimension_ladder(doubling_map: MarkovExpandingMap) -> None:
    """
    Infeasible bounds become notes and dimensions grow towards 1.

    :param doubling_map: x -> 2x mod 1.
    """
    ladder = dimension_ladder(doubling_map, [2, 3, 4, 6, 8])
    assert ladder.full_dimension == pytest.approx(1.0)
    assert [row.note != "" for row in ladder.rows] == [True, True, False, False, False]
    dimensions = [row.dimension for row in ladder.rows[2:]]
    assert all(0 < dimension < 1 for dimension in dimensions)
    assert np.all(np.diff(dimensions) > 0)
    assert ladder.gap_rate < 0


def test_grid_experiment(doubling_map: MarkovExpandingMap) -> None:
    """
    Cells keep their order and failures stay in their cell.

    :param doubling_map: x -> 2x mod 1.
    """
    cells = grid_experiment(doubling_map, [0.0, 1.0], [0.0, 5.0], n=6, horizon=50_000, seed=3, threads=2)
    assert [(cell.alpha, cell.beta) for cell in cells] == [(0.0, 0.0), (0.0, 5.0), (1.0, 5.0)]
    assert cells[0].identity_holds
    assert cells[0].error is None
    assert cells[1].error == HorizonTooShortError.code
    assert cells[1].lower is None


@pytest.mark.slow
def test_two_slope_ladder(slopes24_map: MarkovExpandingMap) -> None:
    """
    Source dimensions climb to the repeller's and pressure gaps close.

    :param slopes24_map: full branches of slopes 2 and 4.
    """
    ladder = dimension_ladder(slopes24_map, [6, 8, 10, 12, 14])
    dimensions = [row.dimension for row in ladder.rows]
    pressures = [row.pressure for row in ladder.rows]
    assert np.all(np.diff(dimensions) > 0)
    assert np.all(np.diff(pressures) > 0)
    assert pressures[-1] < 0
    assert ladder.full_dimension - dimensions[-1] < 0.01
