import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recspec.insertion.construction import (
    insert,
    inserted_letter_budget,
    insertion_mask,
    largest_executable_index,
    required_source_length,
    strip_insertions,
    verify_lemma_g,
)
from recspec.insertion.ell import (
    achieved_rates,
    build_ell_sequence,
    ceil_exp,
    ell_from_csv,
    ell_to_csv,
    random_ell_sequence,
)
from recspec.insertion.exceptions import HorizonTooShortError, InfeasibleTargetError, InvalidEllSequenceError
from recspec.insertion.schemas import EllSequence, InsertionSpec
from recspec.services.generators import make_rng, random_symbols
from recspec.symbolic.schemas import Word


def cubes(last: int) -> EllSequence:
    """:return: l_k = k^3 for k = 2 .. last."""
    return EllSequence(values=tuple(k ** 3 for k in range(2, last + 1)), n0=2, target_lower=0, target_upper=0)


@pytest.mark.parametrize("k", [1, 10, 40])
def test_ceil_exp_powers_of_two(k: int) -> None:
    """
    e^{k log 2} rounds to 2^k exactly.

    :param k: exponent.
    """
    assert ceil_exp(k * math.log(2)) == 2 ** k


def test_ceil_exp_beyond_float_range() -> None:
    """Huge exponents fall back to powers of two."""
    assert ceil_exp(1000 * math.log(2)) >= 2 ** 999


def test_ell_zero_rate_is_cubes() -> None:
    """Zero targets give l_k = k^3."""
    ell = build_ell_sequence(0.0, 0.0, 50)
    assert ell.values == tuple(k ** 3 for k in range(2, 51))
    assert ell.log_rates()[-1] < 0.25


def test_ell_log2_rate() -> None:
    """Targets log 2 give max(2^k, k^3)."""
    ell = build_ell_sequence(math.log(2), math.log(2), 40)
    assert ell.values == tuple(max(2 ** k, k ** 3) for k in range(2, 41))
    lower, upper = achieved_rates(ell)
    assert lower == pytest.approx(math.log(2), abs=1e-9)
    assert upper == pytest.approx(math.log(2), abs=1e-9)


@pytest.mark.parametrize("last_index", [60, 120])
def test_ell_oscillates_between_targets(last_index: int) -> None:
    """
    Running rates reach both targets in the tail window.

    :param last_index: K.
    """
    ell = build_ell_sequence(0.3, 0.9, last_index)
    lower, upper = achieved_rates(ell)
    assert lower == pytest.approx(0.3, abs=0.05)
    assert upper == pytest.approx(0.9, abs=0.05)
    assert ell.peaks and ell.troughs


def test_ell_without_full_oscillation() -> None:
    """K = 30 ends before the first trough."""
    with pytest.raises(InfeasibleTargetError):
        build_ell_sequence(0.3, 0.9, 30)


def test_ell_infinite_upper_rate() -> None:
    """An infinite upper target squares the sequence in growth blocks."""
    ell = build_ell_sequence(0.0, math.inf, 40)
    rates = ell.log_rates()
    assert rates.max() > 2.0
    assert rates.min() < 0.55
    assert ell.troughs


def test_ell_rejects_decreasing_targets() -> None:
    """alpha above beta is refused."""
    with pytest.raises(InvalidEllSequenceError):
        build_ell_sequence(0.8, 0.3, 50)


def test_growth_conditions_checked() -> None:
    """Sequences below k^3 or growing too slowly are refused."""
    with pytest.raises(ValueError):
        EllSequence(values=(8, 27, 28), n0=2, target_lower=0, target_upper=0)
    with pytest.raises(ValueError):
        EllSequence(values=(7,), n0=2, target_lower=0, target_upper=0)


def test_ell_csv_reads_back() -> None:
    """The CSV form keeps indices and values."""
    ell = build_ell_sequence(0.3, 0.9, 60)
    assert ell_from_csv(ell_to_csv(ell)).values == ell.values


def test_insert_hand_example() -> None:
    """
    Constant source, marker 3, c = 1, c_bar = 2, l_2 = 9.

    The first block copies m0 and adds c, since the letter after it is 0.
    """
    spec = InsertionSpec(inner_alphabet=(0,), outer_alphabet=(0, 1, 2, 3), marker=3, c=1, c_bar=2)
    ell = EllSequence(values=(9, 27), n0=2, target_lower=0, target_upper=0)
    w = Word.of([0] * 40, 1)
    image = insert(w, spec, ell, 31)
    assert image.symbols[:12].tolist() == [3, 0, 0, 0, 0, 0, 0, 0, 0, 3, 0, 1]
    assert image.symbols[27:31].tolist() == [3, 0, 0, 1]


def test_lemma_g_random_source(rng: np.random.Generator) -> None:
    """
    R_k(g(w)) = k^3 on a random word over three letters.

    :param rng: seeded generator.
    """
    w = Word(symbols=random_symbols(2000, 3, rng), alphabet_size=3)
    report = verify_lemma_g(w, InsertionSpec.default(3), cubes(12), range(2, 13))
    assert report.passed
    assert report.horizon == 12 ** 3 + 13


def test_lemma_g_constant_source() -> None:
    """R_k(g(w)) = max(2^k, k^3) on a constant word."""
    ell = build_ell_sequence(math.log(2), math.log(2), 15)
    w = Word.of([0] * 40000, 2)
    assert verify_lemma_g(w, InsertionSpec.default(2), ell, range(2, 16)).passed


def test_lemma_g_needs_the_y_rule() -> None:
    """Always inserting c lets longer prefixes repeat early."""
    ell = build_ell_sequence(math.log(2), math.log(2), 15)
    w = Word.of([0] * 40000, 2)
    report = verify_lemma_g(w, InsertionSpec.default(2), ell, range(2, 16), y_rule=False)
    assert not report.passed


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 63))
def test_lemma_g_random_sequences(seed: int) -> None:
    """
    The identity holds for random admissible sequences and sources.

    :param seed: generator seed.
    """
    rng = make_rng(seed)
    ell = random_ell_sequence(rng, 20000)
    assert ell[ell.last_index] + ell.last_index + 1 <= 20000
    w = Word(symbols=random_symbols(20000, 2, rng), alphabet_size=2)
    assert verify_lemma_g(w, InsertionSpec.default(2), ell, ell.indices).passed


def test_strip_insertions_recovers_source(rng: np.random.Generator) -> None:
    """
    Removing marker and blocks gives the consumed source prefix.

    :param rng: seeded generator.
    """
    ell = cubes(8)
    horizon = 600
    w = Word(symbols=random_symbols(horizon, 3, rng), alphabet_size=3)
    image = insert(w, InsertionSpec.default(3), ell, horizon)
    needed = required_source_length(ell, horizon)
    assert strip_insertions(image, ell).symbols.tolist() == w.symbols[:needed].tolist()


def test_insert_short_source() -> None:
    """A source shorter than the consumed prefix is refused."""
    with pytest.raises(HorizonTooShortError):
        insert(Word.of([0] * 10, 2), InsertionSpec.default(2), cubes(8), 600)


def test_largest_executable_index() -> None:
    """Stage k fits when l_k + k + 1 letters fit."""
    ell = cubes(10)
    assert largest_executable_index(ell, 8 ** 3 + 9) == 8
    assert largest_executable_index(ell, 8 ** 3 + 8) == 7
    assert largest_executable_index(ell, 5) is None


def test_inserted_letter_budget() -> None:
    """Stage k writes k + 1 letters, so stages 2 .. p write 3 + ... + (p + 1)."""
    ell = cubes(10)
    assert inserted_letter_budget(ell, 10) == sum(range(3, 12))
    assert int(insertion_mask(ell, 2000).sum()) == inserted_letter_budget(ell, 10)
