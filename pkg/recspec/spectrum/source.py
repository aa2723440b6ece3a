"""Equilibrium sources on shifts with bounded returns, and their samples."""
import logging
import math
from typing import Optional

import numpy as np

from recspec.geometry.potentials import log_derivative, potential_from_map
from recspec.geometry.schemas import MarkovExpandingMap
from recspec.services.generators import derive_seed, make_rng
from recspec.spectrum.exceptions import BirkhoffMissError, SourceInfeasibleError
from recspec.spectrum.schemas import SourceConfig, SourceSample
from recspec.symbolic.exceptions import EmptyAlphabetError, EmptySurvivorError
from recspec.symbolic.schemas import ReturnAlphabet, Word
from recspec.symbolic.shifts import find_connecting_paths, induced_alphabet, long_return_words
from recspec.thermo.dimension import bowen_dimension
from recspec.thermo.pressure import equilibrium_state
from recspec.thermo.schemas import EquilibriumState

logger = logging.getLogger(__name__)

_ZERO_MASS = 1e-14
RETRY_BUDGET = 20


def build_source(
    fmap: MarkovExpandingMap,
    n: int,
    birkhoff_tolerance: float = 0.05,
    level: int = 1,
    symbol: Optional[int] = None,
) -> SourceConfig:
    """
    Equilibrium state of -dim log|Df| on sequences whose returns to A stay below n.

    A = aB comes from find_connecting_paths; the removed set is
    H_n = {w in A: t(w) >= n}.

    :param fmap: the map.
    :param n: return-time bound, at least 2.
    :param birkhoff_tolerance: tolerance later used by sampling.
    :param level: cylinder level of the potentials, at most |A| + 1.
    :param symbol: branching symbol a, the smallest one by default.
    :raises SourceInfeasibleError: when A loses its mass, fewer than two
        return words lie below n, or no return word has t = n.
    """
    sft = fmap.sft
    cylinder, _ = find_connecting_paths(sft, symbol)
    if level > len(cylinder) + 1:
        raise SourceInfeasibleError(f"Potential level {level} exceeds |A| + 1 = {len(cylinder) + 1}.")
    if n < 2:
        raise SourceInfeasibleError("Return-time bound must be at least 2.")
    try:
        alphabet = induced_alphabet(sft, cylinder, n + 1)
    except EmptyAlphabetError:
        raise SourceInfeasibleError(f"No return to {cylinder} up to time {n}.")
    inner = [entry for entry in alphabet.entries if entry.return_time < n]
    markers = [entry for entry in alphabet.entries if entry.return_time == n]
    if len(inner) < 2:
        raise SourceInfeasibleError(f"Fewer than two return words to {cylinder} below {n}.")
    if not markers:
        raise SourceInfeasibleError(f"No return word to {cylinder} with t = {n}.")
    dimension = bowen_dimension(fmap, level)
    phi = potential_from_map(fmap, dimension, level)
    psi = log_derivative(fmap, level)
    try:
        nu = equilibrium_state(sft, phi, psi=psi, holes=long_return_words(sft, cylinder, n))
    except EmptySurvivorError:
        raise SourceInfeasibleError(f"Nothing survives the holes at n = {n}.")
    cylinder_mass = nu.mass(cylinder)
    if cylinder_mass < _ZERO_MASS:
        raise SourceInfeasibleError(f"{cylinder} has no mass at n = {n}.")
    probabilities = np.array([nu.mass(entry.return_word.concat(cylinder)) for entry in inner])
    probabilities /= probabilities.sum()
    times = np.array([entry.return_time for entry in inner], dtype=float)
    mean_return = float(probabilities @ times)
    if abs(mean_return * cylinder_mass - 1) > 1e-6:
        logger.warning("Kac mismatch at n=%d: %.12g", n, mean_return * cylinder_mass)
    source = SourceConfig(
        fmap=fmap,
        n=n,
        cylinder=cylinder,
        nu=nu,
        psi=psi,
        dimension=dimension,
        pressure=nu.pressure,
        lambda_n=float(nu.lyapunov),
        mean_return=mean_return,
        cylinder_mass=cylinder_mass,
        birkhoff_tolerance=birkhoff_tolerance,
        alphabet=ReturnAlphabet(
            base_cylinder=cylinder,
            entries=tuple(inner) + (markers[0],),
            bounded_by=n + 1,
        ),
        inner_size=len(inner),
        letter_probabilities=probabilities,
    )
    logger.info(
        "source n=%d: %d letters, lambda_n=%.6g, mean return %.6g, pressure %.3g",
        n,
        len(inner),
        source.lambda_n,
        mean_return,
        source.pressure,
    )
    return source


def base_birkhoff(psi_values: np.ndarray, base: Word, terms: int) -> float:
    """Birkhoff sum of a level-1 potential over the first terms letters."""
    return float(psi_values[base.symbols[:terms]].sum())


def _symbol_values(source: SourceConfig) -> np.ndarray:
    values = np.zeros(source.nu.graph.alphabet_size)
    for word, value in source.psi.values.items():
        values[word[0]] = value
    return values


def source_birkhoff(source: SourceConfig, base: Word, terms: int) -> float:
    """S_terms psi of a base word under the source potential."""
    if source.psi.level == 1:
        return base_birkhoff(_symbol_values(source), base, terms)
    return source.psi.birkhoff_sum(base, terms)


def sample_source_point(
    source: SourceConfig,
    length: int,
    seed: int,
    retries: int = RETRY_BUDGET,
) -> SourceSample:
    """
    Draw length induced letters of a source-typical point of A.

    Letters are independent with P(e) = nu(eA) / nu(A). A draw is accepted
    when its average of psi and its mean return time are within the
    source tolerance of lambda_n and of the mean return time.

    :raises BirkhoffMissError: when every attempt misses the tolerance.
    """
    for attempt in range(retries):
        rng = make_rng(seed if attempt == 0 else derive_seed(seed, attempt))
        letters = rng.choice(source.inner_size, size=length, p=source.letter_probabilities)
        letters_word = Word(symbols=letters, alphabet_size=source.inner_size + 1)
        base = source.alphabet.flatten(letters).concat(source.cylinder)
        terms = len(base) - len(source.cylinder)
        birkhoff_average = source_birkhoff(source, base, terms) / terms
        mean_return = terms / length
        tolerance = source.birkhoff_tolerance
        if abs(birkhoff_average - source.lambda_n) <= tolerance and abs(mean_return - source.mean_return) <= tolerance:
            return SourceSample(
                letters=letters_word,
                base=base,
                birkhoff_average=birkhoff_average,
                mean_return=mean_return,
                attempts=attempt + 1,
            )
        logger.debug("sample attempt %d missed: %.6g, %.6g", attempt, birkhoff_average, mean_return)
    raise BirkhoffMissError(retries, length)


def sample_chain(state: EquilibriumState, length: int, rng: np.random.Generator) -> Word:
    """
    Base word of a point drawn from an equilibrium state.

    Independent letters are drawn at once when every state emits with the
    same probabilities; otherwise the chain is walked letter by letter.
    """
    steps = state.step_probabilities
    graph = state.graph
    carrying = state.stationary > 0
    rows = steps[carrying]
    if np.allclose(rows, rows[0], rtol=0, atol=1e-15):
        symbols = rng.choice(graph.alphabet_size, size=length, p=rows[0] / rows[0].sum())
        return Word(symbols=symbols, alphabet_size=graph.alphabet_size)
    cumulative = np.cumsum(steps, axis=1)
    current = int(rng.choice(len(graph), p=state.stationary))
    draws = rng.random(length)
    symbols = np.empty(length, dtype=np.int64)
    successor = graph.successor
    for position in range(length):
        letter = int(np.searchsorted(cumulative[current], draws[position] * cumulative[current, -1], side="right"))
        if letter >= graph.alphabet_size or successor[current, letter] < 0:
            letter = int(np.argmax(steps[current]))
        symbols[position] = letter
        current = int(successor[current, letter])
    return Word(symbols=symbols, alphabet_size=graph.alphabet_size)


def achieved_dimension(source: SourceConfig) -> float:
    """:return: h(nu_n) / lambda_n."""
    return source.nu.entropy / source.lambda_n if source.lambda_n > 0 else math.nan
