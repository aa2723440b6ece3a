"""Geometric return times and the ball/cylinder comparisons."""
import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from recspec.geometry.coding import birkhoff_sum, code, decode, orbit, orbit_from_word
from recspec.geometry.exceptions import CensoredError
from recspec.geometry.schemas import (
    BallCylinderReport,
    DistortionData,
    MarkovExpandingMap,
    RecurrenceSandwichReport,
)
from recspec.services.generators import make_rng
from recspec.symbolic.schemas import Word
from recspec.symbolic.shifts import admissible_words
from recspec.symbolic.words import repetition_time

logger = logging.getLogger(__name__)

_PROBE_POINTS = np.linspace(0.05, 0.95, 19)
_CYLINDERS_PER_LEVEL = 64


def _orbit_of(fmap: MarkovExpandingMap, target: Union[float, Word], length: int) -> np.ndarray:
    if isinstance(target, Word):
        return orbit_from_word(fmap, target, min(length, len(target) - fmap.decode_depth()))
    return orbit(fmap, target, length)


def return_times(points: np.ndarray, radii: Sequence[float]) -> List[Optional[int]]:
    """
    First return of points[0] into each radius.

    :param points: orbit x_0, x_1, ...
    :param radii: positive radii.
    :return: tau_r per radius, None when censored by the orbit length.
    """
    distances = np.abs(points[1:] - points[0])
    if not distances.size:
        return [None for _ in radii]
    closest = np.minimum.accumulate(distances)
    # closest is nonincreasing; the first index below r is a search on -closest
    positions = np.searchsorted(-closest, -np.asarray(radii, dtype=float), side="right")
    return [int(position) + 1 if position < closest.size else None for position in positions]


def tau_r(
    fmap: MarkovExpandingMap,
    x: Union[float, Word],
    r: float,
    n_max: int,
) -> Optional[int]:
    """
    Smallest n <= n_max with |f^n x - x| < r.

    :param x: a point, or a word coding the point.
    :return: the return time, None when censored at n_max.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    return return_times(_orbit_of(fmap, x, n_max + 1), [r])[0]


def _sampled_words(fmap: MarkovExpandingMap, level: int, seed: int = 0) -> List[Word]:
    words = admissible_words(fmap.sft, min(level, 8))
    if level > 8:
        rng = make_rng(seed + level)
        extended = []
        sft = fmap.sft
        for start in rng.choice(len(words), size=min(_CYLINDERS_PER_LEVEL, len(words)), replace=False):
            word = list(words[start])
            while len(word) < level:
                word.append(int(rng.choice(sft.successors(word[-1]))))
            extended.append(tuple(word))
        words = extended
    elif len(words) > _CYLINDERS_PER_LEVEL * 4:
        rng = make_rng(seed + level)
        words = [words[i] for i in rng.choice(len(words), size=_CYLINDERS_PER_LEVEL * 4, replace=False)]
    return [Word.of(word, len(fmap)) for word in words]


def distortion_constants(fmap: MarkovExpandingMap, probe_depth: int = 8) -> DistortionData:
    """
    Distortion D, level-1 gap delta and kappa.

    D is the largest ratio sup/inf of |Df^n| over sampled points of sampled
    n-cylinders, n <= probe_depth. When two level-1 cylinders touch, delta
    is 0 and kappa falls back to half the shortest level-2 cylinder.
    """
    if probe_depth < 1:
        raise ValueError("probe_depth must be positive")
    largest = 0.0
    if not fmap.is_linear:
        for level in range(1, probe_depth + 1):
            for word in _sampled_words(fmap, level):
                left, right = decode(fmap, word)
                logs = []
                for fraction in _PROBE_POINTS:
                    point = left + fraction * (right - left)
                    path = orbit(fmap, point, level)
                    logs.append(
                        sum(
                            math.log(abs(float(fmap.branches[symbol].derivative(p))))
                            for symbol, p in zip(word.symbols, path)
                        ),
                    )
                largest = max(largest, max(logs) - min(logs))
    distortion = math.exp(largest)
    domains = fmap.domains
    delta = float(np.min(domains[1:, 0] - domains[:-1, 1])) if len(fmap) > 1 else 1.0
    if delta <= 1e-12:
        shortest = min(
            right - left
            for left, right in (decode(fmap, Word.of(word, len(fmap))) for word in admissible_words(fmap.sft, 2))
        )
        return DistortionData(D=distortion, delta=0.0, kappa=shortest / 2, full_branch_adjacent=True)
    return DistortionData(D=distortion, delta=delta, kappa=min(delta / distortion, 0.5))


def _neighbour_distances(fmap: MarkovExpandingMap, word: Word) -> Tuple[float, float]:
    """Distances from the cylinder of word to the nearest other cylinders of the same length."""
    left, right = decode(fmap, word)
    n = len(word)
    sft = fmap.sft
    best_left, best_right = -math.inf, math.inf
    stack = [(symbol,) for symbol in range(sft.alphabet_size)]
    while stack:
        prefix = stack.pop()
        if prefix == word.key[: len(prefix)] and len(prefix) == n:
            continue
        low, high = decode(fmap, Word.of(prefix, sft.alphabet_size))
        could_left = low < left and high > best_left
        could_right = high > right and low < best_right
        if not (could_left or could_right):
            continue
        if len(prefix) == n:
            if high <= left:
                best_left = max(best_left, high)
            if low >= right:
                best_right = min(best_right, low)
            continue
        for successor in sft.successors(prefix[-1]):
            stack.append(prefix + (successor,))
    return left - best_left, best_right - right


def ball_cylinder_sandwich_check(
    fmap: MarkovExpandingMap,
    x: float,
    n: int,
    distortion: Optional[DistortionData] = None,
) -> BallCylinderReport:
    """
    Compare the n-cylinder of x with balls of radius kappa^{+-1} |D_x f^n|^{-1}.

    The inner ball is tested against the repeller only: it holds when the
    nearest other n-cylinder is farther than the radius. With adjacent
    level-1 branches the inner side is skipped.

    :raises BoundaryOrbitError: when x has no n-itinerary.
    """
    distortion = distortion or distortion_constants(fmap)
    word = code(fmap, x, n)
    left, right = decode(fmap, word)
    scale = math.exp(-birkhoff_sum(fmap, x, n))
    gap_left, gap_right = _neighbour_distances(fmap, word)
    nearest_outside = min(x - left + gap_left, right - x + gap_right)
    farthest_inside = max(x - left, right - x)
    inner = distortion.kappa * scale
    outer = scale / distortion.kappa
    return BallCylinderReport(
        x=x,
        n=n,
        cylinder=(left, right),
        inner_radius=inner,
        outer_radius=outer,
        inner_holds=None if distortion.full_branch_adjacent else inner <= nearest_outside,
        outer_holds=farthest_inside <= outer,
        tight_inner=nearest_outside / scale,
        tight_outer=farthest_inside / scale,
    )


def recurrence_sandwich_check(
    fmap: MarkovExpandingMap,
    word: Word,
    k: int,
    distortion: Optional[DistortionData] = None,
) -> RecurrenceSandwichReport:
    """
    Check tau_{kappa e^{-S_k psi}} >= R_k >= tau_{e^{-S_k psi}/kappa} at the point coded by word.

    With adjacent level-1 branches the small radius can reach into a
    neighbouring k-cylinder. The small-radius side is then checked only
    when the small ball stays inside the k-cylinder of the point, and
    skipped otherwise.

    :raises CensoredError: when R_k or the larger-radius return time does
        not fit in the word.
    """
    distortion = distortion or distortion_constants(fmap)
    repetition = repetition_time(word, k)
    if repetition is None:
        raise CensoredError(f"R_{k} exceeds the {len(word)}-letter word.")
    birkhoff = birkhoff_sum(fmap, word, k)
    scale = math.exp(-birkhoff)
    points = orbit_from_word(fmap, word)
    small, large = distortion.kappa * scale, scale / distortion.kappa
    tau_small, tau_large = return_times(points, [small, large])
    if tau_large is None:
        raise CensoredError(f"No return within {points.size} steps at radius {large}.")
    small_holds: Optional[bool] = tau_small is None or tau_small >= repetition
    if distortion.full_branch_adjacent:
        left, right = decode(fmap, word[:k])
        if min(points[0] - left, right - points[0]) < small:
            small_holds = None
    large_holds = repetition >= tau_large
    if small_holds is False or not large_holds:
        logger.info("recurrence sandwich fails at k=%d: %s, %d, %d", k, tau_small, repetition, tau_large)
    return RecurrenceSandwichReport(
        k=k,
        repetition=repetition,
        birkhoff=birkhoff,
        tau_small=tau_small,
        tau_large=tau_large,
        small_holds=small_holds,
        large_holds=large_holds,
    )


def radius_grid(first_exponent: int, last_exponent: int, base: float = 2.0) -> np.ndarray:
    """:return: radii base^-first .. base^-last."""
    return base ** -np.arange(first_exponent, last_exponent + 1, dtype=float)
