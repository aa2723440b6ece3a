import logging
import math
from typing import Optional, Tuple, Union

import numpy as np

from recspec.geometry.exceptions import BoundaryOrbitError, CensoredError, InadmissibleWordError
from recspec.geometry.schemas import MarkovExpandingMap
from recspec.settings import settings
from recspec.symbolic.schemas import Word

logger = logging.getLogger(__name__)

_ANCHOR_EVERY = 30


def code(fmap: MarkovExpandingMap, x: float, depth: int) -> Word:
    """
    Itinerary of x through the partition.

    :raises BoundaryOrbitError: when an iterate lands on a shared endpoint
        or in a gap.
    :return: word of length depth.
    """
    symbols = []
    point = x
    for step in range(depth):
        index = fmap.locate(point)
        if index is None:
            raise BoundaryOrbitError(point, step)
        symbols.append(index)
        point = float(fmap.branches[index].value(point))
    return Word.of(symbols, len(fmap))


def decode(fmap: MarkovExpandingMap, word: Word) -> Tuple[float, float]:
    """
    Closed interval of points whose itinerary starts with word.

    :raises InadmissibleWordError: when the word codes nothing.
    """
    if not len(word) or not fmap.sft.is_admissible(word):
        raise InadmissibleWordError(str(word))
    left, right = fmap.branches[word[-1]].domain
    for symbol in reversed(word.symbols[:-1]):
        branch = fmap.branches[symbol]
        ends = sorted((branch.inverse(left), branch.inverse(right)))
        left, right = ends[0], ends[1]
    return left, right


def point_of(fmap: MarkovExpandingMap, word: Word) -> float:
    """:return: midpoint of the cylinder of word."""
    left, right = decode(fmap, word)
    return (left + right) / 2


def periodic_point(fmap: MarkovExpandingMap, word: Word) -> float:
    """
    Point whose itinerary repeats word forever.

    :raises InadmissibleWordError: when the repeated word is not admissible.
    """
    if not fmap.sft.is_admissible(word.concat(word[:1])):
        raise InadmissibleWordError(str(word))
    if fmap.is_linear:
        offset, factor = 0.0, 1.0
        for symbol in reversed(word.symbols):
            p, q = fmap.branches[symbol].inverse_affine()
            offset, factor = p + q * offset, q * factor
        return offset / (1 - factor)
    x = point_of(fmap, word)
    for _ in range(fmap.decode_depth() // len(word) + 2):
        for symbol in reversed(word.symbols):
            x = fmap.branches[symbol].inverse(x)
    return x


def orbit(fmap: MarkovExpandingMap, x: float, n: int) -> np.ndarray:
    """
    Floating-point orbit x, f(x), ..., f^{n-1}(x).

    :raises BoundaryOrbitError: as code.
    """
    points = np.empty(n)
    point = x
    for step in range(n):
        points[step] = point
        index = fmap.locate(point)
        if index is None:
            raise BoundaryOrbitError(point, step)
        point = float(fmap.branches[index].value(point))
    return points


def orbit_from_word(
    fmap: MarkovExpandingMap,
    word: Word,
    count: Optional[int] = None,
) -> np.ndarray:
    """
    Points pi(sigma^n w) for n < count.

    Each point is placed by the inverse branches along the next depth
    letters, so the orbit does not lose precision along the way. For affine
    branches all points are summed at once.

    :param count: number of points, default len(word) - depth.
    :raises CensoredError: when the word is too short.
    """
    depth = max(fmap.decode_depth(), 1)
    if count is None:
        count = len(word) - depth
    if count < 1 or len(word) < count + depth:
        raise CensoredError(f"{len(word)} letters cannot place {count} points at depth {depth}.")
    count = min(count, settings.horizon_cap)
    symbols = word.symbols
    if fmap.is_linear:
        affine = np.array([branch.inverse_affine() for branch in fmap.branches])
        offsets, factors = affine[:, 0], affine[:, 1]
        points = np.zeros(count)
        product = np.ones(count)
        for shift in range(depth):
            letters = symbols[shift : shift + count]
            points += product * offsets[letters]
            product *= factors[letters]
        points += product * fmap.domains[symbols[depth : depth + count]].mean(axis=1)
        return points
    points = np.empty(count)
    for start in range(0, count, _ANCHOR_EVERY):
        x = point_of(fmap, word[start : start + depth])
        for step in range(start, min(start + _ANCHOR_EVERY, count)):
            points[step] = x
            index = int(symbols[step])
            x = float(fmap.branches[index].value(x))
    return points


def birkhoff_sum(
    fmap: MarkovExpandingMap,
    target: Union[float, Word],
    k: int,
) -> float:
    """
    S_k log|Df| along the orbit of a point or the point coded by a word.

    For affine branches and a word the sum is exact.
    """
    if k <= 0:
        return 0.0
    if isinstance(target, Word):
        if len(target) < k:
            raise CensoredError(f"{len(target)} letters cannot carry {k} terms.")
        if fmap.is_linear:
            logs = np.log(np.abs([branch.slope for branch in fmap.branches]))
            return float(logs[target.symbols[:k]].sum())
        depth = fmap.decode_depth()
        points = [point_of(fmap, target[i : i + depth]) for i in range(k)]
        indices = target.symbols[:k]
    else:
        points = list(orbit(fmap, target, k))
        indices = [fmap.locate(point) for point in points]
    return float(
        sum(
            math.log(abs(float(fmap.branches[index].derivative(point))))
            for index, point in zip(indices, points)
        ),
    )
