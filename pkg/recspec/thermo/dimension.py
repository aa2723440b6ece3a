"""Bowen roots for Markov expanding maps."""
import logging
import math
from typing import List, Optional, Sequence

from scipy.optimize import bisect

from recspec.geometry.coding import code
from recspec.geometry.potentials import potential_from_map
from recspec.geometry.schemas import MarkovExpandingMap
from recspec.settings import settings
from recspec.symbolic.exceptions import EmptySurvivorError
from recspec.symbolic.schemas import Word
from recspec.symbolic.shifts import remove_hole
from recspec.thermo.exceptions import NotExpandingError
from recspec.thermo.pressure import pressure_with_holes
from recspec.thermo.schemas import DimensionEstimate, ScheduleRow

logger = logging.getLogger(__name__)


def bowen_dimension(
    fmap: MarkovExpandingMap,
    level: int = 1,
    holes: Sequence[Word] = (),
    tol: Optional[float] = None,
) -> float:
    """
    Root s of P(-s log|Df|) = 0 on the survivors of holes.

    The pressure decreases strictly in s, so the root is bracketed by 0 and
    log(#branches) / log(inf |Df|).

    :raises NotExpandingError: when inf |Df| <= 1.
    :return: the root, 0 when nothing survives.
    """
    if fmap.min_slope <= 1:
        raise NotExpandingError(f"inf |Df| = {fmap.min_slope} for {fmap.name}.")
    tol = settings.bisection_tol if tol is None else tol
    sft = fmap.sft

    def gap(s: float) -> float:
        return pressure_with_holes(sft, potential_from_map(fmap, s, level), holes)

    upper = math.log(len(fmap)) / math.log(fmap.min_slope)
    if gap(0.0) <= 0:
        return 0.0
    if gap(upper) >= 0:
        return upper
    root = float(bisect(gap, 0.0, upper, xtol=tol))
    logger.debug("Bowen root of %s at level %d: %.12g", fmap.name, level, root)
    return root


def dimension_refinement(fmap: MarkovExpandingMap, level: int = 1) -> DimensionEstimate:
    """:return: the root at level with its distance to the root at level + 1."""
    value = bowen_dimension(fmap, level)
    finer = bowen_dimension(fmap, level + 1)
    return DimensionEstimate(value=value, level=level, refinement_gap=abs(finer - value))


def boundary_holes(fmap: MarkovExpandingMap, n: int, boundary: Sequence[Word]) -> List[Word]:
    """:return: the n-letter prefixes of the boundary codings."""
    return sorted({word[:n] for word in boundary if len(word) >= n}, key=lambda word: word.key)


def default_boundary(fmap: MarkovExpandingMap, length: int = 64) -> List[Word]:
    """Coding of the left end of the partition."""
    left = float(fmap.domains[0, 0])
    return [code(fmap, left, length)]


def boundary_removal_schedule(
    fmap: MarkovExpandingMap,
    N: int,
    boundary: Optional[Sequence[Word]] = None,
    level: int = 1,
    shift_limit: int = 10,
) -> List[ScheduleRow]:
    """
    Dimensions of the repeller with the n-neighbourhood of the boundary removed.

    :param N: last n.
    :param boundary: codings of the boundary points, by default the left end.
    :param shift_limit: recode survivors as subshifts on n-blocks up to this n.
    :return: rows n = 1 .. N; a row with dimension 0 and no shift when
        nothing survives.
    """
    boundary = default_boundary(fmap) if boundary is None else list(boundary)
    rows = []
    for n in range(1, N + 1):
        holes = boundary_holes(fmap, n, boundary)
        dimension = bowen_dimension(fmap, level, holes)
        sub_shift = None
        if n <= shift_limit:
            try:
                sub_shift = remove_hole(fmap.sft, holes)
            except EmptySurvivorError:
                logger.info("nothing survives the boundary holes at n=%d", n)
        rows.append(ScheduleRow(n=n, dimension=dimension, sub_shift=sub_shift, removed=tuple(holes)))
    return rows
