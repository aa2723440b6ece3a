import math

from recspec.geometry.coding import decode
from recspec.geometry.schemas import MarkovExpandingMap
from recspec.symbolic.schemas import Word
from recspec.symbolic.shifts import admissible_words
from recspec.thermo.schemas import Potential


def potential_from_map(fmap: MarkovExpandingMap, s: float, level: int = 1) -> Potential:
    """
    Locally constant version of -s log|Df| on level-cylinders.

    Affine branches give the exact potential at every level; otherwise the
    derivative is read at the cylinder midpoint.
    """
    values = {}
    for word in admissible_words(fmap.sft, level):
        branch = fmap.branches[word[0]]
        if fmap.is_linear:
            slope = abs(branch.slope)
        else:
            left, right = decode(fmap, Word.of(word, len(fmap)))
            slope = abs(float(branch.derivative((left + right) / 2)))
        values[word] = -s * math.log(slope)
    return Potential(level=level, values=values)


def log_derivative(fmap: MarkovExpandingMap, level: int = 1) -> Potential:
    """:return: psi = log|Df| on level-cylinders."""
    return potential_from_map(fmap, -1.0, level)
