"""Repetition and return times on finite prefixes.

Every function scans only the letters it is given; when no match fits in the
prefix the result is ``None`` (the sequence may still match further out).
"""
from typing import Dict, Iterable, Optional

import numpy as np

from recspec.symbolic.exceptions import InvalidWordError, NotInCylinderError
from recspec.symbolic.schemas import Word

_BLOCK = 1024


def first_match(symbols: np.ndarray, pattern: np.ndarray, start: int) -> Optional[int]:
    """
    Smallest n >= start with symbols[n:n + len(pattern)] == pattern.

    :param symbols: scanned sequence.
    :param pattern: block to find, non-empty.
    :param start: first admissible offset.
    :return: offset or None when no match fits in the sequence.
    """
    size = pattern.size
    last = symbols.size - size
    if last < start:
        return None
    candidates = np.flatnonzero(symbols[start : last + 1] == pattern[0]) + start
    for begin in range(0, candidates.size, _BLOCK):
        block = candidates[begin : begin + _BLOCK]
        for shift in range(1, size):
            block = block[symbols[block + shift] == pattern[shift]]
            if not block.size:
                break
        if block.size:
            return int(block[0])
    return None


def repetition_time(word: Word, k: int) -> Optional[int]:
    """
    k-repetition time of a word.

    Smallest n > 0 such that the block at positions n+1 .. n+k equals the
    first k letters.

    :param word: word of length at least k + 1.
    :param k: block length.
    :raises InvalidWordError: when k <= 0 or k >= len(word).
    :return: repetition time or None if no repetition fits in the prefix.
    """
    if k <= 0 or k >= len(word):
        raise InvalidWordError(f"Block length {k} outside 1..{len(word) - 1}.")
    return first_match(word.symbols, word.symbols[:k], 1)


def repetition_times(word: Word, ks: Iterable[int]) -> Dict[int, Optional[int]]:
    """:return: repetition time of word for every block length in ks."""
    return {k: repetition_time(word, k) for k in ks}


def return_time_to_cylinder(word: Word, cylinder: Word) -> Optional[int]:
    """
    First return time of a word into a cylinder it starts in.

    :param word: word lying in the cylinder.
    :param cylinder: non-empty cylinder word.
    :raises NotInCylinderError: when word does not start with cylinder.
    :return: smallest t > 0 with the cylinder at offset t, or None.
    """
    if not len(cylinder):
        raise InvalidWordError("Empty cylinder.")
    if not word.startswith(cylinder):
        raise NotInCylinderError()
    return first_match(word.symbols, cylinder.symbols, 1)
