"""Insertion map g and its exact checks.

Stage k copies the first k letters of the current word followed by y_k to
position l_k + 1. Since l_{k+1} >= l_k + 2k, later stages only touch letters
after earlier blocks, so the output prefix is written left to right.
"""
import logging
from typing import Iterable, List, Optional, Tuple

import numpy as np

from recspec.insertion.exceptions import HorizonTooShortError
from recspec.insertion.schemas import EllSequence, InsertionSpec, LemmaReport, LemmaViolation
from recspec.symbolic.schemas import Word
from recspec.symbolic.words import repetition_time

logger = logging.getLogger(__name__)


def _stages(ell: EllSequence, horizon: int) -> List[Tuple[int, int]]:
    """(k, l_k) for stages that write inside the horizon."""
    return [(k, ell[k]) for k in ell.indices if ell[k] < horizon]


def required_source_length(ell: EllSequence, horizon: int) -> int:
    """
    Number of source letters consumed by the first horizon output letters.

    :param ell: the l-sequence.
    :param horizon: output length, at least 1.
    """
    inserted = sum(min(k + 1, horizon - position) for k, position in _stages(ell, horizon))
    return max(horizon - 1 - inserted, 0)


def insertion_mask(ell: EllSequence, horizon: int) -> np.ndarray:
    """:return: boolean mask of the output letters written by insertion stages."""
    mask = np.zeros(horizon, dtype=bool)
    for k, position in _stages(ell, horizon):
        mask[position : position + k + 1] = True
    return mask


def insert(
    w: Word,
    spec: InsertionSpec,
    ell: EllSequence,
    horizon: int,
    y_rule: bool = True,
) -> Word:
    """
    First horizon letters of g(w).

    :param w: source word over the inner alphabet.
    :param spec: alphabets and marker letters.
    :param ell: the l-sequence, stages n0 .. K are executed.
    :param horizon: number of output letters.
    :param y_rule: pick y_k = c_bar when the next letter is c; when False
        y_k is always c, which breaks the repetition identity.
    :raises HorizonTooShortError: when w has too few letters.
    :return: word over the outer alphabet.
    """
    if horizon < 1:
        raise HorizonTooShortError("Horizon must be positive.")
    needed = required_source_length(ell, horizon)
    if len(w) < needed:
        raise HorizonTooShortError(
            f"Source has {len(w)} letters, {needed} needed for horizon {horizon}.",
        )
    out = np.empty(horizon, dtype=np.int64)
    out[0] = spec.marker
    written = 1
    consumed = 0
    source = w.symbols
    for k, position in _stages(ell, horizon):
        take = position - written
        out[written:position] = source[consumed : consumed + take]
        consumed += take
        block = np.empty(k + 1, dtype=np.int64)
        block[:k] = out[:k]
        block[k] = spec.c_bar if y_rule and out[k] == spec.c else spec.c
        end = min(position + k + 1, horizon)
        out[position:end] = block[: end - position]
        written = end
    out[written:] = source[consumed : consumed + horizon - written]
    logger.debug("inserted %d stages into a %d-letter prefix", len(_stages(ell, horizon)), horizon)
    return Word(symbols=out, alphabet_size=spec.outer_size)


def verify_lemma_g(
    w: Word,
    spec: InsertionSpec,
    ell: EllSequence,
    k_range: Iterable[int],
    y_rule: bool = True,
) -> LemmaReport:
    """
    Check that the k-repetition time of g(w) is l_k for every k in k_range.

    :raises HorizonTooShortError: when w cannot fill l_{k_max} + k_max + 1 letters.
    """
    ks = tuple(k_range)
    k_max = max(ks)
    horizon = ell[k_max] + k_max + 1
    image = insert(w, spec, ell, horizon, y_rule=y_rule)
    violations = []
    for k in ks:
        found = repetition_time(image, k)
        if found != ell[k]:
            violations.append(LemmaViolation(k=k, expected=ell[k], found=found))
    if violations:
        logger.info("repetition identity failed for k in %s", [v.k for v in violations])
    return LemmaReport(checked=ks, violations=tuple(violations), horizon=horizon)


def inserted_letter_budget(ell: EllSequence, p: int) -> int:
    """:return: sum of i for i = n0 + 1 .. p + 1."""
    return sum(range(ell.n0 + 1, p + 2))


def strip_insertions(image: Word, ell: EllSequence) -> Word:
    """
    Remove the marker and every inserted letter from an output prefix.

    :return: the source letters the prefix was built from.
    """
    mask = insertion_mask(ell, len(image))
    mask[0] = True
    return Word(symbols=image.symbols[~mask], alphabet_size=image.alphabet_size)


def largest_executable_index(ell: EllSequence, horizon: int) -> Optional[int]:
    """:return: largest k with l_k + k + 1 <= horizon, or None."""
    fitting = [k for k in ell.indices if ell[k] + k + 1 <= horizon]
    return fitting[-1] if fitting else None
