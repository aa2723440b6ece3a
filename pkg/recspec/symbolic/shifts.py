import logging
from collections import deque
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from recspec.symbolic.exceptions import (
    EmptyAlphabetError,
    EmptySurvivorError,
    InvalidWordError,
    NoBranchingSymbolError,
    NotInCylinderError,
)
from recspec.symbolic.schemas import (
    ReturnAlphabet,
    ReturnEntry,
    SubshiftOfFiniteType,
    Word,
)
from recspec.symbolic.words import first_match

logger = logging.getLogger(__name__)


def admissible_words(sft: SubshiftOfFiniteType, length: int) -> List[Tuple[int, ...]]:
    """
    Enumerate admissible words in lexicographic order.

    :param sft: the subshift.
    :param length: word length, at least 1.
    :return: list of symbol tuples.
    """
    if length < 1:
        raise InvalidWordError("Cylinder length must be positive.")
    words: List[Tuple[int, ...]] = [(symbol,) for symbol in range(sft.alphabet_size)]
    for _ in range(length - 1):
        words = [
            word + (successor,)
            for word in words
            for successor in sft.successors(word[-1])
        ]
    return words


def _distances_to(sft: SubshiftOfFiniteType, target: int) -> Dict[int, int]:
    """Length of the shortest path from every symbol to target."""
    predecessors: Dict[int, List[int]] = {
        symbol: [int(p) for p in np.flatnonzero(sft.transitions[:, symbol])]
        for symbol in range(sft.alphabet_size)
    }
    distances = {target: 0}
    queue = deque([target])
    while queue:
        current = queue.popleft()
        for previous in predecessors[current]:
            if previous not in distances:
                distances[previous] = distances[current] + 1
                queue.append(previous)
    return distances


def _shortest_path(
    sft: SubshiftOfFiniteType,
    start: int,
    target: int,
    distances: Dict[int, int],
) -> List[int]:
    """Lexicographically smallest among shortest paths from start to target."""
    path = [start]
    current = start
    while current != target:
        current = min(
            successor
            for successor in sft.successors(current)
            if distances.get(successor) == distances[current] - 1
        )
        path.append(current)
    return path


def find_connecting_paths(
    sft: SubshiftOfFiniteType,
    symbol: Optional[int] = None,
) -> Tuple[Word, Word]:
    """
    Build the base cylinder A = aB and its competitor aC.

    B and C are the shortest (then lexicographically smallest) paths from the
    two smallest successors b < c of a back to a.

    :param sft: topologically mixing subshift.
    :param symbol: the branching symbol a; smallest branching symbol if omitted.
    :raises NoBranchingSymbolError: when the chosen symbol (or every symbol)
        has a single successor.
    :return: the pair (A, aC).
    """
    if symbol is None:
        branching = [
            candidate
            for candidate in range(sft.alphabet_size)
            if len(sft.successors(candidate)) >= 2
        ]
        if not branching:
            raise NoBranchingSymbolError()
        symbol = branching[0]
    successors = sft.successors(symbol)
    if len(successors) < 2:
        raise NoBranchingSymbolError()
    distances = _distances_to(sft, symbol)
    words = []
    for first in successors[:2]:
        if first not in distances:
            raise NoBranchingSymbolError()
        path = [symbol] + _shortest_path(sft, first, symbol, distances)
        words.append(Word.of(path, sft.alphabet_size))
    logger.debug("connecting paths for %d: %s, %s", symbol, words[0], words[1])
    return words[0], words[1]


def _first_returns(
    sft: SubshiftOfFiniteType,
    cylinder: Word,
    t_max: int,
) -> Tuple[List[Tuple[int, ...]], List[Tuple[int, ...]]]:
    """
    Split the extensions of a cylinder by first return time.

    :return: (return words with t < t_max, words of length |A| + t_max - 1
        with no return at offsets 1 .. t_max - 1).
    """
    base = cylinder.key
    size = len(base)
    returns: List[Tuple[int, ...]] = []
    long_words: List[Tuple[int, ...]] = []
    stack = [base]
    while stack:
        word = stack.pop()
        for successor in reversed(sft.successors(word[-1])):
            extended = word + (successor,)
            offset = len(extended) - size
            if extended[offset:] == base:
                returns.append(extended[:offset])
            elif offset >= t_max - 1:
                long_words.append(extended)
            else:
                stack.append(extended)
    returns.sort(key=lambda word: (len(word), word))
    long_words.sort()
    return returns, long_words


def induced_alphabet(
    sft: SubshiftOfFiniteType,
    cylinder: Word,
    t_max: int,
) -> ReturnAlphabet:
    """
    First-return words to a cylinder with return time below t_max.

    Each entry is the block a point of the cylinder walks through before it
    re-enters the cylinder; any concatenation of entries followed by the
    cylinder word is admissible, so the induced system is a full shift.

    :param sft: the subshift.
    :param cylinder: admissible cylinder word A.
    :param t_max: strict bound on return times, at least 2.
    :raises EmptyAlphabetError: when no return time lies below t_max.
    :return: entries sorted by return time, then lexicographically.
    """
    if t_max < 2:
        raise InvalidWordError("Return-time bound must be at least 2.")
    if not len(cylinder) or not sft.is_admissible(cylinder):
        raise InvalidWordError(f"Cylinder {cylinder} is not admissible.")
    returns, _ = _first_returns(sft, cylinder, t_max)
    if not returns:
        raise EmptyAlphabetError()
    entries = tuple(
        ReturnEntry(
            return_word=Word.of(word, sft.alphabet_size),
            return_time=len(word),
        )
        for word in returns
    )
    return ReturnAlphabet(base_cylinder=cylinder, entries=entries, bounded_by=t_max)


def long_return_words(
    sft: SubshiftOfFiniteType,
    cylinder: Word,
    n: int,
) -> List[Word]:
    """
    Cylinders of the set {w in A: t(w) >= n}.

    :param sft: the subshift.
    :param cylinder: base cylinder A.
    :param n: return-time threshold, at least 2.
    :return: words of length |A| + n - 1 whose union is the set.
    """
    if n < 2:
        raise InvalidWordError("Return-time threshold must be at least 2.")
    _, long_words = _first_returns(sft, cylinder, n)
    return [Word.of(word, sft.alphabet_size) for word in long_words]


def parse_return_words(word: Word, alphabet: ReturnAlphabet) -> List[int]:
    """
    Split a base word into induced letters.

    The word must be a concatenation of entries followed by the base cylinder.

    :param word: base word starting in the base cylinder.
    :param alphabet: induced alphabet.
    :raises InvalidWordError: when a return block is not an entry.
    :return: entry indices in order.
    """
    index = {
        entry.return_word.key: position
        for position, entry in enumerate(alphabet.entries)
    }
    cylinder = alphabet.base_cylinder
    if not word.startswith(cylinder):
        raise NotInCylinderError()
    letters = []
    position = 0
    while True:
        following = first_match(word.symbols, cylinder.symbols, position + 1)
        if following is None:
            return letters
        block = tuple(int(symbol) for symbol in word.symbols[position:following])
        if block not in index:
            raise InvalidWordError(f"Return block {block} is not an entry.")
        letters.append(index[block])
        position = following


def _prune(matrix: np.ndarray) -> np.ndarray:
    """Indices of states that lie on a bi-infinite path."""
    alive = np.ones(matrix.shape[0], dtype=bool)
    while True:
        sub = matrix[np.ix_(alive, alive)]
        keep = sub.any(axis=1) & sub.any(axis=0)
        if keep.all():
            return np.flatnonzero(alive)
        alive[np.flatnonzero(alive)[~keep]] = False
        if not alive.any():
            return np.flatnonzero(alive)


def remove_hole(
    sft: SubshiftOfFiniteType,
    holes: Iterable[Word],
) -> SubshiftOfFiniteType:
    """
    Subshift of sequences never entering any hole cylinder.

    The result is written on the surviving n-blocks, a block may follow
    another when the (n-1)-suffix of the first is the (n-1)-prefix of the
    second. Blocks that can no longer be continued both ways are dropped.

    :param sft: the subshift.
    :param holes: admissible words of a common length n.
    :raises EmptySurvivorError: when no admissible loop survives.
    :return: recoded surviving subshift, or sft itself for no holes.
    """
    hole_keys = {hole.key for hole in holes}
    if not hole_keys:
        return sft
    lengths = {len(key) for key in hole_keys}
    if len(lengths) != 1:
        raise InvalidWordError("Holes must share one length.")
    length = lengths.pop()
    for key in hole_keys:
        if not sft.is_admissible(Word.of(key, sft.alphabet_size)):
            raise InvalidWordError(f"Hole {key} is not admissible.")
    survivors = [word for word in admissible_words(sft, length) if word not in hole_keys]
    by_prefix: Dict[Tuple[int, ...], List[int]] = {}
    for position, word in enumerate(survivors):
        by_prefix.setdefault(word[:-1], []).append(position)
    matrix = np.zeros((len(survivors), len(survivors)), dtype=np.int8)
    for position, word in enumerate(survivors):
        for candidate in by_prefix.get(word[1:], []):
            if sft.transitions[word[-1], survivors[candidate][-1]]:
                matrix[position, candidate] = 1
    alive = _prune(matrix)
    if not alive.size:
        raise EmptySurvivorError()
    logger.debug(
        "removed %d holes of length %d, %d blocks survive",
        len(hole_keys),
        length,
        alive.size,
    )
    return SubshiftOfFiniteType(
        alphabet_size=int(alive.size),
        transitions=matrix[np.ix_(alive, alive)],
        blocks=tuple(survivors[index] for index in alive),
    )
