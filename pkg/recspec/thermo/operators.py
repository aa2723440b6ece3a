"""Transfer graphs and their dominant eigendata."""
import logging
import math
from typing import Dict, Iterable, List, Optional, Set, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from recspec.settings import settings
from recspec.symbolic.exceptions import EmptySurvivorError, InvalidWordError
from recspec.symbolic.schemas import SubshiftOfFiniteType, Word
from recspec.symbolic.shifts import admissible_words
from recspec.thermo.schemas import Potential, TransferGraph

logger = logging.getLogger(__name__)


def _tracked_words(
    sft: SubshiftOfFiniteType,
    base_length: int,
    holes: Set[Tuple[int, ...]],
) -> List[Tuple[int, ...]]:
    words = set(admissible_words(sft, base_length))
    for hole in holes:
        for end in range(base_length + 1, len(hole)):
            words.add(hole[:end])
    return sorted(words, key=lambda word: (len(word), word))


def build_transfer_graph(
    sft: SubshiftOfFiniteType,
    phi: Potential,
    holes: Iterable[Word] = (),
) -> TransferGraph:
    """
    Automaton of admissible histories avoiding every hole word.

    States are all admissible words of length max(level - 1, 1) together with
    proper prefixes of longer hole words, so a hole occurrence is detected
    on the step that completes it. Each step weighs exp(phi) of the last
    level letters.

    :param sft: the subshift.
    :param phi: potential covering every admissible cylinder of its level.
    :param holes: admissible words never to be entered.
    :return: the graph.
    """
    hole_keys = {hole.key for hole in holes}
    for key in hole_keys:
        if not key or not sft.is_admissible(Word.of(key, sft.alphabet_size)):
            raise InvalidWordError(f"Hole {key} is not admissible.")
    level = phi.level
    base_length = max(level - 1, 1)
    states = _tracked_words(sft, base_length, hole_keys)
    index: Dict[Tuple[int, ...], int] = {state: position for position, state in enumerate(states)}
    longest = max(len(state) for state in states)
    hole_lengths = sorted({len(key) for key in hole_keys})
    successor = np.full((len(states), sft.alphabet_size), -1, dtype=np.int64)
    weight = np.zeros((len(states), sft.alphabet_size))
    for position, state in enumerate(states):
        for letter in sft.successors(state[-1]):
            extended = state + (letter,)
            if any(extended[-size:] in hole_keys for size in hole_lengths if size <= len(extended)):
                continue
            for size in range(min(len(extended), longest), base_length - 1, -1):
                target = index.get(extended[-size:])
                if target is not None:
                    break
            successor[position, letter] = target
            weight[position, letter] = math.exp(phi.value(extended[-level:]))
    logger.debug("transfer graph: %d states, %d holes", len(states), len(hole_keys))
    return TransferGraph(
        states=tuple(states),
        successor=successor,
        weight=weight,
        alphabet_size=sft.alphabet_size,
        level=level,
    )


def transfer_matrix(graph: TransferGraph) -> sparse.csr_matrix:
    """:return: sparse matrix M[q, q'] of step weights."""
    rows, letters = np.nonzero(graph.successor >= 0)
    columns = graph.successor[rows, letters]
    size = len(graph)
    return sparse.csr_matrix((graph.weight[rows, letters], (rows, columns)), shape=(size, size))


def _power_iteration(
    matrix: sparse.csr_matrix,
    tol: float,
    max_iter: int,
) -> Tuple[float, np.ndarray]:
    """Perron root and vector of an irreducible matrix, iterating I + M."""
    shifted = matrix + sparse.identity(matrix.shape[0], format="csr")
    vector = np.full(matrix.shape[0], 1.0 / matrix.shape[0])
    value = 0.0
    for _ in range(max_iter):
        following = shifted @ vector
        norm = following.sum()
        following /= norm
        if np.abs(following - vector).max() <= tol * following.max():
            value = norm
            vector = following
            break
        vector, value = following, norm
    else:
        logger.warning("power iteration stopped after %d steps", max_iter)
    return value - 1.0, vector


def _dense_perron(matrix: np.ndarray) -> Tuple[float, np.ndarray]:
    values, vectors = np.linalg.eig(matrix)
    best = int(np.argmax(values.real))
    vector = np.abs(vectors[:, best].real)
    return float(values[best].real), vector / vector.sum()


def _perron(
    matrix: sparse.csr_matrix,
    tol: float,
    max_iter: int,
    dense_limit: int,
) -> Tuple[float, np.ndarray]:
    if matrix.shape[0] <= dense_limit:
        return _dense_perron(matrix.toarray())
    return _power_iteration(matrix, tol, max_iter)


def dominant_eigen(
    graph: TransferGraph,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    dense_limit: Optional[int] = None,
) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    Dominant eigenvalue with left and right eigenvectors.

    The graph is split into strongly connected components and the component
    with the largest spectral radius is kept; vectors vanish off it.

    :raises EmptySurvivorError: when the graph carries no cycle.
    :return: (eigenvalue, left vector, right vector), vectors normalized so
        that left . right = 1.
    """
    tol = settings.eig_tol if tol is None else tol
    max_iter = settings.eig_max_iter if max_iter is None else max_iter
    dense_limit = settings.dense_eig_limit if dense_limit is None else dense_limit
    matrix = transfer_matrix(graph)
    count, labels = connected_components(matrix, directed=True, connection="strong")
    best: Optional[Tuple[float, np.ndarray]] = None
    for component in range(count):
        members = np.flatnonzero(labels == component)
        block = matrix[members][:, members]
        if not block.nnz:
            continue
        value, _ = _perron(block, tol, max_iter, dense_limit)
        if best is None or value > best[0]:
            best = (value, members)
    if best is None or best[0] <= 0:
        raise EmptySurvivorError()
    value, members = best
    block = matrix[members][:, members].tocsr()
    _, right_part = _perron(block, tol, max_iter, dense_limit)
    _, left_part = _perron(block.T.tocsr(), tol, max_iter, dense_limit)
    right = np.zeros(len(graph))
    left = np.zeros(len(graph))
    right[members] = right_part
    left[members] = left_part / float(left_part @ right_part)
    logger.debug("dominant eigenvalue %.15g on %d of %d states", value, members.size, len(graph))
    return value, left, right
