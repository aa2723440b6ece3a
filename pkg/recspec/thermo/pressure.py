import logging
import math
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from recspec.symbolic.exceptions import EmptyAlphabetError, EmptySurvivorError
from recspec.symbolic.schemas import SubshiftOfFiniteType, Word
from recspec.symbolic.shifts import induced_alphabet, long_return_words
from recspec.thermo.exceptions import ZeroMassCylinderError
from recspec.thermo.operators import build_transfer_graph, dominant_eigen, transfer_matrix
from recspec.thermo.schemas import (
    EquilibriumState,
    HoleDecay,
    KacReport,
    Potential,
    TransferGraph,
)

logger = logging.getLogger(__name__)

_ZERO_MASS = 1e-14


def pressure(sft: SubshiftOfFiniteType, phi: Potential) -> float:
    """
    Topological pressure of a locally constant potential.

    :raises EmptySurvivorError: when the shift has no admissible loop.
    :return: log of the spectral radius of the transfer matrix.
    """
    value, _, _ = dominant_eigen(build_transfer_graph(sft, phi))
    return math.log(value)


def pressure_with_holes(
    sft: SubshiftOfFiniteType,
    phi: Potential,
    holes: Iterable[Word],
) -> float:
    """
    Pressure of the potential on sequences never entering any hole.

    :return: the pressure, -inf when nothing survives.
    """
    try:
        value, _, _ = dominant_eigen(build_transfer_graph(sft, phi, holes))
    except EmptySurvivorError:
        return -math.inf
    return math.log(value)


def _equilibrium_from_graph(
    graph: TransferGraph,
    phi: Potential,
    psi: Optional[Potential] = None,
) -> EquilibriumState:
    value, left, right = dominant_eigen(graph)
    successor = graph.successor
    allowed = successor >= 0
    following = np.where(allowed, right[np.where(allowed, successor, 0)], 0.0)
    scale = value * right
    with np.errstate(divide="ignore", invalid="ignore"):
        steps = np.where(
            scale[:, None] > 0,
            graph.weight * following / scale[:, None],
            0.0,
        )
    stationary = left * right
    stationary /= stationary.sum()
    log_pressure = math.log(value)
    state = EquilibriumState(
        pressure=log_pressure,
        right_eigvec=right,
        left_eigvec=left,
        stationary=stationary,
        step_probabilities=steps,
        graph=graph,
        entropy=0.0,
    )
    entropy = log_pressure - state.integrate(phi)
    lyapunov = state.integrate(psi) if psi is not None else None
    return state.copy(update={"entropy": entropy, "lyapunov": lyapunov})


def equilibrium_state(
    sft: SubshiftOfFiniteType,
    phi: Potential,
    psi: Optional[Potential] = None,
    holes: Iterable[Word] = (),
) -> EquilibriumState:
    """
    Equilibrium state of phi, restricted to the survivors of holes.

    The state is the Markov chain on transfer-graph states stepping from q
    to q' with probability M[q, q'] r(q') / (lambda r(q)), started from its
    stationary law l * r.

    :param sft: the subshift.
    :param phi: potential.
    :param psi: optional potential integrated into the lyapunov field.
    :param holes: words the state must never see.
    :raises EmptySurvivorError: when no admissible loop survives.
    :return: the equilibrium state.
    """
    state = _equilibrium_from_graph(build_transfer_graph(sft, phi, holes), phi, psi)
    logger.debug("equilibrium state: pressure %.12g entropy %.12g", state.pressure, state.entropy)
    return state


def gibbs_constant(
    sft: SubshiftOfFiniteType,
    phi: Potential,
    depth: int = 10,
    state: Optional[EquilibriumState] = None,
) -> float:
    """
    Smallest c0 with 1/c0 <= mu(Z) exp(kP - phi_k(Z)) <= c0 on cylinders.

    Cylinders of length m = k + level - 1 fix phi_k, every length from level
    to depth is scanned.

    :return: the constant, at least 1.
    """
    state = state or equilibrium_state(sft, phi)
    lowest, highest = math.inf, -math.inf
    for length in range(phi.level, depth + 1):
        terms = length - phi.level + 1
        for word, mass in state.iter_cylinders(length):
            birkhoff = sum(phi.value(word[i : i + phi.level]) for i in range(terms))
            ratio = math.log(mass) + terms * state.pressure - birkhoff
            lowest = min(lowest, ratio)
            highest = max(highest, ratio)
    return math.exp(max(highest, -lowest, 0.0))


def normalize(sft: SubshiftOfFiniteType, phi: Potential) -> Potential:
    """
    Cohomologous potential with zero pressure and L1 = 1.

    Values live on words q a, q a state of the transfer graph; they equal
    phi - P + log r(q a) - log r(q), so the weights leaving each state sum to 1.
    """
    graph = build_transfer_graph(sft, phi)
    value, _, right = dominant_eigen(graph)
    values = {}
    for source, letter, target in graph.edges():
        if right[source] > 0 and right[target] > 0:
            values[graph.states[source] + (letter,)] = (
                math.log(graph.weight[source, letter])
                - math.log(value)
                + math.log(right[target])
                - math.log(right[source])
            )
    return Potential(level=len(graph.states[0]) + 1, values=values)


def spectral_gap(sft: SubshiftOfFiniteType, phi: Potential) -> float:
    """:return: |lambda_2| / lambda_1 of the transfer matrix."""
    matrix = transfer_matrix(build_transfer_graph(sft, phi)).toarray()
    moduli = np.sort(np.abs(np.linalg.eigvals(matrix)))[::-1]
    if moduli.size < 2:
        return 0.0
    return float(moduli[1] / moduli[0])


def hole_eigenvalue_schedule(
    sft: SubshiftOfFiniteType,
    phi: Potential,
    hole_family: Sequence[Tuple[int, Sequence[Word]]],
) -> List[Tuple[int, float]]:
    """
    Leading eigenvalue of the normalized operator on each hole complement.

    :param hole_family: (n, H_n) pairs.
    :return: (n, exp(P_n - P)) rows; values increase to 1 as holes shrink.
    """
    full = pressure(sft, phi)
    return [
        (n, math.exp(pressure_with_holes(sft, phi, holes) - full))
        for n, holes in hole_family
    ]


def long_return_mass(state: EquilibriumState, sft: SubshiftOfFiniteType, cylinder: Word, n: int) -> float:
    """:return: mass of {w in A: t(w) >= n}."""
    if n <= 1:
        return state.mass(cylinder)
    return state.measure_of(long_return_words(sft, cylinder, n))


def hole_measure_decay(
    sft: SubshiftOfFiniteType,
    phi: Potential,
    cylinder: Word,
    ns: Iterable[int],
    state: Optional[EquilibriumState] = None,
) -> HoleDecay:
    """
    Masses of H_n = {w in A: t(w) >= n} with a log-linear decay fit.

    :return: rows (n, mass) and the fitted slope of log mass against n.
    """
    state = state or equilibrium_state(sft, phi)
    rows = tuple((n, long_return_mass(state, sft, cylinder, n)) for n in ns)
    positive = [(n, mass) for n, mass in rows if mass > 0]
    if len(positive) >= 2:
        fit = stats.linregress([n for n, _ in positive], [math.log(mass) for _, mass in positive])
        slope, intercept = float(fit.slope), float(fit.intercept)
    else:
        slope, intercept = -math.inf, -math.inf
    return HoleDecay(rows=rows, log_rate=slope, intercept=intercept)


def kac_check(
    sft: SubshiftOfFiniteType,
    phi: Potential,
    cylinder: Word,
    t_max: int = 40,
    state: Optional[EquilibriumState] = None,
) -> KacReport:
    """
    Mean induced return time against the mass of a cylinder.

    Return words with t < t_max are summed exactly; the rest is charged at
    t_max, so the mean is a lower estimate off by the reported tail mass.

    :raises ZeroMassCylinderError: when the cylinder has no mass.
    """
    state = state or equilibrium_state(sft, phi)
    cylinder_mass = state.mass(cylinder)
    if cylinder_mass < _ZERO_MASS:
        raise ZeroMassCylinderError(f"Cylinder {cylinder} has mass {cylinder_mass}.")
    try:
        entries = induced_alphabet(sft, cylinder, t_max).entries
    except EmptyAlphabetError:
        entries = ()
    mean = 0.0
    for entry in entries:
        mean += entry.return_time * state.mass(entry.return_word.concat(cylinder))
    tail = long_return_mass(state, sft, cylinder, t_max)
    mean = (mean + t_max * tail) / cylinder_mass
    return KacReport(
        cylinder_mass=cylinder_mass,
        mean_return_time=mean,
        product=cylinder_mass * mean,
        tail_mass=tail / cylinder_mass,
        t_max=t_max,
    )
