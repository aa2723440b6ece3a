"""Batch experiments: the almost-everywhere rate law, source ladders and (alpha, beta) grids."""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Sequence

import numpy as np
from scipy import stats

from recspec.exceptions import RecspecError
from recspec.geometry.potentials import log_derivative, potential_from_map
from recspec.geometry.recurrence import radius_grid
from recspec.geometry.schemas import MarkovExpandingMap
from recspec.services.generators import derive_seed, make_rng
from recspec.settings import settings
from recspec.spectrum.construction import construct_E_point, estimate_recurrence_rate
from recspec.spectrum.exceptions import SourceInfeasibleError
from recspec.spectrum.schemas import AeReport, AeRow, DimensionLadder, GridCell, LadderRow
from recspec.spectrum.source import achieved_dimension, build_source, sample_chain
from recspec.thermo.dimension import bowen_dimension
from recspec.thermo.pressure import equilibrium_state
from recspec.thermo.schemas import Potential

logger = logging.getLogger(__name__)


def ae_rate_experiment(
    fmap: MarkovExpandingMap,
    phi: Optional[Potential] = None,
    sample_count: int = 100,
    horizon: int = 1_000_000,
    seed: int = 0,
    radii: Optional[Sequence[float]] = None,
    threads: Optional[int] = None,
) -> AeReport:
    """
    Recurrence rates of points drawn from the equilibrium state of phi.

    Each point gets the fitted slope of log tau_r against -log r; the report
    gives the median and interquartile range of the slopes against
    h / lambda. The default potential gives the measure of maximal dimension.
    """
    sft = fmap.sft
    if phi is None:
        phi = potential_from_map(fmap, bowen_dimension(fmap), 1)
    state = equilibrium_state(sft, phi, psi=log_derivative(fmap, phi.level))
    target = state.entropy / state.lyapunov
    radii = radius_grid(5, 16) if radii is None else radii
    length = horizon + fmap.decode_depth() + 1

    def run(index: int) -> AeRow:
        task_seed = derive_seed(seed, index)
        word = sample_chain(state, length, make_rng(task_seed))
        estimate = estimate_recurrence_rate(fmap, word, scales=radii)
        return AeRow(
            index=index,
            seed=task_seed,
            slope=estimate.slope,
            lower=estimate.lower,
            upper=estimate.upper,
        )

    with ThreadPoolExecutor(max_workers=threads or settings.threads) as executor:
        rows = list(executor.map(run, range(sample_count)))
    slopes = np.array([row.slope for row in rows if row.slope is not None])
    if not slopes.size:
        slopes = np.array([np.nan])
    quartiles = np.percentile(slopes, [25, 50, 75])
    logger.info("a.e. experiment: median %.4f against %.4f", quartiles[1], target)
    return AeReport(
        rows=tuple(rows),
        median=float(quartiles[1]),
        iqr=float(quartiles[2] - quartiles[0]),
        target=target,
    )


def dimension_ladder(
    fmap: MarkovExpandingMap,
    n_schedule: Iterable[int],
    level: int = 1,
) -> DimensionLadder:
    """
    Pressure gap P(phi | Sigma_n) and dimension h / lambda_n along n.

    Infeasible n are kept as rows with a note. The gap rate is the slope of
    log(full dimension - dim) against n.
    """
    full = bowen_dimension(fmap, level)
    rows = []
    for n in n_schedule:
        try:
            source = build_source(fmap, n, level=level)
        except SourceInfeasibleError as error:
            rows.append(LadderRow(n=n, note=error.detail))
            continue
        rows.append(
            LadderRow(
                n=n,
                pressure=source.pressure,
                dimension=achieved_dimension(source),
                lambda_n=source.lambda_n,
                entropy=source.nu.entropy,
            ),
        )
    fitted = [(row.n, full - row.dimension) for row in rows if row.dimension is not None and full - row.dimension > 0]
    gap_rate = None
    if len(fitted) >= 2:
        gap_rate = float(stats.linregress([n for n, _ in fitted], [math.log(gap) for _, gap in fitted]).slope)
    return DimensionLadder(rows=tuple(rows), full_dimension=full, gap_rate=gap_rate)


def grid_experiment(
    fmap: MarkovExpandingMap,
    alphas: Sequence[float],
    betas: Sequence[float],
    n: int,
    horizon: int,
    seed: int = 0,
    threads: Optional[int] = None,
) -> List[GridCell]:
    """
    construct_E_point over every alpha <= beta of a grid.

    Cells get seeds derived from (seed, cell index); failures are recorded
    in the cell, rows come back in cell order.
    """
    source = build_source(fmap, n)
    cells = [(alpha, beta) for alpha in alphas for beta in betas if alpha <= beta]

    def run(index: int) -> GridCell:
        alpha, beta = cells[index]
        cell_seed = derive_seed(seed, index)
        try:
            result = construct_E_point(fmap, alpha, beta, n, horizon, cell_seed, source=source)
        except RecspecError as error:
            return GridCell(index=index, alpha=alpha, beta=beta, seed=cell_seed, error=error.code)
        return GridCell(
            index=index,
            alpha=alpha,
            beta=beta,
            seed=cell_seed,
            lower=result.estimate.lower,
            upper=result.estimate.upper,
            identity_holds=result.identity_holds,
            last_index=result.ell.last_index,
        )

    with ThreadPoolExecutor(max_workers=threads or settings.threads) as executor:
        return list(executor.map(run, range(len(cells))))
