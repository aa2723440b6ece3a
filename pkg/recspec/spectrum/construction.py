import logging
import math
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from recspec.geometry.coding import birkhoff_sum, decode, orbit, orbit_from_word
from recspec.geometry.recurrence import radius_grid, return_times
from recspec.geometry.schemas import MarkovExpandingMap
from recspec.insertion.construction import (
    insert,
    largest_executable_index,
    required_source_length,
)
from recspec.insertion.ell import achieved_rates, fit_ell_sequence
from recspec.insertion.exceptions import HorizonTooShortError, InfeasibleTargetError
from recspec.insertion.schemas import EllSequence, InsertionSpec
from recspec.settings import settings
from recspec.spectrum.schemas import (
    GEOMETRIC,
    SYMBOLIC,
    ConstructionResult,
    PerturbationReport,
    RecurrenceEstimate,
    SourceConfig,
)
from recspec.spectrum.source import build_source, sample_source_point, source_birkhoff
from recspec.symbolic.schemas import Word
from recspec.symbolic.words import repetition_time

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 0.5
_FLOAT_ORBIT = 100_000


def tail_estimate(
    samples: Sequence[Tuple[float, float]],
    route: str,
    window: float = DEFAULT_WINDOW,
    slope: Optional[float] = None,
    censored: Sequence[float] = (),
    start: Optional[int] = None,
) -> RecurrenceEstimate:
    """
    Inf and sup of the ratios over the last window fraction of the samples.

    Samples are ordered from coarse to fine scales.

    :param start: first sample of the window; it overrides the window
        fraction when the window has to reach back to an earlier scale.
    """
    if not 0 < window <= 1:
        raise ValueError("window must lie in (0, 1]")
    if not samples:
        raise HorizonTooShortError("No scale produced a return inside the horizon.")
    if start is None:
        start = min(int(len(samples) * (1 - window)), len(samples) - 1)
        policy = f"inf/sup over the last {window:g} of {len(samples)} scales"
    else:
        if not 0 <= start < len(samples):
            raise ValueError(f"window start {start} outside 0..{len(samples) - 1}")
        window = (len(samples) - start) / len(samples)
        policy = f"inf/sup from scale {start} (last peak) over {len(samples)} scales"
    tail = [ratio for _, ratio in samples[start:]]
    return RecurrenceEstimate(
        route=route,
        samples=tuple(samples),
        lower=min(tail),
        upper=max(tail),
        window=window,
        policy=policy,
        slope=slope,
        censored=tuple(censored),
    )


def _log_slope(scales: List[float], times: List[int]) -> Optional[float]:
    if len(scales) < 3 or len(set(scales)) < 2:
        return None
    return float(stats.linregress(scales, np.log(times)).slope)


def estimate_recurrence_rate(
    fmap: MarkovExpandingMap,
    target: Union[float, Word],
    route: str = GEOMETRIC,
    scales: Optional[Iterable[float]] = None,
    window: float = DEFAULT_WINDOW,
    n_max: Optional[int] = None,
) -> RecurrenceEstimate:
    """
    Recurrence-rate estimate of a point or of the point coded by a word.

    The geometric route samples log(tau_r) / (-log r) on radii (default
    2^-5 .. 2^-16) and fits the slope of log tau_r against -log r. The
    symbolic route samples log(R_h) / S_h log|Df| on block lengths h and
    needs a word.
    """
    if route == SYMBOLIC:
        if not isinstance(target, Word):
            raise ValueError("the symbolic route needs a coding word")
        lengths = list(scales) if scales is not None else _default_lengths(len(target))
        samples, censored, logs, hs = [], [], [], []
        for h in lengths:
            h = int(h)
            found = repetition_time(target, h) if h < len(target) else None
            if found is None:
                censored.append(float(h))
                continue
            weight = birkhoff_sum(fmap, target, h)
            samples.append((float(h), math.log(found) / weight))
            logs.append(weight)
            hs.append(found)
        return tail_estimate(samples, SYMBOLIC, window, _log_slope(logs, hs), censored)
    radii = np.asarray(list(scales) if scales is not None else radius_grid(5, 16), dtype=float)
    if isinstance(target, Word):
        points = orbit_from_word(fmap, target)
    else:
        points = orbit(fmap, target, (n_max or _FLOAT_ORBIT) + 1)
    taus = return_times(points, radii)
    samples, censored, depths, found = [], [], [], []
    for radius, tau in zip(radii, taus):
        if tau is None:
            censored.append(float(radius))
            continue
        samples.append((float(radius), math.log(tau) / -math.log(radius)))
        depths.append(-math.log(radius))
        found.append(tau)
    return tail_estimate(samples, GEOMETRIC, window, _log_slope(depths, found), censored)


def _default_lengths(size: int) -> List[int]:
    lengths = []
    h = 2
    while h < min(size, 64) and 2 ** h < size:
        lengths.append(h)
        h += 1
    return lengths


def symbolic_rate_profile(word: Word, hs: Iterable[int]) -> List[Tuple[int, float]]:
    """:return: (h, log(R_h) / h) for block lengths with a repetition inside the word."""
    profile = []
    for h in hs:
        found = repetition_time(word, h) if 0 < h < len(word) else None
        if found is not None:
            profile.append((h, math.log(found) / h))
    return profile


def _scaled_target(rate: float, scale: float) -> float:
    return rate if rate in (0.0, math.inf) else rate * scale


def _cube_root_floor(value: int) -> int:
    root = int(round(value ** (1 / 3)))
    while root ** 3 > value:
        root -= 1
    while (root + 1) ** 3 <= value:
        root += 1
    return root


def _prefix_weights(source: SourceConfig, letters: np.ndarray, count: int) -> np.ndarray:
    """S_h psi at h = S_k t + |A| on the word marker + letters, for k = 0 .. count."""
    head = np.concatenate(([source.marker], letters[:count])).astype(np.int64)
    base = source.alphabet.flatten(head).concat(source.cylinder)
    sums = np.concatenate(([0], np.cumsum(source.alphabet.return_times[head[:count]])))
    return np.array([source_birkhoff(source, base, int(total) + len(source.cylinder)) for total in sums])


def oscillation_ell(
    source: SourceConfig,
    letters: np.ndarray,
    alpha: float,
    beta: float,
    horizon: int,
    n0: int = 2,
) -> EllSequence:
    """
    One peak and one trough of the measured rate, calibrated on a source sample.

    At stage k the base-level rate is log(S_{l_k} t) / S_h psi with
    h = S_k t + |A|; both sums are read off the word marker + letters, whose
    first l_n0 letters the insertion map leaves in place. l_n0 is raised past
    every stage that fits the horizon. The peak p is the latest stage whose
    smallest l_p reaching the rate beta still leaves room for a trough: after
    p the sequence grows by the minimum until the rate falls to alpha at
    K = q. A zero alpha uses the trough min(beta, 1) / 2 and an infinite beta
    the peak alpha + 1.

    :param letters: induced source letters, at least horizon - 1 of them.
    :param horizon: induced letters of the output.
    :raises HorizonTooShortError: when no peak followed by a trough fits.
    :return: sequence with peaks (p,) and troughs (q,).
    """
    peak_rate = alpha + 1.0 if math.isinf(beta) else beta
    trough_rate = alpha if alpha > 0 else min(peak_rate, 1.0) / 2
    if len(letters) < horizon - 1:
        raise HorizonTooShortError(f"Source has {len(letters)} letters, {horizon - 1} needed.")
    last = _cube_root_floor(horizon)
    head = np.concatenate(([source.marker], letters[: horizon - 1])).astype(np.int64)
    log_reach = np.log(np.cumsum(source.alphabet.return_times[head]))
    weights = _prefix_weights(source, letters, last)
    chain = [max(n0 ** 3, last + 1)]
    for k in range(n0 + 1, last + 1):
        chain.append(max(k ** 3, chain[-1] + 2 * (k - 1)))
    best = None
    for p in range(n0 + 1, last):
        reached = int(np.searchsorted(log_reach, peak_rate * weights[p])) + 1
        ell_p = max(reached, chain[p - n0])
        if ell_p + p + 1 > horizon:
            break
        values = chain[: p - n0] + [ell_p]
        for q in range(p + 1, last + 1):
            values.append(max(q ** 3, values[-1] + 2 * (q - 1)))
            if values[-1] + q + 1 > horizon:
                break
            if log_reach[values[-1] - 1] / weights[q] <= trough_rate:
                best = (p, q, tuple(values))
                break
    if best is None:
        raise HorizonTooShortError(
            f"Induced horizon {horizon} holds no peak at rate {peak_rate:g} followed by a trough at {trough_rate:g}.",
        )
    p, q, values = best
    logger.debug("oscillation l-sequence: peak %d, trough %d, l_K=%d", p, q, values[-1])
    return EllSequence(
        values=values,
        n0=n0,
        target_lower=alpha,
        target_upper=beta,
        peaks=(p,),
        troughs=(q,),
    )


def construct_E_point(
    fmap: MarkovExpandingMap,
    alpha: float,
    beta: float,
    n: int,
    horizon: int,
    seed: int,
    birkhoff_tolerance: float = 0.05,
    source: Optional[SourceConfig] = None,
    n0: int = 2,
    window: float = DEFAULT_WINDOW,
) -> ConstructionResult:
    """
    Point whose recurrence rates oscillate between alpha and beta.

    For alpha = beta an l-sequence with log-rate alpha times lambda_n * mean
    return drives the insertion map on a source sample of induced letters,
    and the estimate uses the last window fraction of the stages. For
    alpha < beta the sequence comes from oscillation_ell and the estimate
    window starts at its peak, so it spans one full peak-to-trough period.
    The result is flattened to base letters followed by A. Both repetition
    identities are checked at every executed stage k: R_k of the induced
    word is l_k, and R at the base length S_k t + |A| is S_{l_k} t.

    :param horizon: base letters, at most the configured horizon cap.
    :raises HorizonTooShortError: when the horizon cannot hold one full
        oscillation of the l-sequence.
    """
    if not 0 <= alpha <= beta:
        raise InfeasibleTargetError(f"Targets must satisfy 0 <= alpha <= beta, got {alpha}, {beta}.")
    if horizon > settings.horizon_cap:
        raise HorizonTooShortError(f"Horizon {horizon} exceeds the cap {settings.horizon_cap}.")
    source = source or build_source(fmap, n, birkhoff_tolerance)
    scale = source.lambda_n * source.mean_return
    lower_rate, upper_rate = _scaled_target(alpha, scale), _scaled_target(beta, scale)
    induced_horizon = int(horizon / source.mean_return)
    if induced_horizon < (n0 + 1) ** 3:
        raise HorizonTooShortError(f"Induced horizon {induced_horizon} holds no stage beyond {n0}.")
    if alpha < beta:
        sample = sample_source_point(source, induced_horizon, seed)
        ell = oscillation_ell(source, sample.letters.symbols, alpha, beta, induced_horizon, n0)
    else:
        try:
            ell = fit_ell_sequence(lower_rate, upper_rate, max_value=induced_horizon, n0=n0)
        except InfeasibleTargetError as error:
            raise HorizonTooShortError(f"Induced horizon {induced_horizon}: {error.detail}")
        last = largest_executable_index(ell, induced_horizon)
        if last is None or last <= n0:
            raise HorizonTooShortError(f"Induced horizon {induced_horizon} holds no stage beyond {n0}.")
        ell = ell.truncated(last)
        sample = sample_source_point(source, max(required_source_length(ell, induced_horizon), 1), seed)
    spec = InsertionSpec.default(source.inner_size)
    induced = insert(sample.letters, spec, ell, induced_horizon)
    cylinder = source.cylinder
    base = source.alphabet.flatten(induced.symbols).concat(cylinder)
    sums = np.concatenate(([0], np.cumsum(source.alphabet.return_times[induced.symbols])))
    induced_violations, base_violations, samples, sampled = [], [], [], []
    for k in ell.indices:
        if repetition_time(induced, k) != ell[k]:
            induced_violations.append(k)
        h = int(sums[k]) + len(cylinder)
        found = repetition_time(base, h)
        if found != int(sums[ell[k]]):
            base_violations.append(k)
        if found is not None:
            samples.append((float(h), math.log(found) / source_birkhoff(source, base, h)))
            sampled.append(k)
    if induced_violations or base_violations:
        logger.warning("repetition identity failed: induced %s base %s", induced_violations, base_violations)
    start = None
    if ell.peaks:
        start = next((position for position, k in enumerate(sampled) if k >= ell.peaks[-1]), None)
    left, right = decode(fmap, base[: fmap.decode_depth()])
    logger.info("constructed point for (%s, %s): K=%d, %d base letters", alpha, beta, ell.last_index, len(base))
    return ConstructionResult(
        alpha=alpha,
        beta=beta,
        scaled_targets=(lower_rate, upper_rate),
        word=base,
        induced=induced,
        point=(left + right) / 2,
        interval=(left, right),
        ell=ell,
        achieved_rates=achieved_rates(ell, ell.peaks[-1] if ell.peaks else None),
        marker_word=source.marker_word,
        checked=tuple(ell.indices),
        induced_violations=tuple(induced_violations),
        base_violations=tuple(base_violations),
        estimate=tail_estimate(samples, SYMBOLIC, window, start=start),
        source=source.summary(),
        source_letters=sample.letters,
    )


def perturbation_bound_check(result: ConstructionResult, source: SourceConfig) -> PerturbationReport:
    """
    Check |S_k t(g w) - S_k t(w)| <= k eps_k n, eps_k = (p+2)^2 / l_p for l_p <= k < l_{p+1}.

    Every k from l_n0 up to the shorter of the two induced words is checked.
    """
    times = source.alphabet.return_times
    inserted = np.concatenate(([0], np.cumsum(times[result.induced.symbols])))
    original = np.concatenate(([0], np.cumsum(times[result.source_letters.symbols])))
    ell = result.ell
    limit = min(inserted.size, original.size) - 1
    values = np.array([int(value) for value in ell.values], dtype=np.int64)
    ks = np.arange(int(values[0]), limit + 1)
    if not ks.size:
        return PerturbationReport(checked=0, violations=(), max_ratio=0.0)
    positions = np.searchsorted(values, ks, side="right") - 1
    p = positions + ell.n0
    eps = (p + 2.0) ** 2 / values[positions]
    bound = ks * eps * source.n
    drift = np.abs(inserted[ks] - original[ks])
    violations = tuple(int(k) for k in ks[drift > bound])
    return PerturbationReport(
        checked=int(ks.size),
        violations=violations,
        max_ratio=float((drift / bound).max()),
    )
