import csv
import io
import logging
import math
from typing import Iterator, List, Optional, Tuple

import numpy as np

from recspec.insertion.exceptions import InfeasibleTargetError, InvalidEllSequenceError
from recspec.insertion.schemas import EllSequence

logger = logging.getLogger(__name__)

ASCEND = "ascend"
DESCEND = "descend"
PEAK = "peak"
TROUGH = "trough"

_ROUNDING_GUARD = 1e-9
_EXP_LIMIT = 700.0


def ceil_exp(x: float) -> int:
    """
    Smallest integer not below e^x.

    Values within a relative 1e-9 of an integer are rounded to it, so that
    e^{k log 2} gives 2^k. Beyond float range the next power of two is used.
    """
    if x <= 0:
        return 1
    if x > _EXP_LIMIT:
        return 1 << math.ceil(x / math.log(2))
    value = math.exp(x)
    nearest = round(value)
    if abs(value - nearest) <= _ROUNDING_GUARD * value:
        return int(nearest)
    return math.ceil(value)


def _check_targets(alpha_rate: float, beta_rate: float, n0: int) -> None:
    if n0 < 2:
        raise InvalidEllSequenceError("n0 must be at least 2.")
    if alpha_rate < 0 or math.isnan(alpha_rate) or math.isnan(beta_rate):
        raise InvalidEllSequenceError("alpha_rate must be a non-negative number.")
    if beta_rate < alpha_rate:
        raise InvalidEllSequenceError("beta_rate must not be below alpha_rate.")


def _flat_step(rate: float, k: int, ell: int) -> int:
    """Next value for alpha_rate == beta_rate."""
    grown = ell * ell if math.isinf(rate) else ceil_exp(rate * (k + 1))
    return max(grown, ell + 2 * k, (k + 1) ** 3)


def iter_ell(
    alpha_rate: float,
    beta_rate: float,
    n0: int = 2,
) -> Iterator[Tuple[int, int, Optional[str]]]:
    """
    Unbounded l-sequence whose log-rate oscillates between two targets.

    Growth blocks push log(l_k)/k up to beta_rate, stall blocks grow by the
    minimum that keeps l_{k+1} >= l_k + 2k and l_k >= k^3 until the rate
    falls to alpha_rate. A zero alpha_rate is approached through troughs at
    min(beta_rate, 1) / (j + 1) after the j-th peak. For an infinite
    beta_rate growth blocks square l_k and the j-th peak waits for the rate
    (alpha_rate + 1) * 2^j.

    :return: iterator of (k, l_k, event), event is "peak", "trough" or None.
    """
    _check_targets(alpha_rate, beta_rate, n0)
    k = n0
    if alpha_rate == beta_rate:
        ell = n0 ** 3 if math.isinf(alpha_rate) else max(ceil_exp(alpha_rate * n0), n0 ** 3)
        while True:
            yield k, ell, None
            ell = _flat_step(alpha_rate, k, ell)
            k += 1
    ell = n0 ** 3
    mode = ASCEND
    peaks = 0
    while True:
        rate = math.log(ell) / k
        event = None
        if mode == ASCEND:
            threshold = (alpha_rate + 1) * 2 ** peaks if math.isinf(beta_rate) else beta_rate
            if rate >= threshold * (1 - _ROUNDING_GUARD):
                event, mode = PEAK, DESCEND
                peaks += 1
        else:
            floor = alpha_rate if alpha_rate > 0 else min(beta_rate, 1.0) / (peaks + 1)
            if rate <= floor:
                event, mode = TROUGH, ASCEND
        yield k, ell, event
        if mode == ASCEND:
            grown = ell * ell if math.isinf(beta_rate) else ceil_exp(beta_rate * (k + 1))
        else:
            grown = 0
        ell = max(grown, ell + 2 * k, (k + 1) ** 3)
        k += 1


def _collect(
    steps: Iterator[Tuple[int, int, Optional[str]]],
    alpha_rate: float,
    beta_rate: float,
    n0: int,
    last_index: Optional[int] = None,
    max_value: Optional[int] = None,
) -> EllSequence:
    values: List[int] = []
    peaks: List[int] = []
    troughs: List[int] = []
    for k, ell, event in steps:
        if last_index is not None and k > last_index:
            break
        if max_value is not None and ell > max_value:
            break
        values.append(ell)
        if event == PEAK:
            peaks.append(k)
        elif event == TROUGH:
            troughs.append(k)
    if not values:
        raise InfeasibleTargetError(f"l_{n0} already exceeds {max_value}.")
    if alpha_rate < beta_rate:
        first_peak = peaks[0] if peaks else None
        if first_peak is None or not any(trough > first_peak for trough in troughs):
            raise InfeasibleTargetError(
                f"No full oscillation between {alpha_rate} and {beta_rate} "
                f"up to index {n0 + len(values) - 1}.",
            )
    return EllSequence(
        values=tuple(values),
        n0=n0,
        target_lower=alpha_rate,
        target_upper=beta_rate,
        peaks=tuple(peaks),
        troughs=tuple(troughs),
    )


def build_ell_sequence(
    alpha_rate: float,
    beta_rate: float,
    K: int,
    n0: int = 2,
) -> EllSequence:
    """
    Build l_n0 .. l_K with liminf/limsup of log(l_k)/k near the targets.

    :param alpha_rate: intended liminf, at least 0.
    :param beta_rate: intended limsup, possibly infinite.
    :param K: last index, above n0.
    :param n0: first index, at least 2.
    :raises InfeasibleTargetError: when no peak followed by a trough fits
        up to K for distinct targets.
    :return: the sequence.
    """
    if K <= n0:
        raise InfeasibleTargetError(f"K = {K} must exceed n0 = {n0}.")
    ell = _collect(iter_ell(alpha_rate, beta_rate, n0), alpha_rate, beta_rate, n0, last_index=K)
    logger.debug("built l-sequence for (%s, %s) up to K=%d", alpha_rate, beta_rate, K)
    return ell


def fit_ell_sequence(
    alpha_rate: float,
    beta_rate: float,
    max_value: int,
    n0: int = 2,
    last_index: Optional[int] = None,
) -> EllSequence:
    """
    Longest prefix of the l-sequence with every value at most max_value.

    :raises InfeasibleTargetError: as build_ell_sequence.
    """
    return _collect(
        iter_ell(alpha_rate, beta_rate, n0),
        alpha_rate,
        beta_rate,
        n0,
        last_index=last_index,
        max_value=max_value,
    )


def achieved_rates(ell: EllSequence, start: Optional[int] = None) -> Tuple[float, float]:
    """
    Smallest and largest log(l_k)/k over a tail window.

    :param ell: the sequence.
    :param start: first index of the window, defaults to the midpoint of n0..K.
    :return: (lower, upper).
    """
    if start is None:
        start = ell.n0 + (ell.last_index - ell.n0) // 2
    rates = ell.log_rates()[max(start - ell.n0, 0):]
    if not rates.size:
        raise InvalidEllSequenceError(f"Window starting at {start} is empty.")
    return float(rates.min()), float(rates.max())


def ell_to_csv(ell: EllSequence) -> str:
    """:return: CSV text with header k,ell."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("k", "ell"))
    writer.writerows(ell.to_rows())
    return buffer.getvalue()


def ell_from_csv(
    text: str,
    target_lower: float = 0.0,
    target_upper: float = math.inf,
) -> EllSequence:
    """
    Read a sequence written by ell_to_csv.

    :raises InvalidEllSequenceError: on gaps in k or broken growth conditions.
    """
    rows = [row for row in csv.reader(io.StringIO(text)) if row and row[0] != "k"]
    if not rows:
        raise InvalidEllSequenceError("No rows.")
    indices = [int(row[0]) for row in rows]
    if indices != list(range(indices[0], indices[0] + len(indices))):
        raise InvalidEllSequenceError("Indices must be consecutive.")
    try:
        return EllSequence(
            values=tuple(int(row[1]) for row in rows),
            n0=indices[0],
            target_lower=target_lower,
            target_upper=target_upper,
        )
    except ValueError as error:
        raise InvalidEllSequenceError(str(error))


def random_ell_sequence(rng: np.random.Generator, horizon: int, n0: int = 2) -> EllSequence:
    """
    Random admissible sequence whose last stage fits a horizon.

    Each step adds a random amount on top of max((k+1)^3, l_k + 2k); the
    sequence stops at the last k with l_k + k + 1 <= horizon.

    :raises InfeasibleTargetError: when not even two stages fit.
    """
    values = [n0 ** 3 + int(rng.integers(0, n0 ** 3 + 1))]
    k = n0
    while True:
        floor = max((k + 1) ** 3, values[-1] + 2 * k)
        candidate = floor + int(rng.integers(0, values[-1] + 1))
        if candidate + k + 2 > horizon:
            break
        values.append(candidate)
        k += 1
    if len(values) < 2 or values[-1] + k + 1 > horizon:
        raise InfeasibleTargetError(f"Horizon {horizon} holds fewer than two stages.")
    return EllSequence(
        values=tuple(values),
        n0=n0,
        target_lower=0.0,
        target_upper=math.inf,
    )
