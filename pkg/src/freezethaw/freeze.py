"""Freeze/thaw detection on entanglement time series.

A window of the series is *frozen* when its fluctuation is small against its
distance from the unentangled baseline K = 1,

    std(K) / |mean(K) - 1| <= eps,

and the sample-to-sample slope stays below ``delta`` everywhere inside it.
Frozen intervals are maximal unions of overlapping frozen windows.  The
right end of an interval that is followed by unfrozen samples is a thaw
onset; the thaw event itself is placed at the largest excursion from the
plateau inside the following unfrozen stretch.
"""
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import DomainError, PreconditionError

FREEZE_TIME = 2.0


@dataclass(frozen=True)
class FreezeCriteria:
    window: float = 2.0
    stability_ratio: float = 0.05
    derivative_tol: float = 0.02
    min_duration: float = 4.0

    def __post_init__(self):
        if not self.window > 0:
            raise DomainError("window must be positive")
        if not 0 < self.stability_ratio < 1:
            raise DomainError("stability_ratio must lie in (0, 1)")
        if not self.derivative_tol > 0:
            raise DomainError("derivative_tol must be positive")
        if self.min_duration < self.window:
            raise DomainError("min_duration must be at least one window")


class PredictedTimings(NamedTuple):
    tau_freeze: float
    tau_thaw: float
    period: float

    def zero_lattice(self, count):
        """tau_l = l (N+2) + 2 for l = 0..count-1, where the linearized c_e vanishes."""
        if math.isinf(self.period):
            return [self.tau_freeze]
        return [l * self.period + FREEZE_TIME for l in range(count)]


class FrozenInterval(NamedTuple):
    start: float
    end: float
    plateau_mean: float
    plateau_std: float


@dataclass
class FreezeReport:
    which: str
    n_sites_b: int | None
    frozen_intervals: list
    thaw_onsets: list
    thaw_events: list
    predicted: PredictedTimings
    deviations: dict
    grid_end: float
    criteria: FreezeCriteria = field(default_factory=FreezeCriteria)

    @property
    def first_freeze(self):
        return self.frozen_intervals[0].start if self.frozen_intervals else None

    @property
    def first_thaw(self):
        return self.thaw_events[0] if self.thaw_events else None

    @property
    def unbounded(self):
        """Last frozen interval reaches the end of the grid."""
        return bool(self.frozen_intervals) and math.isclose(
            self.frozen_intervals[-1].end, self.grid_end, abs_tol=1e-9
        )


def predicted_timings(n_sites_b):
    """(tau_freeze, tau_thaw, period) = (2, N+4, N+2); ``None`` means the infinite chain."""
    if n_sites_b is None or (isinstance(n_sites_b, float) and math.isinf(n_sites_b)):
        return PredictedTimings(FREEZE_TIME, math.inf, math.inf)
    if n_sites_b < 1:
        raise DomainError("n_sites_b must be >= 1")
    return PredictedTimings(FREEZE_TIME, float(n_sites_b + 4), float(n_sites_b + 2))


def _uniform_spacing(tau):
    if tau.shape[0] < 2:
        raise PreconditionError("need at least two samples")
    steps = np.diff(tau)
    h = float(np.mean(steps))
    if np.max(np.abs(steps - h)) > 1e-9 * max(1.0, abs(tau[-1])):
        raise PreconditionError("series must be sampled on a uniform grid")
    return h


def frozen_windows(tau, values, criteria):
    """Boolean mask over window start indices plus the window width in samples."""
    h = _uniform_spacing(tau)
    if h > criteria.window / 10 * (1 + 1e-9):
        raise PreconditionError(f"grid spacing {h} is coarser than window/10")
    width = int(round(criteria.window / h))
    if width >= tau.shape[0]:
        return np.zeros(0, dtype=bool), width
    mean, std, slope = kernels.window_stats(np.ascontiguousarray(values, dtype=np.float64), width, h)
    offset = np.abs(mean - 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        stable = std <= criteria.stability_ratio * offset
    return stable & (offset > 0) & (slope <= criteria.derivative_tol), width


def _merge(mask, width):
    """Index ranges [lo, hi] covered by overlapping frozen windows."""
    spans = []
    for i in np.flatnonzero(mask):
        if spans and i <= spans[-1][1]:
            spans[-1][1] = i + width
        else:
            spans.append([i, i + width])
    return spans


def _nearest_lattice(tau, period, offset):
    k = max(1, round((tau - offset) / period))
    return abs(tau - (k * period + offset))


def detect_frozen_intervals(series, which="K_B", criteria=None):
    """Scan ``series`` for frozen intervals and thaw events of K_A or K_B."""
    criteria = criteria or FreezeCriteria()
    tau = np.asarray(series.tau, dtype=np.float64)
    values = np.asarray(series.measure(which), dtype=np.float64)
    mask, width = frozen_windows(tau, values, criteria)
    spans = [s for s in _merge(mask, width) if tau[s[1]] - tau[s[0]] >= criteria.min_duration - 1e-9]

    intervals, onsets, events = [], [], []
    for n, (lo, hi) in enumerate(spans):
        seg = values[lo : hi + 1]
        intervals.append(FrozenInterval(float(tau[lo]), float(tau[hi]), float(seg.mean()), float(seg.std())))
        if hi < tau.shape[0] - 1:
            onsets.append(float(tau[hi]))
            stop = spans[n + 1][0] if n + 1 < len(spans) else tau.shape[0]
            gap = values[hi + 1 : stop]
            events.append(float(tau[hi + 1 + int(np.argmax(np.abs(gap - seg.mean())))]))

    predicted = predicted_timings(series.n_sites_b)
    deviations = {
        "first_freeze": None if not intervals else abs(intervals[0].start - predicted.tau_freeze),
        "thaw_vs_shifted_lattice": [],
        "thaw_vs_revival_lattice": [],
    }
    if math.isfinite(predicted.period):
        # k(N+2) + 2 (shifted zero lattice) and k(N+2) (revival multiples)
        deviations["thaw_vs_shifted_lattice"] = [_nearest_lattice(t, predicted.period, FREEZE_TIME) for t in events]
        deviations["thaw_vs_revival_lattice"] = [_nearest_lattice(t, predicted.period, 0.0) for t in events]

    return FreezeReport(
        which=which.upper(),
        n_sites_b=series.n_sites_b,
        frozen_intervals=intervals,
        thaw_onsets=onsets,
        thaw_events=events,
        predicted=predicted,
        deviations=deviations,
        grid_end=float(tau[-1]),
        criteria=criteria,
    )


def ce_zero_crossings(amps, threshold):
    """First tau of every run where |c_e| is below ``threshold``."""
    if not threshold > 0:
        raise DomainError("threshold must be positive")
    below = np.abs(amps.ce) < threshold
    starts = below & ~np.concatenate([[False], below[:-1]])
    return [float(t) for t in amps.tau[starts]]


def _autocorrelation(x):
    n = x.shape[0]
    size = 1 << (2 * n - 1).bit_length()
    spec = np.fft.rfft(x, size)
    ac = np.fft.irfft(spec * np.conj(spec), size)[:n]
    # unbiased: divide by the overlap length
    ac /= np.arange(n, 0, -1)
    return ac / ac[0]


def revival_period_estimate(amps, min_periods=3.0, peak_fraction=0.8):
    """Dominant recurrence period of |c_e| from its autocorrelation.

    Lags are searched from the first zero crossing of the autocorrelation to
    half the record; the first local maximum within ``peak_fraction`` of the
    highest one is refined by a parabola through its neighbours.
    """
    tau = np.asarray(amps.tau, dtype=np.float64)
    h = _uniform_spacing(tau)
    if amps.n_sites_b is not None:
        need = min_periods * (amps.n_sites_b + 2)
        if tau[-1] - tau[0] < need - 1e-9:
            raise PreconditionError(f"grid spans {tau[-1] - tau[0]:g}, need at least {need:g}")
    x = np.abs(amps.ce)
    ac = _autocorrelation(x - x.mean())
    top = x.shape[0] // 2
    crossing = np.flatnonzero(ac[:top] < 0)
    if crossing.size == 0:
        raise PreconditionError("autocorrelation never decorrelates; grid too short")
    lo = int(crossing[0])
    seg = ac[lo:top]
    peaks = np.flatnonzero((seg[1:-1] >= seg[:-2]) & (seg[1:-1] > seg[2:])) + 1
    if peaks.size == 0:
        raise PreconditionError("no recurrence peak within half the record")
    best = seg[peaks].max()
    j = lo + int(peaks[np.argmax(seg[peaks] >= peak_fraction * best)])
    a, b, c = ac[j - 1], ac[j], ac[j + 1]
    denom = a - 2.0 * b + c
    shift = 0.5 * (a - c) / denom if denom != 0 else 0.0
    return float((j + shift) * h)
