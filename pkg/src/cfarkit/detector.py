"""Sliding-window detection geometry and the generic adaptive threshold test.

A detector examines one cell under test (CUT) at a time.  The ``N``
reference cells surrounding it, the clutter range profile (CRP), are
split into two equal banks of ``N/2`` cells, separated from the CUT by
guard cells on each side::

    ... C1 .. Cm | G .. G | CUT | G .. G | Cm+1 .. CN ...
       lagging bank        guards          leading bank

The CRP is compressed to a single clutter level ``g`` by a scale-invariant
statistic (sum, order statistic, geometric mean, or minimum), and a target
is declared when the CUT strictly exceeds ``tau * g``.  Scale invariance of
the statistic is what makes the false-alarm rate independent of the
unknown clutter power (the CFAR property).
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

__all__ = [
    "Decision",
    "Sum",
    "OrderStatistic",
    "GeometricMean",
    "Minimum",
    "StatKind",
    "DetectorSpec",
    "Window",
    "clutter_statistic",
    "decide",
    "slide",
    "window_at",
]


class Decision(IntEnum):
    """Outcome of the threshold test for one range cell."""

    UNTESTED = -1  # cell too close to a profile edge for a full window
    H0 = 0         # clutter only
    H1 = 1         # target declared


@dataclass(frozen=True)
class Sum:
    """Sum of the CRP (cell-averaging detector, up to the constant 1/N)."""


@dataclass(frozen=True)
class OrderStatistic:
    """k-th smallest CRP value, 1-based (order-statistic detector)."""

    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"order-statistic index must be >= 1, got {self.k}")


@dataclass(frozen=True)
class GeometricMean:
    """Geometric mean of the CRP."""


@dataclass(frozen=True)
class Minimum:
    """Smallest CRP value (the k=1 order statistic)."""


StatKind = Sum | OrderStatistic | GeometricMean | Minimum

_STAT_CODES: dict[type, int] = {Sum: 1, OrderStatistic: 2, GeometricMean: 3, Minimum: 4}


@dataclass(frozen=True)
class DetectorSpec:
    """Complete description of one sliding-window detector.

    Attributes
    ----------
    stat : StatKind
        Clutter-statistic used to compress the CRP.
    window_length : int
        Number of CRP cells ``N``; even, >= 2, split evenly per side.
    threshold_multiplier : float
        Scale factor ``tau`` applied to the clutter statistic.
    guard_cells : int
        Total guard cells (split evenly per side); even, >= 0.
    """

    stat: StatKind
    window_length: int
    threshold_multiplier: float
    guard_cells: int = 8

    def __post_init__(self) -> None:
        n = self.window_length
        if n < 2 or n % 2 != 0:
            raise ValueError(f"window length must be an even integer >= 2, got {n}")
        if self.guard_cells < 0 or self.guard_cells % 2 != 0:
            raise ValueError(f"guard cell count must be even and >= 0, got {self.guard_cells}")
        tau = self.threshold_multiplier
        if not (math.isfinite(tau) and tau >= 0):
            raise ValueError(f"threshold multiplier must be finite and >= 0, got {tau!r}")
        if isinstance(self.stat, OrderStatistic) and self.stat.k > n:
            raise ValueError(
                f"order-statistic index {self.stat.k} exceeds window length {n}"
            )

    @property
    def half_window(self) -> int:
        return self.window_length // 2

    @property
    def guard_per_side(self) -> int:
        return self.guard_cells // 2

    @property
    def reach(self) -> int:
        """Cells consumed on each side of the CUT (half bank + guards)."""
        return self.half_window + self.guard_per_side

    def stream_key(self) -> tuple[int, ...]:
        """Stable integer fingerprint for substream derivation."""
        k = self.stat.k if isinstance(self.stat, OrderStatistic) else 0
        (tau_bits,) = struct.unpack("<Q", struct.pack("<d", self.threshold_multiplier))
        return (
            _STAT_CODES[type(self.stat)],
            k,
            self.window_length,
            self.guard_cells,
            tau_bits,
        )


@dataclass(frozen=True)
class Window:
    """One sliding-window snapshot: CUT plus the two CRP banks.

    Guard cells are excluded; ``lagging`` and ``leading`` each hold
    ``N/2`` values and together form the CRP.
    """

    cut: float
    lagging: np.ndarray
    leading: np.ndarray

    def __post_init__(self) -> None:
        lag = np.asarray(self.lagging, dtype=float)
        lead = np.asarray(self.leading, dtype=float)
        object.__setattr__(self, "lagging", lag)
        object.__setattr__(self, "leading", lead)
        if lag.shape != lead.shape or lag.ndim != 1:
            raise ValueError("lagging and leading banks must be 1-D and equal length")
        if self.cut < 0 or np.any(lag < 0) or np.any(lead < 0):
            raise ValueError("window values must be nonnegative")

    def crp(self) -> np.ndarray:
        return np.concatenate([self.lagging, self.leading])


def clutter_statistic(stat: StatKind, crp: np.ndarray) -> float:
    """Compress a CRP to one clutter-level measurement ``g``.

    The sum is accumulated as two half-bank partial sums and combined,
    mirroring the two-stage compression of the window hardware.  A CRP
    containing a zero sends the geometric mean to its limit value 0.
    """
    values = np.asarray(crp, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("CRP must be a nonempty 1-D array")
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise ValueError("CRP values must be finite and nonnegative")
    if isinstance(stat, Sum):
        half = values.size // 2
        return float(values[:half].sum() + values[half:].sum())
    if isinstance(stat, OrderStatistic):
        if stat.k > values.size:
            raise ValueError(
                f"order-statistic index {stat.k} exceeds CRP length {values.size}"
            )
        return float(np.partition(values, stat.k - 1)[stat.k - 1])
    if isinstance(stat, GeometricMean):
        if np.any(values == 0.0):
            return 0.0
        return float(np.exp(np.mean(np.log(values))))
    if isinstance(stat, Minimum):
        return float(values.min())
    raise TypeError(f"unknown statistic kind: {stat!r}")


def decide(z0: float, g: float, tau: float) -> Decision:
    """Threshold test: declare a target iff ``z0 > tau * g``.

    Ties resolve to H0; under continuous clutter models they occur with
    probability zero, so the convention only pins down degenerate inputs.
    """
    for name, value in (("z0", z0), ("g", g), ("tau", tau)):
        if not (math.isfinite(value) and value >= 0):
            raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
    return Decision.H1 if z0 > tau * g else Decision.H0


def window_at(profile: np.ndarray, index: int, spec: DetectorSpec) -> Window:
    """Extract the window centred on ``profile[index]``.

    The cell must have ``spec.reach`` cells on both sides.
    """
    profile = np.asarray(profile, dtype=float)
    reach = spec.reach
    gs = spec.guard_per_side
    if index < reach or index > profile.size - 1 - reach:
        raise ValueError(f"cell {index} lacks a complete window on both sides")
    lagging = profile[index - reach : index - gs]
    leading = profile[index + gs + 1 : index + reach + 1]
    return Window(cut=float(profile[index]), lagging=lagging, leading=leading)


def slide(profile: np.ndarray, spec: DetectorSpec) -> np.ndarray:
    """Run the detector over a whole range profile.

    Returns an int8 array of :class:`Decision` values, one per cell.
    Cells too close to either edge for a complete window are marked
    ``Decision.UNTESTED``; partial windows would change the false-alarm
    rate, so they are never evaluated.
    """
    profile = np.asarray(profile, dtype=float)
    min_len = spec.window_length + spec.guard_cells + 1
    if profile.ndim != 1 or profile.size < min_len:
        raise ValueError(
            f"profile must be 1-D with at least {min_len} cells, got shape {profile.shape}"
        )
    out = np.full(profile.size, Decision.UNTESTED, dtype=np.int8)
    reach = spec.reach
    for i in range(reach, profile.size - reach):
        window = window_at(profile, i, spec)
        g = clutter_statistic(spec.stat, window.crp())
        out[i] = decide(window.cut, g, spec.threshold_multiplier)
    return out
