"""Reproducible Monte Carlo engine for detection and false-alarm estimation.

Trials are organised into fixed-size blocks of at most ``BLOCK_TRIALS``
trials.  Block ``b`` of an estimate draws every sample from the substream
``stream.substream(b)``, and the per-block success counts are combined by
exact integer addition, so results are identical for any worker count and
any scheduling order.  Within a block the draw order is: CRP matrix, CUT
vector, then interferer placement (when placement is random).

Interfering targets and boosted clutter are both realised by scaling:
an exponential of rate ``lambda`` multiplied by ``c > 0`` is exponential
of rate ``lambda/c``, so an interferer of linear INR ``I`` scales its cell
by ``1 + I`` and a clutter-power step of ``x`` dB scales affected cells by
``10**(x/10)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytic import SolverSettings, ca_threshold, os_threshold
from .detector import (
    Decision,
    DetectorSpec,
    GeometricMean,
    Minimum,
    OrderStatistic,
    StatKind,
    Sum,
    clutter_statistic,
    decide,
)
from .stats import (
    ClutterModel,
    RandomStream,
    TargetContext,
    db_to_linear,
    target_rate,
    unit_exponential,
)

__all__ = [
    "BLOCK_TRIALS",
    "FixedCells",
    "RandomUniform",
    "Placement",
    "InterferenceSpec",
    "PdEstimate",
    "RegulationSpec",
    "ExperimentSpec",
    "DetectorCurve",
    "run_trial",
    "estimate_pd",
    "calibrate_threshold_mc",
    "pfa_regulation_curve",
    "scr_sweep",
    "resolve_threshold",
]

BLOCK_TRIALS = 1 << 16


@dataclass(frozen=True)
class FixedCells:
    """Interferers occupy the given 0-based CRP cells."""

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("fixed interference cells must be distinct")
        if any(i < 0 for i in self.indices):
            raise ValueError("fixed interference cells must be nonnegative indices")


@dataclass(frozen=True)
class RandomUniform:
    """Interferers occupy cells drawn uniformly (without replacement) per trial."""


Placement = FixedCells | RandomUniform


@dataclass(frozen=True)
class InterferenceSpec:
    """Independent Swerling I interferers injected into the CRP.

    Each interfering cell is exponential with rate ``lambda/(1+I)`` where
    ``I`` is the linear interference-to-clutter ratio.
    """

    count: int
    inr_db: float
    placement: Placement = RandomUniform()

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError(f"interferer count must be >= 0, got {self.count}")
        if not math.isfinite(self.inr_db):
            raise ValueError(f"INR must be finite, got {self.inr_db!r}")
        if isinstance(self.placement, FixedCells) and len(self.placement.indices) != self.count:
            raise ValueError(
                f"{self.count} interferers but {len(self.placement.indices)} fixed cells"
            )


@dataclass(frozen=True)
class PdEstimate:
    """Binomial proportion estimate from a batch of Monte Carlo trials."""

    successes: int
    runs: int

    def __post_init__(self) -> None:
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if not 0 <= self.successes <= self.runs:
            raise ValueError(f"successes {self.successes} outside [0, {self.runs}]")

    @property
    def p_hat(self) -> float:
        return self.successes / self.runs

    @property
    def standard_error(self) -> float:
        p = self.p_hat
        return math.sqrt(p * (1.0 - p) / self.runs)

    def ci(self, z: float = 1.96) -> tuple[float, float]:
        """Normal-approximation confidence interval, clipped to [0, 1]."""
        p, se = self.p_hat, self.standard_error
        return (max(0.0, p - z * se), min(1.0, p + z * se))


@dataclass(frozen=True)
class RegulationSpec:
    """Clutter-edge sweep configuration for false-alarm regulation."""

    design_pfa: float
    runs: int
    boost_db: float = 10.0
    affected_counts: tuple[int, ...] | None = None  # default: 0..N inclusive

    def __post_init__(self) -> None:
        if not (0.0 < self.design_pfa <= 1.0):
            raise ValueError(f"design Pfa must lie in (0, 1], got {self.design_pfa!r}")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if not (math.isfinite(self.boost_db) and self.boost_db >= 0):
            raise ValueError(f"boost must be finite and >= 0 dB, got {self.boost_db!r}")
        if self.affected_counts is not None and any(j < 0 for j in self.affected_counts):
            raise ValueError("affected cell counts must be >= 0")


@dataclass(frozen=True)
class ExperimentSpec:
    """Declarative description of one detection-probability sweep."""

    detectors: tuple[DetectorSpec, ...]
    clutter: ClutterModel
    scr_grid_db: tuple[float, ...]
    runs: int
    seed: int
    interference: InterferenceSpec | None = None

    def __post_init__(self) -> None:
        if len(self.scr_grid_db) == 0:
            raise ValueError("SCR grid must be nonempty")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")


@dataclass(frozen=True)
class DetectorCurve:
    """One detector's estimated Pd over an SCR grid."""

    detector: DetectorSpec
    scr_db: tuple[float, ...]
    estimates: tuple[PdEstimate, ...]

    def points(self) -> tuple[tuple[float, PdEstimate], ...]:
        return tuple(zip(self.scr_db, self.estimates))


# ---------------------------------------------------------------------------
# Vectorised trial blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _TrialBatch:
    """Picklable unit of work: one block of identically configured trials."""

    stream: RandomStream
    trials: int
    window: int
    rate: float
    stat: StatKind
    tau: float
    cut_scale: float
    cell_scales: tuple[tuple[int, float], ...]
    random_scale: tuple[int, float] | None


def _stat_rows(stat: StatKind, crp: np.ndarray) -> np.ndarray:
    """Clutter statistic of every row of a (trials, N) CRP matrix."""
    n = crp.shape[1]
    if isinstance(stat, Sum):
        half = n // 2
        return crp[:, :half].sum(axis=1) + crp[:, half:].sum(axis=1)
    if isinstance(stat, OrderStatistic):
        return np.partition(crp, stat.k - 1, axis=1)[:, stat.k - 1]
    if isinstance(stat, Minimum):
        return crp.min(axis=1)
    if isinstance(stat, GeometricMean):
        # exact zeros (probability 2**-53 per draw) push the mean log to -inf,
        # which maps to the limit value g = 0
        with np.errstate(divide="ignore"):
            return np.exp(np.log(crp).mean(axis=1))
    raise TypeError(f"unknown statistic kind: {stat!r}")


def _sample_block(batch: _TrialBatch) -> tuple[np.ndarray, np.ndarray]:
    """Draw the (CRP matrix, CUT vector) for one block, scalings applied."""
    gen = batch.stream.generator()
    crp = unit_exponential(gen, (batch.trials, batch.window))
    crp /= batch.rate
    cut = unit_exponential(gen, batch.trials)
    cut /= batch.rate
    if batch.cut_scale != 1.0:
        cut *= batch.cut_scale
    for index, scale in batch.cell_scales:
        crp[:, index] *= scale
    if batch.random_scale is not None:
        count, scale = batch.random_scale
        if count == 1:
            cols = gen.integers(0, batch.window, size=batch.trials)
            crp[np.arange(batch.trials), cols] *= scale
        elif count > 1:
            order = np.argpartition(gen.random((batch.trials, batch.window)), count - 1, axis=1)
            rows = np.arange(batch.trials)[:, None]
            crp[rows, order[:, :count]] *= scale
    return crp, cut


def _batch_successes(batch: _TrialBatch) -> int:
    crp, cut = _sample_block(batch)
    g = _stat_rows(batch.stat, crp)
    return int(np.count_nonzero(cut > batch.tau * g))


def _batch_ratios(batch: _TrialBatch) -> np.ndarray:
    crp, cut = _sample_block(batch)
    g = _stat_rows(batch.stat, crp)
    with np.errstate(divide="ignore"):
        return cut / g


def _split_blocks(stream: RandomStream, runs: int) -> list[tuple[RandomStream, int]]:
    blocks = []
    for b in range(0, (runs + BLOCK_TRIALS - 1) // BLOCK_TRIALS):
        trials = min(BLOCK_TRIALS, runs - b * BLOCK_TRIALS)
        blocks.append((stream.substream(b), trials))
    return blocks


def _map_blocks(fn, batches: list[_TrialBatch], workers: int) -> list:
    if workers <= 1 or len(batches) <= 1:
        return [fn(b) for b in batches]
    chunk = max(1, len(batches) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, batches, chunksize=chunk))


def _interference_scalings(
    interference: InterferenceSpec | None, window: int
) -> tuple[tuple[tuple[int, float], ...], tuple[int, float] | None]:
    """Translate an interference spec into fixed and random cell scalings."""
    if interference is None or interference.count == 0:
        return (), None
    if interference.count > window:
        raise ValueError(
            f"{interference.count} interferers exceed the {window}-cell CRP"
        )
    factor = 1.0 + db_to_linear(interference.inr_db)
    if isinstance(interference.placement, FixedCells):
        cells = interference.placement.indices
        if any(i >= window for i in cells):
            raise ValueError(f"fixed interference cells {cells} outside 0..{window - 1}")
        return tuple((i, factor) for i in cells), None
    return (), (interference.count, factor)


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def run_trial(
    spec: DetectorSpec,
    clutter: ClutterModel,
    target: TargetContext | None,
    interference: InterferenceSpec | None,
    stream: RandomStream,
) -> bool:
    """Execute a single detection trial; True means a target was declared.

    The CUT is drawn at the target rate under H1 (``target`` given) and at
    the clutter rate under H0 (``target`` is None).  Deterministic in
    ``stream``.
    """
    gen = stream.generator()
    n = spec.window_length
    crp = unit_exponential(gen, n) / clutter.rate
    cut_rate = target_rate(clutter, target) if target is not None else clutter.rate
    cut = float(unit_exponential(gen, 1)[0]) / cut_rate
    fixed, random_scale = _interference_scalings(interference, n)
    for index, scale in fixed:
        crp[index] *= scale
    if random_scale is not None:
        count, scale = random_scale
        cells = gen.choice(n, size=count, replace=False, shuffle=False)
        crp[cells] *= scale
    g = clutter_statistic(spec.stat, crp)
    return decide(cut, g, spec.threshold_multiplier) is Decision.H1


def estimate_pd(
    spec: DetectorSpec,
    clutter: ClutterModel,
    target: TargetContext | None,
    interference: InterferenceSpec | None,
    runs: int,
    seed: int | RandomStream,
    *,
    workers: int = 1,
) -> PdEstimate:
    """Estimate Pd (or Pfa, when ``target`` is None) over independent trials.

    Trials are partitioned into fixed blocks with one substream per block;
    the estimate is identical for any ``workers`` value and any execution
    order.
    """
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    stream = seed if isinstance(seed, RandomStream) else RandomStream(int(seed))
    fixed, random_scale = _interference_scalings(interference, spec.window_length)
    cut_scale = 1.0 + target.scr_linear if target is not None else 1.0
    batches = [
        _TrialBatch(
            stream=block_stream,
            trials=trials,
            window=spec.window_length,
            rate=clutter.rate,
            stat=spec.stat,
            tau=spec.threshold_multiplier,
            cut_scale=cut_scale,
            cell_scales=fixed,
            random_scale=random_scale,
        )
        for block_stream, trials in _split_blocks(stream, runs)
    ]
    successes = sum(_map_blocks(_batch_successes, batches, workers))
    return PdEstimate(successes=successes, runs=runs)


def calibrate_threshold_mc(
    stat: StatKind,
    window: int,
    design_pfa: float,
    runs: int,
    seed: int | RandomStream,
    *,
    workers: int = 1,
) -> float:
    """Empirical threshold multiplier: the (1 - Pfa) quantile of H0 ratios.

    Simulates ``runs`` homogeneous-clutter ratios ``Z0/g`` and reads the
    quantile off the sample.  Useful for statistics with no closed-form
    inversion (the geometric mean here).  Requires
    ``runs >= 100/design_pfa`` so the tail quantile is resolvable.
    """
    if not (0.0 < design_pfa <= 1.0):
        raise ValueError(f"design Pfa must lie in (0, 1], got {design_pfa!r}")
    minimum_runs = math.ceil(100.0 / design_pfa)
    if runs < minimum_runs:
        raise ValueError(
            f"calibration needs at least {minimum_runs} runs to resolve "
            f"Pfa={design_pfa:g}, got {runs}"
        )
    if design_pfa == 1.0:
        return 0.0
    stream = seed if isinstance(seed, RandomStream) else RandomStream(int(seed))
    batches = [
        _TrialBatch(
            stream=block_stream,
            trials=trials,
            window=window,
            rate=1.0,  # ratios are scale free, so the rate is immaterial
            stat=stat,
            tau=0.0,
            cut_scale=1.0,
            cell_scales=(),
            random_scale=None,
        )
        for block_stream, trials in _split_blocks(stream, runs)
    ]
    ratios = np.concatenate(_map_blocks(_batch_ratios, batches, workers))
    return float(np.quantile(ratios, 1.0 - design_pfa))


def pfa_regulation_curve(
    spec: DetectorSpec,
    clutter: ClutterModel,
    reg: RegulationSpec,
    seed: int | RandomStream,
    *,
    workers: int = 1,
) -> tuple[tuple[int, PdEstimate], ...]:
    """Empirical Pfa as a clutter edge sweeps across the window.

    For each affected count ``j`` the first ``j`` CRP cells (leading bank
    first, far cell inward) draw clutter boosted by ``reg.boost_db``; once
    the edge passes the window midpoint (``j > N/2``) the CUT is boosted
    as well.  ``spec.threshold_multiplier`` is expected to be resolved
    from ``reg.design_pfa`` under homogeneous clutter.
    """
    n = spec.window_length
    counts = reg.affected_counts if reg.affected_counts is not None else tuple(range(n + 1))
    if any(j > n for j in counts):
        raise ValueError(f"affected cell counts must be <= {n}")
    boost = db_to_linear(reg.boost_db)
    stream = seed if isinstance(seed, RandomStream) else RandomStream(int(seed))
    curve = []
    for j in counts:
        point_stream = stream.substream(*spec.stream_key(), j)
        batches = [
            _TrialBatch(
                stream=block_stream,
                trials=trials,
                window=n,
                rate=clutter.rate,
                stat=spec.stat,
                tau=spec.threshold_multiplier,
                cut_scale=boost if j > n // 2 else 1.0,
                cell_scales=tuple((i, boost) for i in range(j)),
                random_scale=None,
            )
            for block_stream, trials in _split_blocks(point_stream, reg.runs)
        ]
        successes = sum(_map_blocks(_batch_successes, batches, workers))
        curve.append((j, PdEstimate(successes=successes, runs=reg.runs)))
    return tuple(curve)


def scr_sweep(experiment: ExperimentSpec, *, workers: int = 1) -> tuple[DetectorCurve, ...]:
    """Estimate Pd curves for every detector over the experiment's SCR grid.

    Substreams are keyed by detector position, detector identity, and grid
    index, so rearranging or duplicating detectors never silently reuses
    samples: duplicated specs produce statistically equal (not bitwise
    equal) curves.
    """
    base = RandomStream(experiment.seed)
    curves = []
    for d_index, det in enumerate(experiment.detectors):
        estimates = []
        for g_index, scr_db in enumerate(experiment.scr_grid_db):
            stream = base.substream(d_index, *det.stream_key(), g_index)
            estimates.append(
                estimate_pd(
                    det,
                    experiment.clutter,
                    TargetContext.from_db(scr_db),
                    experiment.interference,
                    experiment.runs,
                    stream,
                    workers=workers,
                )
            )
        curves.append(
            DetectorCurve(
                detector=det,
                scr_db=tuple(experiment.scr_grid_db),
                estimates=tuple(estimates),
            )
        )
    return tuple(curves)


def resolve_threshold(
    stat: StatKind,
    window: int,
    design_pfa: float,
    *,
    settings: SolverSettings = SolverSettings(),
    calibration_runs: int | None = None,
    calibration_seed: int | RandomStream = 0,
    workers: int = 1,
) -> float:
    """Threshold multiplier achieving ``design_pfa`` for any statistic kind.

    Sum and order statistics use their closed forms (the minimum is the
    k=1 order statistic); the geometric mean has no closed form and falls
    back to Monte Carlo calibration.
    """
    if isinstance(stat, Sum):
        return ca_threshold(design_pfa, window)
    if isinstance(stat, OrderStatistic):
        return os_threshold(design_pfa, window, stat.k, settings)
    if isinstance(stat, Minimum):
        return os_threshold(design_pfa, window, 1, settings)
    if isinstance(stat, GeometricMean):
        runs = calibration_runs
        if runs is None:
            runs = max(1_000_000, math.ceil(100.0 / design_pfa))
        return calibrate_threshold_mc(
            stat, window, design_pfa, runs, calibration_seed, workers=workers
        )
    raise TypeError(f"unknown statistic kind: {stat!r}")
