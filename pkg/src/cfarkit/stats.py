"""Clutter and target statistics: the exponential intensity model, dB
conversions, and reproducible random sampling.

Clutter intensity follows an exponential law with rate ``lambda``; a
Swerling I (Gaussian-in-amplitude) target embedded in that clutter turns
the cell-under-test intensity into an exponential with rate
``lambda / (1 + S)``, where ``S`` is the signal-to-clutter ratio on a
linear scale.  All power ratios use the 10*log10 dB convention.

Randomness is organised around :class:`RandomStream`, a value type naming
one substream of a counter-based generator (Philox).  Identical
``(seed, stream_id)`` pairs reproduce identical samples on every platform;
distinct stream ids are statistically independent, so simulation code can
hand substreams to parallel workers without coordinating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ClutterModel",
    "TargetContext",
    "RandomStream",
    "exp_cdf",
    "unit_exponential",
    "sample_exponential",
    "db_to_linear",
    "linear_to_db",
    "target_rate",
    "boosted_rate",
]

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    """One SplitMix64 avalanche round (Steele, Lea & Flood mixing constants)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def _mix_key(*parts: int) -> int:
    """Hash an integer tuple into a 64-bit substream id (order sensitive)."""
    h = 0xCBF29CE484222325
    for p in parts:
        h = _splitmix64(h ^ (p & _MASK64))
    return h


@dataclass(frozen=True)
class ClutterModel:
    """Exponentially distributed clutter intensity.

    Attributes
    ----------
    rate : float
        Exponential rate parameter (inverse intensity), > 0.  Mean
        intensity is ``1/rate``; clutter power, measured as the mean
        square of the intensity, is ``2/rate**2``.
    """

    rate: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise ValueError(f"clutter rate must be finite and > 0, got {self.rate!r}")

    @property
    def mean_intensity(self) -> float:
        return 1.0 / self.rate

    @property
    def mean_square(self) -> float:
        return 2.0 / (self.rate * self.rate)


@dataclass(frozen=True)
class TargetContext:
    """A Swerling I target described by its linear signal-to-clutter ratio."""

    scr_linear: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.scr_linear) and self.scr_linear >= 0):
            raise ValueError(f"SCR must be finite and >= 0, got {self.scr_linear!r}")

    @classmethod
    def from_db(cls, scr_db: float) -> "TargetContext":
        return cls(db_to_linear(scr_db))


@dataclass(frozen=True)
class RandomStream:
    """Named substream of a counter-based generator.

    ``(seed, stream_id)`` fully determines the sample sequence.  Use
    :meth:`substream` to derive statistically independent child streams
    from integer keys; derivation is pure 64-bit arithmetic, so it does
    not depend on platform word size or hash randomisation.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        for name, value in (("seed", self.seed), ("stream_id", self.stream_id)):
            if not (0 <= int(value) < (1 << 64)):
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {value!r}")

    def substream(self, *key: int) -> "RandomStream":
        """Child stream keyed by one or more integers (order matters)."""
        return RandomStream(self.seed, _mix_key(self.stream_id, *key))

    def generator(self) -> np.random.Generator:
        """Fresh Philox generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(ss))


def exp_cdf(t: float, rate: float) -> float:
    """Exponential distribution function ``1 - exp(-rate*t)``.

    Raises
    ------
    ValueError
        If ``t < 0`` or ``rate <= 0``.
    """
    if not (math.isfinite(t) and t >= 0):
        raise ValueError(f"t must be finite and >= 0, got {t!r}")
    if not (math.isfinite(rate) and rate > 0):
        raise ValueError(f"rate must be finite and > 0, got {rate!r}")
    return -math.expm1(-rate * t)


def unit_exponential(gen: np.random.Generator, shape: int | tuple[int, ...]) -> np.ndarray:
    """Unit-rate exponentials by the inverse-CDF transform ``-log1p(-U)``.

    One uniform variate is consumed per sample, in order, so the mapping
    from stream position to sample is branch-free and reproducible.
    """
    u = gen.random(shape)
    np.negative(u, out=u)
    np.log1p(u, out=u)
    np.negative(u, out=u)
    return u


def sample_exponential(model: ClutterModel, n: int, stream: RandomStream) -> np.ndarray:
    """Draw ``n`` iid exponential intensities with parameter ``model.rate``."""
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n!r}")
    return unit_exponential(stream.generator(), n) / model.rate


def db_to_linear(x: float) -> float:
    """Power ratio for ``x`` decibels: ``10**(x/10)``."""
    return 10.0 ** (x / 10.0)


def linear_to_db(x: float) -> float:
    """Decibel value of a positive linear power ratio: ``10*log10(x)``."""
    if not (math.isfinite(x) and x > 0):
        raise ValueError(f"linear ratio must be finite and > 0, got {x!r}")
    return 10.0 * math.log10(x)


def target_rate(model: ClutterModel, target: TargetContext) -> float:
    """Exponential rate of the cell under test when a target is present.

    A Swerling I target at SCR ``S`` in clutter of rate ``lambda`` makes
    the cell intensity exponential with rate ``lambda / (1 + S)``.
    """
    return model.rate / (1.0 + target.scr_linear)


def boosted_rate(model: ClutterModel, boost_db: float) -> float:
    """Rate of clutter whose power is raised by ``boost_db`` decibels.

    A power increase of ``x`` dB corresponds to an exponential parameter
    of ``lambda * 10**(-x/10)``.  Only increases are meaningful here, so
    negative ``boost_db`` is rejected.
    """
    if not (math.isfinite(boost_db) and boost_db >= 0):
        raise ValueError(f"boost must be finite and >= 0 dB, got {boost_db!r}")
    return model.rate * 10.0 ** (-boost_db / 10.0)
