"""Self-similar subsets of [0, 1] with known Hausdorff dimension.

Sets are represented extensionally at a finite generation as a union of
disjoint closed intervals.  The generation-k self-similar ("natural")
measure stands in for the non-constructive Frostman measures: for these
sets it obeys the same mass scaling bound with exponent equal to the
theoretical dimension, which is all downstream estimators rely on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, GenerationTooLarge, InvalidRatio

__all__ = [
    "FractalSet",
    "WeightedTimeSet",
    "full_interval",
    "middle_thirds_cantor",
    "generalized_cantor",
    "sample_natural_measure",
]

#: refuse constructions with more interval records than this
MAX_INTERVALS = 2**20


@dataclass(frozen=True)
class FractalSet:
    """Finite union of disjoint closed subintervals of [0, 1].

    kind is one of "full-interval", "middle-thirds", "generalized-cantor";
    ``params`` carries (m, r) for the generalized construction.
    """

    intervals: np.ndarray  # shape (m, 2), columns [left, right]
    generation: int
    theoretical_dim: float
    kind: str
    params: tuple = ()

    def __post_init__(self):
        iv = np.asarray(self.intervals, dtype=float)
        if iv.ndim != 2 or iv.shape[1] != 2:
            raise ConfigError("intervals must have shape (m, 2)")
        if np.any(iv[:, 0] > iv[:, 1]) or iv.min() < 0.0 or iv.max() > 1.0:
            raise ConfigError("intervals must be within [0, 1] with left <= right")
        if np.any(iv[1:, 0] <= iv[:-1, 1]):
            raise ConfigError("intervals must be sorted and pairwise disjoint")
        if not 0.0 <= self.theoretical_dim <= 1.0:
            raise ConfigError("theoretical_dim must lie in [0, 1]")
        object.__setattr__(self, "intervals", iv)

    def contains(self, t, tol=1e-12):
        """Boolean mask: which of the given times lie in the set (closed intervals)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        starts = self.intervals[:, 0]
        ends = self.intervals[:, 1]
        idx = np.clip(np.searchsorted(starts, t, side="right") - 1, 0, len(starts) - 1)
        return (t >= starts[idx] - tol) & (t <= ends[idx] + tol)

    def to_json(self):
        return {
            "kind": self.kind,
            "params": list(self.params),
            "generation": self.generation,
            "theoretical_dim": self.theoretical_dim,
            "intervals": self.intervals.tolist(),
        }

    def dumps(self):
        return json.dumps(self.to_json())


def full_interval():
    """The whole of [0, 1]; dimension 1."""
    return FractalSet(
        intervals=np.array([[0.0, 1.0]]),
        generation=0,
        theoretical_dim=1.0,
        kind="full-interval",
    )


def _cantor_intervals(m, r, k):
    iv = np.array([[0.0, 1.0]])
    for _ in range(k):
        length = iv[:, 1] - iv[:, 0]
        # m children of relative length r, equally spaced, flush with both ends
        step = (1.0 - m * r) / (m - 1) + r
        starts = (iv[:, 0, None] + np.arange(m) * step * length[:, None]).ravel()
        lengths = np.repeat(length, m) * r
        iv = np.column_stack([starts, starts + lengths])
    return iv


def generalized_cantor(m, r, k, max_intervals=MAX_INTERVALS):
    """Cantor-type set: m branches of ratio r per generation, dimension ln m / ln(1/r)."""
    if m < 2:
        raise ConfigError("m must be >= 2")
    if not 0.0 < r:
        raise ConfigError("r must be positive")
    if m * r >= 1.0:
        raise InvalidRatio(f"need m*r < 1 for disjoint children, got m*r = {m * r}")
    if k < 0:
        raise ConfigError("generation k must be >= 0")
    if m**k > max_intervals:
        raise GenerationTooLarge(
            f"{m}^{k} intervals exceed the cap of {max_intervals}"
        )
    return FractalSet(
        intervals=_cantor_intervals(m, r, k),
        generation=k,
        theoretical_dim=math.log(m) / math.log(1.0 / r),
        kind="generalized-cantor",
        params=(m, r),
    )


def middle_thirds_cantor(k, max_intervals=MAX_INTERVALS):
    """Classical middle-thirds construction at generation k; dimension ln 2 / ln 3."""
    if k < 0:
        raise ConfigError("generation k must be >= 0")
    if 2**k > max_intervals:
        raise GenerationTooLarge(f"2^{k} intervals exceed the cap of {max_intervals}")
    return FractalSet(
        intervals=_cantor_intervals(2, 1.0 / 3.0, k),
        generation=k,
        theoretical_dim=math.log(2.0) / math.log(3.0),
        kind="middle-thirds",
        params=(2, 1.0 / 3.0),
    )


def cantor_with_dimension(dim, k, m=2, max_intervals=MAX_INTERVALS):
    """Generalized Cantor set with prescribed dimension: r solves ln m / ln(1/r) = dim."""
    if not 0.0 < dim < 1.0:
        raise ConfigError("target dimension must lie in (0, 1)")
    r = m ** (-1.0 / dim)
    return generalized_cantor(m, r, k, max_intervals=max_intervals)


@dataclass(frozen=True)
class WeightedTimeSet:
    """Times in [0, 1] with non-negative weights summing to 1."""

    times: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if t.shape != w.shape or t.ndim != 1:
            raise ConfigError("times and weights must be 1-d arrays of equal length")
        if np.any(t < 0.0) or np.any(t > 1.0):
            raise ConfigError("times must lie in [0, 1]")
        if np.any(w < 0.0) or abs(w.sum() - 1.0) > 1e-12:
            raise ConfigError("weights must be non-negative and sum to 1")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.times.size

    @classmethod
    def uniform_grid(cls, n, include_endpoint=False):
        """Equal-weight times on a uniform grid of [0, 1]."""
        t = np.linspace(0.0, 1.0, n) if include_endpoint else np.arange(n) / n
        return cls(times=t, weights=np.full(n, 1.0 / n))


def sample_natural_measure(fset, n, seed=0):
    """Draw n points from the generation-k self-similar measure of ``fset``.

    Intervals at generation k carry equal mass; the draw is uniform within
    the chosen interval.  Weights are 1/n each.
    """
    if n < 1:
        raise ConfigError("n must be >= 1")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(2,))
    rng = np.random.Generator(np.random.Philox(ss))
    iv = fset.intervals
    idx = rng.integers(0, iv.shape[0], size=n)
    u = rng.random(n)
    times = iv[idx, 0] + u * (iv[idx, 1] - iv[idx, 0])
    return WeightedTimeSet(times=times, weights=np.full(n, 1.0 / n))
