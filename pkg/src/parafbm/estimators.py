"""Empirical dimension estimators: parabolic box counting, energy sums, kernel scaling.

Box counting uses grids anchored at 0 on the time axis and at the cloud's
componentwise minimum on the value axes; box dimension is used as the
computable proxy for the covering dimension it estimates.  The log-log
regression keeps the middle scales: the coarsest and finest octaves are
biased (finite extent, finite path resolution), and scales whose count
approaches the number of cloud points are resolution-limited and dropped.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateRange, GammaAtBoundary
from .fbm import validate_hurst

__all__ = [
    "GraphCloud",
    "BoxCountCurve",
    "DimensionEstimate",
    "parabolic_box_count",
    "box_count_curve",
    "estimate_parabolic_dimension",
    "energy_integral_mc",
    "kernel_expectation_mc",
    "dyadic_deltas",
]

#: above this many points energy sums switch to seeded pair subsampling
ENERGY_PAIR_CAP = 4096

#: default number of sampled pairs in the subsampling regime
ENERGY_DEFAULT_PAIRS = 10**6


@dataclass(frozen=True)
class GraphCloud:
    """Finite set of (time, value-vector) points, e.g. a sampled graph.

    ``source`` tags where the cloud came from ("function-graph", "fbm-graph",
    "drifted-fbm-graph"); ``h_context`` is the parabolic index the cloud is
    meant to be measured with.
    """

    times: np.ndarray
    values: np.ndarray
    source: str = "function-graph"
    h_context: float = 0.5

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if t.ndim != 1 or t.size == 0 or v.shape[0] != t.size:
            raise ConfigError("times (n,) and values (n, d) must be non-empty and aligned")
        if t.min() < 0.0 or t.max() > 1.0:
            raise ConfigError("cloud times must lie in [0, 1]")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @property
    def n(self):
        return self.times.size

    @property
    def d(self):
        return self.values.shape[1]

    @classmethod
    def from_path(cls, path, source="fbm-graph", h_context=None):
        """Graph cloud of a SamplePath; h_context defaults to its first Hurst index."""
        return cls(
            times=path.grid.times,
            values=path.values.T,
            source=source,
            h_context=path.hurst_components[0] if h_context is None else h_context,
        )

    def restrict(self, fset):
        """Sub-cloud of points whose times lie in the given FractalSet."""
        mask = fset.contains(self.times)
        if not mask.any():
            raise ConfigError("no cloud points fall inside the set")
        return GraphCloud(
            times=self.times[mask],
            values=self.values[mask],
            source=self.source,
            h_context=self.h_context,
        )


@dataclass(frozen=True)
class BoxCountCurve:
    """Occupied-box counts over a decreasing ladder of scales."""

    deltas: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.deltas, dtype=float)
        c = np.asarray(self.counts, dtype=np.int64)
        if d.shape != c.shape or d.ndim != 1 or d.size == 0:
            raise ConfigError("deltas and counts must be 1-d arrays of equal length")
        if np.any(np.diff(d) >= 0.0):
            raise ConfigError("deltas must be strictly decreasing")
        if np.any(c < 1):
            raise ConfigError("counts must be >= 1")
        object.__setattr__(self, "deltas", d)
        object.__setattr__(self, "counts", c)

    def to_csv(self, file):
        close = False
        if isinstance(file, (str, bytes)):
            file = open(file, "w", newline="")
            close = True
        try:
            w = csv.writer(file)
            w.writerow(["delta", "count"])
            for delta, count in zip(self.deltas, self.counts):
                w.writerow([repr(float(delta)), int(count)])
        finally:
            if close:
                file.close()

    def csv_string(self):
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


@dataclass(frozen=True)
class DimensionEstimate:
    """Fitted scaling exponent with regression diagnostics."""

    exponent: float
    intercept: float
    r_squared: float
    fit_range: tuple
    n_points_used: int

    def to_json(self):
        return {
            "exponent": self.exponent,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "fit_range": [self.fit_range[0], self.fit_range[1]],
            "n_points_used": self.n_points_used,
        }

    def dumps(self):
        return json.dumps(self.to_json())


def parabolic_box_count(cloud, delta, hurst, anchor_shift=0.0):
    """Number of occupied anchored boxes of time extent delta, value extent delta^H.

    The time grid is anchored at 0 (a point at t=1 belongs to the last box);
    value grids are anchored at the cloud minimum.  ``anchor_shift`` moves
    every anchor by that fraction of a cell, used to quantify anchor
    sensitivity.
    """
    hurst = validate_hurst(hurst)
    if not 0.0 < delta <= 1.0:
        raise ConfigError("delta must lie in (0, 1]")
    side = delta**hurst
    tshift = anchor_shift * delta
    vshift = anchor_shift * side
    ti = np.floor((cloud.times - tshift) / delta).astype(np.int64)
    if anchor_shift == 0.0:
        ti = np.minimum(ti, math.ceil(1.0 / delta) - 1)
    origin = cloud.values.min(axis=0)
    vi = np.floor((cloud.values - origin - vshift) / side).astype(np.int64)
    keys = np.column_stack([ti, vi])
    return int(np.unique(keys, axis=0).shape[0])


def dyadic_deltas(coarse_exp, fine_exp, per_octave=1):
    """Decreasing ladder 2^-coarse_exp .. 2^-fine_exp with per_octave scales per octave."""
    if fine_exp <= coarse_exp:
        raise ConfigError("need fine_exp > coarse_exp")
    k = np.arange(coarse_exp * per_octave, fine_exp * per_octave + 1) / per_octave
    return 2.0 ** (-k)


def box_count_curve(cloud, deltas, hurst, anchor_shift=0.0):
    """Box counts over a ladder of scales (sorted to decreasing order)."""
    deltas = np.sort(np.asarray(deltas, dtype=float))[::-1]
    counts = [parabolic_box_count(cloud, d, hurst, anchor_shift) for d in deltas]
    return BoxCountCurve(deltas=deltas, counts=np.asarray(counts))


def _fit_loglog(deltas, counts):
    x = np.log(1.0 / deltas)
    y = np.log(counts.astype(float))
    sxx = np.sum((x - x.mean()) ** 2)
    slope = float(np.sum((x - x.mean()) * (y - y.mean())) / sxx)
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    sst = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / sst if sst > 0 else 1.0
    return slope, intercept, r2


def estimate_parabolic_dimension(
    cloud,
    deltas,
    hurst,
    trim_octaves=1.0,
    max_count_fraction=1.0 / 3.0,
    min_points=3,
    anchor_shift=0.0,
):
    """Box-dimension estimate: least-squares slope of log N(delta) vs log(1/delta).

    Needs at least 4 scales spanning 2 octaves, with cloud resolution finer
    than the smallest retained scale.  By default one octave is dropped at
    each end of the ladder and scales whose count exceeds
    ``max_count_fraction`` of the cloud size are dropped as
    resolution-limited.  The raw slope is returned unclamped; the retained
    range is reported in ``fit_range``.
    """
    deltas = np.asarray(deltas, dtype=float)
    if deltas.size < 4:
        raise ConfigError("need at least 4 scales")
    if deltas.max() / deltas.min() < 4.0 - 1e-12:
        raise ConfigError("scales must span at least 2 octaves")
    curve = box_count_curve(cloud, deltas, hurst, anchor_shift)
    d, c = curve.deltas, curve.counts

    keep = np.ones(d.size, dtype=bool)
    if trim_octaves > 0:
        f = 2.0**trim_octaves
        keep &= (d <= d.max() / f * (1 + 1e-12)) & (d >= d.min() * f * (1 - 1e-12))
    if max_count_fraction is not None:
        keep &= c <= max_count_fraction * cloud.n
    if keep.sum() < min_points:
        raise DegenerateRange(
            f"only {int(keep.sum())} scales usable after trimming "
            f"(need {min_points}); enlarge the cloud or coarsen the ladder"
        )
    dk, ck = d[keep], c[keep]
    if np.all(ck == ck[0]):
        raise DegenerateRange("all box counts equal over the fit range")
    slope, intercept, r2 = _fit_loglog(dk, ck)
    return DimensionEstimate(
        exponent=slope,
        intercept=intercept,
        r_squared=r2,
        fit_range=(float(dk.min()), float(dk.max())),
        n_points_used=int(dk.size),
    )


def _rho_power_sum(times, values, gamma_over_h, hurst, weights, idx_i, idx_j):
    dt = np.abs(times[idx_i] - times[idx_j]) ** hurst
    dv = np.max(np.abs(values[idx_i] - values[idx_j]), axis=1)
    rho = np.maximum(dt, dv)
    return float(np.sum(weights[idx_i] * weights[idx_j] * rho**-gamma_over_h))


def energy_integral_mc(
    measure_points,
    values,
    gamma,
    hurst,
    pair_cap=ENERGY_PAIR_CAP,
    n_pairs=ENERGY_DEFAULT_PAIRS,
    pair_seed=0,
):
    """Weighted double sum of rho_H(u, v)^(-gamma/H) over distinct point pairs.

    With n <= pair_cap all n*(n-1) ordered pairs enter and the result is
    deterministic in the points; beyond the cap, n_pairs ordered pairs are
    subsampled with a seeded counter-based stream and rescaled, trading
    exactness for bounded cost.
    """
    hurst = validate_hurst(hurst)
    if gamma <= 0.0:
        raise ConfigError("gamma must be positive")
    times = measure_points.times
    weights = measure_points.weights
    v = np.asarray(values, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    n = times.size
    if v.shape[0] != n:
        raise ConfigError("values must align with measure points")
    if n < 2:
        raise ConfigError("need at least 2 points")
    q = gamma / hurst

    if n <= pair_cap:
        total = 0.0
        # row-chunked full double sum, diagonal excluded
        chunk = max(1, 2**22 // max(n, 1))
        for start in range(0, n, chunk):
            rows = np.arange(start, min(start + chunk, n))
            dt = np.abs(times[rows, None] - times[None, :]) ** hurst
            dv = np.max(np.abs(v[rows, None, :] - v[None, :, :]), axis=2)
            rho = np.maximum(dt, dv)
            rho[rows - start, rows] = np.inf
            total += float(np.sum(weights[rows, None] * weights[None, :] * rho**-q))
        return total

    ss = np.random.SeedSequence(entropy=int(pair_seed), spawn_key=(3,))
    rng = np.random.Generator(np.random.Philox(ss))
    got = 0
    acc = 0.0
    while got < n_pairs:
        m = min(n_pairs - got, 2**20)
        ii = rng.integers(0, n, size=m)
        jj = rng.integers(0, n, size=m)
        ok = ii != jj
        ii, jj = ii[ok], jj[ok]
        acc += _rho_power_sum(times, v, q, hurst, weights, ii, jj)
        got += int(ok.sum())
    # mean over sampled ordered pairs, rescaled to all n*(n-1) of them
    return acc / got * n * (n - 1)


def kernel_expectation_mc(t, alpha, hurst, gamma, d, n, seed=0, boundary_margin=1e-6):
    """Monte Carlo mean of (max(t^H, t^alpha * ||N||_inf))^(-gamma/H).

    N is a d-dimensional standard normal; the decay of this expectation in t
    switches branch at gamma = H*d, so values of gamma within
    ``boundary_margin`` of H*d are rejected.
    """
    alpha = validate_hurst(alpha, "alpha")
    hurst = validate_hurst(hurst)
    if not 0.0 < t <= 1.0:
        raise ConfigError("t must lie in (0, 1]")
    if alpha > hurst:
        raise ConfigError(f"alpha={alpha} must not exceed H={hurst}")
    if abs(gamma - hurst * d) < boundary_margin:
        raise GammaAtBoundary(
            f"gamma={gamma} within {boundary_margin} of H*d={hurst * d}"
        )
    if n < 1:
        raise ConfigError("n must be >= 1")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(4,))
    rng = np.random.Generator(np.random.Philox(ss))
    total = 0.0
    remaining = n
    while remaining > 0:
        m = min(remaining, 2**20)
        z = rng.standard_normal((m, d))
        sup = np.max(np.abs(z), axis=1)
        total += float(np.sum(np.maximum(t**hurst, t**alpha * sup) ** (-gamma / hurst)))
        remaining -= m
    return total / n
