"""Occupation measures of drifted paths: histograms, density diagnostics, interior probes.

The occupation measure of Y over a weighted time set assigns each value-space
cell the total weight of the times mapped into it.  A cell whose full
l-infinity neighborhood is occupied witnesses interior at that resolution;
almost-sure statements are operationalized as the fraction of seeds showing
such a witness.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ConfigError, GridMismatch

__all__ = [
    "OccupationHistogram",
    "InteriorReport",
    "drifted_image",
    "occupation_histogram",
    "positive_measure_estimate",
    "l2_density_diagnostic",
    "interior_probe",
    "interior_fraction",
]


@dataclass(frozen=True)
class OccupationHistogram:
    """Sparse mass assignment over a uniform grid of value-space cells.

    ``cells`` maps integer d-indices (tuples) to masses; masses are
    non-negative and sum to 1 (an empty histogram is allowed as the
    degenerate no-data case).
    """

    cell_size: float
    origin: np.ndarray
    cells: dict

    def __post_init__(self):
        if self.cell_size <= 0.0:
            raise ConfigError("cell_size must be positive")
        origin = np.atleast_1d(np.asarray(self.origin, dtype=float))
        object.__setattr__(self, "origin", origin)
        if self.cells:
            masses = np.fromiter(self.cells.values(), dtype=float)
            if masses.min() < 0.0:
                raise ConfigError("cell masses must be non-negative")
            if abs(masses.sum() - 1.0) > 1e-9:
                raise ConfigError(f"total mass {masses.sum()} differs from 1 beyond 1e-9")

    @property
    def d(self):
        return self.origin.size

    @property
    def total_mass(self):
        return float(sum(self.cells.values()))

    def to_csv(self, file, config=None):
        """Sparse CSV: one row per cell (indices then mass); config echoed in a comment."""
        close = False
        if isinstance(file, (str, bytes)):
            file = open(file, "w", newline="")
            close = True
        try:
            if config is not None:
                file.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
            w = csv.writer(file)
            w.writerow([f"i{k + 1}" for k in range(self.d)] + ["mass"])
            for idx in sorted(self.cells):
                w.writerow(list(idx) + [repr(self.cells[idx])])
        finally:
            if close:
                file.close()

    def csv_string(self, config=None):
        buf = io.StringIO()
        self.to_csv(buf, config)
        return buf.getvalue()


@dataclass(frozen=True)
class InteriorReport:
    """Cells whose full neighborhood of the given radius is occupied."""

    cell_size: float
    radius_cells: int
    interior_cells: list
    fraction_of_seeds_with_interior: float

    def to_json(self, config=None):
        doc = {
            "cell_size": self.cell_size,
            "radius_cells": self.radius_cells,
            "interior_cells": [list(c) for c in self.interior_cells],
            "fraction_of_seeds_with_interior": self.fraction_of_seeds_with_interior,
        }
        if config is not None:
            doc["config"] = config
        return doc

    def dumps(self, config=None):
        return json.dumps(self.to_json(config))


def drifted_image(path, drift_values, a_samples):
    """Evaluate path + drift at the sampled times by linear interpolation.

    ``drift_values`` must be given on the path's grid (shape (d, n)); sample
    times must lie within the grid range.  Returns (weights, values) with
    values of shape (m, d); weights pass through unchanged.
    """
    f = np.asarray(drift_values, dtype=float)
    if f.ndim == 1:
        f = f[None, :]
    if f.shape != path.values.shape:
        raise GridMismatch(
            f"drift shape {f.shape} does not match path values {path.values.shape}"
        )
    t = path.grid.times
    st = a_samples.times
    if st.min() < t[0] - 1e-12 or st.max() > t[-1] + 1e-12:
        raise GridMismatch("sample times fall outside the path grid range")
    y = path.values + f
    out = np.empty((st.size, path.d))
    for j in range(path.d):
        out[:, j] = np.interp(st, t, y[j])
    return a_samples.weights.copy(), out


def occupation_histogram(weights, values, epsilon, origin=None):
    """Bin weighted value vectors into cells of side epsilon.

    ``origin`` anchors the cell grid (default: componentwise minimum); cell
    mass is the sum of the weights of the points it receives.
    """
    if epsilon <= 0.0:
        raise ConfigError("epsilon must be positive")
    w = np.asarray(weights, dtype=float)
    v = np.asarray(values, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    if w.ndim != 1 or v.shape[0] != w.size:
        raise ConfigError("weights (m,) and values (m, d) must align")
    if origin is None:
        origin = v.min(axis=0)
    origin = np.atleast_1d(np.asarray(origin, dtype=float))
    idx = np.floor((v - origin) / epsilon).astype(np.int64)
    uniq, inv = np.unique(idx, axis=0, return_inverse=True)
    masses = np.bincount(inv, weights=w)
    cells = {tuple(map(int, row)): float(m) for row, m in zip(uniq, masses) if m > 0.0}
    return OccupationHistogram(cell_size=float(epsilon), origin=origin, cells=cells)


def positive_measure_estimate(hist, mass_floor=0.0):
    """Lebesgue-measure proxy: (number of cells of density >= mass_floor) * eps^d.

    A cell counts when its mass is at least mass_floor * eps^d, i.e. its
    density proxy mass/eps^d clears the floor.  Non-increasing in the floor.
    """
    if mass_floor < 0.0:
        raise ConfigError("mass_floor must be >= 0")
    cell_vol = hist.cell_size**hist.d
    threshold = mass_floor * cell_vol
    count = sum(1 for m in hist.cells.values() if m >= threshold)
    return count * cell_vol


def l2_density_diagnostic(images, weights, radii):
    """Per-radius values r^-d * mean_seeds sum_{i != j} w_i w_j 1{||Y(s_i)-Y(s_j)|| < r}.

    ``images`` is a sequence of (m, d) arrays, one per seed, evaluated at the
    same weighted times.  A bounded sequence across shrinking radii indicates
    a square-integrable occupation density; growth like r^-d indicates none.
    The diagonal is excluded (it would contribute a spurious r^-d / m term).
    """
    radii = np.asarray(radii, dtype=float)
    if radii.size < 2:
        raise ConfigError("need at least 2 radii")
    if np.any(np.diff(radii) >= 0.0):
        raise ConfigError("radii must be strictly decreasing")
    w = np.asarray(weights, dtype=float)
    totals = np.zeros(radii.size)
    n_seeds = 0
    for img in images:
        y = np.asarray(img, dtype=float)
        if y.ndim == 1:
            y = y[:, None]
        m, d = y.shape
        if m != w.size:
            raise ConfigError("image rows must align with weights")
        chunk = max(1, 2**22 // max(m, 1))
        seed_tot = np.zeros(radii.size)
        for start in range(0, m, chunk):
            rows = np.arange(start, min(start + chunk, m))
            dist = np.sqrt(
                np.sum((y[rows, None, :] - y[None, :, :]) ** 2, axis=2)
            )
            dist[rows - start, rows] = np.inf
            ww = w[rows, None] * w[None, :]
            for k, r in enumerate(radii):
                seed_tot[k] += float(np.sum(ww, where=dist < r))
        totals += seed_tot
        n_seeds += 1
    if n_seeds == 0:
        raise ConfigError("need at least one image")
    first = np.asarray(images[0], dtype=float)
    dim = 1 if first.ndim == 1 else first.shape[1]
    return totals / n_seeds / radii**dim


def interior_probe(hist, radius_cells):
    """All cells whose closed l-infinity neighborhood of the given radius is occupied.

    Implemented as binary erosion of the occupancy grid with a cube
    structuring element of side 2*radius_cells + 1.
    """
    if radius_cells < 1:
        raise ConfigError("radius_cells must be >= 1")
    if not hist.cells:
        return InteriorReport(
            cell_size=hist.cell_size,
            radius_cells=radius_cells,
            interior_cells=[],
            fraction_of_seeds_with_interior=0.0,
        )
    idx = np.array(sorted(hist.cells), dtype=np.int64)
    lo = idx.min(axis=0)
    shape = idx.max(axis=0) - lo + 1
    grid = np.zeros(shape, dtype=bool)
    grid[tuple((idx - lo).T)] = True
    structure = np.ones((2 * radius_cells + 1,) * hist.d, dtype=bool)
    eroded = ndimage.binary_erosion(grid, structure=structure, border_value=0)
    cells = [tuple(map(int, row + lo)) for row in np.argwhere(eroded)]
    return InteriorReport(
        cell_size=hist.cell_size,
        radius_cells=radius_cells,
        interior_cells=sorted(cells),
        fraction_of_seeds_with_interior=1.0 if cells else 0.0,
    )


def interior_fraction(hists, radius_cells):
    """Probe an ensemble of histograms; returns (fraction of seeds with interior, reports)."""
    reports = [interior_probe(h, radius_cells) for h in hists]
    if not reports:
        raise ConfigError("need at least one histogram")
    frac = sum(r.fraction_of_seeds_with_interior for r in reports) / len(reports)
    return frac, reports
