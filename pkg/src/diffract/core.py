"""Core domain types: weighted point sets, spectra, autocorrelations, seeded RNG.

Conventions used throughout the package:

* Lengths are measured in units of the lattice constant (a = 1).
* The Fourier transform convention is exp(-2*pi*i*k.x), so a unit-spaced
  lattice diffracts onto integer wavevectors.
* Intensities are normalized per volume, I(k) = |sum_x w(x) exp(-2pi i k.x)|^2 / V,
  where V is the volume of the bounding extent.  With this choice a Bragg
  component of weight A shows up on an FFT grid as a single bin of value
  about A*V, while an absolutely continuous density g(k) produces O(1) bin
  values fluctuating around g(k).
* All container types are immutable after construction and safe to share
  between concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

__all__ = [
    "SeededRng",
    "WeightedComb",
    "SpectrumGrid",
    "AutocorrelationTable",
    "comb_from_lattice_weights",
    "density",
]


@dataclass(frozen=True)
class SeededRng:
    """Deterministic random source identified by a (seed, stream) pair.

    Identical (seed, stream) pairs produce identical output sequences on
    every run and for every thread count; generators are created fresh on
    each call to :meth:`generator`, so a SeededRng can be reused safely.
    Ensembles conventionally give member ``i`` the stream id ``stream + i``
    (see :meth:`shifted`).
    """

    seed: int
    stream: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.stream < 2**32:
            raise ValueError("stream id must fit in 32 bits")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def shifted(self, offset: int) -> "SeededRng":
        """Return the SeededRng for ensemble member `offset` of this stream."""
        return SeededRng(self.seed, self.stream + offset)


def _as_points(points, dimension: int) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] != dimension:
        raise ValueError(f"points must have shape (n, {dimension})")
    return pts


@dataclass(frozen=True)
class WeightedComb:
    """A finite point set with complex scattering weights.

    Attributes:
        dimension: 1 or 2.
        points: (n, dimension) float array of positions.
        weights: (n,) complex array; zero weights are kept explicitly.
        extent: (dimension, 2) array of [lo, hi) bounds; the product of the
            side lengths is the volume V used for all normalizations.
        periodic: whether the comb was generated on a torus (affects how
            autocorrelations wrap).
        lattice_spacing: set when every point is an integer multiple of a
            common spacing measured from extent[:, 0]; enables exact FFTs.
    """

    dimension: int
    points: np.ndarray
    weights: np.ndarray
    extent: np.ndarray
    periodic: bool = False
    lattice_spacing: float | None = None
    lattice_shape: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.dimension not in (1, 2):
            raise ValueError("dimension must be 1 or 2")
        pts = _as_points(self.points, self.dimension)
        w = np.asarray(self.weights, dtype=complex)
        if pts.shape[0] == 0:
            raise ValueError("a comb needs at least one point")
        if w.shape != (pts.shape[0],):
            raise ValueError("weights must be one scalar per point")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        ext = np.asarray(self.extent, dtype=float).reshape(self.dimension, 2)
        if np.any(pts < ext[:, 0] - 1e-12) or np.any(pts > ext[:, 1] + 1e-12):
            raise ValueError("every point must lie within the extent")
        # pairwise distinctness via lexicographic sort
        order = np.lexsort(pts.T[::-1])
        diffs = np.diff(pts[order], axis=0)
        if pts.shape[0] > 1 and np.any(np.all(np.abs(diffs) < 1e-12, axis=1)):
            raise ValueError("points must be pairwise distinct")
        for name, value in (("points", pts), ("weights", w), ("extent", ext)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def volume(self) -> float:
        sides = self.extent[:, 1] - self.extent[:, 0]
        return float(np.prod(sides))

    @property
    def max_weight(self) -> float:
        """Largest |w(x)|, recorded per the boundedness requirement."""
        return float(np.max(np.abs(self.weights)))

    def __len__(self) -> int:
        return self.points.shape[0]

    def lattice_weights(self) -> np.ndarray:
        """Dense weight array over the spanning lattice, shape lattice_shape.

        Only available for lattice-supported combs.  Sites of the spanning
        lattice that carry no point get weight zero.
        """
        arr, _ = self._lattice_array()
        return arr

    def _lattice_array(self) -> tuple[np.ndarray, float]:
        if self.lattice_spacing is None or self.lattice_shape is None:
            raise ValueError("comb is not lattice-supported")
        a = self.lattice_spacing
        idx = np.rint((self.points - self.extent[:, 0]) / a).astype(np.int64)
        back = idx * a + self.extent[:, 0]
        if not np.allclose(back, self.points, atol=1e-9 * max(a, 1.0)):
            raise ValueError("points are not commensurate with the recorded spacing")
        arr = np.zeros(self.lattice_shape, dtype=complex)
        arr[tuple(idx.T)] = self.weights
        return arr, a


def comb_from_lattice_weights(
    weights, spacing: float = 1.0, *, origin=None, periodic: bool = False
) -> WeightedComb:
    """Build a comb with one point per lattice site of a 1D or 2D array.

    Site (i) or (i, j) of `weights` is placed at origin + (i,)*spacing or
    origin + (i, j)*spacing.  Zero entries are retained as explicit
    zero-weight points.  The extent spans the full array, so V equals
    weights.size * spacing**d.
    """
    arr = np.asarray(weights, dtype=complex)
    if arr.size == 0:
        raise ValueError("weights array must be non-empty")
    if arr.ndim not in (1, 2):
        raise ValueError("weights array must be 1D or 2D")
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    dim = arr.ndim
    if origin is None:
        origin = np.zeros(dim)
    origin = np.asarray(origin, dtype=float).reshape(dim)
    grids = np.indices(arr.shape).reshape(dim, -1).T
    points = origin + grids * spacing
    extent = np.stack([origin, origin + np.array(arr.shape) * spacing], axis=1)
    return WeightedComb(
        dimension=dim,
        points=points,
        weights=arr.reshape(-1),
        extent=extent,
        periodic=periodic,
        lattice_spacing=float(spacing),
        lattice_shape=arr.shape,
    )


def density(comb: WeightedComb) -> float:
    """Number of points with nonzero weight per unit volume."""
    v = comb.volume
    if v <= 0:
        raise ValueError("extent volume must be positive")
    occupied = int(np.count_nonzero(comb.weights != 0))
    return occupied / v


@dataclass(frozen=True)
class SpectrumGrid:
    """Diffraction intensity sampled on a regular wavevector grid.

    The grid starts at k = 0 and steps by `dk` per axis; `values[j]` (1D) or
    `values[j1, j2]` (2D) is I at k = j * dk.  Normalization is per volume,
    with the volume stored in `volume`.  Values are clamped to be
    nonnegative; anything below -1e-12 is treated as a hard error upstream.
    """

    dimension: int
    dk: tuple[float, ...]
    values: np.ndarray
    volume: float
    normalization: str = "per-volume"

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != self.dimension:
            raise ValueError("values array rank must equal dimension")
        if np.any(vals < -1e-12):
            raise ValueError("intensities must be nonnegative")
        vals = np.maximum(vals, 0.0)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "dk", tuple(float(d) for d in self.dk))

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    def k_axis(self, axis: int = 0) -> np.ndarray:
        return np.arange(self.shape[axis]) * self.dk[axis]

    def grid_mean(self) -> float:
        """Mean intensity over all bins; equals nu(0) for full FFT grids."""
        return float(np.mean(self.values))

    def integer_k_indices(self) -> list[tuple[int, ...]]:
        """Grid indices that land exactly on integer wavevectors."""
        hits_per_axis = []
        for ax in range(self.dimension):
            ks = self.k_axis(ax)
            hits_per_axis.append(np.nonzero(np.abs(ks - np.rint(ks)) < 1e-9)[0])
        if self.dimension == 1:
            return [(int(i),) for i in hits_per_axis[0]]
        return [(int(i), int(j)) for i in hits_per_axis[0] for j in hits_per_axis[1]]


@dataclass(frozen=True)
class AutocorrelationTable:
    """Autocorrelation coefficients nu(z) on a finite set of difference vectors.

    `offsets` holds the difference vectors (n, dimension), `values` the
    coefficients.  `mode` records how the finite-size estimate was taken:
    'periodic' wraps around the torus, 'open-overlap' divides each offset by
    the volume of overlap between the extent and its translate.
    """

    dimension: int
    offsets: np.ndarray
    values: np.ndarray
    cutoff: float
    mode: str
    volume: float
    period_shape: tuple[int, ...] | None = None
    spacing: float | None = None
    _index: Mapping[tuple, int] = field(repr=False, default=None)

    def __post_init__(self) -> None:
        off = np.asarray(self.offsets, dtype=float)
        if off.ndim == 1:
            off = off[:, None]
        vals = np.asarray(self.values, dtype=complex)
        off.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "offsets", off)
        object.__setattr__(self, "values", vals)
        index = {tuple(np.round(z, 9)): i for i, z in enumerate(off)}
        object.__setattr__(self, "_index", index)

    def coefficient(self, z) -> complex:
        key = tuple(np.round(np.atleast_1d(np.asarray(z, dtype=float)), 9))
        i = self._index.get(key)
        return complex(self.values[i]) if i is not None else 0.0 + 0.0j

    def entries(self) -> Iterator[tuple[tuple, complex]]:
        for z, v in zip(self.offsets, self.values):
            yield tuple(z), complex(v)

    def nu0(self) -> complex:
        return self.coefficient(np.zeros(self.dimension))
