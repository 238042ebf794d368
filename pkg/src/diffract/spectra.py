"""Numerical diffraction: FFT spectra, direct exponential sums, autocorrelation.

The per-volume normalization I(k) = |sum_x w(x) exp(-2pi i k.x)|^2 / V is used
everywhere, so FFT grids satisfy Parseval in the form

    mean over bins of I(k)  =  (1/V) sum_x |w(x)|^2  =  nu(0),

and the discrete Fourier transform of the periodic autocorrelation table
reproduces the FFT spectrum bin for bin (finite-size Wiener-Khinchin).
"""

from __future__ import annotations

import numpy as np

from .core import AutocorrelationTable, SpectrumGrid, WeightedComb

__all__ = [
    "DiffractionError",
    "autocorrelation",
    "diffraction_fft",
    "diffraction_direct",
    "spectrum_from_autocorrelation",
    "grid_cut",
    "DIRECT_SUM_MAX_POINTS",
    "DEFAULT_BIN_WIDTH",
    "MAX_FFT_BINS",
]

#: largest point count for which non-lattice combs are diffracted by direct sums
DIRECT_SUM_MAX_POINTS = 200_000
#: bin width used when snapping incommensurate positions onto a fine grid
DEFAULT_BIN_WIDTH = 2.0**-12
#: refuse FFTs larger than this many bins per axis
MAX_FFT_BINS = 2**24


class DiffractionError(ValueError):
    """Raised when a comb cannot be diffracted at the requested resolution."""


def _fft_intensity(dense: np.ndarray, spacing: float, volume: float,
                   oversample: int) -> SpectrumGrid:
    shape = tuple(s * oversample for s in dense.shape)
    f = np.fft.fftn(dense, s=shape, axes=tuple(range(dense.ndim)))
    values = (f.real**2 + f.imag**2) / volume
    dk = tuple(1.0 / (m * spacing) for m in shape)
    return SpectrumGrid(dimension=dense.ndim, dk=dk, values=values, volume=volume)


def diffraction_fft(comb: WeightedComb, oversample: int = 1,
                    bin_width: float | None = None) -> SpectrumGrid:
    """Diffraction intensity on the full FFT grid of the comb.

    Lattice-supported combs are transformed exactly on the grid with
    dk = 1/(M * spacing) per axis, M = oversample * (sites per axis).
    Incommensurate combs (Fibonacci, circle, random tilings) are snapped
    onto a fine grid of the given bin width (default 2**-12) first; the
    request is rejected with a diagnostic when that grid would exceed
    MAX_FFT_BINS bins.  For selected wavevectors of a large incommensurate
    comb, prefer diffraction_direct.
    """
    if oversample < 1:
        raise ValueError("oversample must be a positive integer")
    if comb.lattice_spacing is not None:
        dense, a = comb._lattice_array()
        return _fft_intensity(dense, a, comb.volume, oversample)
    if comb.dimension != 1:
        raise DiffractionError("only lattice-supported combs are handled in 2D")
    width = DEFAULT_BIN_WIDTH if bin_width is None else float(bin_width)
    if width <= 0:
        raise ValueError("bin width must be positive")
    lo = comb.extent[0, 0]
    span = comb.extent[0, 1] - lo
    nbins = int(np.ceil(span / width))
    if nbins > MAX_FFT_BINS:
        raise DiffractionError(
            f"binning {len(comb)} points at width {width:g} needs {nbins} bins "
            f"(limit {MAX_FFT_BINS}); use diffraction_direct at selected k or a "
            f"coarser bin_width"
        )
    dense = np.zeros(nbins, dtype=complex)
    idx = np.minimum(((comb.points[:, 0] - lo) / width).astype(np.int64), nbins - 1)
    np.add.at(dense, idx, comb.weights)
    return _fft_intensity(dense, width, comb.volume, oversample)


def diffraction_direct(comb: WeightedComb, k) -> np.ndarray:
    """I(k) = |sum_x w(x) exp(-2pi i k.x)|^2 / V at arbitrary wavevectors.

    `k` is a scalar or (m,) array in 1D, an (m, 2) array in 2D.  Exact for
    any comb; cost is O(points * wavevectors), evaluated in chunks.
    """
    k_arr = np.asarray(k, dtype=float)
    single = k_arr.ndim == 0 if comb.dimension == 1 else k_arr.ndim == 1
    kk = np.atleast_1d(k_arr).reshape(-1, comb.dimension)
    out = np.empty(kk.shape[0])
    pts = comb.points
    w = comb.weights
    chunk = max(1, int(8_000_000 / max(len(comb), 1)))
    for start in range(0, kk.shape[0], chunk):
        block = kk[start:start + chunk]
        phase = np.exp(-2j * np.pi * (block @ pts.T))
        amp = phase @ w
        out[start:start + chunk] = (amp.real**2 + amp.imag**2) / comb.volume
    return float(out[0]) if single else out


# ---------------------------------------------------------------------------
# autocorrelation
# ---------------------------------------------------------------------------

def autocorrelation(comb: WeightedComb, radius: float | None = None,
                    periodic: bool | None = None) -> AutocorrelationTable:
    """Finite-size autocorrelation coefficients nu(z) for |z| <= radius.

    nu(z) is the volume-averaged sum of w(y) * conj(w(y - z)) over point
    pairs separated by z; for 0/1 weights it is the frequency of two
    scatterers at distance z.  Torus-generated combs wrap around
    (mode 'periodic'); sequence models use open boundaries with the
    volume-of-overlap correction (mode 'open-overlap').  radius=None on a
    periodic lattice comb returns the complete fundamental domain, which is
    the input expected by spectrum_from_autocorrelation.
    """
    if periodic is None:
        periodic = comb.periodic
    if comb.lattice_spacing is not None:
        return _lattice_autocorrelation(comb, radius, periodic)
    if periodic:
        raise ValueError("periodic autocorrelation requires a lattice comb")
    if radius is None:
        raise ValueError("a cutoff radius is required for non-lattice combs")
    return _pairwise_autocorrelation(comb, float(radius))


def _lattice_autocorrelation(comb, radius, periodic) -> AutocorrelationTable:
    dense, a = comb._lattice_array()
    shape = np.array(dense.shape)
    sides = (comb.extent[:, 1] - comb.extent[:, 0])
    diameter = float(np.sqrt(np.sum(sides**2)))
    if radius is not None and radius > diameter + 1e-12:
        raise ValueError("radius exceeds the extent diameter")
    if periodic:
        if radius is not None and radius > a * shape.min() / 2 + 1e-12:
            raise ValueError("periodic radius is limited to half the period")
        f = np.fft.fftn(dense)
        corr = np.fft.ifftn(f * np.conj(f))
        nu = corr / comb.volume
        # canonical offsets in (-S/2, S/2] per axis
        axes = [np.where(np.arange(s) <= s // 2, np.arange(s), np.arange(s) - s)
                for s in dense.shape]
        mesh = np.meshgrid(*axes, indexing="ij")
        offsets = np.stack([m.ravel() for m in mesh], axis=1) * a
        values = nu.ravel()
        mode = "periodic"
        period_shape = dense.shape
    else:
        padded = [2 * s for s in dense.shape]
        f = np.fft.fftn(dense, s=padded, axes=tuple(range(dense.ndim)))
        corr = np.fft.ifftn(f * np.conj(f))
        axes = [np.where(np.arange(p) < s, np.arange(p), np.arange(p) - p)
                for p, s in zip(padded, dense.shape)]
        mesh = np.meshgrid(*axes, indexing="ij")
        mask = np.ones(corr.shape, dtype=bool)
        for d, (ax, s) in enumerate(zip(axes, dense.shape)):
            shape_d = [1] * len(axes)
            shape_d[d] = len(ax)
            mask &= (np.abs(ax) < s).reshape(shape_d)
        offsets = np.stack([m[mask].ravel() for m in mesh], axis=1) * a
        overlap = np.prod([(s - np.abs(m[mask].ravel())) * a
                           for s, m in zip(dense.shape, mesh)], axis=0)
        values = corr[mask].ravel() / overlap
        mode = "open-overlap"
        period_shape = None
    if radius is not None:
        dist = np.sqrt(np.sum(offsets**2, axis=1))
        sel = dist <= radius + 1e-12
        offsets, values = offsets[sel], values[sel]
        cutoff = float(radius)
    else:
        cutoff = float(np.max(np.sqrt(np.sum(offsets**2, axis=1))))
    if np.max(np.abs(values.imag)) < 1e-12 * max(1.0, np.max(np.abs(values.real))):
        values = values.real + 0j
    return AutocorrelationTable(
        dimension=comb.dimension, offsets=offsets, values=values, cutoff=cutoff,
        mode=mode, volume=comb.volume, period_shape=period_shape, spacing=a,
    )


def _pairwise_autocorrelation(comb, radius) -> AutocorrelationTable:
    sides = comb.extent[:, 1] - comb.extent[:, 0]
    if radius > float(np.sqrt(np.sum(sides**2))) + 1e-12:
        raise ValueError("radius exceeds the extent diameter")
    x = comb.points[:, 0]
    order = np.argsort(x, kind="stable")
    x = x[order]
    w = comb.weights[order]
    span = float(sides[0])
    sums: dict[float, complex] = {0.0: complex(np.sum(w * np.conj(w)))}
    counts: dict[float, float] = {0.0: span}
    lag = 1
    n = len(x)
    while lag < n:
        dz = x[lag:] - x[:-lag]
        if np.min(dz) > radius:
            break
        sel = dz <= radius + 1e-12
        prods = w[lag:][sel] * np.conj(w[:-lag][sel])
        zs = np.round(dz[sel], 9)
        uniq, inv = np.unique(zs, return_inverse=True)
        acc = np.zeros(len(uniq), dtype=complex)
        np.add.at(acc, inv, prods)
        for z, s in zip(uniq, acc):
            sums[z] = sums.get(z, 0.0) + s
            counts[z] = span - z
        lag += 1
    offsets = []
    values = []
    for z in sorted(sums):
        nu = sums[z] / counts[z]
        offsets.append(z)
        values.append(nu)
        if z > 0:
            offsets.append(-z)
            values.append(np.conj(nu))
    return AutocorrelationTable(
        dimension=1, offsets=np.array(offsets), values=np.array(values),
        cutoff=radius, mode="open-overlap", volume=comb.volume,
    )


def spectrum_from_autocorrelation(table: AutocorrelationTable) -> SpectrumGrid:
    """DFT of a complete periodic autocorrelation table.

    Inverse of the Wiener-Khinchin relation at finite size: the result
    matches diffraction_fft of the comb the table was computed from, bin
    for bin.
    """
    if table.mode != "periodic" or table.period_shape is None:
        raise ValueError("needs a periodic table covering the fundamental domain")
    a = table.spacing
    shape = table.period_shape
    dense = np.zeros(shape, dtype=complex)
    idx = np.rint(table.offsets / a).astype(np.int64) % np.array(shape)
    dense[tuple(idx.T)] = table.values
    f = np.fft.fftn(dense)
    values = f.real
    if np.max(np.abs(f.imag)) > 1e-9 * max(1.0, np.max(np.abs(values))):
        raise ValueError("autocorrelation table is not Hermitian")
    values = np.where(values < 0, np.maximum(values, -1e-12), values)
    dk = tuple(1.0 / (m * a) for m in shape)
    return SpectrumGrid(dimension=table.dimension, dk=dk, values=values,
                        volume=table.volume)


def grid_cut(spec: SpectrumGrid, k1: float) -> tuple[np.ndarray, np.ndarray, float]:
    """1D cut of a 2D spectrum along the grid row nearest to the given k1.

    Returns (k2 axis, intensities, actual k1 of the row used).
    """
    if spec.dimension != 2:
        raise ValueError("cuts are defined for 2D spectra only")
    row = int(np.rint(k1 / spec.dk[0])) % spec.shape[0]
    return spec.k_axis(1), np.array(spec.values[row, :]), row * spec.dk[0]
