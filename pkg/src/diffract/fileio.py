"""Text formats for combs and spectra, and 16-bit PGM rendering.

Formats (documented in the README):

Comb file: '#' comments, then header lines ``dimension``, ``extent``
(lo hi per axis), ``count``, optional ``periodic`` and ``spacing``, then
exactly ``count`` body lines ``x [y] re(w) im(w)``.  Floats are written
with repr-style %.17g so read/write round-trips are byte exact.

Spectrum CSV: comment header carrying dimension, shape, dk, volume and
normalization; one row per grid bin, ``k1[,k2],intensity``, row order
C-contiguous (k2 varies fastest).

PGM: binary P5, maxval 65535, big-endian, one pixel per grid bin; pixel
row r, column c shows bin (r, c), i.e. k1 = r*dk1, k2 = c*dk2.  The
intensity-to-gray mapping is stamped into the header comments.
"""

from __future__ import annotations

import io
import numpy as np

from .core import SpectrumGrid, WeightedComb

__all__ = [
    "write_comb",
    "read_comb",
    "write_spectrum_csv",
    "read_spectrum_csv",
    "write_pgm",
]


def _fmt(x: float) -> str:
    return "%.17g" % float(x)


def write_comb(path, comb: WeightedComb) -> None:
    lines = ["# diffract comb v1"]
    lines.append(f"dimension {comb.dimension}")
    ext = " ".join(_fmt(v) for v in comb.extent.ravel())
    lines.append(f"extent {ext}")
    lines.append(f"count {len(comb)}")
    lines.append(f"periodic {int(comb.periodic)}")
    if comb.lattice_spacing is not None:
        lines.append(f"spacing {_fmt(comb.lattice_spacing)}")
        lines.append("shape " + " ".join(str(s) for s in comb.lattice_shape))
    for p, w in zip(comb.points, comb.weights):
        coords = " ".join(_fmt(c) for c in p)
        lines.append(f"{coords} {_fmt(w.real)} {_fmt(w.imag)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_comb(path) -> WeightedComb:
    header: dict[str, list[str]] = {}
    body: list[list[float]] = []
    header_keys = ("dimension", "extent", "count", "periodic", "spacing", "shape")
    in_body = False
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if not in_body and parts[0] in header_keys:
                header[parts[0]] = parts[1:]
                continue
            in_body = True
            try:
                body.append([float(x) for x in parts])
            except ValueError as exc:
                raise ValueError(f"malformed comb body line: {line!r}") from exc
    if "count" not in header or "dimension" not in header or "extent" not in header:
        raise ValueError("comb file is missing required header fields")
    count = int(header["count"][0])
    dim = int(header["dimension"][0])
    if len(body) != count:
        raise ValueError(f"expected {count} points, found {len(body)}")
    rows = np.array(body, dtype=float)
    if rows.shape[1] != dim + 2:
        raise ValueError("body rows must be coordinates followed by re and im")
    extent = np.array([float(x) for x in header["extent"]], dtype=float).reshape(dim, 2)
    spacing = float(header["spacing"][0]) if "spacing" in header else None
    shape = tuple(int(s) for s in header["shape"]) if "shape" in header else None
    return WeightedComb(
        dimension=dim,
        points=rows[:, :dim],
        weights=rows[:, dim] + 1j * rows[:, dim + 1],
        extent=extent,
        periodic=bool(int(header.get("periodic", ["0"])[0])),
        lattice_spacing=spacing,
        lattice_shape=shape,
    )


def write_spectrum_csv(path, spec: SpectrumGrid) -> None:
    buf = io.StringIO()
    buf.write("# diffract spectrum v1\n")
    buf.write(f"# dimension {spec.dimension}\n")
    buf.write("# shape " + " ".join(str(s) for s in spec.shape) + "\n")
    buf.write("# dk " + " ".join(_fmt(d) for d in spec.dk) + "\n")
    buf.write(f"# volume {_fmt(spec.volume)}\n")
    buf.write(f"# normalization {spec.normalization}\n")
    if spec.dimension == 1:
        buf.write("# columns k1,intensity\n")
        for j, v in enumerate(spec.values):
            buf.write(f"{_fmt(j * spec.dk[0])},{_fmt(v)}\n")
    else:
        buf.write("# columns k1,k2,intensity\n")
        m2 = spec.shape[1]
        for j1 in range(spec.shape[0]):
            k1 = _fmt(j1 * spec.dk[0])
            row = spec.values[j1]
            for j2 in range(m2):
                buf.write(f"{k1},{_fmt(j2 * spec.dk[1])},{_fmt(row[j2])}\n")
    with open(path, "w") as fh:
        fh.write(buf.getvalue())


def read_spectrum_csv(path) -> SpectrumGrid:
    meta: dict[str, list[str]] = {}
    values: list[float] = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) >= 2:
                    meta[parts[0]] = parts[1:]
                continue
            values.append(float(line.split(",")[-1]))
    try:
        dim = int(meta["dimension"][0])
        shape = tuple(int(s) for s in meta["shape"])
        dk = tuple(float(x) for x in meta["dk"])
        volume = float(meta["volume"][0])
    except KeyError as exc:
        raise ValueError(f"spectrum file is missing header field {exc}") from exc
    arr = np.array(values, dtype=float).reshape(shape)
    return SpectrumGrid(dimension=dim, dk=dk, values=arr, volume=volume)


def write_pgm(path, values: np.ndarray, mode: str = "log", gamma: float = 1.0) -> None:
    """Render a 2D array as a 16-bit grayscale P5 image.

    mode 'linear' maps [min, max] affinely onto [0, 65535]; mode 'log' maps
    log10(1 + I/I0) with I0 = max(I)*1e-6 the same way, which keeps Bragg
    peaks and diffuse background visible together.  A gamma other than 1
    raises the normalized value to 1/gamma before quantization.  The exact
    mapping parameters are stamped into the header comments.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 2:
        raise ValueError("PGM rendering needs a 2D array")
    if mode == "linear":
        lo, hi = float(arr.min()), float(arr.max())
        norm = (arr - lo) / (hi - lo) if hi > lo else np.zeros_like(arr)
        comment = f"# map linear lo {_fmt(lo)} hi {_fmt(hi)} gamma {_fmt(gamma)}"
    elif mode == "log":
        peak = float(arr.max())
        i0 = peak * 1e-6 if peak > 0 else 1.0
        top = np.log10(1.0 + peak / i0) if peak > 0 else 1.0
        norm = np.log10(1.0 + arr / i0) / top if peak > 0 else np.zeros_like(arr)
        comment = f"# map log i0 {_fmt(i0)} top {_fmt(top)} gamma {_fmt(gamma)}"
    else:
        raise ValueError("mode must be 'linear' or 'log'")
    if gamma != 1.0:
        norm = norm ** (1.0 / gamma)
    pixels = np.round(65535.0 * np.clip(norm, 0.0, 1.0)).astype(">u2")
    header = (f"P5\n# diffract spectrum render; pixel (row r, col c) = grid bin (r, c)\n"
              f"{comment}\n{arr.shape[1]} {arr.shape[0]}\n65535\n")
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(pixels.tobytes())
