"""Square ice on a torus: loop-move sampler, rule checks, exact enumeration.

Oxygens sit on the vertices of the L x L torus; each bond carries exactly one
hydrogen at distance 1/3 from one of its two endpoint oxygens (this encoding
makes the one-hydrogen-per-bond rule structurally unbreakable).  The state is
valid ice when every oxygen has exactly two adjacent hydrogens.

In arrow language, orient each bond away from the oxygen its hydrogen is
close to: the validity condition becomes the two-in two-out six-vertex rule,
and reversing the arrows around any closed directed cycle preserves it
exactly.  The sampler walks along outgoing arrows, closing and reversing a
loop whenever the walk revisits a vertex of the current path; each of the two
outgoing arrows is chosen with probability 1/2, which gives detailed balance
with respect to the uniform distribution on ice states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import SeededRng, WeightedComb

__all__ = [
    "LIEB_ENTROPY",
    "IceConfiguration",
    "IceRulesReport",
    "ice_rules_check",
    "bernoulli_hydrogens",
    "IceLoopSampler",
    "ice_sample",
    "ice_configurations",
    "ice_to_comb",
    "enumerate_ice_states",
    "enumerate_ice_configurations",
    "transfer_matrix_count",
    "brute_force_count",
]

#: residual entropy per vertex of the infinite system, (3/2) ln(4/3)
LIEB_ENTROPY = 1.5 * math.log(4.0 / 3.0)


@dataclass(frozen=True)
class IceConfiguration:
    """Hydrogen placement on the bonds of an L x L torus.

    hx[i, j] = 0 puts the hydrogen of bond (i,j)-(i+1,j) at (i + 1/3, j),
    next to oxygen (i, j); hx[i, j] = 1 puts it at (i + 2/3, j).  hy is the
    same for vertical bonds (i,j)-(i,j+1).  One hydrogen per bond holds by
    construction.
    """

    size: int
    hx: np.ndarray
    hy: np.ndarray

    def __post_init__(self) -> None:
        for name in ("hx", "hy"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.uint8)
            if arr.shape != (self.size, self.size):
                raise ValueError(f"{name} must be an {self.size} x {self.size} array")
            if arr.max(initial=0) > 1:
                raise ValueError(f"{name} entries must be 0 or 1")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def adjacency_counts(self) -> np.ndarray:
        """Number of hydrogens adjacent to each oxygen."""
        hx, hy = self.hx, self.hy
        return ((hx == 0).astype(np.int8)
                + (np.roll(hx, 1, axis=0) == 1)
                + (hy == 0)
                + (np.roll(hy, 1, axis=1) == 1)).astype(np.int64)

    def packed(self) -> bytes:
        """Canonical byte string identifying the configuration."""
        return np.packbits(np.concatenate([self.hx.ravel(), self.hy.ravel()])).tobytes()


@dataclass(frozen=True)
class IceRulesReport:
    """Rule-violation counts; the per-bond rule cannot be violated here."""

    rule1_violations: int
    rule2_violations: int = 0

    @property
    def valid(self) -> bool:
        return self.rule1_violations == 0 and self.rule2_violations == 0


def ice_rules_check(config: IceConfiguration) -> IceRulesReport:
    """Count oxygens whose adjacent-hydrogen number differs from two."""
    counts = config.adjacency_counts()
    return IceRulesReport(rule1_violations=int(np.count_nonzero(counts != 2)))


def bernoulli_hydrogens(size: int, rng: SeededRng) -> IceConfiguration:
    """Independent fair hydrogen placement on every bond (ignores rule one)."""
    if size < 2:
        raise ValueError("torus size must be at least 2")
    gen = rng.generator()
    hx = gen.integers(0, 2, size=(size, size), dtype=np.uint8)
    hy = gen.integers(0, 2, size=(size, size), dtype=np.uint8)
    return IceConfiguration(size=size, hx=hx, hy=hy)


class IceLoopSampler:
    """Uniform sampler over ice states by closed-loop arrow reversal.

    One sweep performs loop moves until at least 2 * size**2 arrows (one per
    bond on average) have been reversed.

    Contractible loops conserve the net arrow flux through every cut, so the
    winding (polarization) sector changes only through the loops that wrap
    the torus; those are frequent on small tori but rare on large ones.  The
    sampler therefore starts from a zero-polarization antiferroelectric
    state (hydrogen side alternating stripe-wise), which is both trivially
    valid and the sector that dominates the uniform ensemble.
    """

    def __init__(self, size: int, rng: SeededRng):
        if size < 2 or size % 2:
            raise ValueError("torus size must be even and at least 2")
        self.size = size
        self._gen = rng.generator()
        n = size * size
        # hx[i*size + j] = j % 2, hy = i % 2: every oxygen sees exactly
        # one hydrogen from its two horizontal bonds and one from its two
        # vertical bonds, and both net fluxes vanish
        self._hx = bytearray(j % 2 for i in range(size) for j in range(size))
        self._hy = bytearray(i % 2 for i in range(size) for j in range(size))
        east = [((i + 1) % size) * size + j for i in range(size) for j in range(size)]
        west = [((i - 1) % size) * size + j for i in range(size) for j in range(size)]
        north = [i * size + (j + 1) % size for i in range(size) for j in range(size)]
        south = [i * size + (j - 1) % size for i in range(size) for j in range(size)]
        self._step_to = (east, west, north, south)
        self._visit = [-1] * n
        self._stamp = 0
        self._bit_buffer = np.empty(0, dtype=np.uint8)
        self._bit_pos = 0
        self._start_buffer = np.empty(0, dtype=np.int64)
        self._start_pos = 0

    # -- randomness buffers, consumed in a fixed order for reproducibility --

    def _bit(self) -> int:
        if self._bit_pos >= len(self._bit_buffer):
            self._bit_buffer = self._gen.integers(0, 2, size=1 << 14, dtype=np.uint8)
            self._bit_pos = 0
        b = self._bit_buffer[self._bit_pos]
        self._bit_pos += 1
        return int(b)

    def _start_vertex(self) -> int:
        if self._start_pos >= len(self._start_buffer):
            self._start_buffer = self._gen.integers(
                0, self.size * self.size, size=1 << 12, dtype=np.int64)
            self._start_pos = 0
        v = self._start_buffer[self._start_pos]
        self._start_pos += 1
        return int(v)

    def _out_bonds(self, v: int) -> tuple[tuple[int, int], tuple[int, int]]:
        """The two outgoing (direction, bond-vertex) pairs at vertex v.

        Directions: 0 east via hx[v], 1 west via hx[west(v)],
        2 north via hy[v], 3 south via hy[south(v)].
        """
        hx, hy = self._hx, self._hy
        west_v = self._step_to[1][v]
        south_v = self._step_to[3][v]
        out = []
        if hx[v] == 0:
            out.append((0, v))
        if hx[west_v] == 1:
            out.append((1, west_v))
        if hy[v] == 0:
            out.append((2, v))
        if hy[south_v] == 1:
            out.append((3, south_v))
        return out[0], out[1]

    def loop_move(self) -> int:
        """One rejection-free update; returns the number of reversed arrows."""
        visit = self._visit
        self._stamp += 1
        stamp = self._stamp
        v = self._start_vertex()
        path_vertices = [v]
        path_bonds = []
        visit[v] = stamp
        step_to = self._step_to
        while True:
            first, second = self._out_bonds(v)
            choice = first if self._bit() else second
            direction, bond = choice
            path_bonds.append(choice)
            v = step_to[direction][bond] if direction in (0, 2) else bond
            # stepping east/north from the bond's tail lands on its head;
            # stepping west/south lands on the bond's tail vertex
            if visit[v] == stamp:
                break
            visit[v] = stamp
            path_vertices.append(v)
        # reverse the cycle: bonds walked since the first visit of v
        start_index = path_vertices.index(v)
        hx, hy = self._hx, self._hy
        for direction, bond in path_bonds[start_index:]:
            if direction < 2:
                hx[bond] ^= 1
            else:
                hy[bond] ^= 1
        return len(path_bonds) - start_index

    def sweep(self, count: int = 1) -> None:
        target = 2 * self.size * self.size
        for _ in range(count):
            flipped = 0
            while flipped < target:
                flipped += self.loop_move()

    def configuration(self) -> IceConfiguration:
        n = self.size
        hx = np.frombuffer(bytes(self._hx), dtype=np.uint8).reshape(n, n)
        hy = np.frombuffer(bytes(self._hy), dtype=np.uint8).reshape(n, n)
        return IceConfiguration(size=n, hx=hx, hy=hy)

    def state_bytes(self) -> bytes:
        """Raw per-bond state, one byte each; cheap identity for tallying."""
        return bytes(self._hx) + bytes(self._hy)


def ice_configurations(size: int, count: int, rng: SeededRng,
                       equilibration_sweeps: int = 64,
                       sweeps_between: int = 2) -> Iterator[IceConfiguration]:
    """Stream of decorrelated uniform ice states from a fresh sampler."""
    sampler = IceLoopSampler(size, rng)
    sampler.sweep(equilibration_sweeps)
    for _ in range(count):
        sampler.sweep(sweeps_between)
        yield sampler.configuration()


def ice_sample(size: int, rng: SeededRng, equilibration_sweeps: int = 64) -> IceConfiguration:
    """One uniform ice configuration."""
    return next(iter(ice_configurations(size, 1, rng, equilibration_sweeps, 0)))


def ice_to_comb(config: IceConfiguration, h_o: float, h_h: float) -> WeightedComb:
    """Weighted comb of the atomic structure: oxygens at the vertices,
    hydrogens at third-points of the bonds.

    All positions live on the lattice (1/3) Z^2, so the comb is
    lattice-supported with spacing 1/3 and diffracts exactly by FFT onto the
    grid dk = 1/L covering one period k in [0, 3)^2.
    """
    n = config.size
    ii, jj = np.indices((n, n))
    ox = np.stack([3 * ii, 3 * jj], axis=-1).reshape(-1, 2)
    hx_pos = np.stack([3 * ii + 1 + config.hx.astype(np.int64), 3 * jj],
                      axis=-1).reshape(-1, 2)
    hy_pos = np.stack([3 * ii, 3 * jj + 1 + config.hy.astype(np.int64)],
                      axis=-1).reshape(-1, 2)
    fine_index = np.concatenate([ox, hx_pos, hy_pos], axis=0)
    points = fine_index / 3.0
    weights = np.concatenate([
        np.full(n * n, complex(h_o)),
        np.full(2 * n * n, complex(h_h)),
    ])
    return WeightedComb(
        dimension=2,
        points=points,
        weights=weights,
        extent=np.array([[0.0, float(n)], [0.0, float(n)]]),
        periodic=True,
        lattice_spacing=1.0 / 3.0,
        lattice_shape=(3 * n, 3 * n),
    )


# ---------------------------------------------------------------------------
# exact enumeration
# ---------------------------------------------------------------------------

def brute_force_count(l1: int, l2: int) -> int:
    """Count ice states by checking every one of 2**(2 l1 l2) bond states.

    Feasible only for 2 * l1 * l2 <= 20 bits or so.
    """
    nbonds = 2 * l1 * l2
    if nbonds > 22:
        raise ValueError("brute force enumeration is capped at 22 bonds")
    states = np.arange(1 << nbonds, dtype=np.int64)
    bits = ((states[:, None] >> np.arange(nbonds, dtype=np.int64)) & 1).astype(np.int8)
    hx = bits[:, : l1 * l2].reshape(-1, l1, l2)
    hy = bits[:, l1 * l2:].reshape(-1, l1, l2)
    counts = ((hx == 0).astype(np.int8)
              + (np.roll(hx, 1, axis=1) == 1)
              + (hy == 0)
              + (np.roll(hy, 1, axis=2) == 1))
    valid = np.all(counts == 2, axis=(1, 2))
    return int(np.count_nonzero(valid))


def _row_transfer_matrix(l1: int) -> np.ndarray:
    """Transfer matrix over vertical-arrow row states for a width-l1 torus.

    State bits: 1 means the vertical arrow below a column points north.
    Entry T[vin, vout] counts the cyclic horizontal arrow rows compatible
    with the two-in two-out rule at every vertex of the row.  For each
    horizontal row and each vin the compatible vout is unique if it exists,
    so T can be accumulated in a single pass over horizontal rows.
    """
    nh = 1 << l1
    h_bits = ((np.arange(nh)[:, None] >> np.arange(l1)) & 1).astype(np.int8)
    # in-arrow count from the horizontal bonds at vertex i:
    # west bond east-pointing (h[i-1] == 1) plus east bond west-pointing (h[i] == 0)
    a = np.roll(h_bits, 1, axis=1) + (1 - h_bits)
    t = np.zeros((nh, nh), dtype=np.int64)
    v_bits = ((np.arange(nh)[:, None] >> np.arange(l1)) & 1).astype(np.int8)
    for vin in range(nh):
        # vertical in-arrows: below pointing north (vin bit) contributes in;
        # required above-bond contribution: south-pointing (bit 0) counts in
        need = 2 - a - v_bits[vin][None, :]
        ok = np.all((need == 0) | (need == 1), axis=1)
        vout_bits = 1 - need[ok]  # bit 1 = north = not pointing into the vertex
        vout = vout_bits @ (1 << np.arange(l1))
        np.add.at(t[:, :], (np.full(vout.shape, vin), vout), 1)
    return t


def transfer_matrix_count(l1: int, l2: int) -> int:
    """Exact ice-state count on the l1 x l2 torus via the row transfer matrix.

    Width is capped at l1 <= 9 (the count stays below 2**63 there and the
    2**l1 x 2**l1 integer matrix powers stay cheap).  Small widths use exact
    Python integers; widths 7..9 use int64 with an overflow guard.
    """
    if l1 > 9:
        raise ValueError("transfer matrix width is capped at 9")
    if l1 < 1 or l2 < 1:
        raise ValueError("sizes must be positive")
    t = _row_transfer_matrix(l1)
    if l1 <= 6:
        # exact python integers; np.dot handles object arrays, matmul does not
        mat = np.array([[int(x) for x in row] for row in t], dtype=object)
        power = np.array([[int(i == j) for j in range(t.shape[0])]
                          for i in range(t.shape[0])], dtype=object)
        for _ in range(l2):
            power = power.dot(mat)
        return int(np.trace(power))
    shadow = t.astype(float)
    power = np.eye(t.shape[0], dtype=np.int64)
    shadow_power = np.eye(t.shape[0])
    for _ in range(l2):
        shadow_power = shadow_power @ shadow
        if shadow_power.max() > 2.0**62:
            raise OverflowError("count exceeds the int64 guard; reduce the size")
        power = power @ t
    return int(np.trace(power))


def enumerate_ice_states(l1: int, l2: int, method: str = "auto") -> int:
    """Number of valid ice states on the l1 x l2 torus.

    method 'brute' checks every bond state, 'transfer' contracts the row
    transfer matrix, 'auto' picks brute force for up to 22 bonds and the
    transfer matrix beyond.
    """
    if method == "auto":
        method = "brute" if 2 * l1 * l2 <= 22 else "transfer"
    if method == "brute":
        return brute_force_count(l1, l2)
    if method == "transfer":
        return transfer_matrix_count(l1, l2)
    raise ValueError("method must be 'auto', 'brute' or 'transfer'")


def enumerate_ice_configurations(l1: int, l2: int) -> list[bytes]:
    """All valid ice states as packed byte ids, by depth-first bond assignment.

    A vertex is checked as soon as its four incident bonds are fixed, which
    prunes hard enough to enumerate the 4 x 4 torus quickly.  The ids match
    IceConfiguration.packed() for square tori.
    """
    n = l1 * l2
    hx = np.zeros((l1, l2), dtype=np.uint8)
    hy = np.zeros((l1, l2), dtype=np.uint8)
    # bond order: vertex by vertex, east bond then north bond
    bonds = []
    for i in range(l1):
        for j in range(l2):
            bonds.append(("x", i, j))
            bonds.append(("y", i, j))
    incident = {}  # vertex -> list of bond indices
    for b, (kind, i, j) in enumerate(bonds):
        if kind == "x":
            verts = [(i, j), ((i + 1) % l1, j)]
        else:
            verts = [(i, j), (i, (j + 1) % l2)]
        for v in verts:
            incident.setdefault(v, []).append(b)
    last_bond_of = {v: max(idx) for v, idx in incident.items()}
    check_after: dict[int, list[tuple[int, int]]] = {}
    for v, b in last_bond_of.items():
        check_after.setdefault(b, []).append(v)

    def adjacent_count(i: int, j: int) -> int:
        return (int(hx[i, j] == 0) + int(hx[(i - 1) % l1, j] == 1)
                + int(hy[i, j] == 0) + int(hy[i, (j - 1) % l2] == 1))

    found: list[bytes] = []

    def assign(b: int) -> None:
        if b == len(bonds):
            found.append(np.packbits(
                np.concatenate([hx.ravel(), hy.ravel()])).tobytes())
            return
        kind, i, j = bonds[b]
        arr = hx if kind == "x" else hy
        for value in (0, 1):
            arr[i, j] = value
            ok = True
            for v in check_after.get(b, ()):
                if adjacent_count(*v) != 2:
                    ok = False
                    break
            if ok:
                assign(b + 1)
        arr[i, j] = 0

    assign(0)
    return found
