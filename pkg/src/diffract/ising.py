"""Anisotropic Ising lattice gas on a square torus.

Atoms (weight 1) and holes (weight 0) occupy the sites of a periodic square
lattice; spins s = 2n - 1 interact through dimensionless couplings K1, K2
along the two axes, H/kT = -sum(K1 s s' + K2 s s').  Sampling is single-site
Metropolis with a checkerboard sweep order, which is exact and vectorizes
well.  A brute-force Boltzmann enumerator on tiny tori serves as the oracle
for the sampler.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import SeededRng, WeightedComb, comb_from_lattice_weights

__all__ = [
    "IsingParams",
    "critical_condition",
    "IsingSampler",
    "ising_sample",
    "ising_configurations",
    "occupation_comb",
    "ising_exact_pair_correlations",
    "ExactIsingStats",
]


def critical_condition(k1: float, k2: float) -> float:
    """(sinh(2 K1) sinh(2 K2))^-1; greater than 1 above the transition,
    less than 1 below, exactly 1 on the critical line."""
    if k1 <= 0 or k2 <= 0:
        raise ValueError("couplings must be positive")
    return 1.0 / (math.sinh(2.0 * k1) * math.sinh(2.0 * k2))


@dataclass(frozen=True)
class IsingParams:
    """Lattice sizes, couplings, sweep counts and randomness of one MC run.

    Sizes must be even so the checkerboard decomposition tiles the torus.
    `sweeps_between` is the decorrelation interval between measurement
    configurations.  With restrict_positive=True the run starts from the
    all-up state and is folded back into the positive-magnetization sector
    after every sweep; use this for ordered-phase density measurements.
    """

    shape: tuple[int, int]
    k1: float
    k2: float
    rng: SeededRng
    equilibration_sweeps: int = 1000
    sweeps_between: int = 10
    restrict_positive: bool = False

    def __post_init__(self) -> None:
        l1, l2 = self.shape
        if l1 < 2 or l2 < 2 or l1 % 2 or l2 % 2:
            raise ValueError("lattice sides must be even and at least 2")
        if self.k1 <= 0 or self.k2 <= 0:
            raise ValueError("couplings must be positive")


class IsingSampler:
    """Checkerboard Metropolis sampler; owns its state, single threaded.

    Run several instances with distinct rng streams for parallel ensembles.
    """

    def __init__(self, params: IsingParams):
        self.params = params
        self._gen = params.rng.generator()
        l1, l2 = params.shape
        ii, jj = np.indices(params.shape)
        self._color = (ii + jj) % 2
        if params.restrict_positive:
            self.spins = np.ones(params.shape, dtype=np.int8)
        else:
            self.spins = self._gen.choice(np.array([-1, 1], dtype=np.int8),
                                          size=params.shape)
        self._equilibrated = False

    def sweep(self, count: int = 1) -> None:
        k1, k2 = self.params.k1, self.params.k2
        s = self.spins
        for _ in range(count):
            for color in (0, 1):
                field = (k1 * (np.roll(s, 1, axis=0) + np.roll(s, -1, axis=0))
                         + k2 * (np.roll(s, 1, axis=1) + np.roll(s, -1, axis=1)))
                delta = 2.0 * s * field
                # attempt each site of the color with probability 1/2: a full
                # synchronous update becomes a near-deterministic global
                # negation when couplings are weak (acceptance -> 1), which
                # freezes the initial correlation pattern instead of mixing
                attempt = self._gen.random(s.shape) < 0.5
                u = self._gen.random(s.shape)
                # u < 1 always, so clamping at delta = 0 accepts every downhill move
                flip = ((self._color == color) & attempt
                        & (u < np.exp(-np.maximum(delta, 0.0))))
                s[flip] *= -1
            if self.params.restrict_positive and s.sum() < 0:
                np.negative(s, out=s)

    def occupations(self, count: int) -> Iterator[np.ndarray]:
        """Yield `count` decorrelated occupation arrays n = (1 + s)/2."""
        if not self._equilibrated:
            self.sweep(self.params.equilibration_sweeps)
            self._equilibrated = True
        for _ in range(count):
            self.sweep(self.params.sweeps_between)
            yield ((1 + self.spins) // 2).astype(np.int8)

    def energy(self) -> float:
        """Current H/kT of the configuration."""
        s = self.spins
        return float(-(self.params.k1 * np.sum(s * np.roll(s, -1, axis=0))
                       + self.params.k2 * np.sum(s * np.roll(s, -1, axis=1))))


def occupation_comb(occupation: np.ndarray) -> WeightedComb:
    """Wrap a 0/1 occupation array as a periodic unit-spaced comb."""
    return comb_from_lattice_weights(occupation.astype(float), 1.0, periodic=True)


def ising_configurations(params: IsingParams, count: int) -> Iterator[np.ndarray]:
    """Occupation arrays from a fresh sampler; bit-reproducible per params."""
    yield from IsingSampler(params).occupations(count)


def ising_sample(params: IsingParams) -> WeightedComb:
    """One equilibrated occupation configuration as a weighted comb."""
    occ = next(iter(ising_configurations(params, 1)))
    return occupation_comb(occ)


@dataclass(frozen=True)
class ExactIsingStats:
    """Boltzmann averages from complete enumeration of a tiny torus."""

    shape: tuple[int, int]
    k1: float
    k2: float
    energy: float            # <H/kT>
    energy_var: float
    nn_spin_x: float         # <s(r) s(r + e1)>, site averaged
    nn_spin_y: float
    occupation: float        # <n>
    pair_occupation: dict    # offset (dz1, dz2) -> <n(r) n(r + dz)>


def ising_exact_pair_correlations(l1: int, l2: int, k1: float, k2: float) -> ExactIsingStats:
    """Exact averages by summing over all 2**(l1*l2) spin states.

    Sizes are capped at l1 * l2 <= 16.  Used as the oracle for the
    Metropolis sampler.
    """
    n = l1 * l2
    if n > 16:
        raise ValueError("exact enumeration is capped at 16 sites")
    if k1 < 0 or k2 < 0:
        raise ValueError("couplings must be nonnegative")
    states = np.arange(2**n, dtype=np.uint32)
    bits = ((states[:, None] >> np.arange(n, dtype=np.uint32)) & 1).astype(np.int8)
    spins = (2 * bits - 1).reshape(-1, l1, l2)
    nn_x = np.einsum("sij,sij->s", spins, np.roll(spins, -1, axis=1)).astype(float)
    nn_y = np.einsum("sij,sij->s", spins, np.roll(spins, -1, axis=2)).astype(float)
    energies = -(k1 * nn_x + k2 * nn_y)
    logw = -energies
    logw -= logw.max()
    w = np.exp(logw)
    w /= w.sum()
    occ = (spins + 1) // 2
    pair = {}
    for dz1 in range(l1):
        for dz2 in range(l2):
            shifted = np.roll(np.roll(occ, -dz1, axis=1), -dz2, axis=2)
            corr = np.einsum("sij,sij->s", occ, shifted).astype(float) / n
            pair[(dz1, dz2)] = float(np.dot(w, corr))
    energy = float(np.dot(w, energies))
    return ExactIsingStats(
        shape=(l1, l2), k1=k1, k2=k2,
        energy=energy,
        energy_var=float(np.dot(w, energies**2) - energy**2),
        nn_spin_x=float(np.dot(w, nn_x) / n),
        nn_spin_y=float(np.dot(w, nn_y) / n),
        occupation=float(np.dot(w, occ.reshape(len(states), -1).mean(axis=1))),
        pair_occupation=pair,
    )
