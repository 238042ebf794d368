"""Anisotropic Ising lattice gas: the Bragg part hides the true symmetry.

Atoms and holes on the square lattice with couplings K1 = 0.35 along x and
K2 = 0.1 along y (above the transition).  The pure point part of the
spectrum is 1/4 on the integer lattice for any couplings, i.e. fourfold
symmetric, although the structure is strongly anisotropic.  Only the
diffuse background, which concentrates around the Bragg positions, shows
the real twofold symmetry.

Writes: output/ising_spectrum.pgm
"""

from pathlib import Path

import numpy as np

from diffract import (
    IsingParams,
    SeededRng,
    SpectrumGrid,
    bragg_only,
    critical_condition,
    diffraction_fft,
    ising_configurations,
    occupation_comb,
    symmetry_score,
)
from diffract.fileio import write_pgm

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

K1, K2, size, count = 0.35, 0.1, 128, 100
print(f"K1 = {K1}, K2 = {K2}: critical condition "
      f"(sinh 2K1 sinh 2K2)^-1 = {critical_condition(K1, K2):.3f} "
      f"(> 1, above the transition)")

params = IsingParams(shape=(size, size), k1=K1, k2=K2, rng=SeededRng(31),
                     equilibration_sweeps=600, sweeps_between=5)
acc = np.zeros((size, size))
rho = 0.0
for occ in ising_configurations(params, count):
    acc += diffraction_fft(occupation_comb(occ)).values
    rho += occ.mean()
spec = SpectrumGrid(dimension=2, dk=(1 / size, 1 / size), values=acc / count,
                    volume=float(size * size))
rho /= count

print(f"density rho = {rho:.4f}; Bragg bin I(0,0)/V = "
      f"{spec.values[0, 0] / spec.volume:.4f} (pure point weight, expect 1/4)")

full = symmetry_score(spec, "swap")
bragg = symmetry_score(bragg_only(spec), "swap")
print(f"axis-swap asymmetry score, Bragg part only: {bragg:.4f}")
print(f"axis-swap asymmetry score, full spectrum:   {full:.4f}")
print("=> judging symmetry from the Bragg peaks alone is misleading; the "
      "diffuse part carries the anisotropy")

write_pgm(out / "ising_spectrum.pgm", spec.values, mode="log")
print(f"wrote {out/'ising_spectrum.pgm'} (background streaks along the "
      f"weakly coupled axis)")
