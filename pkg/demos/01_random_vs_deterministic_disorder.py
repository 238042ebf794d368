"""Random versus deterministic disorder: two chains, one diffraction pattern.

A coin-flip lattice gas (sites occupied independently with probability 1/2)
and the Rudin-Shapiro 0/1 chain could hardly be more different: the first
has maximal entropy ln 2 per letter, the second is generated by a rigid
recursion and has entropy zero.  Yet both diffract into the same picture, a
Bragg comb of weight 1/4 on the integers over a flat background of height
1/4.  The two structures are homometric; intensity data alone cannot tell
them apart.
"""

import numpy as np

from diffract import (
    SeededRng,
    TwoLetterWeights,
    analytic_bernoulli_spectrum,
    analytic_rs_spectrum,
    bernoulli_chain,
    block_entropy,
    diffraction_fft,
    homometry_compare,
    rudin_shapiro,
    smooth_spectrum,
)

N = 4**8
COIN = TwoLetterWeights(1, 0, 0.5, 0.5)

print(f"chains of length {N}")

rs_spec = diffraction_fft(rudin_shapiro(0, N))
seeds = 40
coin_specs = [diffraction_fft(bernoulli_chain(N, COIN, SeededRng(1, i)))
              for i in range(seeds)]

print("\nBragg peak at k=0 (per-volume units, expected 0.25 N = %.0f):" % (0.25 * N))
print(f"  rudin-shapiro: {rs_spec.values[0]:.1f}")
print(f"  coin flips:    {np.mean([s.values[0] for s in coin_specs]):.1f} "
      f"(mean of {seeds} seeds)")

print("\ndiffuse background (expected 1/4):")
print(f"  rudin-shapiro: {rs_spec.values[1:].mean():.4f}")
print(f"  coin flips:    {np.mean([s.values[1:].mean() for s in coin_specs]):.4f}")

ref = analytic_bernoulli_spectrum(COIN)
rs_ref = analytic_rs_spectrum()
print("\nclosed forms agree exactly: pp "
      f"{ref.bragg_weight(0.0)} == {rs_ref.bragg_weight(0.0)}, "
      f"ac {ref.ac_value(0.5)} == {rs_ref.ac_value(0.5)}")

# how close are the finite-size spectra? compare against the spread of the
# random ensemble itself
mean_values = np.mean([s.values for s in coin_specs], axis=0)
dist = np.mean(np.abs(smooth_spectrum(rs_spec.values, 8)
                      - smooth_spectrum(mean_values, 8)))
pair = [homometry_compare(coin_specs[i], coin_specs[j]).smoothed
        for i in range(8) for j in range(i + 1, 8)]
print(f"\nsmoothed distance rudin-shapiro vs ensemble mean: {dist:.4f}")
print(f"typical seed-to-seed distance:                    {np.mean(pair):.4f}")
print("=> the deterministic chain sits inside the random ensemble's own scatter")

# the entropies, however, are at opposite ends of the range
coin_h = block_entropy(bernoulli_chain(10**6, COIN, SeededRng(9)).weights.real,
                       max_length=9)
rs_h = block_entropy(rudin_shapiro(0, 4**10).weights.real, max_length=9)
print(f"\nblock entropy slope at n=8: coin flips {coin_h.slopes[7]:.3f} "
      f"(ln 2 = {np.log(2):.3f}), rudin-shapiro {rs_h.slopes[7]:.3f} (-> 0)")
print("any reconstruction from intensities must choose between these by "
      "other means, e.g. maximizing entropy")
