"""Reading spectral type off finite-size scaling.

How a spectrum bin grows with the system size N separates the three kinds
of spectra: Bragg peaks grow like N, a diffuse background stays O(1), and
singular continuous intensity grows like N^alpha with 0 < alpha < 1.  The
signed Thue-Morse chain is the classic singular continuous case; at
k = 1/3 its intensity obeys the exact doubling relation I(4N) = (9/4) I(N),
so alpha = log2(3/2) = 0.58496.

The same tiles (lengths 1 and tau) arranged differently show the whole
range: random order gives a flat background, Fibonacci order gives a
quasicrystal full of Bragg peaks, and the circle-sequence construction
interpolates.
"""

import numpy as np

from diffract import (
    SeededRng,
    TAU,
    CircleParams,
    TwoLetterWeights,
    bernoulli_chain,
    circle_sequence,
    comb_from_lattice_weights,
    diffraction_direct,
    fibonacci_chain,
    fit_power_law,
    peak_scaling,
    thue_morse,
)

print("scaling exponents at a fixed wavevector")
print("---------------------------------------")

lattice = peak_scaling(lambda n: comb_from_lattice_weights(np.ones(n)), 0.0,
                       [2**m for m in range(9, 14)])
print(f"periodic lattice, k=0:            alpha = {lattice.alpha:+.3f}  "
      f"({lattice.classification})")

coin = peak_scaling(
    lambda n, rng: bernoulli_chain(n, TwoLetterWeights(1, 0, 0.5, 0.5), rng),
    0.2345, [2**m for m in range(10, 16)], realizations=50, rng=SeededRng(3))
print(f"coin-flip chain, generic k:       alpha = {coin.alpha:+.3f}  "
      f"({coin.classification})")

tm = peak_scaling(lambda n: thue_morse(n), 1 / 3, [4**m for m in range(4, 9)])
print(f"signed thue-morse, k=1/3:         alpha = {tm.alpha:+.5f}  "
      f"({tm.classification}, exact log2(3/2) = {np.log2(1.5):.5f})")
print(f"  note: {tm.caveat}")

print("\nsame tiles, three kinds of order")
print("--------------------------------")
sizes = [1597, 4181, 10946, 28657, 75025]
intens = [diffraction_direct(fibonacci_chain(n), TAU - 1) for n in sizes]
fib_fit = fit_power_law(sizes, intens)
print(f"fibonacci at k = tau - 1:         alpha = {fib_fit.alpha:+.3f}  "
      f"(Bragg-like: quasicrystal)")

generic = CircleParams(alpha=np.sqrt(2) - 1, beta=2 - TAU, xi=TAU - 1)
sizes = [2378, 5741, 13860, 33461, 80782]
worst_alpha, worst_k = 0.0, None
for k in np.arange(1, 33) / 16.0:
    fit = fit_power_law(sizes, [diffraction_direct(circle_sequence(n, generic),
                                                   float(k)) for n in sizes])
    if fit.alpha - 2 * fit.alpha_stderr > worst_alpha:
        worst_alpha = fit.alpha - 2 * fit.alpha_stderr
        worst_k = k
print(f"circle sequence (generic alpha):  steepest significant scaling "
      f"{worst_alpha:.3f} at k = {worst_k}")
print("  no Bragg-like bin away from k = 0: the order is too weak for pure "
      "point peaks, the disorder too weak for a flat background")
