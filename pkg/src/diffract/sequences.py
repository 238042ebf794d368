"""Non-interacting point-set models in one and two dimensions.

Deterministic substitution structures (Thue-Morse, Rudin-Shapiro, Fibonacci),
quasiperiodic circle sequences, and independent-disorder chains.  All
generators are pure functions of their parameters and seed, so they can be
called concurrently; memo tables are per call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SeededRng, WeightedComb, comb_from_lattice_weights

__all__ = [
    "TAU",
    "TwoLetterWeights",
    "CircleParams",
    "bernoulli_chain",
    "rudin_shapiro",
    "rudin_shapiro_value",
    "thue_morse",
    "thue_morse_letter",
    "thue_morse_2d",
    "fibonacci_chain",
    "fibonacci_word",
    "circle_sequence",
    "random_interval_tiling",
]

#: golden ratio, the long tile length of the Fibonacci and circle models
TAU = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class TwoLetterWeights:
    """Scattering strengths h1, h2 drawn with probabilities p1, p2."""

    h1: complex = 1.0
    h2: complex = 0.0
    p1: float = 0.5
    p2: float = 0.5

    def __post_init__(self) -> None:
        if not (0.0 <= self.p1 <= 1.0 and 0.0 <= self.p2 <= 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(self.p1 + self.p2 - 1.0) > 1e-12:
            raise ValueError("probabilities must sum to 1")

    @property
    def mean(self) -> complex:
        return self.p1 * self.h1 + self.p2 * self.h2

    @property
    def variance(self) -> float:
        second = self.p1 * abs(self.h1) ** 2 + self.p2 * abs(self.h2) ** 2
        return float(second - abs(self.mean) ** 2)


@dataclass(frozen=True)
class CircleParams:
    """Parameters of the circle sequence: gap n is 1 + xi if frac(n*alpha) < beta."""

    alpha: float
    beta: float
    xi: float
    x0: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie strictly between 0 and 1")


def bernoulli_chain(n: int, w: TwoLetterWeights, rng: SeededRng) -> WeightedComb:
    """Unit-spaced chain with i.i.d. weights h1 (prob p1) or h2."""
    if n < 1:
        raise ValueError("need at least one site")
    gen = rng.generator()
    pick = gen.random(n) < w.p1
    weights = np.where(pick, complex(w.h1), complex(w.h2))
    return comb_from_lattice_weights(weights, 1.0)


# ---------------------------------------------------------------------------
# Rudin-Shapiro
# ---------------------------------------------------------------------------

def rudin_shapiro_value(n: int, _memo: dict | None = None) -> int:
    """Occupation digit of the two-sided Rudin-Shapiro chain at integer n.

    Defined by the branching rule on n = 4m + l:
        value(0) = 1, value(-1) = 0,
        l in {0, 1}: value(n) = value(m),
        l in {2, 3}: value(n) = (1 - (-1)**(m + l + value(m))) / 2.
    Terminates for every integer because |m| strictly decreases toward the
    base points 0 and -1.
    """
    memo = {0: 1, -1: 0} if _memo is None else _memo
    if n in memo:
        return memo[n]
    m, l = divmod(n, 4)
    vm = rudin_shapiro_value(m, memo)
    if l in (0, 1):
        v = vm
    else:
        v = (1 - (-1) ** (m + l + vm)) // 2
    memo[n] = v
    return v


def rudin_shapiro(a: int, b: int) -> WeightedComb:
    """Rudin-Shapiro comb on the integer interval [a, b) with 0/1 weights."""
    if a >= b:
        raise ValueError("need a non-empty interval a < b")
    memo: dict[int, int] = {0: 1, -1: 0}
    if a >= 0:
        vals = _rs_bit_values(a, b)
    else:
        vals = np.array([rudin_shapiro_value(n, memo) for n in range(a, b)], dtype=float)
    return comb_from_lattice_weights(vals, 1.0, origin=(float(a),))


def _rs_bit_values(a: int, b: int) -> np.ndarray:
    """Fast path for n >= 0: value = 1 iff the '11' pair count in binary is even."""
    m = np.arange(a, b, dtype=np.uint64)
    pairs = m & (m >> np.uint64(1))
    parity = np.zeros(m.shape, dtype=np.uint64)
    while pairs.any():
        parity ^= pairs & np.uint64(1)
        pairs >>= np.uint64(1)
    return (1 - parity).astype(float)


# ---------------------------------------------------------------------------
# Thue-Morse, 1D and 2D
# ---------------------------------------------------------------------------

def thue_morse_letter(n: int) -> int:
    """+1 for letter 'a', -1 for 'b' at position n of the fixed point from 'a'."""
    return 1 - 2 * (bin(n).count("1") & 1)


def _tm_signs(n: int) -> np.ndarray:
    m = np.arange(n, dtype=np.uint64)
    parity = np.zeros(n, dtype=np.uint64)
    while m.any():
        parity ^= m & np.uint64(1)
        m >>= np.uint64(1)
    return 1.0 - 2.0 * parity.astype(float)


def thue_morse(n: int, signed: bool = True) -> WeightedComb:
    """First n letters of the Thue-Morse fixed point (a -> ab, b -> ba, seed a).

    signed=True maps a -> +1 and b -> -1; signed=False maps a -> 1 and b -> 0.
    """
    if n < 1:
        raise ValueError("need at least one letter")
    signs = _tm_signs(n)
    weights = signs if signed else (1.0 + signs) / 2.0
    return comb_from_lattice_weights(weights, 1.0)


def thue_morse_2d(k: int, signed: bool = True) -> WeightedComb:
    """2^k x 2^k block of the two-dimensional Thue-Morse structure.

    The plane structure is the Cartesian product of two Thue-Morse chains:
    the letter at (i, j) is a when t(i)*t(j) = +1 and b otherwise, which
    coincides with iterating the 2x2 block substitution.  Weights w(i, j)
    with axis 0 = x and axis 1 = y; signed maps a -> +1, b -> -1.
    """
    if k < 1:
        raise ValueError("substitution depth must be at least 1")
    t = _tm_signs(2**k)
    w = np.outer(t, t)
    if not signed:
        w = (1.0 + w) / 2.0
    return comb_from_lattice_weights(w, 1.0)


# ---------------------------------------------------------------------------
# Fibonacci and circle tilings
# ---------------------------------------------------------------------------

def fibonacci_word(n: int) -> np.ndarray:
    """First n letters of the fixed point of L -> LS, S -> L starting from L.

    Returns a boolean array, True for L (interval of length tau) and False
    for S (interval of length 1).  This is also the fixed point of the
    squared substitution L -> LSL, S -> LS.
    """
    if n < 1:
        raise ValueError("need at least one letter")
    word = [True]
    while len(word) < n:
        word = [x for letter in word for x in ((True, False) if letter else (True,))]
    return np.array(word[:n], dtype=bool)


def fibonacci_chain(n: int) -> WeightedComb:
    """Unit scatterers on the left endpoints of a Fibonacci tiling of n tiles.

    Positions are kept exact as integer pairs (p, q) meaning p + q*tau and
    only converted to floats at the end, so no rounding accumulates.
    """
    word = fibonacci_word(n)
    # gap m is tau for L, 1 for S; position m = (#S among first m gaps) + tau*(#L)
    longs = np.concatenate(([0], np.cumsum(word.astype(np.int64))))
    shorts = np.arange(n + 1, dtype=np.int64) - longs
    positions = shorts[:-1] + TAU * longs[:-1]
    total_span = float(shorts[-1] + TAU * longs[-1])
    return WeightedComb(
        dimension=1,
        points=positions[:, None],
        weights=np.ones(n, dtype=complex),
        extent=np.array([[0.0, total_span]]),
    )


def circle_sequence(n: int, params: CircleParams) -> WeightedComb:
    """Points x_0 .. x_{n-1} with gaps 1 + xi * indicator(frac(m*alpha) in [0, beta)).

    The indicator is evaluated on the fractional part with the boundary rule
    that frac(m*alpha) == 0 counts as inside the interval.  Positions use the
    closed form x_m = x0 + m + xi * (number of fired indicators up to m), so
    they carry no accumulated summation error.  The extent closes the tiling
    with the gap that follows the last point, giving density 1/(1 + beta*xi)
    in the large-n limit.
    """
    if n < 1:
        raise ValueError("need at least one point")
    m = np.arange(1, n + 1, dtype=np.int64)
    frac = np.mod(m * params.alpha, 1.0)
    fired = frac < params.beta  # frac == 0 is inside [0, beta)
    counts = np.concatenate(([0], np.cumsum(fired.astype(np.int64))))
    positions = params.x0 + np.arange(n, dtype=np.int64) + params.xi * counts[:-1]
    span_end = params.x0 + n + params.xi * counts[-1]
    lo = min(params.x0, positions.min())
    hi = max(span_end, positions.max() + 1e-12)
    return WeightedComb(
        dimension=1,
        points=positions[:, None],
        weights=np.ones(n, dtype=complex),
        extent=np.array([[lo, hi]]),
    )


def random_interval_tiling(n: int, p: float, rng: SeededRng) -> WeightedComb:
    """Left endpoints of n i.i.d. tiles of length tau (prob p) or 1."""
    if n < 1:
        raise ValueError("need at least one tile")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    gen = rng.generator()
    long_tile = gen.random(n) < p
    longs = np.concatenate(([0], np.cumsum(long_tile.astype(np.int64))))
    shorts = np.arange(n + 1, dtype=np.int64) - longs
    positions = shorts[:-1] + TAU * longs[:-1]
    total_span = float(shorts[-1] + TAU * longs[-1])
    return WeightedComb(
        dimension=1,
        points=positions[:, None],
        weights=np.ones(n, dtype=complex),
        extent=np.array([[0.0, total_span]]),
    )
