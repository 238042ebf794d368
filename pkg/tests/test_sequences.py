"""Sequence generators against hand-derived and brute-force oracles."""

import numpy as np
import pytest

from diffract import (
    SeededRng,
    TAU,
    CircleParams,
    TwoLetterWeights,
    bernoulli_chain,
    circle_sequence,
    density,
    fibonacci_chain,
    fibonacci_word,
    random_interval_tiling,
    rudin_shapiro,
    rudin_shapiro_value,
    thue_morse,
    thue_morse_2d,
    thue_morse_letter,
)

GOLDEN_ROTATION = (np.sqrt(5) - 1) / 2


# ---------------------------------------------------------------------------
# two-letter weights and the Bernoulli chain
# ---------------------------------------------------------------------------

def test_two_letter_moments():
    w = TwoLetterWeights(1, 0, 0.5, 0.5)
    assert abs(w.mean) ** 2 == pytest.approx(0.25)
    assert w.variance == pytest.approx(0.25)


def test_two_letter_validation():
    with pytest.raises(ValueError):
        TwoLetterWeights(1, 0, 0.7, 0.7)
    with pytest.raises(ValueError):
        TwoLetterWeights(1, 0, -0.1, 1.1)


def test_bernoulli_degenerate_probability():
    comb = bernoulli_chain(64, TwoLetterWeights(2.5, 0, 1.0, 0.0), SeededRng(0))
    assert np.all(comb.weights == 2.5)


def test_bernoulli_sample_mean():
    comb = bernoulli_chain(10**5, TwoLetterWeights(1, 0, 0.5, 0.5), SeededRng(11))
    assert np.mean(comb.weights.real) == pytest.approx(0.5, abs=0.01)


def test_bernoulli_reproducible():
    w = TwoLetterWeights(1, 0, 0.3, 0.7)
    a = bernoulli_chain(1000, w, SeededRng(5, 2))
    b = bernoulli_chain(1000, w, SeededRng(5, 2))
    np.testing.assert_array_equal(a.weights, b.weights)


# ---------------------------------------------------------------------------
# Rudin-Shapiro
# ---------------------------------------------------------------------------

def test_rs_base_values():
    assert rudin_shapiro_value(0) == 1
    assert rudin_shapiro_value(-1) == 0


def test_rs_first_values_by_hand():
    # n=1 falls in the 4m+1 branch with m=0; n=2,3 use the sign rule
    assert rudin_shapiro_value(1) == 1
    assert rudin_shapiro_value(2) == 1
    assert rudin_shapiro_value(3) == 0


def _rs_naive(n):
    """Unmemoized reference implementation of the branching rule."""
    if n == 0:
        return 1
    if n == -1:
        return 0
    m, l = divmod(n, 4)
    if l in (0, 1):
        return _rs_naive(m)
    return (1 - (-1) ** (m + l + _rs_naive(m))) // 2


def test_rs_memoized_matches_naive_on_two_sided_range():
    lo, hi = -(4**6), 4**6
    comb = rudin_shapiro(lo, hi)
    expected = np.array([_rs_naive(n) for n in range(lo, hi)], dtype=float)
    np.testing.assert_array_equal(comb.weights.real, expected)


def test_rs_density_of_ones():
    comb = rudin_shapiro(0, 4**8)
    dens = np.mean(comb.weights.real)
    assert dens == pytest.approx(0.5, abs=0.01)
    # frozen exact count: 2**15 + 2**7 ones in [0, 4**8)
    assert np.sum(comb.weights.real) == 32896


def test_rs_interval_validation():
    with pytest.raises(ValueError):
        rudin_shapiro(3, 3)


# ---------------------------------------------------------------------------
# Thue-Morse
# ---------------------------------------------------------------------------

def test_tm_first_eight_letters():
    # a -> ab -> abba -> abbabaab, signed a=+1, b=-1
    comb = thue_morse(8)
    np.testing.assert_array_equal(comb.weights.real, [1, -1, -1, 1, -1, 1, 1, -1])


def test_tm_power_of_two_positions():
    for k in range(12):
        assert thue_morse_letter(2**k) == -1


def test_tm_mean_vanishes_on_power_of_four():
    comb = thue_morse(2**16)
    assert np.sum(comb.weights.real) == 0.0


def test_tm_unsigned_alphabet():
    comb = thue_morse(8, signed=False)
    np.testing.assert_array_equal(comb.weights.real, [1, 0, 0, 1, 0, 1, 1, 0])


def _tm2d_by_block_substitution(depth):
    """Iterate the 2x2 block rule directly; orientation (x, y) from the
    lower-left corner, a=+1, b=-1."""
    block = np.array([[1]], dtype=int)  # seed letter a at the origin
    for _ in range(depth):
        size = block.shape[0]
        new = np.zeros((2 * size, 2 * size), dtype=int)
        for dx in (0, 1):
            for dy in (0, 1):
                sign = (-1) ** (dx + dy)
                new[dx::2, dy::2] = sign * block
        block = new
    return block


def test_tm2d_matches_block_substitution():
    for depth in range(1, 7):
        comb = thue_morse_2d(depth)
        expected = _tm2d_by_block_substitution(depth)
        np.testing.assert_array_equal(comb.lattice_weights().real, expected)


def test_tm2d_depth_one_block():
    # display orientation (top row first) is [[b, a], [a, b]]
    w = thue_morse_2d(1).lattice_weights().real
    assert w[0, 0] == 1 and w[1, 1] == 1
    assert w[1, 0] == -1 and w[0, 1] == -1


def test_tm2d_is_outer_product():
    for depth in (3, 6):
        w = thue_morse_2d(depth).lattice_weights().real
        t = thue_morse(2**depth).weights.real
        np.testing.assert_array_equal(w, np.outer(t, t))


def test_tm2d_row_sums_vanish_even_depth():
    w = thue_morse_2d(4).lattice_weights().real
    np.testing.assert_array_equal(w.sum(axis=1), np.zeros(16))


# ---------------------------------------------------------------------------
# Fibonacci chain
# ---------------------------------------------------------------------------

def test_fibonacci_single_point():
    comb = fibonacci_chain(1)
    assert len(comb) == 1
    assert comb.points[0, 0] == 0.0


def test_fibonacci_first_gaps():
    comb = fibonacci_chain(8)
    gaps = np.diff(comb.points[:, 0])
    expected = [TAU, 1, TAU, TAU, 1, TAU, 1]
    np.testing.assert_allclose(gaps, expected, atol=1e-12)


def test_fibonacci_letter_frequencies():
    # substitution matrix [[1,1],[1,0]]: long/short count ratio tends to tau
    word = fibonacci_word(100000)
    longs = np.count_nonzero(word)
    assert longs / (len(word) - longs) == pytest.approx(TAU, abs=1e-4)


def test_fibonacci_density():
    # with the long tile (length tau) at frequency tau/(1+tau), the point
    # density is (1+tau)/(2+tau); derived from the substitution eigenvector
    n = 50000
    comb = fibonacci_chain(n)
    expected = (1 + TAU) / (2 + TAU)
    assert abs(density(comb) - expected) < 2 / n


def test_fibonacci_positions_exact_integer_pairs():
    # positions are p + q*tau with integer p, q; spot check against floats
    comb = fibonacci_chain(1000)
    word = fibonacci_word(1000)
    longs = np.cumsum(word[:-1].astype(int))
    shorts = np.arange(1, 1000) - longs
    np.testing.assert_allclose(comb.points[1:, 0], shorts + TAU * longs,
                               rtol=1e-15)


# ---------------------------------------------------------------------------
# circle sequence
# ---------------------------------------------------------------------------

def test_circle_tiny_beta_all_unit_gaps():
    params = CircleParams(alpha=GOLDEN_ROTATION, beta=1e-9, xi=TAU - 1)
    comb = circle_sequence(1000, params)
    np.testing.assert_allclose(np.diff(comb.points[:, 0]), np.ones(999))


def test_circle_gap_multiset():
    params = CircleParams(alpha=GOLDEN_ROTATION, beta=2 - TAU, xi=TAU - 1)
    comb = circle_sequence(5000, params)
    gaps = np.diff(comb.points[:, 0])
    assert set(np.round(gaps, 9)) <= {1.0, round(TAU, 9)}


def test_circle_density_golden_parameters():
    n = 100000
    params = CircleParams(alpha=GOLDEN_ROTATION, beta=2 - TAU, xi=TAU - 1)
    assert abs(density(circle_sequence(n, params)) - TAU / 2) < 2 / n


def test_circle_closed_form_matches_accumulated_gaps():
    params = CircleParams(alpha=np.sqrt(2) - 1, beta=0.4, xi=0.77, x0=0.25)
    n = 10000
    comb = circle_sequence(n, params)
    x = params.x0
    for m in range(1, n):
        x += 1 + params.xi * (np.mod(m * params.alpha, 1.0) < params.beta)
        assert abs(comb.points[m, 0] - x) <= 1e-9 * max(1.0, abs(x))


def test_circle_beta_validation():
    with pytest.raises(ValueError):
        CircleParams(alpha=0.3, beta=1.5, xi=0.5)


# ---------------------------------------------------------------------------
# random interval tiling
# ---------------------------------------------------------------------------

def test_tiling_degenerate_probabilities():
    a = random_interval_tiling(100, 0.0, SeededRng(1))
    np.testing.assert_allclose(a.points[:, 0], np.arange(100))
    b = random_interval_tiling(100, 1.0, SeededRng(1))
    np.testing.assert_allclose(b.points[:, 0], np.arange(100) * TAU)


def test_tiling_long_tile_frequency():
    n, p = 40000, 0.3
    comb = random_interval_tiling(n, p, SeededRng(9))
    gaps = np.diff(comb.points[:, 0])
    freq = np.mean(np.abs(gaps - TAU) < 1e-9)
    assert abs(freq - p) < 3 * np.sqrt(p * (1 - p) / n)


def test_tiling_reproducible():
    a = random_interval_tiling(500, 0.4, SeededRng(21, 3))
    b = random_interval_tiling(500, 0.4, SeededRng(21, 3))
    np.testing.assert_array_equal(a.points, b.points)
