"""Square ice: rules, loop sampler, exact counts, atomic combs."""

import numpy as np
import pytest

from diffract import (
    LIEB_ENTROPY,
    IceConfiguration,
    IceLoopSampler,
    SeededRng,
    bernoulli_hydrogens,
    brute_force_count,
    density,
    enumerate_ice_configurations,
    enumerate_ice_states,
    ice_configurations,
    ice_rules_check,
    ice_sample,
    ice_to_comb,
    transfer_matrix_count,
)


def _ferroelectric(size):
    zeros = np.zeros((size, size), dtype=np.uint8)
    return IceConfiguration(size=size, hx=zeros, hy=zeros.copy())


def test_ferroelectric_state_is_valid():
    report = ice_rules_check(_ferroelectric(6))
    assert report.rule1_violations == 0
    assert report.rule2_violations == 0
    assert report.valid


def test_single_arrow_flip_breaks_two_vertices():
    cfg = _ferroelectric(6)
    hx = np.array(cfg.hx)
    hx[2, 3] ^= 1
    flipped = IceConfiguration(size=6, hx=hx, hy=cfg.hy)
    assert ice_rules_check(flipped).rule1_violations == 2


def test_bernoulli_hydrogens_rule_statistics():
    # 6 of the 16 arrow states at a vertex are two-in two-out
    total, good = 0, 0
    for i in range(40):
        cfg = bernoulli_hydrogens(10, SeededRng(1, i))
        counts = cfg.adjacency_counts()
        good += int(np.count_nonzero(counts == 2))
        total += counts.size
        assert ice_rules_check(cfg).rule2_violations == 0
    frac = good / total
    sigma = np.sqrt((3 / 8) * (5 / 8) / total)
    assert abs(frac - 3 / 8) < 3 * sigma


def test_bernoulli_hydrogens_bond_marginal():
    cfg = bernoulli_hydrogens(64, SeededRng(3))
    marginal = (np.mean(cfg.hx) + np.mean(cfg.hy)) / 2
    assert abs(marginal - 0.5) < 3 * np.sqrt(0.25 / (2 * 64 * 64))


def test_loop_moves_preserve_ice_rule():
    sampler = IceLoopSampler(8, SeededRng(11))
    for _ in range(200):
        sampler.loop_move()
    assert ice_rules_check(sampler.configuration()).valid


def test_sampled_configurations_always_valid():
    for cfg in ice_configurations(6, 25, SeededRng(8), equilibration_sweeps=8,
                                  sweeps_between=1):
        assert ice_rules_check(cfg).valid


def test_sampler_reproducible():
    a = [c.packed() for c in ice_configurations(4, 5, SeededRng(2, 7))]
    b = [c.packed() for c in ice_configurations(4, 5, SeededRng(2, 7))]
    assert a == b


def test_sampler_size_validation():
    with pytest.raises(ValueError):
        IceLoopSampler(5, SeededRng(0))


# ---------------------------------------------------------------------------
# exact counts: two independent methods agree; values frozen from both
# ---------------------------------------------------------------------------

def test_count_one_by_one_torus():
    assert brute_force_count(1, 1) == 4
    assert transfer_matrix_count(1, 1) == 4


def test_counts_brute_equals_transfer():
    for l1, l2 in [(2, 2), (2, 3), (3, 2), (3, 3), (2, 5)]:
        assert brute_force_count(l1, l2) == transfer_matrix_count(l1, l2)


def test_count_two_by_two_value():
    assert enumerate_ice_states(2, 2) == 18


def test_count_four_by_four_dfs_equals_transfer():
    configs = enumerate_ice_configurations(4, 4)
    assert len(configs) == transfer_matrix_count(4, 4) == 2970
    assert len(set(configs)) == len(configs)


def test_enumerated_states_are_valid():
    for packed in enumerate_ice_configurations(2, 2):
        bits = np.unpackbits(np.frombuffer(packed, dtype=np.uint8))[:8]
        cfg = IceConfiguration(size=2, hx=bits[:4].reshape(2, 2),
                               hy=bits[4:].reshape(2, 2))
        assert ice_rules_check(cfg).valid


def test_transfer_matrix_rectangular_symmetry():
    assert transfer_matrix_count(4, 6) == transfer_matrix_count(6, 4)


def test_entropy_trend_decreases_toward_lieb():
    values = []
    for size in range(2, 9):
        count = transfer_matrix_count(size, size)
        values.append(np.log(count) / size**2)
    assert all(a > b for a, b in zip(values, values[1:]))
    assert all(v > LIEB_ENTROPY for v in values)
    assert values[-1] - LIEB_ENTROPY < 0.02


def test_size_caps():
    with pytest.raises(ValueError):
        brute_force_count(4, 4)
    with pytest.raises(ValueError):
        transfer_matrix_count(10, 4)


def test_uniformity_short_run():
    states = enumerate_ice_configurations(4, 4)
    index = {}
    for i, packed in enumerate(states):
        bits = np.unpackbits(np.frombuffer(packed, dtype=np.uint8))[:32]
        index[bytes(bits.tolist())] = i
    sampler = IceLoopSampler(4, SeededRng(31))
    sampler.sweep(32)
    counts = np.zeros(len(states), dtype=np.int64)
    nsamp = 120000
    for _ in range(nsamp):
        for _ in range(4):
            sampler.loop_move()
        counts[index[sampler.state_bytes()]] += 1
    expected = nsamp / len(states)
    chi2 = float(np.sum((counts - expected) ** 2 / expected))
    dof = len(states) - 1
    # p > 0.001 <=> chi2 below the far tail; for dof=2969 that is ~3225
    assert chi2 < dof + 4.8 * np.sqrt(2 * dof)
    assert np.count_nonzero(counts) == len(states)


# ---------------------------------------------------------------------------
# atomic structure
# ---------------------------------------------------------------------------

def test_ice_comb_point_count_and_metadata():
    cfg = ice_sample(8, SeededRng(5), equilibration_sweeps=8)
    comb = ice_to_comb(cfg, 0.7, 1.0)
    assert len(comb) == 3 * 8 * 8
    assert comb.periodic
    assert comb.lattice_spacing == pytest.approx(1 / 3)
    assert comb.volume == pytest.approx(64.0)


def test_ice_comb_zero_hydrogen_strength_is_square_lattice():
    cfg = ice_sample(6, SeededRng(6), equilibration_sweeps=8)
    comb = ice_to_comb(cfg, 1.0, 0.0)
    occupied = comb.points[comb.weights != 0]
    assert occupied.shape == (36, 2)
    np.testing.assert_allclose(occupied, np.rint(occupied), atol=1e-12)
    assert density(comb) == pytest.approx(1.0)


def test_ice_comb_difference_vectors_on_third_lattice():
    cfg = ice_sample(4, SeededRng(7), equilibration_sweeps=8)
    comb = ice_to_comb(cfg, 1.0, 1.0)
    from diffract import autocorrelation

    table = autocorrelation(comb, radius=1.5, periodic=True)
    scaled = np.asarray(table.offsets) * 3.0
    np.testing.assert_allclose(scaled, np.rint(scaled), atol=1e-9)
