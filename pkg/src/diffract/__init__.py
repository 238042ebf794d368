"""diffract: kinematical diffraction of ordered and disordered point sets.

Generators for substitution sequences, quasiperiodic tilings, lattice gases
and square ice, numerical diffraction by FFT or direct sums, and analysis
tools (scaling exponents, symmetry scores, homometry distances, block
entropies) with closed-form reference spectra to check them against.
"""

from .core import (
    AutocorrelationTable,
    SeededRng,
    SpectrumGrid,
    WeightedComb,
    comb_from_lattice_weights,
    density,
)
from .sequences import (
    TAU,
    CircleParams,
    TwoLetterWeights,
    bernoulli_chain,
    circle_sequence,
    fibonacci_chain,
    fibonacci_word,
    random_interval_tiling,
    rudin_shapiro,
    rudin_shapiro_value,
    thue_morse,
    thue_morse_2d,
    thue_morse_letter,
)
from .spectra import (
    DiffractionError,
    autocorrelation,
    diffraction_direct,
    diffraction_fft,
    grid_cut,
    spectrum_from_autocorrelation,
)
from .analytic import (
    AnalyticSpectrum,
    analytic_bernoulli_spectrum,
    analytic_ising_pp,
    analytic_rs_spectrum,
    analytic_ice_spectrum,
    bernoulli_ice_background,
    ice_autocorrelation_analytic,
    ice_bragg,
)
from .ising import (
    ExactIsingStats,
    IsingParams,
    IsingSampler,
    critical_condition,
    ising_configurations,
    ising_exact_pair_correlations,
    ising_sample,
    occupation_comb,
)
from .ice import (
    LIEB_ENTROPY,
    IceConfiguration,
    IceLoopSampler,
    IceRulesReport,
    bernoulli_hydrogens,
    brute_force_count,
    enumerate_ice_configurations,
    enumerate_ice_states,
    ice_configurations,
    ice_rules_check,
    ice_sample,
    ice_to_comb,
    transfer_matrix_count,
)
from .analysis import (
    BlockEntropy,
    HomometryReport,
    ScalingFit,
    block_entropy,
    bragg_mask,
    bragg_only,
    bragg_weight,
    fit_power_law,
    homometry_compare,
    peak_scaling,
    smooth_spectrum,
    symmetry_score,
)

__version__ = "0.1.0"
