"""Electro-optic entangled-source simulator.

Steady-state output spectra, covariance matrices, squeezing, entanglement
metrics and channel figures of merit for cavity electro-optic three-mode
and 2N-mode frequency-comb systems.
"""

__version__ = "0.1.0"

from .gaussian import (
    CovarianceMatrix,
    SqueezingResult,
    SymplecticPair,
    entropy_h,
    purity,
    reduce,
    squeezing_ellipse,
    symplectic_pair,
    wigner_density,
)
from .threemode import (
    ModeLoss,
    MicrowaveNoise,
    ScatteringMatrix,
    Stability,
    ThreeModeParams,
    bandwidth,
    covariance,
    output_spectra,
    scattering_matrix,
    solve_scattering_numeric,
    stability,
    thermal_occupation,
)
from .comb import (
    CombParams,
    comb_bandwidths,
    comb_covariance,
    comb_scattering_resonance,
    comb_spectra,
    comb_squeezing,
)
from .metrics import (
    MetricsResult,
    coherent_information,
    discord,
    log_negativity,
    pair_metrics,
    schwarz_epsilon,
)
from .protocols import (
    ChannelSpec,
    InputState,
    classical_fidelity_limit,
    capacities_from_variances,
    dense_coding_capacities,
    teleport_fidelity_cat,
    teleport_fidelity_gaussian,
)
from .errors import (
    DomainError,
    EOCombError,
    NonUnimodalSpectrumError,
    SingularSystemError,
    UnphysicalStateError,
    UnstableSystemError,
)
