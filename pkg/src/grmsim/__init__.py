"""Simulation toolkit for multiphoton resonances and chiral photon transfer
in the generalized Rabi model."""

__version__ = "0.1.0"

from .basis import (
    BareLabel,
    BasisSpec,
    ModeBasisSpec,
    OperatorMatrix,
    annihilation_matrix,
    bare_state_vector,
    fock_state_vector,
    site_operator,
)
from .models import (
    JunctionParams,
    ModelParams,
    build_grm,
    build_grm_rwa,
    build_hopping_only,
    build_junction,
    parity_operator,
)
from .perturbation import (
    DegenerateDenominatorError,
    ResonanceResult,
    ResonanceSpec,
    bare_energy,
    coupling_elements,
    effective_coupling,
    effective_two_level,
    frequency_coefficients,
    path_sum_coupling,
    perturbative_resonance,
    resonant_frequency,
    resonant_frequency_from_stark,
    stark_shift,
)
from .spectrum import (
    AmbiguousLevelError,
    ConvergenceError,
    CrossingResult,
    ErrorGridCell,
    ScanWindowError,
    SpectrumResult,
    converge_cutoff,
    eigendecompose,
    error_grid,
    find_avoided_crossing,
)
from .dynamics import (
    ChiralityReport,
    CutoffError,
    HorizonError,
    Timescales,
    Trajectory,
    TransitionReport,
    chirality_diagnostic,
    chirality_transition_report,
    count_excitation_peaks,
    evolve,
    hopping_from_mu,
    junction_experiment,
    norm_tail,
    rabi_fidelity,
)
