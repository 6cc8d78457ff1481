"""Many-body coherence of identical particles with mixed internal states."""
from ._kernels import BACKEND
from .engine import (
    CoherenceResult,
    coherence_asymptote,
    coherence_closed_form,
    coherence_exact_product,
    coherence_faint,
    coherence_from_external,
    coherence_maximally_mixed,
    coherence_oracle,
    coherence_reduced,
    coherence_spectral,
    coherence_spectral_series,
    h_complete,
    oracle_power_sum,
)
from .errors import (
    CoherenceError,
    DiscretizationError,
    DomainError,
    OrderError,
    RegimeError,
    SizeLimitError,
    ValidationError,
)
from .external import ExternalState, Statistics, build_external, symmetric_projection
from .photon import PhotonConfig, admissible_jitter, faint_jitter_approx, photon_coherence, photon_spectrum
from .scaled import ScaledReal
from .states import DensityMatrix, Spectrum, eigen_spectrum, faint_decomposition, product_state
from .symgroup import Permutation, compose, cycle_type, enumerate_permutations
from .thermal import (
    ThermalConfig,
    admissible_temperature,
    coherence_vs_temperature,
    low_T_approx,
    thermal_spectrum,
)

__version__ = "0.1.0"
