"""Tsallis q-discord of two-qubit states.

Quantum discord generalized through the Tsallis q-entropy: exact
closed forms for Bell-diagonal and related families, a deterministic
measurement optimizer for arbitrary states, random-state sampling, and
seeded Monte Carlo experiment drivers with CSV output.
"""

from .discord import (
    DiscordResult,
    MeasurementBasis,
    c_q,
    i_q,
    j_q,
    measured_conditional_entropy,
    projectors,
    q_discord,
    q_discord_fast2,
    theta_analytic_alpha,
    theta_analytic_bell,
)
from .entropy import (
    conditional_q_entropy_classical,
    linear_entropy,
    norm_factor,
    q_log,
    tsallis_probs,
    tsallis_state,
)
from .experiments import (
    DEFAULT_SEED,
    CsvTable,
    ExperimentSpec,
    alpha_sweep,
    concavity_delta,
    concavity_pdf,
    discord_pdf,
    ordering_scan,
    random_scatter,
    werner_sweep,
)
from .linalg import HermitianSpectrum, hermitian_eig, kron, partial_trace, sandwich
from .states import (
    DensityMatrix,
    RngStream,
    alpha_beta_state,
    alpha_state,
    bell_diagonal,
    pure_from_schmidt,
    random_mixed,
    random_pure,
    random_simplex,
    random_unitary,
    werner,
)

__version__ = "0.1.0"

__all__ = [
    "CsvTable",
    "DEFAULT_SEED",
    "DensityMatrix",
    "DiscordResult",
    "ExperimentSpec",
    "HermitianSpectrum",
    "MeasurementBasis",
    "RngStream",
    "alpha_beta_state",
    "alpha_state",
    "alpha_sweep",
    "bell_diagonal",
    "c_q",
    "concavity_delta",
    "concavity_pdf",
    "conditional_q_entropy_classical",
    "discord_pdf",
    "hermitian_eig",
    "i_q",
    "j_q",
    "kron",
    "linear_entropy",
    "measured_conditional_entropy",
    "norm_factor",
    "ordering_scan",
    "partial_trace",
    "projectors",
    "pure_from_schmidt",
    "q_discord",
    "q_discord_fast2",
    "q_log",
    "random_mixed",
    "random_pure",
    "random_scatter",
    "random_simplex",
    "random_unitary",
    "sandwich",
    "theta_analytic_alpha",
    "theta_analytic_bell",
    "tsallis_probs",
    "tsallis_state",
    "werner",
    "werner_sweep",
]
