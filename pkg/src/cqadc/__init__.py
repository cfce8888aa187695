"""Finite-blocklength classical communication over the qubit amplitude damping channel.

Individual measurements with classical ML decoding are compared against the
optimal collective measurement on the full channel output, alongside
classical converse and random-coding bounds and Holevo capacities.
"""

from .bounds import (
    BoundResult,
    CapacityPair,
    bsc,
    c_bsc,
    c_qsc,
    capacities,
    capacity_crossing,
    ml_success_exact,
    qsc_converse,
    qsc_rcb,
    symmetric_dmc,
)
from .channel import (
    Ensemble,
    KrausChannel,
    adc,
    apply,
    apply_product,
    binary_entropy,
    chi_states,
    density_operator,
    eps_bsc,
    holevo_chi_adc,
    holevo_information,
    identity_channel,
    pm_states,
    von_neumann_entropy,
)
from .codes import BlockCode, LinearCode, from_codewords, from_generator, load_code, min_distance, named_code
from .errors import (
    ConvergenceError,
    CqadcError,
    DimensionError,
    DomainError,
    StructureError,
    ValidationError,
)
from .linalg import HermitianSpectrum, hermitian_eig, is_psd, kron, kron_all, trace_norm
from .measurement import (
    DMC,
    POVM,
    DiscriminationResult,
    code_outputs,
    collective_optimum,
    extract_qsc_eps,
    hykl_residual,
    individual_success,
    induced_dmc,
    ml_povm,
    optimal_povm,
    pgm,
    pm_povm,
    success_prob,
    uninformative_povm,
)

__version__ = "0.1.0"
