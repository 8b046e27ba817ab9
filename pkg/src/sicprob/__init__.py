"""SIC-POVM toolkit: quantum states as pure probability vectors.

Constructs and verifies SICs, converts density matrices to and from
probability vectors, evaluates the Born rule entirely in probability space,
and checks agreement with the conventional formalism via a dual-track
simulator.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    DimensionMismatch,
    InvalidInput,
    NoBuiltinForDimension,
    NotAQuantumState,
    NotHermitian,
    NotInformationallyComplete,
    NotPositive,
    NotUnitTrace,
    NotUnitary,
    PovmIncomplete,
    SchemaError,
    ShapeMismatch,
    SicProbError,
    UncertifiedSic,
    WrongCount,
    ZeroProbabilityOutcome,
)
from .quantum import (  # noqa: F401
    COMPARISON_TOL,
    CONSTRUCTION_TOL,
    VALIDITY_TOL,
    DensityMatrix,
    OutcomeDistribution,
    Povm,
    Unitary,
    born_direct,
    luders_update,
    projective_povm,
    random_density,
    random_povm,
    random_unitary,
    validate_density,
    validate_povm,
    validate_unitary,
)
from .sic import (  # noqa: F401
    CERTIFIED_RESIDUAL,
    Fiducial,
    SicStructure,
    SicVerification,
    builtin_fiducial,
    frame_potential,
    frame_potential_minimum,
    make_fiducial,
    orbit,
    sic_from_projectors,
    verify_sic,
    wh_displacements,
)
from .search import SearchConfig, SearchResult, local_minimize, search  # noqa: F401
from .probability import (  # noqa: F401
    CondProbMatrix,
    MicStructure,
    ProbVector,
    born_urgleichung,
    classical_ltp,
    cond_prob_matrix,
    ltp_deviation,
    mic_duals,
    probs_to_state,
    probs_to_state_mic,
    state_to_probs,
    state_to_probs_mic,
)
from .simulate import (  # noqa: F401
    Circuit,
    CircuitStep,
    TrackReport,
    evolve_probs,
    evolve_state,
    rotate_sic,
    run_dual,
    transfer_matrix,
)
