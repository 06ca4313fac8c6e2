"""Entanglement detection from realignment moments of density matrices."""

from .criteria import (
    ENTANGLED,
    INCONCLUSIVE,
    AdmissibleRange,
    CriterionVerdict,
    Interval,
    admissible_range,
    discriminant,
    partial_transpose,
    ppt_verdict,
    realignment_norm_verdict,
    v1,
    v3,
    verdict_v1,
    verdict_v2,
    verdict_v3,
)
from .linalg import dagger, hermitian_eigenvalues, kron, singular_values, trace_norm
from .realign import (
    MomentSet,
    RealignedMatrix,
    RealignSpec,
    enumerate_splits,
    moments,
    moments_via_gram,
    realign_bipartite,
    realign_partial,
    vec,
)
from .states import (
    FAMILIES,
    DensityMatrix,
    StateValidationError,
    from_json_dict,
    ghz_w,
    load_state,
    mixture,
    noisy_ghz4,
    pure_state,
    rho_d,
    rho_eps,
    rho_pq,
    sample_separable,
    save_state,
    to_json_dict,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "ENTANGLED",
    "INCONCLUSIVE",
    "AdmissibleRange",
    "CriterionVerdict",
    "DensityMatrix",
    "FAMILIES",
    "Interval",
    "MomentSet",
    "RealignSpec",
    "RealignedMatrix",
    "StateValidationError",
    "admissible_range",
    "dagger",
    "discriminant",
    "enumerate_splits",
    "from_json_dict",
    "ghz_w",
    "hermitian_eigenvalues",
    "kron",
    "load_state",
    "mixture",
    "moments",
    "moments_via_gram",
    "noisy_ghz4",
    "partial_transpose",
    "ppt_verdict",
    "pure_state",
    "realign_bipartite",
    "realign_partial",
    "realignment_norm_verdict",
    "rho_d",
    "rho_eps",
    "rho_pq",
    "sample_separable",
    "save_state",
    "singular_values",
    "to_json_dict",
    "trace_norm",
    "v1",
    "v3",
    "validate",
    "vec",
    "verdict_v1",
    "verdict_v2",
    "verdict_v3",
    "__version__",
]
