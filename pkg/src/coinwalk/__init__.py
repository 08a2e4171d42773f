"""Half-line coined quantum walks, underlying birth-death chains, and the
edge-state dispersion of the two-angle planar walk."""

from .chains import (
    BDChain,
    NULL_RECURRENT,
    POSITIVE_RECURRENT,
    RecurrenceClass,
    TRANSIENT,
    UNDETERMINED,
    classify,
    from_walk,
    log_reversible_measure,
    reversible_measure,
    stationary,
)
from .eigenspace import (
    CertifiedEigenpair,
    SOURCE_FLOW,
    SOURCE_STATIONARY,
    flow_eigenpair,
    localization_bound,
    rayleigh_certify,
    stationary_eigenpair,
)
from .errors import (
    AssumptionError,
    CertificationError,
    CoinwalkError,
    DegenerateCoinError,
    InputFormatError,
    ResourceLimitError,
    WrongClassError,
    ZeroStateError,
)
from .planar import (
    CMVData,
    CoinAngles,
    DispersionTable,
    FourierRecord,
    PlanarState,
    band_edge_angle,
    band_distance,
    classify_k,
    cmv_matrix,
    dispersion_table,
    edge_point,
    fourier_reconstruct,
    isolated_points,
    max_amplitude_difference,
    planar_step,
    verblunsky_of_k,
)
from .walk import (
    Arc,
    ArcState,
    CoinEigenData,
    SELF_LOOP,
    TruncatedWalk,
    VerblunskySeq,
    apply_coin,
    apply_flip_flop,
    coin_at,
    coin_eigen,
    evolve,
    fourier_parameter,
    iter_steps,
    step,
    step_moving,
    truncated_matrix,
)

__version__ = "0.1.0"
