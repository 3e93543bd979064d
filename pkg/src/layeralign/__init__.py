"""Layered interference alignment on X channels.

Vector precoding collapses cross traffic onto shared direction blocks;
rational-dimension constellations keep the collapsed integer bundles
decodable; Diophantine approximation supplies the minimum-distance
guarantees that turn the construction into degrees of freedom.
"""

from ._kernels import BACKEND
from .alignment import (
    AlignmentReport,
    DirectionSet2xK,
    DirectionSetKx2,
    ReceiverModel,
    build_mac_model,
    count_distinct_directions,
    design_directions_2xk,
    mac_gain_matrix,
    precode_2xk,
    precode_kx2,
    received_model_2xk,
    received_model_kx2,
    sigma_receiver_pairing,
    solve_refined,
    verify_alignment_2xk,
    verify_alignment_kx2,
)
from .constellation import (
    Constellation,
    EncodingPair,
    ScalingLaw,
    build_constellation,
    draw_symbols,
    encode_antenna,
)
from .decoder import (
    GainTable,
    ReceivedConstellation,
    check_property_gamma,
    decode_batch,
    enumerate_received,
    error_probability_bound,
    hard_decode,
    min_distance_by_differences,
    noise_removal_check,
    normalize_for_target,
    pairwise_min_distance,
    rate_lower_bound,
)
from .diophantine import (
    ApproxFunction,
    badly_approximable_constant,
    dirichlet_hybrid_check,
    estimate_approximable_measure,
    gaussian_lattice_census,
    kg_series,
    min_form_distance,
    sample_point,
)
from .errors import (
    BudgetExceededError,
    ConfigError,
    InfeasibleScenarioError,
    LayerAlignError,
)
from .harness import (
    CSV_HEADER,
    ExperimentConfig,
    TrialRecord,
    estimate_dof_slope,
    run_2xk,
    run_align_census,
    run_dioph,
    run_kx2,
    run_mac,
)
from .xchannel import (
    NoiseModel,
    ScalarField,
    TopologyKind,
    XTopology,
    sample_topology,
    transmit,
)

__version__ = "0.1.0"
