"""pairorbit: normal-form orbits, closure graphs and perturbation
certificates for pairs (A, B) of one arbitrary and one symmetric 2x2
complex matrix under (c, P) . (A, B) = (c P* A P, P^T B P)."""

from .bounds import (
    NonPathCertificate,
    det_invariant_p,
    nonpath_lower_bound,
    phase_estimate,
    residual_expressions,
)
from .closure import (
    EdgeCondition,
    export_graph,
    max_f,
    pair_path,
    pair_path_detail,
    psi1_path,
    psi2_path,
    validate_graph,
)
from .congruence import (
    AmbiguousNearBoundary,
    StarClass,
    StarTag,
    classify_star,
    classify_tcong,
    cosquare,
    takagi,
)
from .families import (
    FAMILIES,
    OrbitClass,
    family_of,
    is_generic,
    orbit_class_from_json,
    orbit_class_to_json,
    representative,
)
from .matcore import (
    Complex2x2,
    GroupElement,
    MatrixPair,
    Sym2x2,
    act_pair,
    compose,
    max_norm,
    pair_distance,
    sample_group,
    sample_pair,
)
from .pairnf import ClassifiedPair, StabilizerSolveFailed, classify_pair, orbit_equal
from .surface import JetData, is_quadratically_flat, reduce_jet
from .tangent import RankUnstable, orbit_dimension, tangent_frame
from .witness import (
    PerturbReport,
    WitnessFamily,
    perturb_experiment,
    verify_witness,
    witness_catalog,
)

__version__ = "0.1.0"
