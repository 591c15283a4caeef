"""Numerical toolkit for the U(1) bundle geometry of two-spin collapse.

The package covers the Hopf fibrations S^3 -> CP^1 and S^7 -> CP^3, their
tautological line bundles, the metric connection (tangent splitting,
parallel transport, holonomy, first Chern numbers), and a seeded simulator
of singlet spin measurement whose collapse lands in an embedded CP^1.
"""

from .bundles import (
    AssociatedPoint,
    TautologicalPoint,
    bundle_projection,
    include_tautological,
    psi,
    psi_inverse,
)
from .collapse import (
    ChshResult,
    CorrelationEstimate,
    ExperimentConfig,
    MeasurementRecord,
    TransitionReport,
    align_embedding,
    branch_records,
    chsh,
    chsh_exact,
    chsh_mc,
    collapse_transition,
    correlation,
    correlation_exact,
    correlation_mc,
    joint_probabilities,
    max_collapse_diagram_deviation,
    measure_particle1,
    measure_particle2,
    sample_singlet_outcomes,
    singlet,
    swap_particles,
)
from .connection import (
    BaseLoop,
    ChernField,
    MAX_PLAQUETTE_PHASE,
    MAX_STEP_GAP,
    ORIENTATION_SIGN,
    SplitTangent,
    TangentVector,
    chern_field,
    chern_number,
    circular_distance,
    connection_form,
    dual_frame,
    expected_latitude_holonomy,
    holonomy,
    latitude_curve,
    latitude_solid_angle,
    parallel_transport,
    parallel_transport_ode,
    power_frame,
    split_tangent,
    tautological_frame,
    tensor_frame,
    trivial_frame,
    wrap_angle,
)
from .errors import (
    ContainmentError,
    DimensionMismatchError,
    GeometryError,
    InconsistentRecordError,
    LoopClosureError,
    MeshRefinementError,
    NormalizationError,
    TangencyError,
    TransportError,
)
from .hopf import (
    BundleSpec,
    bloch_point,
    fiber_at,
    hopf_project,
    include_ray,
    include_sphere,
    max_bloch_roundtrip_deviation,
    max_fibration_deviation,
    max_inclusion_square_deviation,
    ray_from_bloch,
)
from .rays import (
    ATOL,
    Direction,
    GAUGE_THRESHOLD,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    Ray,
    StateVector,
    fix_phase,
    fubini_study_distance,
    hermitian_inner,
    pauli_dot,
    ray_of,
    ray_overlap,
    spinor_of,
    tensor_product,
)

__version__ = "0.1.0"
