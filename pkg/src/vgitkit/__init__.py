"""vgitkit: exact machinery for torus stability over an affine base.

Everything decision-level is exact rational arithmetic; floats appear
only as display values next to their certificates.
"""

from .core import (
    LinCombo,
    Linearization,
    ModelError,
    MValue,
    PLUS_INFINITY,
    SanctionError,
    Scene,
    SceneError,
    Status,
    WeightedPoint,
    combined_weights,
    cone_Cx,
    gamma_x_members,
    m_function,
    mu,
    status,
)
from .hilb import (
    CycleInvarianceReport,
    HilbPoint,
    LimitScenario,
    NoFiniteThreshold,
    convergence_report,
    cycle_invariance_check,
    mu_Linf,
    mu_Lm,
    mu_Lm_normalized,
    stabilization_threshold,
    status_Linf,
    status_Lm,
    status_threshold,
)
from .polyhedra import (
    EQ,
    GE,
    InputError,
    RationalCone,
    dual_rays,
    integer_kernel,
    lp_feasible,
    relint_contains_zero,
)
from .scene_io import LoadedScene, SceneFileError, load_scene, scene_to_obj
from .strata import (
    AuditResult,
    ComponentAnnotatedPoint,
    FixedComponent,
    LimitBehavior,
    audit_finiteness,
    classify_lambda,
    fingerprint,
    is_closed_orbit_stratum,
    mu_via_components,
    subtorus_basis,
)
from .vgit import (
    ChamberReport,
    MProfile,
    SemicontinuityReport,
    candidate_walls,
    chamber_decomposition,
    check_semicontinuity,
    m_profile,
)

__version__ = "0.1.0"
