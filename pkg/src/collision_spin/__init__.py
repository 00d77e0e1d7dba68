"""Numerical laboratory for planar n-body total-collision dynamics.

Shape/rotation reduction in mass-orthonormalized coordinates, the blown-up
collision-manifold flow, central-configuration catalogs with restpoint
spectra, spin-angle and shape-arclength tracking, model Lojasiewicz decay
bounds, and the horizontal-lift construction showing how infinite spin
would look if the convergence estimates ever failed.
"""

from .central import (
    CentralConfig,
    Classification,
    classify,
    find_cc,
    multistart_catalog,
    restpoint_spectrum,
)
from .chart import (
    FSMetric,
    SaariSplit,
    ShapePoint,
    ShapeVelocity,
    angular_momentum,
    from_chart,
    fs_matrix,
    fs_norm_sq,
    saari_decompose,
    spin_rate,
    spin_rate_bound,
    to_chart,
    velocity_from_chart,
    velocity_to_chart,
)
from .dynamics import (
    BlownUpState,
    CaptureSpec,
    IntegrationControls,
    ReducedState,
    TrajectoryRecord,
    blownup_vector_field,
    integrate,
    integrate_unreduced,
    reduced_vector_field,
    spin_and_arclength,
)
from .errors import (
    ChartDomainError,
    CollisionError,
    ConvergenceError,
    DomainError,
    IntegrationError,
)
from .gradflow import (
    ArclengthCertificate,
    DecayReport,
    LojCheck,
    ModelFlow,
    arclength_certificate,
    ball_cloud,
    check_lojasiewicz,
    flat_potential,
    orthogonal_perturbation,
    quadratic_potential,
    quartic_potential,
    run_model_flow,
)
from .masses import MassSystem
from .presets import PRESETS, OrbitPreset, SpiralPreset, load_preset, preset_catalog
from .spindemo import (
    LiftResult,
    ShapeCurve,
    SpinCertificate,
    horizontal_lift,
    infinite_spin_certificate,
    spiral_curve,
)

__version__ = "0.1.0"

__all__ = [
    "ArclengthCertificate",
    "BlownUpState",
    "CaptureSpec",
    "CentralConfig",
    "ChartDomainError",
    "Classification",
    "CollisionError",
    "ConvergenceError",
    "DecayReport",
    "DomainError",
    "FSMetric",
    "IntegrationControls",
    "IntegrationError",
    "LiftResult",
    "LojCheck",
    "MassSystem",
    "ModelFlow",
    "OrbitPreset",
    "PRESETS",
    "ReducedState",
    "SaariSplit",
    "ShapeCurve",
    "ShapePoint",
    "ShapeVelocity",
    "SpinCertificate",
    "SpiralPreset",
    "TrajectoryRecord",
    "angular_momentum",
    "arclength_certificate",
    "ball_cloud",
    "blownup_vector_field",
    "check_lojasiewicz",
    "classify",
    "find_cc",
    "flat_potential",
    "from_chart",
    "fs_matrix",
    "fs_norm_sq",
    "horizontal_lift",
    "infinite_spin_certificate",
    "integrate",
    "integrate_unreduced",
    "load_preset",
    "multistart_catalog",
    "orthogonal_perturbation",
    "preset_catalog",
    "quadratic_potential",
    "quartic_potential",
    "reduced_vector_field",
    "restpoint_spectrum",
    "run_model_flow",
    "saari_decompose",
    "spin_and_arclength",
    "spin_rate",
    "spin_rate_bound",
    "spiral_curve",
    "to_chart",
    "velocity_from_chart",
    "velocity_to_chart",
]
