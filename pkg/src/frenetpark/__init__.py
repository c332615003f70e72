"""Park transform, Frenet frame and Cartan moving-frame analysis of
multi-phase voltage trajectories."""

from .geometry import (
    DegenerateDirectionError,
    GeometryError,
    RankDeficiencyError,
    cross,
    dot,
    hodge_complement,
    is_orthonormal,
    project,
    skew_part_check,
)
from .park import (
    ALPHA,
    OMEGA_0,
    CylindricalAngles,
    attitude_rotation,
    clarke_matrix,
    cylindrical_frame,
    cylindrical_rotation,
    dq_derivative,
    park_angle,
    park_apply,
    park_matrix,
    park_rotation,
)
from .frenet import (
    DerivativeBundle,
    FrenetState,
    darboux_rotation,
    frenet3,
    frenet_apply,
    frenet_rotation,
    frenet_serret_residual,
    frenet_series,
    psi_frame,
    psi_rotation,
)
from .frenet_nd import GeneralizedFrame, align_frames, generalized_invariants, gram_schmidt_frame
from .signals import (
    SampledSeries,
    WaveformScenario,
    builtin_scenario,
    differentiate,
    evaluate,
    read_csv,
    sample_series,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateDirectionError",
    "GeometryError",
    "RankDeficiencyError",
    "cross",
    "dot",
    "hodge_complement",
    "is_orthonormal",
    "project",
    "skew_part_check",
    "ALPHA",
    "OMEGA_0",
    "CylindricalAngles",
    "attitude_rotation",
    "clarke_matrix",
    "cylindrical_frame",
    "cylindrical_rotation",
    "dq_derivative",
    "park_angle",
    "park_apply",
    "park_matrix",
    "park_rotation",
    "DerivativeBundle",
    "FrenetState",
    "darboux_rotation",
    "frenet3",
    "frenet_apply",
    "frenet_rotation",
    "frenet_serret_residual",
    "frenet_series",
    "psi_frame",
    "psi_rotation",
    "GeneralizedFrame",
    "align_frames",
    "generalized_invariants",
    "gram_schmidt_frame",
    "SampledSeries",
    "WaveformScenario",
    "builtin_scenario",
    "differentiate",
    "evaluate",
    "read_csv",
    "sample_series",
    "write_csv",
]
