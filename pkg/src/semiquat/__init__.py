"""Semi-real quaternionic curves in the semi-Euclidean spaces E^2_4 and E^3_1."""
from .kernels import BACKEND
from .semialgebra import (
    Causality,
    MetricContext,
    SemiQuaternion,
    causal_sign,
    classify,
    conjugate,
    cross3,
    decompose,
    det4,
    inner_h,
    norm_N,
    quat_mul,
    spatial_form,
    wedge4,
)
from .curvekit import (
    CurveSpec,
    FrenetApparatus4,
    check_unit_speed,
    curvature_derivatives,
    derivatives,
    frenet_apparatus,
    frenet_ode_residual,
    reparameterize_by_arclength,
)
from .involute import (
    InvolutePair,
    TransferredApparatus,
    involute_distance,
    is_involute_pair,
    make_involute,
    transfer_curvatures,
    transfer_frame,
    w_curve_transfer,
)
from .spatial3 import SpatialFrenet3, check_theorem35, extract_spatial_frame, spatial_frenet

__version__ = "0.1.0"
