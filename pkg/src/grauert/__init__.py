"""Grauert's complete Kahler metrics on punctured C^n and on B^N minus a
coordinate subspace: radial profiles, leafwise curvature, and holomorphic
sectional curvature."""

__version__ = "0.1.0"

from .errors import DomainError, NumericError, SearchError
from .radial import (
    ProfileValues, eval_eta, eval_potential, eval_U_derivs, eval_u, eval_v,
    find_eta_threshold, profile_values,
)
from .profiles import (
    Family, ProfileSpec, find_min_zero_a, kappa_profile, kappa_profile_ball,
    kappa_profile_cn, kappa_profile_cstar, log_u_hessian_sign,
)
from .geometry import (
    BallComplement, BergmanBall, DiagonalField, GrauertPunctured, ball_complement_metric,
    bergman_metric, field_eval, flow, grauert_metric, metric, sample_S, sample_S_w,
    wedge_norm_sq,
)
from .curvature import (
    CurvatureReport, curvature_report, extremal_hsc, hsc, kappa_closed_on_S, kappa_fd,
    leaf_density, leaf_density_gradient,
)
