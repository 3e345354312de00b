"""One-variable leafwise curvature profiles and their zeros.

All three profiles are functions of the squared radius ``t``:

* punctured C^n (n >= 2), curvature of the leaves through the orthogonality
  locus of a diagonal field;
* the slice of B^N minus a coordinate subspace, same leaves, with the
  Bergman term of weight N + 1 added;
* the conformal metric ``(1 + t u^2)|dz|^2`` on C*.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, SearchError
from .radial import DEFAULT_TOL, _check_t, eval_u, eval_v


class Family(enum.Enum):
    PUNCTURED_CN = "punctured_cn"
    BALL_COMPLEMENT = "ball_complement"
    CSTAR = "cstar"


@dataclass(frozen=True)
class ProfileSpec:
    family: Family
    N: int | None = None
    r2: float | None = None

    def __post_init__(self):
        if self.family is Family.BALL_COMPLEMENT:
            if self.N is None or self.N < 2:
                raise DomainError("ball profile needs N >= 2")
            if self.r2 is None or not 0.0 < self.r2 <= 1.0:
                raise DomainError("ball profile needs 0 < r^2 <= 1")

    @property
    def domain(self) -> tuple[float, float]:
        if self.family is Family.BALL_COMPLEMENT:
            return 0.0, float(self.r2)
        return 0.0, math.inf


def kappa_profile_cn(t, tol: float = DEFAULT_TOL) -> float:
    """Leafwise curvature on the orthogonality locus of punctured C^n."""
    t = _check_t(t)
    (u,) = eval_u(t)
    v = eval_v(t, tol)
    return -2.0 * (3.0 * t * t * u * u - 2.0 * v + t) / (t + v) ** 2


def kappa_profile_ball(N: int, r2: float, t, tol: float = DEFAULT_TOL,
                       bergman_weight: float | None = None) -> float:
    """Leafwise curvature on a slice of radius ``sqrt(r2)`` in B^N minus A.

    ``bergman_weight`` replaces N + 1 in the three Bergman terms; passing 0
    recovers :func:`kappa_profile_cn`.
    """
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    if not 0.0 < r2 <= 1.0:
        raise DomainError(f"r^2 must lie in (0, 1], got {r2}")
    t = _check_t(t)
    if t >= r2:
        raise DomainError(f"t = {t} is outside the slice (0, {r2})")
    c = float(N + 1) if bergman_weight is None else float(bergman_weight)
    (u,) = eval_u(t)
    v = eval_v(t, tol)
    gap = r2 - t
    num = 3.0 * t * t * u * u - 2.0 * v + t + c * t * (r2 + 2.0 * t) / gap ** 2
    den = t + v + c * t / gap
    return -2.0 * num / den ** 2


class CStarCurvature(NamedTuple):
    f: float
    P: float
    Q: float
    M1: float
    M2: float


def kappa_profile_cstar(t) -> CStarCurvature:
    """Curvature ``-P/Q`` of ``(1 + t u^2)|dz|^2`` with ``P = 2(M1 + M2)``."""
    t = _check_t(t)
    u, du, d2u = eval_u(t, 2)
    m1 = 2 * t ** 3 * u ** 3 * d2u + 2 * t ** 2 * u ** 3 * du - 2 * t ** 3 * u ** 2 * du ** 2
    m2 = u ** 2 + 2 * t ** 2 * du ** 2 + 2 * t ** 2 * u * d2u + 6 * t * u * du
    p = 2.0 * (m1 + m2)
    q = (1.0 + t * u * u) ** 3
    return CStarCurvature(-p / q, p, q, m1, m2)


def cstar_m_tilde(t) -> tuple[float, float]:
    """``M1, M2`` rewritten through log t only (undefined at t = 1)."""
    t = _check_t(t)
    if t == 1.0:
        raise DomainError("the log-form of M1, M2 is singular at t = 1")
    lg = math.log(t)
    e = t - 1.0
    mt1 = e * e - t * lg * lg
    mt2 = (e * e * lg * lg + 2 * lg * lg + 6 * e * e - 8 * e * lg
           + 2 * e * lg * lg - 4 * e * e * lg)
    m1 = 2 * t ** 3 * e * e * mt1 / (t * lg) ** 6
    m2 = mt2 / (t ** 2 * lg ** 4)
    return m1, m2


def log_u_hessian_sign(t) -> float:
    """``(t - 1)^2 - t (log t)^2``, which carries the sign of the Laplacian of log u."""
    t = _check_t(t)
    lg = math.log(t)
    e = t - 1.0
    return e * e - t * lg * lg


def log_u_laplacian(t) -> float:
    """``d/dt(t d/dt log u)``, the radial Laplacian of ``log u(|z|^2)``."""
    t = _check_t(t)
    u, du, d2u = eval_u(t, 2)
    return (u * du + t * (u * d2u - du * du)) / (u * u)


def sign_changes(fn: Callable[[float], float], t_lo: float, t_hi: float,
                 grid: int = 1024) -> list[tuple[float, float]]:
    """Brackets ``(a, b)`` of consecutive log-grid points where ``fn`` changes sign."""
    ts = np.geomspace(t_lo, t_hi, grid)
    vals = np.array([fn(t) for t in ts])
    sgn = np.sign(vals)
    idx = np.nonzero(sgn[:-1] * sgn[1:] <= 0)[0]
    return [(float(ts[i]), float(ts[i + 1])) for i in idx]


def find_min_zero_a(t_lo: float = 1e-8, grid: int = 1024, xtol: float = 1e-9,
                    check_points: int = 64, tol: float = DEFAULT_TOL) -> float:
    """Least zero of :func:`kappa_profile_cn` in ``(0, 1)``.

    A log-grid scan over ``(t_lo, 1)`` brackets the first sign change; the
    bracket is refined with Brent's method.  Positivity below the root is then
    audited on ``check_points`` log-spaced points.
    """
    f = lambda t: kappa_profile_cn(t, tol)
    brackets = sign_changes(f, t_lo, 1.0, grid)
    if not brackets:
        raise SearchError("kappa_profile_cn has no sign change in (t_lo, 1)")
    lo, hi = brackets[0]
    if f(lo) == 0.0:
        return lo
    a = float(brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps))
    audit = np.geomspace(t_lo, a * (1 - 1e-3), check_points)
    bad = [t for t in audit if f(t) <= 0.0]
    if bad:
        raise SearchError(f"profile not positive below the first zero, e.g. at t = {bad[0]}")
    return a


def kappa_profile(spec: ProfileSpec, t, tol: float = DEFAULT_TOL) -> float:
    if spec.family is Family.PUNCTURED_CN:
        return kappa_profile_cn(t, tol)
    if spec.family is Family.BALL_COMPLEMENT:
        return kappa_profile_ball(spec.N, spec.r2, t, tol)
    return kappa_profile_cstar(t).f
