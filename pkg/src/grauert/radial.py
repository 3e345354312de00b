"""Radial functions behind the Grauert potential.

With ``t = |z|**2`` the metric on punctured C^n is built from

    u(t) = (t - 1) / (t log t),
    v(t) = integral_0^t tau u(tau)**2 dtau,
    U'(t) = v(t) / t,

and only U', U'' (metric), U''' (Christoffel terms) and U'''' (curvature)
are ever needed.  The potential itself is anchored at t = 1 because the
integral of v(tau)/tau diverges at tau = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import DomainError, NumericError, SearchError

DEFAULT_TOL = 1e-10
# relative tolerance requested from quad, and the relative error estimate it
# must come back under; v(t) grows like t^2/log^2 t so an absolute bound alone
# is not attainable for large t
REL_TOL = 1e-13
REL_ACCEPT = 1e-11

# |t - 1| below this uses the power series of u around t = 1
TAYLOR_WINDOW = 0.1

# u(1 + e) = sum c_k e^k, radius of convergence 1
_U_SERIES = np.array([
    1.0, -0.5, 0.4166666666666667, -0.375,
    0.3486111111111111, -0.3298611111111111, 0.31559193121693124, -0.30422453703703706,
    0.2948680004409171, -0.2869754464285714, 0.2801895964439367, -0.2742655400315991,
    0.2690288467736488, -0.2643513483666065, 0.26013639612760103, -0.2563094965743892,
    0.25281214672903923, -0.24959765029771566, 0.24662820258225746, -0.24387281228282073,
    0.2413057897378135, -0.23890562735922277, 0.2366541571614639, -0.23453590763416846,
    0.23253760637912502, -0.23064779091544632, 0.22885650083737444, -0.22715503191100436,
    0.22553573786190798, -0.22399186926497963, 0.22251744157591868, -0.22110712625530524,
])
_U_SERIES_D1 = P.polyder(_U_SERIES)
_U_SERIES_D2 = P.polyder(_U_SERIES, 2)


def _check_t(t) -> float:
    t = float(t)
    if not math.isfinite(t) or t <= 0.0:
        raise DomainError(f"squared radius must be finite and positive, got {t!r}")
    return t


def eval_u(t, order: int = 0) -> tuple[float, ...]:
    """Return ``(u, u', ..., u^(order))`` at ``t`` for ``order`` in 0..2.

    The removable singularity at t = 1 is handled by a power series on
    ``|t - 1| < TAYLOR_WINDOW``; outside it the closed forms are used.
    """
    t = _check_t(t)
    if order not in (0, 1, 2):
        raise DomainError(f"derivative order must be 0, 1 or 2, got {order!r}")
    e = t - 1.0
    if abs(e) < TAYLOR_WINDOW:
        out = [P.polyval(e, _U_SERIES)]
        if order >= 1:
            out.append(P.polyval(e, _U_SERIES_D1))
        if order >= 2:
            out.append(P.polyval(e, _U_SERIES_D2))
        return tuple(float(x) for x in out)

    lg = math.log(t)
    out = [e / (t * lg)]
    if order >= 1:
        out.append((lg - e) / (lg * lg * t * t))
    if order >= 2:
        out.append((-2.0 * lg * lg + t * lg + 2.0 * t - 3.0 * lg - 2.0) / (lg ** 3 * t ** 3))
    return tuple(out)


def _log_integrand(s: float) -> float:
    # tau u(tau)^2 dtau with tau = e^s; bounded, -> 1 at s = 0 and ~1/s^2 as s -> -inf
    if s == 0.0:
        return 1.0
    q = math.expm1(s) / s
    return q * q


def _quad(a: float, b: float, tol: float) -> float:
    val, err = quad(_log_integrand, a, b, epsabs=tol, epsrel=REL_TOL, limit=500)
    if not err <= max(tol, REL_ACCEPT * abs(val)):
        raise NumericError(f"quadrature on [{a}, {b}] did not converge", estimate=err)
    return val


# below this log-radius the integrand is 1/s^2 up to a factor 1 - O(e^s)
_TAIL_CUT = -40.0


def _v_below(s: float, tol: float) -> float:
    # int_{-inf}^{s} for s <= 0: analytic 1/s^2 tail past _TAIL_CUT, quadrature above
    if s <= _TAIL_CUT:
        return -math.expm1(s) ** 2 / s
    return -1.0 / _TAIL_CUT + _quad(_TAIL_CUT, s, tol)


@lru_cache(maxsize=1 << 16)
def _v_cached(t: float, tol: float) -> float:
    s = math.log(t)
    if s <= 0.0:
        return _v_below(s, tol)
    return _v_below(0.0, tol) + _quad(0.0, s, tol)


def eval_v(t, tol: float = DEFAULT_TOL) -> float:
    """``v(t) = int_0^t tau u(tau)^2 dtau`` by quadrature in ``s = log tau``.

    The substitution turns the integrand into ``((e^s - 1)/s)^2``, which is
    bounded on the whole line; for t <= 1 this is the same as integrating
    ``(1 - e^-x)^2 / x^2`` over ``[-log t, inf)``.
    """
    t = _check_t(t)
    return _v_cached(t, float(tol))


def eval_U_derivs(t, tol: float = DEFAULT_TOL) -> tuple[float, float, float, float]:
    """Return ``(U', U'', U''', U'''')`` at ``t``."""
    t = _check_t(t)
    u, du, d2u = eval_u(t, 2)
    v = eval_v(t, tol)
    u2 = u * u
    d1 = v / t
    d2 = u2 - v / t ** 2
    d3 = 2.0 * u * du - u2 / t + 2.0 * v / t ** 3
    d4 = (2.0 * du * du + 2.0 * u * d2u - 2.0 * u * du / t
          + 3.0 * u2 / t ** 2 - 6.0 * v / t ** 4)
    return d1, d2, d3, d4


def eval_eta(t, tol: float = DEFAULT_TOL) -> float:
    """``eta(t) = t^2 u(t)^2 - v(t)``; its sign decides leafwise curvature far out."""
    t = _check_t(t)
    (u,) = eval_u(t)
    return t * t * u * u - eval_v(t, tol)


def find_eta_threshold(t_lo: float = 1e-6, t_hi: float = 1e6, grid: int = 1024,
                       xtol: float = 1e-8, tol: float = DEFAULT_TOL) -> float:
    """Largest zero of eta in ``(t_lo, t_hi)``.

    eta is checked to be positive on every grid point above the returned root.
    """
    ts = np.geomspace(t_lo, t_hi, grid)
    vals = np.array([eval_eta(t, tol) for t in ts])
    if vals[-1] <= 0.0:
        raise SearchError("eta is not positive at the top of the search interval")
    neg = np.nonzero(vals <= 0.0)[0]
    if neg.size == 0:
        raise SearchError(f"no sign change of eta in ({t_lo}, {t_hi})")
    i = neg[-1]
    root = brentq(lambda x: eval_eta(x, tol), ts[i], ts[i + 1], xtol=xtol, rtol=4 * np.finfo(float).eps)
    return float(root)


@lru_cache(maxsize=1 << 12)
def _potential_cached(t: float, tol: float) -> float:
    s = math.log(t)
    if s == 0.0:
        return 0.0
    # int_1^t v(tau)/tau dtau = int_0^{log t} v(e^s) ds
    val, err = quad(lambda x: eval_v(math.exp(x), tol), 0.0, s,
                    epsabs=tol, epsrel=REL_TOL, limit=200)
    if not err <= max(10 * tol, 10 * REL_ACCEPT * abs(val)):
        raise NumericError("potential quadrature did not converge", estimate=err)
    return val


def eval_potential(t, tol: float = DEFAULT_TOL) -> float:
    """Potential ``U`` normalised by ``U(1) = 0``; ``dU/dt = v(t)/t``."""
    t = _check_t(t)
    return _potential_cached(t, float(tol))


@dataclass(frozen=True)
class ProfileValues:
    t: float
    u: float
    du: float
    d2u: float
    v: float
    dU: float
    d2U: float
    d3U: float
    d4U: float
    eta: float


def profile_values(t, tol: float = DEFAULT_TOL) -> ProfileValues:
    t = _check_t(t)
    u, du, d2u = eval_u(t, 2)
    v = eval_v(t, tol)
    d1, d2, d3, d4 = eval_U_derivs(t, tol)
    return ProfileValues(t=t, u=u, du=du, d2u=d2u, v=v, dU=d1, d2U=d2, d3U=d3, d4U=d4,
                         eta=t * t * u * u - v)
