"""Leafwise Gaussian curvature and holomorphic sectional curvature.

Three routes are provided:

* closed forms on the orthogonality locus ``<z, X(z)> = 0``;
* a finite-difference oracle acting on the pullback density ``h(T)``;
* the Kahler curvature tensor built from the potential, giving HSC.

Gaussian curvature of ``h |dT|^2`` is ``-2 h^-1 d dbar log h`` throughout, and
HSC is normalised to agree with it for one-dimensional metrics:
``K(X) = 2 R(X, Xb, X, Xb) / g(X, X)^2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import minimize_scalar

from .errors import DomainError, NumericError
from .geometry import (
    BallComplement, BergmanBall, DiagonalField, GrauertPunctured, MetricKind,
    as_point, check_domain, field_eval, flow, hdot, metric, norm2, wedge_norm_sq,
)
from .radial import DEFAULT_TOL, eval_U_derivs, eval_u, eval_v

# on-locus formulas refuse points with |<z, X>| above this fraction of |z||X|
ORTHO_TOL = 1e-8


# -- leaf densities ---------------------------------------------------------

def leaf_point(kind: MetricKind, F: DiagonalField, z, T: complex = 0.0):
    """Point ``Z(T)`` on the leaf through ``z`` and the field ``X(Z(T))``, ambient coordinates."""
    z = check_domain(kind, z)
    k = F.n
    if isinstance(kind, BallComplement) and k != kind.n:
        raise DomainError("field must act on the projected coordinates")
    if k > z.size:
        raise DomainError("field dimension exceeds the point dimension")
    Z = z.copy()
    Z[:k] = flow(F, z[:k], T)
    X = np.zeros_like(Z)
    X[:k] = field_eval(F, Z[:k])[0]
    try:
        check_domain(kind, Z)
    except DomainError as exc:
        raise DomainError(f"leaf leaves the domain at T = {T}: {exc}") from None
    return Z, X


def leaf_density(kind: MetricKind, F: DiagonalField, z, T: complex = 0.0,
                 tol: float = DEFAULT_TOL) -> float:
    """``h(T)`` with ``Z^* g = h(T) |dT|^2`` along the leaf through ``z``."""
    Z, X = leaf_point(kind, F, z, T)
    return metric(kind, Z, X, tol)


class DensityGradient(NamedTuple):
    f1: complex
    f2: complex
    f3: complex

    @property
    def total(self) -> complex:
        return self.f1 + self.f2 + self.f3


def leaf_density_gradient(F: DiagonalField, z, tol: float = DEFAULT_TOL) -> DensityGradient:
    """Holomorphic derivative of ``h`` at ``T = 0`` for the Grauert metric, split in three.

    The antiholomorphic derivative is the complex conjugate of the total.
    """
    z = check_domain(GrauertPunctured(F.n), z)
    X, DXX = field_eval(F, z)
    t = norm2(z)
    u, du = eval_u(t, 1)
    v = eval_v(t, tol)
    b = u * u - v / t ** 2
    xz = hdot(X, z)
    f1 = b * (2 * norm2(X) * xz + hdot(DXX, z) * xz.conjugate())
    f2 = (1 + v / t) * hdot(DXX, X)
    f3 = (2 * u * du - u * u / t + 2 * v / t ** 3) * xz * abs(xz) ** 2
    return DensityGradient(f1, f2, f3)


def _require_orthogonal(z, X):
    lim = ORTHO_TOL * math.sqrt(norm2(z) * norm2(X))
    if abs(hdot(z, X)) >= lim:
        raise DomainError("point is not on the orthogonality locus <z, X(z)> = 0")


class BallFactors(NamedTuple):
    h0: float
    I: float
    J: float


def ball_factors(kind: BallComplement, F: DiagonalField, z, tol: float = DEFAULT_TOL) -> BallFactors:
    """``h_B(0)`` and the factors with ``h_B d dbar h_B - |d h_B|^2 = I J`` at a locus point."""
    z = check_domain(kind, z)
    n = kind.n
    zt = z[:n]
    X, _ = field_eval(F, zt)
    _require_orthogonal(zt, X)
    s = norm2(zt)
    r2 = 1.0 - norm2(z[n:])
    c = kind.N + 1
    (u,) = eval_u(s)
    v = eval_v(s, tol)
    x2 = norm2(X)
    gap = r2 - s
    h0 = (1 + v / s + c / gap) * x2
    I = (s + v + c * s / gap) * x2 ** 3 / s ** 3
    J = 3 * s * s * u * u - 2 * v + s + c * s * (r2 + 2 * s) / gap ** 2
    return BallFactors(h0, I, J)


def kappa_closed_on_S(kind: MetricKind, F: DiagonalField, z, tol: float = DEFAULT_TOL) -> float:
    """Leaf curvature at a point of the orthogonality locus from the closed forms."""
    if isinstance(kind, BallComplement):
        h0, I, J = ball_factors(kind, F, z, tol)
        return -2.0 * I * J / h0 ** 3
    if not isinstance(kind, GrauertPunctured):
        raise DomainError("closed-form leaf curvature exists for Grauert-type metrics only")
    z = check_domain(kind, z)
    X, DXX = field_eval(F, z)
    _require_orthogonal(z, X)
    t = norm2(z)
    (u,) = eval_u(t)
    v = eval_v(t, tol)
    x2 = norm2(X)
    A = (t * t * u * u - v) * (2 * x2 ** 3 + abs(hdot(DXX, z)) ** 2 * x2)
    B = (t + v) * t * wedge_norm_sq(X, DXX)
    D = (t + v) ** 2 * x2 ** 3
    return -2.0 * (A + B) / D


def gaussian_curvature_fd(h: Callable[[complex], float], step: float) -> float:
    """``-2 h^-1 d dbar log h`` at ``T = 0`` from a 5-point Laplacian.

    ``d dbar = Laplacian / 4``; the Laplacian is Richardson-extrapolated from
    steps ``step`` and ``step / 2``, which uses 9 distinct nodes.
    """
    h0 = h(0.0)
    if not h0 > 0:
        raise NumericError(f"density is not positive at the base point: {h0}")
    l0 = math.log(h0)

    def lap(s):
        ring = sum(math.log(h(d)) for d in (s, -s, 1j * s, -1j * s))
        return (ring - 4.0 * l0) / (s * s)

    lap_x = (4.0 * lap(step / 2) - lap(step)) / 3.0
    return -lap_x / (2.0 * h0)


FD_STEP = 1e-3


def kappa_fd(kind: MetricKind, F: DiagonalField, z, step: float | None = None,
             tol: float = DEFAULT_TOL) -> float:
    """Finite-difference curvature of the leaf through ``z`` at ``z``.

    The default step is ``FD_STEP / |X(z)|``.
    """
    z = check_domain(kind, z)
    if step is None:
        _, X = leaf_point(kind, F, z)
        step = FD_STEP / math.sqrt(norm2(X))
    return gaussian_curvature_fd(lambda T: leaf_density(kind, F, z, T, tol), step)


# -- the curvature tensor ----------------------------------------------------------

class _Piece(NamedTuple):
    # a potential phi(|Pz|^2) with P the coordinate projection onto `mask`
    mask: np.ndarray
    d: tuple  # phi', phi'', phi''', phi''''


def _pieces(kind: MetricKind, z: np.ndarray, tol: float) -> list[_Piece]:
    out = []
    if isinstance(kind, (GrauertPunctured, BallComplement)):
        k = kind.n
        mask = np.zeros(z.size)
        mask[:k] = 1.0
        d1, d2, d3, d4 = eval_U_derivs(norm2(z[:k]), tol)
        out.append(_Piece(mask, (1.0 + d1, d2, d3, d4)))
    if isinstance(kind, (BergmanBall, BallComplement)):
        c = kind.N + 1
        g = 1.0 - norm2(z)
        out.append(_Piece(np.ones(z.size), (c / g, c / g ** 2, 2 * c / g ** 3, 6 * c / g ** 4)))
    return out


def metric_tensor(kind: MetricKind, z, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``G[a, b] = g_{a bbar}``, with ``g(X, X) = X^T G conj(X)``."""
    z = check_domain(kind, z)
    G = np.zeros((z.size, z.size), dtype=complex)
    for mask, (p1, p2, _, _) in _pieces(kind, z, tol):
        y = mask * z
        G += p1 * np.diag(mask) + p2 * np.outer(y.conj(), y)
    return G


def metric_tensor_d(kind: MetricKind, z, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``dG[c, a, b] = d/dz_c g_{a bbar}``."""
    z = check_domain(kind, z)
    d = z.size
    out = np.zeros((d, d, d), dtype=complex)
    for mask, (_, p2, p3, _) in _pieces(kind, z, tol):
        y, yb, Pm = mask * z, (mask * z).conj(), np.diag(mask)
        out += (p2 * np.einsum("c,ab->cab", yb, Pm)
                + p3 * np.einsum("c,a,b->cab", yb, yb, y)
                + p2 * np.einsum("a,cb->cab", yb, Pm))
    return out


def metric_tensor_dd(kind: MetricKind, z, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``ddG[c, e, a, b] = d/dz_c d/dzbar_e g_{a bbar}``."""
    z = check_domain(kind, z)
    d = z.size
    out = np.zeros((d, d, d, d), dtype=complex)
    for mask, (_, p2, p3, p4) in _pieces(kind, z, tol):
        y, yb, Pm = mask * z, (mask * z).conj(), np.diag(mask)
        out += (p3 * np.einsum("e,c,ab->ceab", y, yb, Pm)
                + p2 * np.einsum("ce,ab->ceab", Pm, Pm)
                + p4 * np.einsum("e,c,a,b->ceab", y, yb, yb, y)
                + p3 * np.einsum("ce,a,b->ceab", Pm, yb, y)
                + p3 * np.einsum("c,ae,b->ceab", yb, Pm, y)
                + p3 * np.einsum("e,a,cb->ceab", y, yb, Pm)
                + p2 * np.einsum("ae,cb->ceab", Pm, Pm))
    return out


def curvature_tensor(kind: MetricKind, z, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``R[a, b, c, e] = R_{a bbar c ebar}`` with the sign convention
    ``R = -d_c dbar_e g_{a bbar} + g^{nbar m} d_c g_{a nbar} dbar_e g_{m bbar}``."""
    G = metric_tensor(kind, z, tol)
    dG = metric_tensor_d(kind, z, tol)
    ddG = metric_tensor_dd(kind, z, tol)
    M = np.linalg.inv(G)
    second = np.einsum("can,nm,ebm->abce", dG, M, dG.conj())
    return -np.einsum("ceab->abce", ddG) + second


def hsc_batch(kind: MetricKind, z, Xs, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Holomorphic sectional curvature at ``z`` for each row of ``Xs``."""
    z = check_domain(kind, z)
    Xs = np.atleast_2d(np.asarray(Xs, dtype=complex))
    if Xs.shape[1] != z.size:
        raise DomainError("direction dimension does not match the point")
    pieces = _pieces(kind, z, tol)
    G = np.zeros((z.size, z.size), dtype=complex)
    gXX = np.zeros(len(Xs))
    first = np.zeros(len(Xs))
    V = np.zeros_like(Xs)
    for mask, (p1, p2, p3, p4) in pieces:
        y = mask * z
        G += p1 * np.diag(mask) + p2 * np.outer(y.conj(), y)
        Y = Xs * mask
        p = Y @ y.conj()
        Y2 = np.einsum("ij,ij->i", Y, Y.conj()).real
        P2 = np.abs(p) ** 2
        gXX += p1 * Y2 + p2 * P2
        first += p4 * P2 ** 2 + 4 * p3 * P2 * Y2 + 2 * p2 * Y2 ** 2
        V += 2 * p2 * p[:, None] * Y + p3 * (p ** 2)[:, None] * y[None, :]
    try:
        W = np.linalg.solve(G, V.conj().T).T
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"metric matrix is singular: {exc}") from None
    second = np.einsum("ij,ij->i", V, W).real
    if np.any(gXX <= 0):
        raise DomainError("zero tangent vector")
    return 2.0 * (second - first) / gXX ** 2


def hsc(kind: MetricKind, z, X, tol: float = DEFAULT_TOL) -> float:
    X = np.asarray(X, dtype=complex)
    if not np.any(X):
        raise DomainError("holomorphic sectional curvature needs a non-zero direction")
    return float(hsc_batch(kind, z, X[None, :], tol)[0])


def tensor_derivative_residuals(kind: MetricKind, z, step: float = 1e-5,
                                tol: float = DEFAULT_TOL) -> dict[str, float]:
    """Relative max-error of the analytic ``dG`` and ``ddG`` against central
    Wirtinger differences of ``G`` and ``dG``."""
    z = check_domain(kind, z)
    d = z.size
    dG = metric_tensor_d(kind, z, tol)
    ddG = metric_tensor_dd(kind, z, tol)
    fd1 = np.zeros_like(dG)
    fd2 = np.zeros_like(ddG)
    for c in range(d):
        e = np.zeros(d, dtype=complex)
        e[c] = step
        gx = (metric_tensor(kind, z + e, tol) - metric_tensor(kind, z - e, tol)) / (2 * step)
        gy = (metric_tensor(kind, z + 1j * e, tol) - metric_tensor(kind, z - 1j * e, tol)) / (2 * step)
        fd1[c] = 0.5 * (gx - 1j * gy)
        hx = (metric_tensor_d(kind, z + e, tol) - metric_tensor_d(kind, z - e, tol)) / (2 * step)
        hy = (metric_tensor_d(kind, z + 1j * e, tol) - metric_tensor_d(kind, z - 1j * e, tol)) / (2 * step)
        fd2[:, c] = 0.5 * (hx + 1j * hy)
    return {
        "first": float(np.abs(fd1 - dG).max() / np.abs(dG).max()),
        "second": float(np.abs(fd2 - ddG).max() / np.abs(ddG).max()),
    }


# -- extremal HSC ---------------------------------------------------------------

@dataclass
class ExtremalHSC:
    """Inner estimates of the extremal HSC over unit directions.

    ``k_minus >= true infimum`` and ``k_plus <= true supremum``.
    """

    k_minus: float
    k_plus: float
    x_minus: np.ndarray
    x_plus: np.ndarray


def _to_real(x):
    return np.concatenate([x.real, x.imag])


def _to_complex(r):
    k = r.size // 2
    return r[:k] + 1j * r[k:]


def _refine(fun, x0, value, iters, sign):
    # coordinate line searches along great circles through a tangent frame
    r = _to_real(x0)
    r /= np.linalg.norm(r)
    best = sign * value
    width = 0.5
    for _ in range(iters):
        k = r.size // 2
        phase = np.concatenate([-r[k:], r[:k]])
        frame = null_space(np.vstack([r, phase])).T
        improved = False
        for e in frame:
            def obj(th, r=r, e=e):
                return -sign * fun(_to_complex(np.cos(th) * r + np.sin(th) * e))
            res = minimize_scalar(obj, bounds=(-width, width), method="bounded",
                                  options={"xatol": 1e-12})
            if -res.fun > best + 1e-15 * max(1.0, abs(best)):
                best = -res.fun
                r = np.cos(res.x) * r + np.sin(res.x) * e
                r /= np.linalg.norm(r)
                improved = True
        if not improved:
            width *= 0.25
            if width < 1e-10:
                break
    return _to_complex(r), sign * best


def extremal_hsc(kind: MetricKind, z, samples: int = 256, refine_iters: int = 50,
                 seed=None, tol: float = DEFAULT_TOL) -> ExtremalHSC:
    """Estimate ``K^-`` and ``K^+`` at ``z`` by seeded sampling and local refinement."""
    if samples < 1:
        raise DomainError("need at least one sample direction")
    z = check_domain(kind, z)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    d = z.size
    Xs = rng.standard_normal((samples, d)) + 1j * rng.standard_normal((samples, d))
    Xs /= np.linalg.norm(Xs, axis=1)[:, None]
    vals = hsc_batch(kind, z, Xs, tol)
    fun = lambda x: float(hsc_batch(kind, z, x[None, :], tol)[0])
    i_lo, i_hi = int(np.argmin(vals)), int(np.argmax(vals))
    x_lo, k_lo = Xs[i_lo], float(vals[i_lo])
    x_hi, k_hi = Xs[i_hi], float(vals[i_hi])
    if d > 1 and refine_iters > 0:
        x_lo, k_lo = _refine(fun, x_lo, k_lo, refine_iters, -1.0)
        x_hi, k_hi = _refine(fun, x_hi, k_hi, refine_iters, 1.0)
    return ExtremalHSC(k_lo, k_hi, x_lo / np.linalg.norm(x_lo), x_hi / np.linalg.norm(x_hi))


# -- reports -----------------------------------------------------------------------

@dataclass
class CurvatureReport:
    point: np.ndarray
    kappa_fd: float
    direction: np.ndarray | None = None
    kappa_closed: float | None = None
    hsc: float | None = None
    residuals: dict = field(default_factory=dict)
    tolerance: float = 1e-3

    @property
    def consistent(self) -> bool:
        if self.kappa_closed is None:
            return True
        return abs(self.kappa_fd - self.kappa_closed) <= self.tolerance * max(abs(self.kappa_closed), 1e-300)


def curvature_report(kind: MetricKind, F: DiagonalField, z, step: float | None = None,
                     tol: float = DEFAULT_TOL, rel_tol: float = 1e-3) -> CurvatureReport:
    """Leaf curvature at ``z`` by FD, plus closed form and ``hsc(z, X(z))`` where defined."""
    z = as_point(z)
    k_fd = kappa_fd(kind, F, z, step, tol)
    _, X = leaf_point(kind, F, z)
    closed = None
    try:
        closed = kappa_closed_on_S(kind, F, z, tol)
    except DomainError:
        pass
    rep = CurvatureReport(point=z, kappa_fd=k_fd, direction=X, kappa_closed=closed,
                          hsc=hsc(kind, z, X, tol), tolerance=rel_tol)
    if closed is not None:
        rep.residuals["fd_vs_closed"] = abs(k_fd - closed) / max(abs(closed), 1e-300)
    rep.residuals["hsc_minus_leaf"] = rep.hsc - (closed if closed is not None else k_fd)
    return rep
