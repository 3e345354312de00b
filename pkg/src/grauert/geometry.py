"""Points, metrics and the diagonal vector field.

Points and tangent vectors are 1-d complex numpy arrays.  The Hermitian
product is ``<X, z> = sum X_j conj(z_j)`` (linear in the first slot).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from .errors import DomainError
from .radial import DEFAULT_TOL, eval_u, eval_v

# points this close to the origin, to A, or to the unit sphere are rejected
DEGENERACY_EPS = 1e-10


def as_point(z) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.ndim != 1 or z.size == 0:
        raise DomainError("a point must be a non-empty 1-d complex vector")
    if not np.all(np.isfinite(z)):
        raise DomainError("point has non-finite coordinates")
    return z


def _pair(z, X) -> tuple[np.ndarray, np.ndarray]:
    z, X = as_point(z), np.atleast_1d(np.asarray(X, dtype=complex))
    if X.shape != z.shape:
        raise DomainError(f"tangent vector has shape {X.shape}, base point {z.shape}")
    return z, X


def hdot(a, b) -> complex:
    """Hermitian product ``<a, b> = sum a_j conj(b_j)``."""
    return complex(np.vdot(b, a))


def norm2(a) -> float:
    return float(np.vdot(a, a).real)


# -- metric kinds -----------------------------------------------------------

@dataclass(frozen=True)
class GrauertPunctured:
    n: int

    @property
    def dim(self) -> int:
        return self.n


@dataclass(frozen=True)
class BergmanBall:
    N: int

    @property
    def dim(self) -> int:
        return self.N


@dataclass(frozen=True)
class BallComplement:
    """Grauert metric pulled back by the projection to the first n coordinates,
    plus the Bergman metric of B^N.  ``w`` fixes the slice ``D_w``."""

    N: int
    n: int
    w: tuple = field(default=())

    def __post_init__(self):
        if not 2 <= self.n <= self.N:
            raise DomainError(f"need 2 <= n <= N, got n={self.n}, N={self.N}")
        w = np.zeros(self.N, dtype=complex) if len(self.w) == 0 else as_point(self.w)
        if w.size != self.N:
            raise DomainError(f"slice point must have {self.N} coordinates")
        if np.any(w[: self.n] != 0):
            raise DomainError("slice point must lie in A (first n coordinates zero)")
        if norm2(w) >= 1.0 - DEGENERACY_EPS:
            raise DomainError("slice point must lie inside the unit ball")
        object.__setattr__(self, "w", tuple(complex(c) for c in w))

    @property
    def dim(self) -> int:
        return self.N

    @property
    def r2(self) -> float:
        return 1.0 - norm2(np.array(self.w))

    def embed(self, zt) -> np.ndarray:
        """Point of ``D_w`` whose first n coordinates are ``zt``."""
        zt = as_point(zt)
        if zt.size != self.n:
            raise DomainError(f"slice coordinates must have length {self.n}")
        z = np.array(self.w, dtype=complex)
        z[: self.n] = zt
        return z


MetricKind = GrauertPunctured | BergmanBall | BallComplement


def _grauert_coeffs(t: float, tol: float) -> tuple[float, float]:
    (u,) = eval_u(t)
    v = eval_v(t, tol)
    return 1.0 + v / t, u * u - v / t ** 2


def grauert_metric(z, X, tol: float = DEFAULT_TOL) -> float:
    """Squared length ``g(z, X)`` for the Grauert metric on punctured C^n."""
    z, X = _pair(z, X)
    t = norm2(z)
    if t <= DEGENERACY_EPS ** 2:
        raise DomainError("the Grauert metric is not defined at the origin")
    a, b = _grauert_coeffs(t, tol)
    return a * norm2(X) + b * abs(hdot(X, z)) ** 2


def bergman_metric(N: int, z, X) -> float:
    z, X = _pair(z, X)
    if z.size != N:
        raise DomainError(f"point must have {N} coordinates")
    gap = 1.0 - norm2(z)
    if gap <= DEGENERACY_EPS:
        raise DomainError("point is not inside the unit ball")
    return (N + 1) * (abs(hdot(X, z)) ** 2 / gap ** 2 + norm2(X) / gap)


def ball_complement_metric(kind: BallComplement, z, X, tol: float = DEFAULT_TOL) -> float:
    z, X = _pair(z, X)
    if z.size != kind.N:
        raise DomainError(f"point must have {kind.N} coordinates")
    if norm2(z[: kind.n]) <= DEGENERACY_EPS ** 2:
        raise DomainError("point lies on the excluded subspace A")
    return grauert_metric(z[: kind.n], X[: kind.n], tol) + bergman_metric(kind.N, z, X)


def metric(kind: MetricKind, z, X, tol: float = DEFAULT_TOL) -> float:
    if isinstance(kind, GrauertPunctured):
        z, X = _pair(z, X)
        if z.size != kind.n:
            raise DomainError(f"point must have {kind.n} coordinates")
        return grauert_metric(z, X, tol)
    if isinstance(kind, BergmanBall):
        return bergman_metric(kind.N, z, X)
    return ball_complement_metric(kind, z, X, tol)


def check_domain(kind: MetricKind, z) -> np.ndarray:
    z = as_point(z)
    if z.size != kind.dim:
        raise DomainError(f"point must have {kind.dim} coordinates, got {z.size}")
    if isinstance(kind, GrauertPunctured):
        if norm2(z) <= DEGENERACY_EPS ** 2:
            raise DomainError("point is at the origin")
        return z
    if 1.0 - norm2(z) <= DEGENERACY_EPS:
        raise DomainError("point is not inside the unit ball")
    if isinstance(kind, BallComplement) and norm2(z[: kind.n]) <= DEGENERACY_EPS ** 2:
        raise DomainError("point lies on the excluded subspace A")
    return z


# -- the diagonal field ----------------------------------------------------------

@dataclass(frozen=True)
class DiagonalField:
    """``X(z) = (z_1, ..., z_{n-1}, alpha z_n)`` with ``alpha < 0``.

    ``n = 1`` is allowed and gives the field ``alpha z`` on C*.
    """

    n: int
    alpha: float

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("field dimension must be >= 1")
        if not self.alpha < 0:
            raise DomainError(f"alpha must be negative, got {self.alpha}")

    @property
    def weights(self) -> np.ndarray:
        w = np.ones(self.n)
        w[-1] = self.alpha
        return w


def field_eval(F: DiagonalField, z) -> tuple[np.ndarray, np.ndarray]:
    """Return ``X(z)`` and ``DX(z)(X(z))``."""
    z = as_point(z)
    if z.size != F.n:
        raise DomainError(f"field acts on C^{F.n}, point has {z.size} coordinates")
    w = F.weights
    return w * z, w * w * z


def flow(F: DiagonalField, z, T: complex) -> np.ndarray:
    """Solution of ``Z' = X(Z)``, ``Z(0) = z`` at complex time ``T``."""
    z = as_point(z)
    if z.size != F.n:
        raise DomainError(f"field acts on C^{F.n}, point has {z.size} coordinates")
    if not np.any(z):
        raise DomainError("the origin is the singular point of the field")
    return z * np.exp(F.weights * complex(T))


def wedge_norm_sq(V, W) -> float:
    """``|V|^2 |W|^2 - |<V, W>|^2``, clamped at zero."""
    V, W = _pair(V, W)
    return max(0.0, norm2(V) * norm2(W) - abs(hdot(V, W)) ** 2)


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def sample_S(F: DiagonalField, t: float, seed=None) -> np.ndarray:
    """Random point with ``<z, X(z)> = 0`` and ``|z|^2 = t``."""
    if F.n < 2:
        raise DomainError("the orthogonality locus is empty for n = 1")
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    rng = _rng(seed)
    head = rng.standard_normal(F.n - 1) + 1j * rng.standard_normal(F.n - 1)
    phase = np.exp(2j * np.pi * rng.random())
    zn = np.sqrt(norm2(head) / -F.alpha) * phase
    z = np.append(head, zn)
    # <z, X(z)> = |head|^2 + alpha |z_n|^2 = 0 is preserved by scaling
    return z * np.sqrt(t / norm2(z))


def sample_S_w(kind: BallComplement, F: DiagonalField, t: float, seed=None) -> np.ndarray:
    """Point of ``D_w`` on the orthogonality locus with slice radius ``|z~|^2 = t``."""
    if F.n != kind.n:
        raise DomainError("field dimension must equal the number of projected coordinates")
    if not 0 < t < kind.r2:
        raise DomainError(f"slice radius t = {t} outside (0, {kind.r2})")
    return kind.embed(sample_S(F, t, seed))


def random_unitary(n: int, seed=None) -> np.ndarray:
    return unitary_group.rvs(n, random_state=_rng(seed)) if n > 1 else \
        np.exp(2j * np.pi * _rng(seed).random()) * np.ones((1, 1))


def random_vector(n: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)
