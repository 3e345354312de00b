"""Registry of numerical claims C1..C12 about the Grauert metrics."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .curvature import hsc, hsc_batch, kappa_closed_on_S
from .errors import DomainError
from .geometry import (
    BallComplement, BergmanBall, DiagonalField, GrauertPunctured, field_eval, grauert_metric,
    hdot, norm2, random_unitary, random_vector, sample_S,
)
from .profiles import (
    find_min_zero_a, kappa_profile_ball, kappa_profile_cn, kappa_profile_cstar, log_u_hessian_sign,
)
from .radial import DEFAULT_TOL, eval_eta, eval_v, find_eta_threshold

ALPHAS = (-0.5, -1.0, -2.0, -7.0)


@dataclass
class RunConfig:
    n: int = 2
    N: int = 2
    alpha: float = -1.0
    w: tuple = ()
    t_min: float = 1e-6
    t_max: float = 1e3
    steps: int = 64
    radius_list: tuple = ()
    seed: int = 42
    tol: float = DEFAULT_TOL
    format: str = "csv"

    def validate(self, positive_range: bool = True) -> "RunConfig":
        if self.n < 2:
            raise DomainError("n must be >= 2")
        if self.N < self.n:
            raise DomainError("N must be >= n")
        if not self.alpha < 0:
            raise DomainError("alpha must be negative")
        if not self.t_min < self.t_max or (positive_range and not self.t_min > 0):
            raise DomainError("need 0 < t_min < t_max" if positive_range else "need t_min < t_max")
        if self.steps < 2:
            raise DomainError("steps must be >= 2")
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        if self.format not in ("csv", "json"):
            raise DomainError("format must be csv or json")
        self.slice_kind()  # validates w
        return self

    def slice_kind(self) -> BallComplement:
        w = list(self.w)
        if len(w) == self.N - self.n:
            w = [0j] * self.n + w
        elif len(w) not in (0, self.N):
            raise DomainError(f"w needs {self.N - self.n} or {self.N} coordinates")
        return BallComplement(self.N, self.n, tuple(w))

    def as_dict(self) -> dict:
        d = asdict(self)
        d["w"] = [[c.real, c.imag] for c in self.slice_kind().w]
        d["radius_list"] = list(self.radius_list)
        return d


@dataclass
class ClaimResult:
    id: str
    description: str
    computed: dict = field(default_factory=dict)
    threshold: float = 0.0
    status: str = "fail"

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _result(cid, desc, ok, threshold, **computed) -> ClaimResult:
    return ClaimResult(cid, desc, computed, threshold, "pass" if ok else "fail")


def claim_c1(cfg: RunConfig) -> ClaimResult:
    v1 = eval_v(1.0, cfg.tol)
    closed = 2 * math.log(2)
    ok = 1.386293 <= v1 <= 1.386296 and abs(v1 - closed) < 1e-6 and v1 < 2
    return _result("C1", "v(1) = 2 log 2 < 2", ok, 1e-6, v1=v1, closed_form=closed)


def claim_c2(cfg: RunConfig) -> ClaimResult:
    f1 = kappa_profile_cn(1.0, cfg.tol)
    v1 = 2 * math.log(2)
    ref = -2 * (4 - 2 * v1) / (1 + v1) ** 2
    ok = f1 < 0 and abs(f1 - ref) < 1e-4 and abs(f1 + 0.4311) < 1e-4
    return _result("C2", "f(1) < 0 for the punctured C^n profile", ok, 1e-4, f1=f1, reference=ref)


def claim_c3(cfg: RunConfig) -> ClaimResult:
    vals = [kappa_profile_cn(10.0 ** -k, cfg.tol) for k in range(2, 9)]
    ok = all(x > 0 for x in vals) and all(b > a for a, b in zip(vals, vals[1:]))
    return _result("C3", "f(10^-k) > 0 and increasing for k = 2..8", ok, 0.0,
                   **{f"f_1e-{k}": x for k, x in zip(range(2, 9), vals)})


def claim_c4(cfg: RunConfig) -> ClaimResult:
    a = find_min_zero_a(tol=cfg.tol)
    fa = kappa_profile_cn(a, cfg.tol)
    ok = 0 < a < 1 and abs(fa) < 1e-6 and kappa_profile_cn(a / 2, cfg.tol) > 0
    return _result("C4", "least zero a of f lies in (0, 1), f > 0 below it", ok, 1e-6, a=a, f_a=fa)


def claim_c5(cfg: RunConfig) -> ClaimResult:
    tR = find_eta_threshold(tol=cfg.tol)
    eta_R = eval_eta(tR, cfg.tol)
    grid = np.geomspace(tR, 1e6, 257)[1:]
    eta_min = min(eval_eta(t, cfg.tol) for t in grid)
    F = DiagonalField(cfg.n, cfg.alpha)
    kind = GrauertPunctured(cfg.n)
    kap = {f"kappa_{m}tR": kappa_closed_on_S(kind, F, sample_S(F, m * tR, cfg.seed + m), cfg.tol)
           for m in (2, 10)}
    ok = abs(eta_R) <= 1e-6 and eta_min > 0 and all(k < 0 for k in kap.values())
    return _result("C5", "eta threshold t_R exists; leaf curvature < 0 beyond it", ok, 1e-6,
                   t_R=tR, eta_t_R=eta_R, eta_min_above=eta_min, **kap)


def claim_c6(cfg: RunConfig) -> ClaimResult:
    kind = GrauertPunctured(cfg.n)
    rng = np.random.default_rng(cfg.seed)
    spreads = {}
    for t in (1e-2, 1.0, 10.0):
        ks = [kappa_closed_on_S(kind, DiagonalField(cfg.n, a), sample_S(DiagonalField(cfg.n, a), t, rng), cfg.tol)
              for a in ALPHAS]
        spreads[f"spread_t{t:g}"] = (max(ks) - min(ks)) / abs(np.mean(ks))
    ok = all(s < 1e-10 for s in spreads.values())
    return _result("C6", "leaf curvature on the locus does not depend on alpha", ok, 1e-10, **spreads)


def ball_profile_checks(N: int, r2: float, tol: float = DEFAULT_TOL) -> dict:
    return {
        "f_half": kappa_profile_ball(N, r2, r2 / 2, tol),
        "f_edge": kappa_profile_ball(N, r2, r2 - 1e-6, tol),
        "edge_limit": -6.0 / (N + 1),
        "f_1e-7": kappa_profile_ball(N, r2, 1e-7, tol),
    }


def claim_c7(cfg: RunConfig) -> ClaimResult:
    computed = {}
    ok = True
    r2s = sorted({1.0, 0.64, cfg.slice_kind().r2}, reverse=True)
    for N in sorted({2, 3, cfg.N}):
        for r2 in r2s:
            c = ball_profile_checks(N, r2, cfg.tol)
            tag = f"N{N}_r2_{r2:g}"
            computed.update({f"{tag}_{k}": x for k, x in c.items()})
            ok &= c["f_half"] < 0
            ok &= abs(c["f_edge"] - c["edge_limit"]) < 1e-3
            ok &= c["f_1e-7"] > 1e3
    return _result("C7", "ball profile: f(r^2/2) < 0, f -> -6/(N+1) at r^2, f(1e-7) > 1e3",
                   bool(ok), 1e-3, **computed)


def claim_c8(cfg: RunConfig) -> ClaimResult:
    grid = np.geomspace(1e-6, 1e6, 256)
    f0 = kappa_profile_cstar(1e-8).f
    finf = kappa_profile_cstar(1e6).f
    fmax = max(kappa_profile_cstar(t).f for t in grid)
    smin = min(log_u_hessian_sign(t) for t in grid)
    ok = abs(f0 + 4) < 1e-2 and abs(finf) < 1e-2 and fmax <= 1e-12 and smin >= -1e-12
    return _result("C8", "C*: f <= 0, f -> -4 at 0, f -> 0 at infinity", ok, 1e-2,
                   **{"f_1e-8": f0, "f_1e6": finf}, f_max_grid=fmax, hessian_sign_min=smin)


def claim_c9(cfg: RunConfig) -> ClaimResult:
    rng = np.random.default_rng(cfg.seed)
    computed = {}
    ok = True
    for N in (1, 2, 3):
        errs = []
        for _ in range(20):
            z = random_vector(N, rng)
            z *= 0.95 * rng.random() / math.sqrt(norm2(z))
            errs.append(abs(hsc(BergmanBall(N), z, random_vector(N, rng)) + 4.0 / (N + 1)))
        computed[f"max_err_N{N}"] = max(errs)
        ok &= max(errs) < 1e-6
    return _result("C9", "Bergman HSC is -4/(N+1)", bool(ok), 1e-6, **computed)


def claim_c10(cfg: RunConfig) -> ClaimResult:
    rng = np.random.default_rng(cfg.seed)
    kind = GrauertPunctured(cfg.n)
    g_err = h_err = 0.0
    for _ in range(100):
        U = random_unitary(cfg.n, rng)
        z = random_vector(cfg.n, rng)
        z *= math.sqrt(10 ** rng.uniform(-2, 2) / norm2(z))
        X = random_vector(cfg.n, rng)
        g0, g1 = grauert_metric(z, X, cfg.tol), grauert_metric(U @ z, U @ X, cfg.tol)
        k0, k1 = hsc(kind, z, X, cfg.tol), hsc(kind, U @ z, U @ X, cfg.tol)
        g_err = max(g_err, abs(g1 - g0) / abs(g0))
        h_err = max(h_err, abs(k1 - k0) / abs(k0))
    ok = g_err < 1e-10 and h_err < 1e-10
    return _result("C10", "g and HSC are invariant under unitary rotations", ok, 1e-10,
                   metric_rel_err=g_err, hsc_rel_err=h_err)


def claim_c11(cfg: RunConfig) -> ClaimResult:
    rng = np.random.default_rng(cfg.seed)
    kind = GrauertPunctured(cfg.n)
    worst = math.inf
    for i in range(50):
        F = DiagonalField(cfg.n, ALPHAS[i % len(ALPHAS)])
        z = sample_S(F, 10 ** rng.uniform(-4, 2), rng)
        X, _ = field_eval(F, z)
        worst = min(worst, hsc(kind, z, X, cfg.tol) - kappa_closed_on_S(kind, F, z, cfg.tol))
    return _result("C11", "HSC along X(z) bounds the leaf curvature from above", worst >= -1e-6, 1e-6,
                   min_gap=worst)


def claim_c12(cfg: RunConfig) -> ClaimResult:
    rng = np.random.default_rng(cfg.seed)
    kind = GrauertPunctured(cfg.n)
    tR = find_eta_threshold(tol=cfg.tol)
    worst = -math.inf
    for i in range(50):
        t = (2 if i % 2 == 0 else 10) * tR
        z = random_vector(cfg.n, rng)
        z *= math.sqrt(t / norm2(z))
        V = random_vector(cfg.n, rng)
        V -= hdot(V, z) / norm2(z) * z
        worst = max(worst, float(hsc_batch(kind, z, V[None, :], cfg.tol)[0]))
    return _result("C12", "HSC < 0 along directions orthogonal to z beyond t_R", worst < 0, 0.0,
                   max_hsc=worst, t_R=tR)


REGISTRY: dict[str, Callable[[RunConfig], ClaimResult]] = {
    "C1": claim_c1, "C2": claim_c2, "C3": claim_c3, "C4": claim_c4,
    "C5": claim_c5, "C6": claim_c6, "C7": claim_c7, "C8": claim_c8,
    "C9": claim_c9, "C10": claim_c10, "C11": claim_c11, "C12": claim_c12,
}


def run_claims(cfg: RunConfig, ids=None) -> list[ClaimResult]:
    cfg.validate()
    return [REGISTRY[i](cfg) for i in (ids or REGISTRY)]
