import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grauert import radial
from grauert.errors import DomainError, NumericError
from grauert.radial import (
    eval_eta, eval_potential, eval_U_derivs, eval_u, eval_v, find_eta_threshold, profile_values,
)

from conftest import central_diff, rel, u_mp, v_exact, v_quad_mp

LOG2x2 = 2 * math.log(2)


def test_u_at_one_is_one():
    assert eval_u(1.0) == (1.0,)


def test_u_at_e():
    (u,) = eval_u(math.e)
    assert u == pytest.approx((math.e - 1) / math.e, rel=1e-15)
    assert u == pytest.approx(0.6321206, abs=1e-7)


def test_du_matches_finite_difference():
    fd = central_diff(lambda x: eval_u(x)[0], 0.5, 1e-6)
    assert rel(eval_u(0.5, 1)[1], fd) < 1e-6


@pytest.mark.parametrize("t", [1e-6, 0.01, 0.5, 0.9, 0.95, 0.999, 1 - 1e-3, 1 + 1e-3,
                               1.0 + 1e-7, 1.05, 1.0999, 1.1001, 3.0, 1e4])
def test_u_derivatives_against_high_precision(t):
    # the series branch near t = 1 and the closed forms outside it
    ref = [mp.diff(u_mp, mp.mpf(t), k) for k in range(3)]
    got = eval_u(t, 2)
    for g, r in zip(got, ref):
        assert rel(g, float(r)) < 1e-11


def test_u_continuous_across_one():
    for e in (1e-7, -1e-7):
        assert abs(eval_u(1 + e)[0] - 1) < 1e-6


@pytest.mark.parametrize("edge", [radial.TAYLOR_WINDOW, -radial.TAYLOR_WINDOW])
def test_series_switch_is_seamless(edge):
    inside = eval_u(1 + edge * (1 - 1e-12), 2)
    outside = eval_u(1 + edge * (1 + 1e-12), 2)
    for a, b in zip(inside, outside):
        assert rel(a, b) < 1e-11


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_domain_errors(bad):
    with pytest.raises(DomainError):
        eval_u(bad)
    with pytest.raises(DomainError):
        eval_v(bad)
    with pytest.raises(DomainError):
        eval_U_derivs(bad)


def test_u_order_out_of_range():
    with pytest.raises(DomainError):
        eval_u(2.0, 3)


def test_v_at_one_confirmed_by_quadrature():
    # (1 - e^-x)^2 / x^2 over (0, inf), independent of the package
    oracle = mp.quad(lambda x: (-mp.expm1(-x)) ** 2 / x ** 2, [0, 1, mp.inf])
    assert float(oracle) == pytest.approx(LOG2x2, abs=1e-14)
    assert eval_v(1.0) == pytest.approx(LOG2x2, abs=1e-13)
    assert eval_v(1.0) < 2


@pytest.mark.parametrize("t", np.geomspace(1e-8, 1e8, 41))
def test_v_against_exponential_integral(t):
    assert rel(eval_v(t), v_exact(t)) < 1e-12


@pytest.mark.parametrize("t", [1e-3, 0.2, 0.9, 1.7, 25.0])
def test_v_against_direct_quadrature(t):
    assert rel(eval_v(t), v_quad_mp(t)) < 1e-12


def test_v_vanishes_at_zero():
    vals = [eval_v(10.0 ** -k) for k in (2, 10, 100, 300)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 2e-3


def test_v_is_deterministic_after_cache_clear():
    before = [eval_v(t) for t in (0.3, 3.0, 300.0)]
    radial._v_cached.cache_clear()
    after = [eval_v(t) for t in (300.0, 3.0, 0.3)]
    assert before == after[::-1]


def test_v_reports_quadrature_failure(monkeypatch):
    monkeypatch.setattr(radial, "REL_ACCEPT", 0.0)
    with pytest.raises(NumericError) as info:
        radial._quad(0.0, 30.0, 1e-300)
    assert info.value.estimate is not None and info.value.estimate > 0


def test_v_derivative_identity():
    for t in np.geomspace(1e-3, 1e3, 25):
        fd = central_diff(eval_v, t, 1e-4 * t)
        (u,) = eval_u(t)
        assert rel(fd, t * u * u) < 1e-5


def test_grid_positivity_and_monotonicity():
    ts = np.geomspace(1e-8, 1e8, 200)
    us = [eval_u(t)[0] for t in ts]
    vs = [eval_v(t) for t in ts]
    assert min(us) > 0 and min(vs) > 0
    assert np.all(np.diff(vs) > 0)


def test_U_derivs_at_one():
    d1, d2, _, _ = eval_U_derivs(1.0)
    assert d1 == pytest.approx(LOG2x2, abs=1e-12)
    assert d2 == pytest.approx(1 - LOG2x2, abs=1e-12)
    assert d1 == pytest.approx(1.3862944, abs=1e-7)
    assert d2 == pytest.approx(-0.3862944, abs=1e-7)


def test_U_third_derivative_fd():
    fd = central_diff(lambda x: eval_U_derivs(x)[1], 0.7, 1e-5)
    assert rel(eval_U_derivs(0.7)[2], fd) < 1e-5


@pytest.mark.parametrize("t", [1e-3, 0.05, 0.7, 1.0, 1.3, 20.0, 1e3])
def test_U_higher_derivatives_fd(t):
    h = 1e-4 * t
    d = eval_U_derivs(t)
    fd3 = central_diff(lambda x: eval_U_derivs(x)[1], t, h)
    fd4 = central_diff(lambda x: eval_U_derivs(x)[2], t, h)
    assert rel(d[2], fd3) < 1e-4
    assert rel(d[3], fd4) < 1e-4


def test_U_identities_exact():
    for t in (1e-4, 0.3, 1.0, 8.0):
        p = profile_values(t)
        assert p.dU == pytest.approx(p.v / p.t, rel=1e-14)
        assert p.d2U == pytest.approx(p.u ** 2 - p.v / p.t ** 2, rel=1e-13)
        assert p.eta == pytest.approx(p.t ** 2 * p.u ** 2 - p.v, rel=1e-13)


@pytest.mark.parametrize("t", [0.05, 0.6, 2.0, 9.0])
def test_U_second_derivative_against_potential(t):
    h = 1e-3 * t
    second = (eval_potential(t + h) - 2 * eval_potential(t) + eval_potential(t - h)) / h ** 2
    assert rel(eval_U_derivs(t)[1], second) < 1e-4


def test_eta_values():
    assert eval_eta(1.0) == pytest.approx(1 - LOG2x2, abs=1e-12)
    assert eval_eta(1.0) < 0
    assert eval_eta(10.0) > 0
    big = [eval_eta(t) for t in (1e2, 1e4, 1e6, 1e8)]
    assert all(b > a for a, b in zip(big, big[1:])) and big[-1] > 1e12


def test_eta_threshold():
    tR = find_eta_threshold()
    assert abs(eval_eta(tR)) < 1e-6
    assert tR > 1
    assert eval_eta(2 * tR) > 0
    assert all(eval_eta(t) < 0 for t in np.linspace(0.5, 1.0, 20))
    assert all(eval_eta(t) > 0 for t in np.geomspace(2 * tR, 1e6, 60))


def test_potential():
    assert eval_potential(1.0) == 0.0
    fd = central_diff(eval_potential, 2.0, 1e-4)
    assert rel(fd, eval_v(2.0) / 2.0) < 1e-6
    assert eval_potential(4.0) > eval_potential(2.0) > 0 > eval_potential(0.5)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-18, max_value=18))
def test_v_strictly_increasing(logt):
    t = math.exp(logt)
    assert eval_v(t * (1 + 1e-6)) > eval_v(t) > 0
