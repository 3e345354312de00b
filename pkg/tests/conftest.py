import math

import mpmath as mp
import numpy as np
import pytest

mp.mp.dps = 40


def v_exact(t) -> float:
    """v(t) through the exponential integral:
    v(t) = 2 (Ei(2 log t) - Ei(log t)) - (t - 1)^2 / log t."""
    t = mp.mpf(t)
    if t == 1:
        return float(2 * mp.log(2))
    lg = mp.log(t)
    return float(2 * (mp.ei(2 * lg) - mp.ei(lg)) - (t - 1) ** 2 / lg)


def v_quad_mp(t) -> float:
    """v(t) by mpmath tanh-sinh quadrature of ((e^s - 1)/s)^2 in s = log tau."""
    f = lambda s: (mp.expm1(s) / s) ** 2
    top = mp.log(mp.mpf(t))
    cuts = [c for c in (-1e4, -100, -10, -1) if c < top]
    return float(mp.quad(f, [-mp.inf, *cuts, top]))


def u_mp(t):
    t = mp.mpf(t)
    return (t - 1) / (t * mp.log(t))


def central_diff(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
