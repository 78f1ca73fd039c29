"""The shared quadrature and interpolation kernels."""

from __future__ import annotations

import math

import numpy as np
import pytest

from frialab.numerics import (
    adaptive_simpson,
    integrate_01_ts,
    pchip_eval,
    pchip_slopes,
    tanh_sinh_01,
)


def test_adaptive_simpson_polynomial_exact():
    # Simpson is exact on cubics
    val = adaptive_simpson(lambda x: x**3 - 2 * x + 1, -1.0, 2.0, tol=1e-14)
    assert val == pytest.approx(15.0 / 4.0 - 3.0 + 3.0, rel=1e-14)


def test_adaptive_simpson_oscillatory():
    val = adaptive_simpson(lambda x: math.cos(10 * x), 0.0, 3.0, tol=1e-12)
    assert val == pytest.approx(math.sin(30.0) / 10.0, abs=1e-11)


def test_adaptive_simpson_complex():
    val = adaptive_simpson(lambda x: complex(math.cos(x), math.sin(x)), 0.0, 1.0, tol=1e-12)
    assert val.real == pytest.approx(math.sin(1.0), abs=1e-12)
    assert val.imag == pytest.approx(1.0 - math.cos(1.0), abs=1e-12)


def test_adaptive_simpson_degenerate_interval():
    assert adaptive_simpson(lambda x: 1.0 / x, 2.0, 2.0) == 0.0


def test_tanh_sinh_handles_log_endpoint():
    # integrable endpoint singularity: int_0^1 log(t) dt = -1
    val, err = integrate_01_ts(lambda t, omt: np.log(t), tol=1e-13)
    assert complex(val).real == pytest.approx(-1.0, abs=1e-12)
    assert err <= 1e-13
    # and the rule integrates 1 to 1
    val, _ = integrate_01_ts(lambda t, omt: np.ones_like(t), tol=1e-13)
    assert complex(val).real == pytest.approx(1.0, abs=1e-13)


def test_tanh_sinh_nodes_symmetric():
    t, omt, w = tanh_sinh_01(6)
    assert np.allclose(t + omt, 1.0, atol=1e-15)
    assert np.allclose(t[::-1], omt, atol=1e-16)
    assert float(w.sum()) == pytest.approx(1.0, abs=1e-12)


def test_pchip_preserves_monotonicity():
    x = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    y = np.array([0.0, -0.5, -0.52, -2.0, -2.01])
    d = pchip_slopes(x, y)
    q = np.linspace(0.0, 4.0, 401)
    vals = [pchip_eval(x, y, d, float(t)) for t in q]
    assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))
    # interpolation reproduces the nodes
    for xi, yi in zip(x, y):
        assert pchip_eval(x, y, d, float(xi)) == pytest.approx(yi, abs=1e-14)


def test_pchip_reproduces_smooth_function():
    x = np.linspace(0.0, 2.0, 33)
    y = np.exp(-(x**2) / 2)
    d = pchip_slopes(x, y)
    for t in (0.13, 0.77, 1.41, 1.93):
        assert pchip_eval(x, y, d, t) == pytest.approx(math.exp(-t * t / 2), abs=5e-5)
