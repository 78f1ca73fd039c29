"""Small numerical kernels shared across modules.

Provides a globally adaptive Simpson rule (complex-capable), a tanh-sinh
rule on [0, 1] for integrands with awkward endpoint behaviour, and a
monotone (Fritsch-Carlson) cubic interpolant.  Everything here is
deterministic: no randomized pivoting, fixed evaluation order.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import NumericError

__all__ = [
    "adaptive_simpson",
    "tanh_sinh_01",
    "integrate_01_ts",
    "pchip_slopes",
    "pchip_eval",
]


def _simpson_step(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0, abs(delta) / 15.0
    lv, le = _simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
    rv, re = _simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    return lv + rv, le + re


def adaptive_simpson(
    f: Callable[[float], complex],
    a: float,
    b: float,
    tol: float = 1e-12,
    max_depth: int = 48,
) -> complex:
    """Integrate f over [a, b] to absolute tolerance ``tol``.

    The integrand may return float or complex.  Raises NumericError when
    the recursion bottoms out with an error estimate above tolerance.
    """
    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    value, err = _simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth)
    if err > 50.0 * tol:
        raise NumericError(
            f"adaptive quadrature on [{a}, {b}] reached {err:.3e}, wanted {tol:.3e}"
        )
    return value


# tanh-sinh nodes on [0, 1].  t and 1-t are both carried explicitly so the
# caller can evaluate factors like log(1-t) without cancellation.
_TS_CACHE: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
_TS_SPAN = 4.0  # truncation of the double-exponential variable


def tanh_sinh_01(level: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (t, 1-t, weights) for the tanh-sinh rule at step 2**-level."""
    cached = _TS_CACHE.get(level)
    if cached is not None:
        return cached
    h = 2.0 ** (-level)
    j = np.arange(-int(_TS_SPAN / h), int(_TS_SPAN / h) + 1)
    u = 0.5 * math.pi * np.sinh(j * h)
    t = 1.0 / (1.0 + np.exp(-2.0 * u))
    one_minus_t = 1.0 / (1.0 + np.exp(2.0 * u))
    w = h * 0.5 * math.pi * np.cosh(j * h) / np.cosh(u) ** 2 * 0.5
    _TS_CACHE[level] = (t, one_minus_t, w)
    return t, one_minus_t, w


def integrate_01_ts(
    fvec: Callable[[np.ndarray, np.ndarray], np.ndarray],
    tol: float = 1e-12,
    min_level: int = 5,
    max_level: int = 11,
) -> tuple[complex, float]:
    """Integrate fvec(t, 1-t) over [0, 1] with the tanh-sinh rule.

    ``fvec`` must accept numpy arrays.  Levels are refined until two
    successive values agree within ``tol`` (absolute); returns the value
    and the last inter-level difference.
    """
    prev = None
    for level in range(min_level, max_level + 1):
        t, omt, w = tanh_sinh_01(level)
        val = np.sum(w * fvec(t, omt))
        if prev is not None:
            diff = abs(val - prev)
            if diff <= tol:
                return complex(val), float(diff)
        prev = val
    raise NumericError(
        f"tanh-sinh rule stalled at level {max_level}, last diff {abs(val - prev):.3e}"
    )


def pchip_slopes(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Fritsch-Carlson slopes producing a monotonicity-preserving cubic."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    if n < 2:
        raise NumericError("pchip needs at least two nodes")
    h = np.diff(x)
    delta = np.diff(y) / h
    d = np.zeros(n)
    if n == 2:
        d[:] = delta[0]
        return d
    # interior: weighted harmonic mean, zero across sign changes
    for i in range(1, n - 1):
        if delta[i - 1] == 0.0 or delta[i] == 0.0 or (delta[i - 1] > 0) != (delta[i] > 0):
            d[i] = 0.0
        else:
            w1 = 2.0 * h[i] + h[i - 1]
            w2 = h[i] + 2.0 * h[i - 1]
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i])
    # one-sided three-point endpoint formulas, clipped to preserve shape
    d[0] = ((2.0 * h[0] + h[1]) * delta[0] - h[0] * delta[1]) / (h[0] + h[1])
    if (d[0] > 0) != (delta[0] > 0) and delta[0] != 0.0:
        d[0] = 0.0
    elif delta[0] != 0.0 and (delta[0] > 0) != (delta[1] > 0) and abs(d[0]) > 3.0 * abs(delta[0]):
        d[0] = 3.0 * delta[0]
    d[-1] = ((2.0 * h[-1] + h[-2]) * delta[-1] - h[-1] * delta[-2]) / (h[-1] + h[-2])
    if (d[-1] > 0) != (delta[-1] > 0) and delta[-1] != 0.0:
        d[-1] = 0.0
    elif delta[-1] != 0.0 and (delta[-1] > 0) != (delta[-2] > 0) and abs(d[-1]) > 3.0 * abs(delta[-1]):
        d[-1] = 3.0 * delta[-1]
    return d


def pchip_eval(
    x: Sequence[float], y: Sequence[float], d: Sequence[float], xq: float
) -> float:
    """Evaluate the Hermite cubic defined by nodes (x, y) and slopes d."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = np.asarray(d, dtype=float)
    if xq <= x[0]:
        return float(y[0] + d[0] * (xq - x[0]))
    if xq >= x[-1]:
        return float(y[-1] + d[-1] * (xq - x[-1]))
    i = int(np.searchsorted(x, xq, side="right") - 1)
    h = x[i + 1] - x[i]
    s = (xq - x[i]) / h
    h00 = (1.0 + 2.0 * s) * (1.0 - s) ** 2
    h10 = s * (1.0 - s) ** 2
    h01 = s * s * (3.0 - 2.0 * s)
    h11 = s * s * (s - 1.0)
    return float(y[i] * h00 + h * d[i] * h10 + y[i + 1] * h01 + h * d[i + 1] * h11)
