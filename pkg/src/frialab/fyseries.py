"""Analytic kernel for the bivariate divisor-weighted Dirichlet series.

The central objects are

    g(z)      = log((z^(1/2) - z^(-1/2)) / log z),   z off the cut R_-,
    Xi(a, b)  = -(1/2) log(1-a) - (1/2) log(1-b) - g((1-a)/(1-b)),
    f_y(s, w) = sum over p <= y of Xi(p^-s, p^-w),
    F_y(s, w) = exp f_y(s, w),

so that exp(Xi(a, b)) (b - a) = log(1-a) - log(1-b), with the a = b limit
giving exp(Xi(a, a)) = 1/(1-a).  Writing w = (log z)/2 turns g into
log(sinh(w)/w), which is how every evaluation here proceeds; near z = 1
the logarithm is replaced by its even power series.

First and second partial derivatives of f_y at real points come in closed
form from the remainder function

    r(z) + i s(z) = -1/2 + 1/log(z) - 1/(z - 1)

and its log-derivative; both have removable singularities at z = 1 handled
by Bernoulli-type series.  The module also houses the regular factor
xi(a, b) with g((1-a)/(1-b)) = (a-b)^2 xi(a, b) (computed from its kernel
integral over [0, 1]), Cauchy extraction of the power-series coefficients
of Xi, the smoothed/truncated Mellin indicator integrals, and randomized
bound suites for r, s, g and L(omega) = 1/sinh(omega)^2 - 1/omega^2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, NumericError
from .friable import PrimeBasis
from .numerics import adaptive_simpson, tanh_sinh_01

__all__ = [
    "FySample",
    "XiCoeffTable",
    "CheckResult",
    "SuiteReport",
    "g_func",
    "xi_big",
    "xi_small",
    "f_y_eval",
    "fy_partials",
    "partial_f",
    "hessian_f",
    "in_region",
    "rs_funcs",
    "l_func",
    "lemma8_suite",
    "lfunc_suite",
    "fejer_kernel",
    "fejer_identity",
    "perron_indicator",
    "extract_xi_coeffs",
]

# series cut-offs: |log z| below which the removable singularity at z = 1
# is evaluated by series instead of the closed form
_G_SMALL = 1e-3      # on |log z| for g
_RS_SMALL = 0.1      # on |log z| for (r, s)
_P_SMALL = 0.1       # on |log z| for the log-derivative of (r, s)
_L_SMALL = 0.05      # on |omega| for L


@dataclass(frozen=True)
class FySample:
    """One evaluation of f_y and the derived modulus/argument of F_y."""

    s: complex
    w: complex
    f: complex
    F_log_abs: float
    F_arg: float


@dataclass(frozen=True)
class XiCoeffTable:
    """Power-series coefficients of Xi(a, b) up to total order K."""

    order: int
    d: np.ndarray            # shape (K+1, K+1); d[k, l] for k + l >= 1
    extraction_error: float  # radius-doubling discrepancy estimate


def _principal_log(z: complex, side: str | None) -> complex:
    """Principal log with an explicit side flag on the negative real axis."""
    z = complex(z)
    if z == 0:
        raise DomainError("logarithm of zero")
    if z.imag == 0.0 and z.real < 0.0:
        if side == "+":
            return complex(math.log(-z.real), math.pi)
        if side == "-":
            return complex(math.log(-z.real), -math.pi)
        raise DomainError(
            "z lies on the negative real axis; pass side='+' or side='-'"
        )
    return cmath.log(z)


def _g_from_halflog(w: complex) -> complex:
    """g(z) for w = (log z)/2, i.e. log(sinh(w)/w) with the w -> 0 series."""
    if abs(w) < 0.5 * _G_SMALL:
        w2 = w * w
        return w2 * (1.0 / 6.0 + w2 * (-1.0 / 180.0 + w2 * (1.0 / 2835.0)))
    if abs(w.real) > 350.0:
        # sinh overflows; use log(sinh w / w) = |Re-side| asymptotics
        if w.real > 0:
            return w - cmath.log(2.0 * w)
        return -w - cmath.log(-2.0 * w)
    return cmath.log(cmath.sinh(w) / w)


def g_func(z: complex, side: str | None = None) -> complex:
    """g(z) = log((z^(1/2) - z^(-1/2))/log z), principal branch.

    ``side`` selects the boundary value on the cut (the limit from above
    for '+', from below for '-'); omitting it there is a domain error.
    """
    return _g_from_halflog(0.5 * _principal_log(z, side))


def xi_big(a: complex, b: complex) -> complex:
    """Xi(a, b) on the open bidisk."""
    a = complex(a)
    b = complex(b)
    if abs(a) >= 1 or abs(b) >= 1:
        raise DomainError(f"Xi needs |a| < 1 and |b| < 1, got |a|={abs(a)}, |b|={abs(b)}")
    one_a = 1.0 - a
    one_b = 1.0 - b
    g = _g_from_halflog(0.5 * (cmath.log(one_a) - cmath.log(one_b)))
    return -0.5 * (cmath.log(one_a) + cmath.log(one_b)) - g


# kernel weights for the xi integral, cached per tanh-sinh level
_XI_KERNEL_CACHE: dict[int, np.ndarray] = {}


def fejer_kernel(tau: float) -> float:
    """The triangular smoothing kernel max{0, 1 - |tau|}."""
    return max(0.0, 1.0 - abs(tau))


def _xi_kernel_weights(level: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    t, omt, w = tanh_sinh_01(level)
    cached = _XI_KERNEL_CACHE.get(level)
    if cached is None:
        # (t - 1/2) * (1/pi) arctan((1/pi) log(t/(1-t))), folded into the weights
        kern = (t - 0.5) * np.arctan((np.log(t) - np.log(omt)) / math.pi) / math.pi
        cached = w * kern
        _XI_KERNEL_CACHE[level] = cached
    return t, omt, cached


def xi_small(a: complex, b: complex, tol: float = 1e-12) -> complex:
    """The regular factor xi with g((1-a)/(1-b)) = (a-b)^2 xi(a, b).

    Evaluated from its symmetric kernel-integral representation over
    [0, 1]; the kernel weights are tanh-sinh samples cached per level.
    """
    a = complex(a)
    b = complex(b)
    if abs(a) >= 1 or abs(b) >= 1:
        raise DomainError(f"xi needs |a| < 1 and |b| < 1, got |a|={abs(a)}, |b|={abs(b)}")
    one_a = 1.0 - a
    one_b = 1.0 - b
    prev = None
    for level in range(5, 12):
        t, omt, wk = _xi_kernel_weights(level)
        denom = (t * one_b + omt * one_a) * (t * one_a + omt * one_b)
        val = np.sum(wk / denom)
        if prev is not None and abs(val - prev) <= tol:
            return complex(val)
        prev = val
    raise NumericError(
        f"xi quadrature stalled; last difference {abs(val - prev):.3e} > {tol:.3e}"
    )


def _xi_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise Xi(a, b) for complex arrays on the bidisk (broadcasting)."""
    one_a = 1.0 - a
    one_b = 1.0 - b
    w2 = 0.5 * (np.log(one_a) - np.log(one_b))
    small = np.abs(w2) < 0.5 * _G_SMALL
    ws = np.where(small, w2, 0.0)
    w2s = ws * ws
    series = w2s * (1.0 / 6.0 + w2s * (-1.0 / 180.0 + w2s * (1.0 / 2835.0)))
    wb = np.where(small, 1.0, w2)
    g = np.where(small, series, np.log(np.sinh(wb) / wb))
    return -0.5 * (np.log(one_a) + np.log(one_b)) - g


def f_y_eval(s: complex, w: complex, basis: PrimeBasis) -> FySample:
    """f_y(s, w) = sum over p <= y of Xi(p^-s, p^-w); needs Re s, Re w > 0."""
    s = complex(s)
    w = complex(w)
    if not (s.real > 0 and w.real > 0):
        raise DomainError(f"f_y needs Re s > 0 and Re w > 0, got {s}, {w}")
    lp = basis.logs
    a = np.exp(-s * lp)
    b = np.exp(-w * lp)
    f = complex(np.sum(_xi_array(a, b)))
    return FySample(
        s=s,
        w=w,
        f=f,
        F_log_abs=f.real,
        F_arg=math.remainder(f.imag, 2.0 * math.pi),
    )


def _r_p_real(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """r(z) and p(z) = z r'(z) for real z > 0, series-patched near z = 1.

    r(z) = -1/2 + 1/log z - 1/(z-1);  p(z) = -1/(log z)^2 + z/(z-1)^2.
    """
    w = np.log(z)
    small = np.abs(w) < 0.05
    ws = np.where(small, w, 0.0)
    w2 = ws * ws
    r_ser = ws * (-1.0 / 12.0 + w2 * (1.0 / 720.0 + w2 * (-1.0 / 30240.0 + w2 * (1.0 / 1209600.0))))
    p_ser = -1.0 / 12.0 + w2 * (1.0 / 240.0 + w2 * (-1.0 / 6048.0 + w2 * (1.0 / 172800.0)))
    wb = np.where(small, 1.0, w)
    zb = np.where(small, 2.0, z)
    r_cl = -0.5 + 1.0 / wb - 1.0 / (zb - 1.0)
    p_cl = -1.0 / wb**2 + zb / (zb - 1.0) ** 2
    return np.where(small, r_ser, r_cl), np.where(small, p_ser, p_cl)


def _g_real(z: np.ndarray) -> np.ndarray:
    """g(z) for real z > 0 arrays."""
    w2 = 0.5 * np.log(z)
    small = np.abs(w2) < 0.5 * _G_SMALL
    ws = np.where(small, w2, 0.0)
    w2s = ws * ws
    series = w2s * (1.0 / 6.0 + w2s * (-1.0 / 180.0 + w2s * (1.0 / 2835.0)))
    wb = np.where(small, 1.0, w2)
    return np.where(small, series, np.log(np.sinh(wb) / wb))


def fy_partials(
    sigma: float, kappa: float, basis: PrimeBasis
) -> tuple[float, float, float, float, float, float]:
    """(f, f10, f01, f20, f11, f02) of f_y at a real point (sigma, kappa).

    Derivatives are with respect to s and w.  Everything reduces to the
    remainder pair (r, p) at z = (1-a)/(1-b) with a = p^-sigma, b = p^-kappa:

        dXi/da   = (1/2 - r)/(1-a),        dXi/db   = (1/2 + r)/(1-b),
        d2Xi/da2 = (1/2 - r + p)/(1-a)^2,  d2Xi/dadb = -p/((1-a)(1-b)),

    and symmetrically for b.
    """
    if not (sigma > 0 and kappa > 0):
        raise DomainError(f"fy_partials needs positive abscissae, got ({sigma}, {kappa})")
    lp = basis.logs
    ea = np.expm1(-sigma * lp)  # = a - 1
    eb = np.expm1(-kappa * lp)
    one_a = -ea
    one_b = -eb
    a = 1.0 + ea
    b = 1.0 + eb
    z = ea / eb
    r, p = _r_p_real(z)
    f = float(np.sum(-0.5 * (np.log(one_a) + np.log(one_b)) - _g_real(z)))
    xa = (0.5 - r) / one_a
    xb = (0.5 + r) / one_b
    xaa = (0.5 - r + p) / one_a**2
    xbb = (0.5 + r + p) / one_b**2
    xab = -p / (one_a * one_b)
    lp2 = lp * lp
    f10 = float(-np.sum(lp * a * xa))
    f01 = float(-np.sum(lp * b * xb))
    f20 = float(np.sum(lp2 * (a * xa + a * a * xaa)))
    f02 = float(np.sum(lp2 * (b * xb + b * b * xbb)))
    f11 = float(np.sum(lp2 * a * b * xab))
    return f, f10, f01, f20, f11, f02


# central difference stencils (offset, coefficient); divide by h^order
_STENCILS: dict[int, tuple[tuple[int, float], ...]] = {
    0: ((0, 1.0),),
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
    4: ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)),
}


def _nested_fd(
    func: Callable[[float, float], float],
    sigma: float,
    kappa: float,
    k: int,
    l: int,
    hs: float,
    hk: float,
) -> tuple[float, float]:
    """Tensor central difference; returns (value, max |f| seen)."""
    total = 0.0
    fmax = 0.0
    for off_s, c_s in _STENCILS[k]:
        for off_k, c_k in _STENCILS[l]:
            val = func(sigma + off_s * hs, kappa + off_k * hk)
            fmax = max(fmax, abs(val))
            total += c_s * c_k * val
    return total / hs**k / hk**l, fmax


def partial_f(
    k: int,
    l: int,
    sigma: float,
    kappa: float,
    basis: PrimeBasis,
    method: str = "auto",
) -> float:
    """d^(k+l) f_y / ds^k dw^l at a real point.

    Orders with k + l <= 2 use the closed forms of :func:`fy_partials`;
    higher orders (and ``method='fd'``) use nested central differences of
    the complex evaluator with one Richardson extrapolation.  A result
    smaller than the estimated rounding noise of the stencil raises
    NumericError (step collapse).
    """
    if k < 0 or l < 0:
        raise DomainError(f"derivative orders must be nonnegative, got ({k}, {l})")
    if max(k, l) > 4:
        raise DomainError("per-variable derivative order is limited to 4")
    if method == "auto":
        method = "closed" if k + l <= 2 else "fd"
    if method == "closed":
        if k + l > 2:
            raise DomainError("closed forms are available for k + l <= 2 only")
        f, f10, f01, f20, f11, f02 = fy_partials(sigma, kappa, basis)
        return {
            (0, 0): f,
            (1, 0): f10,
            (0, 1): f01,
            (2, 0): f20,
            (1, 1): f11,
            (0, 2): f02,
        }[(k, l)]
    if method != "fd":
        raise DomainError(f"unknown method {method!r}")

    def base(s_: float, k_: float) -> float:
        return f_y_eval(complex(s_), complex(k_), basis).f.real

    hs = 1e-3 * max(sigma, 1e-2)
    hk = 1e-3 * max(kappa, 1e-2)
    d_h, fmax = _nested_fd(base, sigma, kappa, k, l, hs, hk)
    d_h2, _ = _nested_fd(base, sigma, kappa, k, l, 0.5 * hs, 0.5 * hk)
    value = (4.0 * d_h2 - d_h) / 3.0
    coefsum = sum(abs(c) for _, c in _STENCILS[k]) * sum(abs(c) for _, c in _STENCILS[l])
    noise = 16.0 * 2.2e-16 * fmax * coefsum / (0.5 * hs) ** k / (0.5 * hk) ** l
    if abs(value) < noise:
        raise NumericError(
            f"finite-difference step collapse: |value| {abs(value):.3e} "
            f"below noise floor {noise:.3e}"
        )
    return value


def hessian_f(sigma: float, kappa: float, basis: PrimeBasis) -> float:
    """Hessian determinant (f20 * f02 - f11^2) of f_y at a real point."""
    _, _, _, f20, f11, f02 = fy_partials(sigma, kappa, basis)
    return f20 * f02 - f11 * f11


def in_region(
    sigma: float, kappa: float, delta: float, alpha: float, basis: PrimeBasis
) -> bool:
    """Membership in the closeness region around the saddle abscissa.

    True iff (sigma, kappa) lies in (0, 1]^2, alpha sits between sigma and
    kappa, the ratio (1-2^-sigma)/(1-2^-kappa) lies within [1/(1+delta),
    1+delta], and |sigma - kappa| log y <= delta.
    """
    if not (sigma > 0 and kappa > 0 and alpha > 0):
        raise DomainError("in_region needs positive sigma, kappa, alpha")
    if delta < 0:
        raise DomainError("in_region needs delta >= 0")
    if sigma > 1.0 or kappa > 1.0:
        return False
    if (sigma - alpha) * (alpha - kappa) < 0:
        return False
    ratio = -math.expm1(-sigma * math.log(2.0)) / -math.expm1(-kappa * math.log(2.0))
    if not (1.0 / (1.0 + delta) <= ratio <= 1.0 + delta):
        return False
    return abs(sigma - kappa) * math.log(basis.y) <= delta


def rs_funcs(z: complex, side: str | None = None) -> tuple[float, float]:
    """(r(z), s(z)) with r + i s = -1/2 + 1/log z - 1/(z-1); z = 1 by limit."""
    z = complex(z)
    w = _principal_log(z, side)
    if abs(w) < _RS_SMALL:
        w2 = w * w
        f = w * (-1.0 / 12.0 + w2 * (1.0 / 720.0 + w2 * (-1.0 / 30240.0 + w2 * (1.0 / 1209600.0))))
    else:
        f = -0.5 + 1.0 / w - 1.0 / (z - 1.0)
    return f.real, f.imag


def l_func(omega: complex) -> complex:
    """L(omega) = 1/sinh(omega)^2 - 1/omega^2 on the strip |Im omega| <= pi/2."""
    w = complex(omega)
    if abs(w.imag) > 0.5 * math.pi + 1e-12:
        raise DomainError(f"l_func needs |Im omega| <= pi/2, got {w}")
    if abs(w) < _L_SMALL:
        w2 = w * w
        return -1.0 / 3.0 + w2 * (1.0 / 15.0 + w2 * (-2.0 / 189.0 + w2 * (1.0 / 675.0)))
    sh = cmath.sinh(w)
    return 1.0 / (sh * sh) - 1.0 / (w * w)


def _rs_vec(w: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Vector (r + i s)(z) given w = log z; same branches as rs_funcs."""
    small = np.abs(w) < _RS_SMALL
    ws = np.where(small, w, 0.0)
    w2 = ws * ws
    ser = ws * (-1.0 / 12.0 + w2 * (1.0 / 720.0 + w2 * (-1.0 / 30240.0 + w2 * (1.0 / 1209600.0))))
    wb = np.where(small, 1.0, w)
    zb = np.where(small, 2.0, z)
    closed = -0.5 + 1.0 / wb - 1.0 / (zb - 1.0)
    return np.where(small, ser, closed)


def _g_re_vec(w2: np.ndarray) -> np.ndarray:
    """Re g from the half-log array w2 = (log z)/2."""
    small = np.abs(w2) < 0.5 * _G_SMALL
    ws = np.where(small, w2, 0.0)
    w2s = ws * ws
    series = w2s * (1.0 / 6.0 + w2s * (-1.0 / 180.0 + w2s * (1.0 / 2835.0)))
    wb = np.where(small, 1.0, w2)
    return np.where(small, series, np.log(np.sinh(wb) / wb)).real


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one inequality over the sampled points."""

    name: str
    checked: int
    violations: int
    worst_margin: float      # smallest slack observed; negative = violated
    example: str = ""        # a violating point, when one exists


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    samples: int
    seed: int
    passed: bool
    checks: tuple[CheckResult, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "samples": self.samples,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "checked": c.checked,
                    "violations": c.violations,
                    "worst_margin": c.worst_margin if math.isfinite(c.worst_margin) else None,
                    "example": c.example,
                }
                for c in self.checks
            ],
        }


def _check(name: str, mask: np.ndarray, margin: np.ndarray, points: np.ndarray) -> CheckResult:
    """Summarize margin >= 0 over the selected points."""
    sel = margin[mask]
    if sel.size == 0:
        return CheckResult(name=name, checked=0, violations=0, worst_margin=math.inf)
    worst = float(np.min(sel))
    bad = int(np.count_nonzero(sel < 0))
    example = ""
    if bad:
        idx = np.flatnonzero(mask)[int(np.argmin(sel))]
        example = f"z={points[idx]!r}, margin={worst:.3e}"
    return CheckResult(name=name, checked=int(sel.size), violations=bad, worst_margin=worst, example=example)


def lemma8_suite(sample_count: int, seed: int) -> SuiteReport:
    """Randomized verification of the (r, s) bounds and Re g >= -pi/2.

    Samples z with |log|z|| <= 10 and |arg z| <= pi - 1e-3 from a seeded
    PCG64 generator and checks: |r| <= 1/2; r <= 0 for |z| >= 1;
    |r| <= 1/10 for |z| in [1/2, 2]; |s| <= 1/pi; |s| <= 0.15 |arg z|;
    Re g(z) >= -pi/2; and the fixed value r(-2 + 0i) = -0.0997 +- 1e-3.
    """
    if sample_count < 1:
        raise DomainError("sample_count must be positive")
    rng = np.random.default_rng(seed)
    log_abs = rng.uniform(-10.0, 10.0, sample_count)
    arg = rng.uniform(-(math.pi - 1e-3), math.pi - 1e-3, sample_count)
    w = log_abs + 1j * arg
    z = np.exp(w)
    f = _rs_vec(w, z)
    r = f.real
    s = f.imag
    re_g = _g_re_vec(0.5 * w)
    all_pts = np.ones(sample_count, dtype=bool)
    checks = [
        _check("abs_r_le_half", all_pts, 0.5 - np.abs(r), z),
        _check("r_nonpositive_for_abs_z_ge_1", log_abs >= 0.0, -r, z),
        _check("abs_r_le_tenth_near_unit", np.abs(log_abs) <= math.log(2.0), 0.1 - np.abs(r), z),
        _check("abs_s_le_inv_pi", all_pts, 1.0 / math.pi - np.abs(s), z),
        _check("abs_s_le_015_arg", all_pts, 0.15 * np.abs(arg) - np.abs(s), z),
        _check("re_g_ge_minus_half_pi", all_pts, re_g + 0.5 * math.pi, z),
    ]
    r2, _ = rs_funcs(-2.0, side="+")
    margin = 1e-3 - abs(r2 - (-0.0997))
    checks.append(
        CheckResult(
            name="r_at_minus_two",
            checked=1,
            violations=int(margin < 0),
            worst_margin=margin,
            example="" if margin >= 0 else f"r(-2+0i)={r2!r}",
        )
    )
    checks = tuple(checks)
    return SuiteReport(
        suite="lemma8",
        samples=sample_count,
        seed=seed,
        passed=all(c.violations == 0 for c in checks),
        checks=checks,
    )


def lfunc_suite(sample_count: int, seed: int) -> SuiteReport:
    """Randomized verification of -0.6 <= Re L <= 0 and Im L >= 0.

    Samples omega in the quadrant Re omega in (0, 10], Im omega in
    (0, pi/2) from a seeded PCG64 generator.
    """
    if sample_count < 1:
        raise DomainError("sample_count must be positive")
    rng = np.random.default_rng(seed)
    re = rng.uniform(0.0, 10.0, sample_count)
    im = rng.uniform(0.0, 0.5 * math.pi, sample_count)
    omega = re + 1j * im
    vals = np.array([l_func(o) for o in omega])
    all_pts = np.ones(sample_count, dtype=bool)
    checks = (
        _check("re_l_le_zero", all_pts, -vals.real, omega),
        _check("re_l_ge_minus_0p6", all_pts, vals.real + 0.6, omega),
        _check("im_l_ge_zero", all_pts, vals.imag, omega),
    )
    return SuiteReport(
        suite="lfunc",
        samples=sample_count,
        seed=seed,
        passed=all(c.violations == 0 for c in checks),
        checks=checks,
    )


def fejer_identity(z: float, T: float, tol: float = 1e-12) -> tuple[float, float]:
    """(integral, closed) for the triangular-kernel smoothing identity.

    integral = int_{-1}^{1} z^(i tau sqrt(T)) max{0, 1-|tau|} dtau and
    closed = (sin(sqrt(T) log(z)/2) / (sqrt(T) log(z)/2))^2; the two agree
    identically for z > 0.
    """
    if not z > 0:
        raise DomainError(f"fejer_identity needs z > 0, got {z}")
    if not T >= 2:
        raise DomainError(f"fejer_identity needs T >= 2, got {T}")
    theta = math.sqrt(T) * math.log(z)

    def integrand(tau: float) -> complex:
        return cmath.exp(1j * theta * tau) * (1.0 - abs(tau))

    val = adaptive_simpson(integrand, -1.0, 0.0, tol=0.5 * tol) + adaptive_simpson(
        integrand, 0.0, 1.0, tol=0.5 * tol
    )
    if theta == 0.0:
        closed = 1.0
    else:
        half = 0.5 * theta
        closed = (math.sin(half) / half) ** 2
    return float(val.real), closed


def perron_indicator(
    z: float, sigma: float, T: float, tol: float = 1e-12, full: bool = False
) -> float | complex:
    """Truncated Mellin indicator (1/2 pi i) int_{sigma-iT}^{sigma+iT} z^s ds/s.

    Approaches 1 for z > 1 and 0 for z < 1 as T grows, with error
    O(z^sigma min{1, 1/(T |log z|)}).  Returns the real part unless
    ``full`` is set, in which case the complex value is returned.
    """
    if not z > 0:
        raise DomainError(f"perron_indicator needs z > 0, got {z}")
    if not (sigma > 0 and T >= 2):
        raise DomainError(f"perron_indicator needs sigma > 0 and T >= 2, got ({sigma}, {T})")
    log_z = math.log(z)

    def integrand(tau: float) -> complex:
        s = complex(sigma, tau)
        return cmath.exp(s * log_z) / s

    val = (
        adaptive_simpson(integrand, -T, 0.0, tol=math.pi * tol)
        + adaptive_simpson(integrand, 0.0, T, tol=math.pi * tol)
    ) / (2.0 * math.pi)
    # the ds = i dtau rotation turns the integral real up to quadrature noise
    if full:
        return val
    return float(val.real)


def extract_xi_coeffs(order: int) -> XiCoeffTable:
    """Coefficients d[k, l] of Xi(a, b) by circular Cauchy sampling.

    Uses a 64 x 64 grid at radius 1/2, with the extraction error estimated
    against the same grid at radius 1/4 over the triangle k + l <= order
    (the certified part of the table; the square array is returned whole).
    An estimate above 1e-6 raises NumericError.
    """
    if not 1 <= order <= 10:
        raise DomainError(f"extract_xi_coeffs supports 1 <= order <= 10, got {order}")
    n = 64

    def table(radius: float) -> np.ndarray:
        ring = radius * np.exp(2j * math.pi * np.arange(n) / n)
        vals = _xi_array(ring[:, None], ring[None, :])
        coeffs = np.fft.fft2(vals) / (n * n)
        k = np.arange(order + 1)
        scale = radius ** (k[:, None] + k[None, :])
        return coeffs[: order + 1, : order + 1].real / scale

    d_half = table(0.5)
    d_quarter = table(0.25)
    k = np.arange(order + 1)
    triangle = (k[:, None] + k[None, :]) <= order
    err = float(np.max(np.abs(d_half - d_quarter)[triangle]))
    if err > 1e-6:
        raise NumericError(f"coefficient extraction error {err:.3e} exceeds 1e-6")
    d = d_half.copy()
    d[0, 0] = 0.0  # Xi(0, 0) = 0; the k + l >= 1 entries carry the series
    return XiCoeffTable(order=order, d=d, extraction_error=err)
