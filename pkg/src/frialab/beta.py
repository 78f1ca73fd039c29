"""Two-variable saddle point for the tilted divisor-weighted series.

For a deviation v (threshold gamma = v * varrho) the saddle pair
(beta1, beta2) = (beta(v), beta(-v)) solves

    d10 f_y(beta1, beta2) + (log x)/2 - v varrho = 0,
    d01 f_y(beta1, beta2) + (log x)/2 + v varrho = 0,

which reduces to the one-variable saddle alpha at v = 0.  The solver is a
damped Newton iteration with the exact (positive definite) Hessian of f_y
as Jacobian, continued in v with warm starts; an independent fourth-order
integration of the equivalent flow

    beta'(v) = varrho [d02 f_y + d11 f_y] / Hess[f_y]   at (beta(v), beta(-v))

is kept as a cross-check.  The saddle exponent is

    E(v) = (beta1 + beta2)/2 log x + gamma (beta2 - beta1) + f_y(beta1, beta2),

R(v) = E(v) - E(0), and the even Taylor coefficients b_j of E (leading
value -1/2) are extracted by an even-polynomial least-squares fit of R on
a symmetric stencil.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .alpha import AlphaState
from .errors import DomainError, SolverError, NumericError
from .fyseries import fy_partials

__all__ = [
    "BetaState",
    "TaylorCoeffs",
    "solve_beta",
    "e_func",
    "taylor_bj",
    "rk_poly",
    "hess_drift",
    "beta_expansion_check",
    "v_range",
    "beta_ode_path",
]

_BETA_FLOOR = 1e-8
_DEFAULT_CEILING = 4.0
_RESIDUAL_FACTOR = 1e-9


@dataclass(frozen=True, eq=False)
class BetaState:
    """Solved two-variable saddle at deviation v."""

    alpha_state: AlphaState
    v: float
    gamma: float
    beta1: float
    beta2: float
    e_value: float
    r_value: float
    grad_norm: float
    hess_entries: tuple[float, float, float]  # (f20, f11, f02) at (beta1, beta2)

    @property
    def hess(self) -> float:
        f20, f11, f02 = self.hess_entries
        return f20 * f02 - f11 * f11


@dataclass(frozen=True)
class TaylorCoeffs:
    """Even Taylor coefficients b_0..b_{k-1} of the saddle exponent."""

    k: int
    b: tuple[float, ...]
    stencil_h: float
    error_estimates: tuple[float, ...]  # stencil-halving discrepancies
    odd_leakage: float                  # largest odd coefficient in a free fit


def v_range(alpha_state: AlphaState, c: float = 0.25) -> float:
    """Half-width c * sqrt(u_bar) of the deviation interval handed to the solver."""
    if not c > 0:
        raise DomainError(f"v_range needs c > 0, got {c}")
    return c * math.sqrt(alpha_state.u_bar)


def _grad(
    b1: float, b2: float, v: float, alpha_state: AlphaState
) -> tuple[float, float, float, float, float]:
    """(g1, g2, f20, f11, f02) of the saddle system at (b1, b2)."""
    _, f10, f01, f20, f11, f02 = fy_partials(b1, b2, alpha_state.basis)
    half_l = 0.5 * alpha_state.log_x
    gv = v * alpha_state.varrho
    return f10 + half_l - gv, f01 + half_l + gv, f20, f11, f02


def _newton(
    b1: float,
    b2: float,
    v: float,
    alpha_state: AlphaState,
    ceiling: float,
    tol: float,
    max_iter: int = 60,
) -> tuple[float, float, float, tuple[float, float, float]]:
    trace: list[str] = []
    g1, g2, f20, f11, f02 = _grad(b1, b2, v, alpha_state)
    norm = math.hypot(g1, g2)
    for it in range(max_iter):
        if norm <= tol:
            return b1, b2, norm, (f20, f11, f02)
        det = f20 * f02 - f11 * f11
        if det <= 0:
            raise SolverError(
                f"saddle Hessian not positive at ({b1}, {b2}); trace: {trace}"
            )
        d1 = (-g1 * f02 + g2 * f11) / det
        d2 = (-g2 * f20 + g1 * f11) / det
        lam = 1.0
        for _ in range(30):
            t1 = min(max(b1 + lam * d1, _BETA_FLOOR), ceiling)
            t2 = min(max(b2 + lam * d2, _BETA_FLOOR), ceiling)
            n1, n2, nf20, nf11, nf02 = _grad(t1, t2, v, alpha_state)
            trial_norm = math.hypot(n1, n2)
            if trial_norm < norm or trial_norm <= tol:
                break
            lam *= 0.5
        else:
            raise SolverError(
                f"saddle damping stalled at v={v}, point=({b1}, {b2}), "
                f"norm={norm:.3e}; trace: {trace}"
            )
        trace.append(f"it{it}: ({t1:.6g}, {t2:.6g}) norm {trial_norm:.3e} lam {lam:g}")
        b1, b2, g1, g2 = t1, t2, n1, n2
        f20, f11, f02 = nf20, nf11, nf02
        norm = trial_norm
    if norm <= tol:
        return b1, b2, norm, (f20, f11, f02)
    raise SolverError(
        f"saddle Newton did not reach tol {tol:.3e} at v={v}; trace: {trace[-5:]}"
    )


def _exponent(b1: float, b2: float, v: float, alpha_state: AlphaState) -> float:
    f00 = fy_partials(b1, b2, alpha_state.basis)[0]
    gv = v * alpha_state.varrho
    return 0.5 * (b1 + b2) * alpha_state.log_x + gv * (b2 - b1) + f00


def solve_beta(
    alpha_state: AlphaState,
    v: float,
    ceiling: float = _DEFAULT_CEILING,
    residual_factor: float = _RESIDUAL_FACTOR,
) -> BetaState:
    """Solve the tilted saddle system at deviation v.

    Continuation in v (steps of at most min(0.05 sqrt(u_bar), 0.25)) warm
    starts a damped Newton iteration whose Jacobian is the exact Hessian of
    f_y.  Iterates are kept inside (1e-8, ceiling]^2; a solution pressed
    against the ceiling is reported as solver failure.  A solution only
    exists while |v| varrho < (log x)/2, and beta1 grows without bound as
    that budget is approached.
    """
    a = alpha_state.alpha
    log_x = alpha_state.log_x
    tol = residual_factor * log_x
    if a > ceiling:
        raise SolverError(f"alpha {a} already exceeds the ceiling {ceiling}")
    e0 = _exponent(a, a, 0.0, alpha_state)
    if v == 0.0:
        g1, g2, f20, f11, f02 = _grad(a, a, 0.0, alpha_state)
        return BetaState(
            alpha_state=alpha_state,
            v=0.0,
            gamma=0.0,
            beta1=a,
            beta2=a,
            e_value=e0,
            r_value=0.0,
            grad_norm=math.hypot(g1, g2),
            hess_entries=(f20, f11, f02),
        )
    step = min(0.05 * math.sqrt(alpha_state.u_bar), 0.25)
    n_steps = max(1, int(math.ceil(abs(v) / step)))
    b1, b2 = a, a
    for i in range(1, n_steps + 1):
        vk = v * i / n_steps
        b1, b2, norm, hess = _newton(b1, b2, vk, alpha_state, ceiling, tol)
    if b1 >= ceiling - 1e-12 or b2 >= ceiling - 1e-12:
        raise SolverError(
            f"saddle solution pinned at the domain ceiling {ceiling} for v={v}"
        )
    e_val = _exponent(b1, b2, v, alpha_state)
    return BetaState(
        alpha_state=alpha_state,
        v=float(v),
        gamma=float(v) * alpha_state.varrho,
        beta1=b1,
        beta2=b2,
        e_value=e_val,
        r_value=e_val - e0,
        grad_norm=norm,
        hess_entries=hess,
    )


def e_func(state: BetaState) -> float:
    """The saddle exponent E(v); R(v) = E(v) - E(0) is cached on the state."""
    return state.e_value


def beta_ode_path(
    alpha_state: AlphaState, v_end: float, steps: int | None = None
) -> tuple[float, float]:
    """Integrate the saddle flow from 0 to v_end with a fixed-step RK4.

    Cross-check for :func:`solve_beta`; returns the endpoint (beta1, beta2).
    """
    if steps is None:
        steps = max(64, int(math.ceil(128 * abs(v_end))))
    rho = alpha_state.varrho
    basis = alpha_state.basis

    def rhs(b: tuple[float, float]) -> tuple[float, float]:
        _, _, _, f20, f11, f02 = fy_partials(b[0], b[1], basis)
        det = f20 * f02 - f11 * f11
        return rho * (f02 + f11) / det, -rho * (f20 + f11) / det

    h = v_end / steps
    b = (alpha_state.alpha, alpha_state.alpha)
    for _ in range(steps):
        k1 = rhs(b)
        k2 = rhs((b[0] + 0.5 * h * k1[0], b[1] + 0.5 * h * k1[1]))
        k3 = rhs((b[0] + 0.5 * h * k2[0], b[1] + 0.5 * h * k2[1]))
        k4 = rhs((b[0] + h * k3[0], b[1] + h * k3[1]))
        b = (
            b[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            b[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        )
    return b


def _fit_even(v_nodes: np.ndarray, r_vals: np.ndarray, k: int, span: float) -> np.ndarray:
    """Least squares for R(v) = sum b_j v^(2j+2), solved in scaled powers."""
    t = (v_nodes / span) ** 2
    design = np.column_stack([t ** (j + 1) for j in range(k)])
    coef, *_ = np.linalg.lstsq(design, r_vals, rcond=None)
    return coef / span ** (2 * np.arange(k) + 2)


def taylor_bj(
    alpha_state: AlphaState,
    k: int,
    v_span: float | None = None,
    c_range: float = 0.25,
) -> TaylorCoeffs:
    """Extract b_0..b_{k-1} from an even-polynomial fit of R(v).

    The fit uses 2k+3 symmetric nodes spanning [0, v_span] (default
    0.6 * v_range).  The stencil is then halved: the reported coefficients
    come from the refined fit, and the error estimates are the fit-to-fit
    differences, which bound the refined fit's own truncation error.
    Extraction is most stable when u_bar is large.
    """
    if not 1 <= k <= 4:
        raise DomainError(f"taylor_bj supports 1 <= k <= 4, got {k}")
    span = v_span if v_span is not None else 0.6 * v_range(alpha_state, c_range)
    if not span > 0:
        raise DomainError(f"stencil span must be positive, got {span}")

    def sample(s: float) -> tuple[np.ndarray, np.ndarray]:
        pos = s * np.arange(1, k + 2) / (k + 1)
        nodes = np.concatenate([-pos[::-1], [0.0], pos])
        vals = np.array([
            0.0 if v == 0.0 else solve_beta(alpha_state, float(v)).r_value
            for v in nodes
        ])
        return nodes, vals

    nodes, vals = sample(span)
    b_coarse = _fit_even(nodes, vals, k, span)
    nodes_half, vals_half = sample(0.5 * span)
    b_fine = _fit_even(nodes_half, vals_half, k, 0.5 * span)
    err = np.abs(b_coarse - b_fine)

    # leakage diagnostic: refit with odd powers v^3, v^5 admitted
    odd_design = np.column_stack(
        [(nodes / span) ** (2 * (j + 1)) for j in range(k)]
        + [(nodes / span) ** 3, (nodes / span) ** 5]
    )
    coef, *_ = np.linalg.lstsq(odd_design, vals, rcond=None)
    odd_leak = float(np.max(np.abs(coef[k:]))) if coef.size > k else 0.0

    fit_resid = float(np.max(np.abs(vals_half - _eval_even(nodes_half, b_fine))))
    if not math.isfinite(fit_resid):
        raise NumericError("taylor fit produced a non-finite residual")
    return TaylorCoeffs(
        k=k,
        b=tuple(float(x) for x in b_fine),
        stencil_h=float(span),
        error_estimates=tuple(float(x) for x in err),
        odd_leakage=odd_leak,
    )


def _eval_even(v: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros_like(np.asarray(v, dtype=float))
    for j, bj in enumerate(b):
        out = out + bj * np.asarray(v, dtype=float) ** (2 * (j + 1))
    return out


def rk_poly(coeffs: TaylorCoeffs, z: float) -> float:
    """The correction polynomial sum_j b_j z^(2(j+1)) at z >= 0."""
    if z < 0:
        raise DomainError(f"rk_poly needs z >= 0, got {z}")
    z2 = z * z
    acc = 0.0
    for bj in reversed(coeffs.b):
        acc = z2 * (bj + acc)
    return acc


def hess_drift(alpha_state: AlphaState, v: float) -> float:
    """Hess[f_y] at (beta1(v), beta2(v)) divided by its value at (alpha, alpha)."""
    state = solve_beta(alpha_state, v)
    a = alpha_state.alpha
    _, _, _, f20, f11, f02 = fy_partials(a, a, alpha_state.basis)
    return state.hess / (f20 * f02 - f11 * f11)


def beta_expansion_check(alpha_state: AlphaState, v: float) -> tuple[float, float]:
    """(beta1(v) - alpha, v / varrho) for external slope comparison.

    No sign relation between the two is asserted here; the saddle system
    itself is taken as ground truth for which way beta1 moves.
    """
    state = solve_beta(alpha_state, v)
    return state.beta1 - alpha_state.alpha, v / alpha_state.varrho
