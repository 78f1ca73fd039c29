"""One-variable saddle point for the friable zeta function.

zeta(s, y) is the Euler product over primes p <= y.  The saddle abscissa
alpha(x, y) is the unique positive root of

    sum_{p <= y} log p / (p^alpha - 1) = log x,

equivalently the minimizer of Rankin's bound zeta(sigma, y) x^sigma.  From
the solved alpha we build the derivative ladder sigma_k (log-derivatives of
log zeta), the tilde variants, the dispersion proxy

    varrho = (1/2) sqrt(sigma_2 - sigma_2~ / 3),

and the classical smooth-count approximations (saddle-point formula and
the x * rho(u) law with rho the delay-ODE function).

All prime sums are evaluated through q = exp(-s log p) via expm1 so they
stay stable for s log p anywhere in (0, 900]; x enters only through log x,
so x up to ~1e300 is fine even though such x are far beyond enumeration.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SolverError
from .friable import PrimeBasis

__all__ = [
    "AlphaState",
    "phi_k",
    "phi_tilde_k",
    "solve_alpha",
    "varrho",
    "psi_ht",
    "psi_ht_log",
    "ht_asymptotics",
    "dickman_rho",
    "psi_dickman",
    "sigma_ratio",
]

_ALPHA_LO = 1e-8
_ALPHA_HI = 64.0
_BISECT_WIDTH = 1e-3
_NEWTON_TOL = 1e-13
_RESIDUAL_FACTOR = 1e-10


@dataclass(frozen=True, eq=False)
class AlphaState:
    """Solved saddle point with its derivative ladder."""

    x: float
    y: float
    u: float
    u_bar: float
    alpha: float
    sigma: tuple[float, float, float, float]  # sigma_1 .. sigma_4
    sigma2_tilde: float
    varrho: float
    log_zeta: float
    residual: float
    basis: PrimeBasis

    @property
    def log_x(self) -> float:
        return math.log(self.x)

    @property
    def sigma2(self) -> float:
        return self.sigma[1]


def _em(s: float, logs: np.ndarray) -> np.ndarray:
    # em = p^{-s} - 1, exact to machine precision even when p^{-s} -> 1
    return np.expm1(-s * logs)


def phi_k(s: float, basis: PrimeBasis, k: int) -> float:
    """k-th s-derivative of log zeta(s, y), by closed form, for k = 0..4."""
    if not s > 0:
        raise DomainError(f"phi_k needs s > 0, got {s}")
    if not 0 <= k <= 4:
        raise DomainError(f"phi_k supports k in 0..4, got {k}")
    lp = basis.logs
    em = _em(s, lp)
    q = 1.0 + em
    if k == 0:
        return float(-np.sum(np.log1p(-q)))
    if k == 1:
        return float(np.sum(lp * q / em))  # q/em = -q/(1-q) = -1/(p^s - 1)
    if k == 2:
        return float(np.sum(lp**2 * q / em**2))
    if k == 3:
        return float(np.sum(lp**3 * q * (1.0 + q) / em**3))
    return float(np.sum(lp**4 * q * (1.0 + 4.0 * q + q * q) / em**4))


def phi_tilde_k(s: float, basis: PrimeBasis, k: int) -> float:
    """sum over p <= y of (log p)^k / (p^s - 1)^k."""
    if not s > 0:
        raise DomainError(f"phi_tilde_k needs s > 0, got {s}")
    if k < 1:
        raise DomainError(f"phi_tilde_k needs k >= 1, got {k}")
    lp = basis.logs
    em = _em(s, lp)
    r = -(1.0 + em) / em  # = 1/(p^s - 1)
    return float(np.sum((lp * r) ** k))


def solve_alpha(x: float, basis: PrimeBasis) -> AlphaState:
    """Solve the saddle equation and populate the derivative ladder.

    Bisection brings the bracket [1e-8, 64] down to width 1e-3, then
    safeguarded Newton polishes to 1e-13; the residual of the defining
    equation is checked against 1e-10 * log x.
    """
    if not x >= 3:
        raise DomainError(f"solve_alpha needs x >= 3, got {x}")
    log_x = math.log(x)

    def resid(a: float) -> float:
        return phi_tilde_k(a, basis, 1) - log_x

    lo, hi = _ALPHA_LO, _ALPHA_HI
    flo = resid(lo)
    fhi = resid(hi)
    if not (flo > 0 > fhi):
        raise SolverError(
            f"saddle bracket [{lo}, {hi}] does not straddle the root: "
            f"f(lo)={flo:.3e}, f(hi)={fhi:.3e}"
        )
    while hi - lo > _BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if resid(mid) > 0:
            lo = mid
        else:
            hi = mid
    a = 0.5 * (lo + hi)
    for _ in range(60):
        r = resid(a)
        if r > 0:
            lo = max(lo, a)
        else:
            hi = min(hi, a)
        step = r / phi_k(a, basis, 2)  # resid' = -phi_2 < 0
        a_new = a + step
        if not lo < a_new < hi:
            a_new = 0.5 * (lo + hi)
        if abs(a_new - a) <= _NEWTON_TOL * max(1.0, a):
            a = a_new
            break
        a = a_new
    else:
        raise SolverError(
            f"saddle Newton did not converge; bracket [{lo}, {hi}], last a={a}"
        )

    residual = abs(resid(a))
    if residual > _RESIDUAL_FACTOR * log_x:
        raise SolverError(
            f"saddle residual {residual:.3e} exceeds {_RESIDUAL_FACTOR:g}*log x"
        )
    s2 = phi_k(a, basis, 2)
    s2t = phi_tilde_k(a, basis, 2)
    u = log_x / math.log(basis.y)
    return AlphaState(
        x=float(x),
        y=float(basis.y),
        u=u,
        u_bar=min(u, float(basis.pi_y)),
        alpha=a,
        sigma=(phi_k(a, basis, 1), s2, phi_k(a, basis, 3), phi_k(a, basis, 4)),
        sigma2_tilde=s2t,
        varrho=0.5 * math.sqrt(s2 - s2t / 3.0),
        log_zeta=phi_k(a, basis, 0),
        residual=residual,
        basis=basis,
    )


def varrho(state: AlphaState) -> float:
    """The dispersion proxy (1/2) sqrt(sigma_2 - sigma_2~/3)."""
    return state.varrho


def psi_ht_log(state: AlphaState) -> float:
    """log of the saddle-point approximation to Psi(x, y)."""
    return (
        state.log_zeta
        + state.alpha * state.log_x
        - math.log(state.alpha)
        - 0.5 * math.log(2.0 * math.pi * state.sigma2)
    )


def psi_ht(state: AlphaState) -> float:
    """Saddle-point approximation zeta(alpha,y) x^alpha / (alpha sqrt(2 pi sigma_2))."""
    return math.exp(psi_ht_log(state))


def ht_asymptotics(state: AlphaState) -> tuple[float, float]:
    """Leading-order estimates (alpha_est, phi2_est) for alpha and sigma_2."""
    log_x = state.log_x
    log_y = math.log(state.y)
    alpha_est = math.log(1.0 + state.y / log_x) / log_y
    phi2_est = (1.0 + log_x / state.y) * log_x * log_y
    return alpha_est, phi2_est


# Dickman rho: closed forms on [0, 2], RK4 with step 1/256 beyond, with
# cubic interpolation for off-grid history and query points.  The grid is
# extended lazily and shared; extension is serialized by a lock.
_DICKMAN_STEP = 1.0 / 256.0
_dickman_grid: list[float] = [1.0 - math.log(2.0)]  # values at u = 2 + j*step
_dickman_lock = threading.Lock()


def _dickman_closed(u: float) -> float:
    if u <= 1.0:
        return 1.0
    return 1.0 - math.log(u)


def _dickman_history(u: float) -> float:
    """rho at any point already covered by closed forms or the grid."""
    if u <= 2.0:
        return _dickman_closed(u)
    pos = (u - 2.0) / _DICKMAN_STEP
    j = int(pos)
    frac = pos - j
    if frac == 0.0 and j < len(_dickman_grid):
        return _dickman_grid[j]
    # cubic Lagrange on the 4 grid points around u
    j0 = min(max(j - 1, 0), len(_dickman_grid) - 4)
    val = 0.0
    for m in range(4):
        w = 1.0
        for r in range(4):
            if r != m:
                w *= (pos - (j0 + r)) / ((j0 + m) - (j0 + r))
        val += w * _dickman_grid[j0 + m]
    return val


def _dickman_extend(n_needed: int) -> None:
    h = _DICKMAN_STEP
    while len(_dickman_grid) < n_needed:
        j = len(_dickman_grid) - 1
        t = 2.0 + j * h
        y0 = _dickman_grid[-1]

        def deriv(tt: float, yy: float) -> float:
            return -_dickman_history(tt - 1.0) / tt

        k1 = deriv(t, y0)
        k2 = deriv(t + 0.5 * h, y0 + 0.5 * h * k1)
        k3 = deriv(t + 0.5 * h, y0 + 0.5 * h * k2)
        k4 = deriv(t + h, y0 + h * k3)
        _dickman_grid.append(y0 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))


def dickman_rho(u: float) -> float:
    """Dickman's function rho(u): 1 on [0,1], then u rho'(u) + rho(u-1) = 0."""
    if u < 0:
        raise DomainError(f"dickman_rho needs u >= 0, got {u}")
    if u <= 2.0:
        return _dickman_closed(u)
    need = int(math.ceil((u - 2.0) / _DICKMAN_STEP)) + 3
    with _dickman_lock:
        _dickman_extend(need + 1)
    return _dickman_history(u)


def psi_dickman(x: float, y: float) -> float:
    """The smooth-count approximation x * rho(log x / log y)."""
    if not x >= 3 or not y >= 2:
        raise DomainError(f"psi_dickman needs x >= 3 and y >= 2, got ({x}, {y})")
    return x * dickman_rho(math.log(x) / math.log(y))


def sigma_ratio(state: AlphaState) -> tuple[float, float]:
    """(measured, predicted) for sigma_2~/sigma_2; prediction is 1/(1 + y/log x)."""
    return (
        state.sigma2_tilde / state.sigma2,
        1.0 / (1.0 + state.y / state.log_x),
    )
