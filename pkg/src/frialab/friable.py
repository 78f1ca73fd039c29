"""Exact statistics over friable (smooth) integers.

A friable integer is one whose largest prime factor stays below a bound y.
This module enumerates every such integer up to x with its factorization,
counts them, and computes the exact divisor-tail statistic

    D(x, y; v) = (1/Psi) * sum over friable n <= x of
                 #{d | n : log d >= (1/2) log n + gamma} / tau(n),

with gamma = v * rho.  Divisor logs are compared against the threshold in
log space with a small guard band; the number of band-resident (ambiguous)
divisors is reported so callers can assert that no tie was decided by the
band.  The weighted sum is accumulated exactly as a rational number by
grouping counts per divisor total tau(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CapacityError, DomainError

__all__ = [
    "GUARD_BAND",
    "MAX_N",
    "PrimeBasis",
    "Factorization",
    "ExactStats",
    "primes_up_to",
    "enumerate_friable",
    "psi_exact",
    "rho_n",
    "divisor_tail_fraction",
    "d_exact",
    "d_exact_multi",
]

#: half-width of the log-space comparison band for divisor thresholds
GUARD_BAND = 1e-9

#: largest integer the exact enumeration will touch (signed 64-bit range)
MAX_N = 2**63 - 1


@dataclass(frozen=True, eq=False)
class PrimeBasis:
    """All primes p <= y with their natural logarithms."""

    y: float
    primes: np.ndarray  # int64, strictly increasing
    logs: np.ndarray    # float64, logs[i] == log(primes[i])

    def __len__(self) -> int:
        return int(self.primes.size)

    @property
    def pi_y(self) -> int:
        """pi(y), the number of primes not exceeding y."""
        return int(self.primes.size)


@dataclass(frozen=True, eq=False)
class Factorization:
    """A friable integer as an exponent sequence over a PrimeBasis."""

    basis: PrimeBasis
    exponents: tuple[tuple[int, int], ...]  # (prime index, exponent >= 1)
    n: int
    log_n: float
    tau: int


@dataclass(frozen=True)
class ExactStats:
    """Exact divisor-tail statistic at one threshold gamma."""

    x: float
    y: float
    gamma: float
    psi: int
    weighted_num: int   # exact numerator of S(x, y; gamma)
    weighted_den: int   # exact denominator
    weighted_sum: float
    d_value: float
    ambiguous: int      # divisors that fell inside the guard band


def primes_up_to(y: float) -> PrimeBasis:
    """Sieve the primes p <= y.  Requires y >= 2."""
    if not y >= 2:
        raise DomainError(f"prime bound y must be >= 2, got {y}")
    limit = int(math.floor(y))
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(math.isqrt(limit)) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    primes = np.flatnonzero(sieve).astype(np.int64)
    return PrimeBasis(y=float(y), primes=primes, logs=np.log(primes.astype(np.float64)))


def _check_capacity(x: float) -> int:
    if not x >= 1:
        raise DomainError(f"upper bound x must be >= 1, got {x}")
    if x > MAX_N:
        raise CapacityError(
            f"x = {x:g} exceeds the 64-bit exact-enumeration range ({MAX_N})"
        )
    return int(math.floor(x))


def enumerate_friable(x: float, basis: PrimeBasis) -> list[Factorization]:
    """All friable n <= x in ascending order, each with its exact factorization."""
    limit = _check_capacity(x)
    plist = basis.primes.tolist()
    llist = basis.logs.tolist()
    out: list[Factorization] = []
    path: list[tuple[int, int]] = []

    def descend(n: int, log_n: float, tau: int, start: int) -> None:
        out.append(
            Factorization(
                basis=basis, exponents=tuple(path), n=n, log_n=log_n, tau=tau
            )
        )
        for i in range(start, len(plist)):
            p = plist[i]
            if n * p > limit:
                break
            lp = llist[i]
            m = n * p
            k = 1
            while True:
                path.append((i, k))
                descend(m, log_n + k * lp, tau * (k + 1), i + 1)
                path.pop()
                if m * p > limit:
                    break
                m *= p
                k += 1

    descend(1, 0.0, 1, 0)
    out.sort(key=lambda f: f.n)
    return out


def psi_exact(x: float, basis: PrimeBasis) -> int:
    """Psi(x, y): the exact number of friable integers n <= x."""
    limit = _check_capacity(x)
    plist = basis.primes.tolist()
    count = 0

    def descend(n: int, start: int) -> None:
        nonlocal count
        count += 1
        for i in range(start, len(plist)):
            p = plist[i]
            m = n * p
            if m > limit:
                break
            while True:
                descend(m, i + 1)
                m *= p
                if m > limit:
                    break

    descend(1, 0)
    return count


def rho_n(f: Factorization) -> float:
    """Standard deviation of log d over the divisors d of n.

    For n with factorization prod p^nu this equals
    sqrt(sum nu(nu+2)(log p)^2 / 12).
    """
    total = 0.0
    for idx, nu in f.exponents:
        lp = float(f.basis.logs[idx])
        total += nu * (nu + 2) * lp * lp / 12.0
    return math.sqrt(total)


def _divisor_logs(f: Factorization) -> np.ndarray:
    logs = np.zeros(1)
    for idx, nu in f.exponents:
        lp = float(f.basis.logs[idx])
        steps = lp * np.arange(nu + 1)
        logs = (logs[:, None] + steps[None, :]).ravel()
    return logs


def divisor_tail_fraction(
    f: Factorization, theta: float, band: float = GUARD_BAND
) -> tuple[int, int]:
    """(count, tau) with count = #{d | n : log d >= theta}.

    Divisors within ``band`` of the threshold count as >= (inclusive side).
    """
    logs = _divisor_logs(f)
    count = int(np.count_nonzero(logs >= theta - band))
    return count, f.tau


def d_exact_multi(
    x: float,
    basis: PrimeBasis,
    v_list: Sequence[float],
    rho: float,
    band: float = GUARD_BAND,
) -> list[ExactStats]:
    """One enumeration pass computing D(x, y; v) for every v in v_list.

    With rho = 0 the v values are interpreted directly as thresholds gamma.
    The per-n threshold is (1/2) log n + gamma.
    """
    limit = _check_capacity(x)
    gammas = np.array([v * rho if rho != 0.0 else v for v in v_list], dtype=float)
    if gammas.size == 0:
        return []
    plist = basis.primes.tolist()
    llist = basis.logs.tolist()
    nv = gammas.size
    counts: list[dict[int, int]] = [dict() for _ in range(nv)]
    ambiguous = [0] * nv
    psi = 0

    def record(log_n: float, dlogs: np.ndarray) -> None:
        nonlocal psi
        psi += 1
        tau = dlogs.size
        th = 0.5 * log_n + gammas
        incl = np.count_nonzero(dlogs[:, None] >= (th - band)[None, :], axis=0)
        strict = np.count_nonzero(dlogs[:, None] > (th + band)[None, :], axis=0)
        for j in range(nv):
            c = int(incl[j])
            if c:
                bucket = counts[j]
                bucket[tau] = bucket.get(tau, 0) + c
            ambiguous[j] += c - int(strict[j])

    def descend(n: int, log_n: float, dlogs: np.ndarray, start: int) -> None:
        record(log_n, dlogs)
        for i in range(start, len(plist)):
            p = plist[i]
            if n * p > limit:
                break
            lp = llist[i]
            m = n * p
            k = 1
            cur = np.concatenate([dlogs, dlogs + lp])
            while True:
                descend(m, log_n + k * lp, cur, i + 1)
                if m * p > limit:
                    break
                m *= p
                k += 1
                cur = np.concatenate([cur, dlogs + k * lp])

    descend(1, 0.0, np.zeros(1), 0)

    out = []
    for j in range(nv):
        total = Fraction(0)
        for tau, c in counts[j].items():
            total += Fraction(c, tau)
        weighted = float(total)
        out.append(
            ExactStats(
                x=float(x),
                y=float(basis.y),
                gamma=float(gammas[j]),
                psi=psi,
                weighted_num=total.numerator,
                weighted_den=total.denominator,
                weighted_sum=weighted,
                d_value=weighted / psi,
                ambiguous=ambiguous[j],
            )
        )
    return out


def d_exact(
    x: float,
    basis: PrimeBasis,
    v: float,
    rho: float,
    band: float = GUARD_BAND,
) -> ExactStats:
    """D(x, y; v) with threshold log d >= (1/2) log n + v*rho (see d_exact_multi)."""
    return d_exact_multi(x, basis, [v], rho, band)[0]
