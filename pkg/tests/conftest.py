"""Shared fixtures: prime bases and solved saddle states reused across tests."""

from __future__ import annotations

import pytest

import frialab as fl


@pytest.fixture(scope="session")
def basis_30():
    return fl.primes_up_to(30)


@pytest.fixture(scope="session")
def basis_100():
    return fl.primes_up_to(100)


@pytest.fixture(scope="session")
def basis_1000():
    return fl.primes_up_to(1000)


@pytest.fixture(scope="session")
def state_big(basis_1000):
    """The workhorse analytic instance x = 1e12, y = 1e3 (u_bar = 4)."""
    return fl.solve_alpha(1e12, basis_1000)


@pytest.fixture(scope="session")
def state_mid(basis_100):
    return fl.solve_alpha(1e6, basis_100)


def largest_prime_factor(n: int) -> int:
    """Trial-division oracle, independent of the package."""
    if n <= 1:
        return 1
    biggest = 1
    d = 2
    while d * d <= n:
        while n % d == 0:
            biggest = d
            n //= d
        d += 1
    if n > 1:
        biggest = max(biggest, n)
    return biggest


def divisors_brute(n: int) -> list[int]:
    """All divisors of n by trial division (oracle)."""
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def dickman_series_oracle(u_max: int = 21, terms: int = 60):
    """Piecewise power-series solution of the delay ODE (oracle).

    On [n, n+1] expand around the center c = n + 1/2; the recurrence
    a_{k+1} = -(b_k + k a_k) / (c (k+1)) follows from (c + x) rho' = -prev.
    Returns a callable accurate to ~1e-14 on [0, u_max].
    """
    coeffs = [[1.0] + [0.0] * terms]
    right = 1.0
    for n in range(1, u_max):
        c = n + 0.5
        b = coeffs[-1]
        a = [0.0] * (terms + 1)
        for k in range(terms):
            a[k + 1] = -(b[k] + k * a[k]) / (c * (k + 1))
        a[0] = right - sum(a[k] * (-0.5) ** k for k in range(1, terms + 1))
        right = sum(a[k] * 0.5**k for k in range(terms + 1))
        coeffs.append(a)

    def rho(u: float) -> float:
        if u <= 1.0:
            return 1.0
        n = min(int(u), u_max - 1)
        x = u - (n + 0.5)
        a = coeffs[n]
        return sum(a[k] * x**k for k in range(terms + 1))

    return rho
