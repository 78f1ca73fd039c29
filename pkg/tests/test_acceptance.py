"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.  Criterion 10 performs the full exact-enumeration grid
and is the slow one (about a minute).
"""

from __future__ import annotations

import json
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

import frialab as fl
from frialab.cli import main as cli_main


@contextmanager
def criterion(number: int, label: str):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"[FAIL] criterion {number:02d} ({label}) {time.monotonic() - start:.1f}s")
        raise
    print(f"[PASS] criterion {number:02d} ({label}) {time.monotonic() - start:.1f}s")


def _trial_division_friables(limit: int, y: int) -> list[int]:
    primes = [p for p in range(2, y + 1) if all(p % d for d in range(2, int(math.isqrt(p)) + 1))]
    out = [1]
    for n in range(2, limit + 1):
        m = n
        for p in primes:
            if p * p > m:
                break
            while m % p == 0:
                m //= p
        if m != 1 and m <= y:  # leftover prime factor within bound
            m = 1
        if m == 1:
            out.append(n)
    return out


def test_c01_exact_counts():
    with criterion(1, "exact counts vs trial division"):
        assert fl.psi_exact(100, fl.primes_up_to(5)) == 34
        for y in (5, 20, 100):
            scan = _trial_division_friables(10**5, y)
            module = [f.n for f in fl.enumerate_friable(10**5, fl.primes_up_to(y))]
            # list equality pins Psi(x, y) for every x <= 1e5 at once
            assert module == scan


def test_c02_closed_form_saddle():
    with criterion(2, "closed-form saddle at (4, 2)"):
        state = fl.solve_alpha(4, fl.primes_up_to(2))
        assert abs(state.alpha - math.log(1.5) / math.log(2)) <= 1e-12


def test_c03_series_matches_zeta_on_diagonal():
    with criterion(3, "F(alpha, alpha) = zeta(alpha, y) on a 20-point grid"):
        for y in (10, 50, 200, 1000, 10000):
            basis = fl.primes_up_to(y)
            for x in (1e3, 1e6, 1e12, 1e30):
                state = fl.solve_alpha(x, basis)
                sample = fl.f_y_eval(state.alpha, state.alpha, basis)
                # agreement of the logs to 1e-12 is agreement of the values
                # to 1e-12 relative
                assert abs(sample.f.real - state.log_zeta) <= 1e-12
                assert sample.f.imag == 0.0


def test_c04_derivative_ladder():
    with criterion(4, "derivative ladder and Hessian identities"):
        for x, y in ((1e6, 100), (1e12, 1000), (1e8, 50)):
            basis = fl.primes_up_to(y)
            st = fl.solve_alpha(x, basis)
            a = st.alpha
            f20 = fl.partial_f(2, 0, a, a, basis)
            f11 = fl.partial_f(1, 1, a, a, basis)
            assert f20 == pytest.approx(st.sigma2 / 2 - st.sigma2_tilde / 12, rel=1e-8)
            assert f11 == pytest.approx(st.sigma2_tilde / 12, rel=1e-8)
            assert fl.hessian_f(a, a, basis) == pytest.approx(
                st.varrho**2 * st.sigma2, rel=1e-8
            )
            for k, l in ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2)):
                closed = fl.partial_f(k, l, a, a, basis)
                fd = fl.partial_f(k, l, a, a, basis, method="fd")
                assert fd == pytest.approx(closed, rel=1e-6)


def test_c05_two_variable_saddle(state_big):
    with criterion(5, "two-variable saddle curvature and coefficients"):
        h = 0.02
        r = fl.solve_beta(state_big, h).r_value
        assert 2 * r / h**2 == pytest.approx(-1.0, abs=1e-3)
        coeffs = fl.taylor_bj(state_big, 3)
        assert coeffs.b[0] == pytest.approx(-0.5, abs=1e-3)
        newton = fl.solve_beta(state_big, 1.0)
        ode = fl.beta_ode_path(state_big, 1.0)
        assert abs(ode[0] - newton.beta1) <= 1e-6
        assert abs(ode[1] - newton.beta2) <= 1e-6


def test_c06_series_coefficients():
    with criterion(6, "power-series coefficient facts"):
        table = fl.extract_xi_coeffs(8)
        assert table.d[1, 0] == pytest.approx(0.5, abs=1e-8)
        assert table.d[0, 1] == pytest.approx(0.5, abs=1e-8)
        k = np.arange(9)
        tri = (k[:, None] + k[None, :]) <= 8
        assert float(table.d[tri].min()) >= -1e-8
        assert fl.xi_small(0.0, 0.0).real == pytest.approx(1.0 / 24.0, abs=1e-10)


def test_c07_appendix_bound_suites():
    with criterion(7, "remainder-function bound suites, 1e4 samples"):
        report = fl.lemma8_suite(10000, 0)
        assert report.passed, [c.name for c in report.checks if c.violations]
        r, _ = fl.rs_funcs(-2.0, side="+")
        assert r == pytest.approx(-0.0997, abs=1e-3)
        lreport = fl.lfunc_suite(10000, 0)
        assert lreport.passed, [c.name for c in lreport.checks if c.violations]


def test_c08_perron_and_smoothing_kernel():
    with criterion(8, "truncated indicator and smoothing identity"):
        for z in (2.0, 0.5, 1.01):
            for T in (50.0, 200.0):
                integral, closed = fl.fejer_identity(z, T)
                assert abs(integral - closed) <= 1e-10
                val = fl.perron_indicator(z, 1.0, T)
                target = 1.0 if z >= 1.0 else 0.0
                assert abs(val - target) <= z / (T * abs(math.log(z)))


def test_c09_dickman():
    with criterion(9, "Dickman function and the x rho(u) law"):
        assert fl.dickman_rho(2.0) == pytest.approx(1 - math.log(2), abs=1e-8)
        for y in (100, 1000):
            ratio = fl.psi_exact(1e6, fl.primes_up_to(y)) / fl.psi_dickman(1e6, y)
            assert 0.5 <= ratio <= 1.5


_GRID_MAX_NORM: dict[tuple[float, float], float] = {}


def test_c10_main_theorem_desk_grid():
    with criterion(10, "Gaussian law on the enumeration grid"):
        grid_start = time.monotonic()
        v_grid = [0.0, 0.5, 1.0, 1.5]
        for y in (30, 50, 100):
            basis = fl.primes_up_to(y)
            for x in (1e5, 1e6, 1e7):
                t0 = time.monotonic()
                state = fl.solve_alpha(x, basis)
                stats = fl.d_exact_multi(x, basis, v_grid, state.varrho)
                elapsed = time.monotonic() - t0
                if x == 1e7:
                    assert elapsed < 60.0, f"x=1e7 enumeration took {elapsed:.1f}s"
                # exact median split: 2 S >= Psi as integers
                s0 = stats[0]
                assert 2 * s0.weighted_num >= s0.psi * s0.weighted_den
                worst = 0.0
                for v, st in zip(v_grid, stats):
                    norm = abs(st.d_value - fl.gauss_tail(v)) * state.u_bar / (1 + v**4)
                    assert norm <= 5.0
                    worst = max(worst, norm)
                _GRID_MAX_NORM[(x, y)] = worst
        assert time.monotonic() - grid_start < 900.0


def test_c10_trend_clause():
    """Trend clause of criterion 10 -- KNOWN RED, see the decisions ledger.

    The clause asks that the maximum over v of the normalized error
    |D - Phi| u_bar / (1 + v^4) not increase from x = 1e5 to x = 1e7 at
    fixed y.  The exact statistic (verified against brute-force divisor
    enumeration) moves the other way at every y on this grid: the raw
    deviation |D - Phi| is still roughly constant for u_bar <= 5, so the
    u_bar factor makes the normalized form grow (for example 0.0438 ->
    0.0674 at y = 30).  The bounded form (<= 5) holds with two orders of
    margin; only this monotonicity expectation fails, and no
    implementation freedom exists in D, Phi, or u_bar to change it.
    """
    with criterion(10, "trend clause: normalized error non-increasing in x"):
        if not _GRID_MAX_NORM:  # standalone run: recompute the endpoints
            v_grid = [0.0, 0.5, 1.0, 1.5]
            for y in (30, 50, 100):
                basis = fl.primes_up_to(y)
                for x in (1e5, 1e7):
                    state = fl.solve_alpha(x, basis)
                    stats = fl.d_exact_multi(x, basis, v_grid, state.varrho)
                    _GRID_MAX_NORM[(x, y)] = max(
                        abs(st.d_value - fl.gauss_tail(v)) * state.u_bar / (1 + v**4)
                        for v, st in zip(v_grid, stats)
                    )
        for y in (30, 50, 100):
            assert _GRID_MAX_NORM[(1e7, y)] <= _GRID_MAX_NORM[(1e5, y)], (
                f"normalized error grew at y={y}: "
                f"{_GRID_MAX_NORM[(1e5, y)]:.4f} -> {_GRID_MAX_NORM[(1e7, y)]:.4f}"
            )


def test_c11_exact_vs_corrected_prediction(state_big):
    with criterion(11, "exact-exponent vs corrected integral"):
        coeffs = fl.taylor_bj(state_big, 2, v_span=2.0)
        v_max = max(2.0, fl.suggested_v_max(state_big.u_bar, 2))
        curve = fl.r_curve(state_big, 2.2)
        for i in range(9):
            v = 0.25 * i
            p1 = fl.prop1_from_curve(curve, v).value
            p2 = fl.predict_thm2(coeffs, v, v_max)
            assert abs(p1 - p2) <= 0.02


def test_c12_byte_determinism(tmp_path):
    with criterion(12, "byte-identical reruns"):
        csv_path = tmp_path / "rows.csv"
        args = ["dlaw", "--x", "1e5", "--y", "30", "--v", "0,0.5,1,1.5",
                "--k", "2", "--seed", "0", "--out", str(csv_path)]
        assert cli_main(args) == 0
        first = csv_path.read_bytes()
        assert cli_main(args) == 0
        assert csv_path.read_bytes() == first
        json_path = tmp_path / "alpha.json"
        jargs = ["alpha", "--x", "1e12", "--y", "1000", "--out", str(json_path)]
        assert cli_main(jargs) == 0
        jfirst = json_path.read_bytes()
        assert cli_main(jargs) == 0
        assert json_path.read_bytes() == jfirst
        json.loads(jfirst.decode("utf-8"))  # stays valid JSON
