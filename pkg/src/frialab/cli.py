"""Command-line front end.

Subcommands: alpha, psi, rho, beta, bj, dlaw, verify, sweep.  Scalar
commands emit a JSON object with a schema_version and a provenance block
echoing the parsed configuration; dlaw and sweep emit CSV rows (provenance
as a leading comment line) and optionally render figures next to the
output.  Numbers are serialized with shortest round-trip formatting, so a
fixed configuration and seed reproduce byte-identical output.

Exit codes: 0 success, 2 domain/capacity error, 3 numeric or solver
error, 4 output I/O failure.  Structured errors go to stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import __version__
from .alpha import dickman_rho, ht_asymptotics, psi_dickman, psi_ht, solve_alpha
from .beta import solve_beta, taylor_bj
from .dlaw import compare
from .errors import CapacityError, DomainError, FrialabError, NumericError, SolverError
from .friable import primes_up_to, psi_exact
from .fyseries import lemma8_suite, lfunc_suite, extract_xi_coeffs, fejer_identity, perron_indicator

SCHEMA_VERSION = 1

#: enumeration above this x is refused by the psi command (use the analytic columns)
PSI_EXACT_LIMIT = 2e7

_CSV_FIELDS = (
    "x",
    "y",
    "u_bar",
    "v",
    "d_exact",
    "phi_v",
    "thm2_pred",
    "prop1_pred",
    "err_gauss",
    "err_corrected",
    "normalized_err",
    "gauss_ratio_err",
)


@dataclass
class RunConfig:
    """Parsed command configuration; echoed verbatim into every output."""

    command: str
    x: float | None = None
    y: float | None = None
    u: float | None = None
    v: float | None = None
    v_grid: list[float] = field(default_factory=list)
    k: int = 2
    v_m: float | None = None
    seed: int = 0
    samples: int = 10000
    suite: str = "lemma8"
    fmt: str = "json"
    out: str | None = None
    plot: bool = False
    x_grid: list[float] = field(default_factory=list)
    y_grid: list[float] = field(default_factory=list)
    threads: int = 0
    solver_tol: float = 1e-9
    quad_tol: float = 1e-10

    def provenance(self) -> dict[str, Any]:
        keys = (
            "command", "x", "y", "u", "v", "v_grid", "k", "v_m", "seed",
            "samples", "suite", "fmt", "out", "plot", "x_grid", "y_grid",
            "threads", "solver_tol", "quad_tol",
        )
        return {"version": __version__, **{k: getattr(self, k) for k in keys}}


def _fmt_number(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_csv(rows: Sequence[dict], fields: Sequence[str], config: RunConfig) -> bytes:
    """Delimited output: provenance comment, header, one line per row."""
    lines = ["# provenance: " + json.dumps(config.provenance(), separators=(",", ":"))]
    lines.append(",".join(fields))
    for row in rows:
        lines.append(",".join(_fmt_number(row[f]) for f in fields))
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit_json(record: dict, config: RunConfig) -> bytes:
    """One top-level JSON object with schema version and provenance."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": config.provenance(),
        "result": record,
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip() != ""]
    except ValueError as exc:
        raise DomainError(f"could not parse number list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="frialab",
        description="Exact and saddle-point statistics for divisors of friable integers",
    )
    top.add_argument("--version", action="version", version=f"frialab {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, fmt_default: str) -> None:
        p.add_argument("--format", choices=["json", "csv"], default=fmt_default, dest="fmt")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=None,
                       help="cap internal parallelism (0 = auto; default from FRIALAB_THREADS)")
        p.add_argument("--solver-tol", type=float, default=1e-9, dest="solver_tol")
        p.add_argument("--quad-tol", type=float, default=1e-10, dest="quad_tol")

    p = sub.add_parser("alpha", help="solve the saddle equation and report the ladder")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    common(p, "json")

    p = sub.add_parser("psi", help="exact and approximate smooth counts")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    common(p, "json")

    p = sub.add_parser("rho", help="Dickman rho and the dispersion proxy")
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--y", type=float, default=None)
    p.add_argument("--u", type=float, default=None)
    common(p, "json")

    p = sub.add_parser("beta", help="two-variable saddle at one deviation")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    common(p, "json")

    p = sub.add_parser("bj", help="even Taylor coefficients of the saddle exponent")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--k", type=int, default=2)
    common(p, "json")

    p = sub.add_parser("dlaw", help="exact statistic against all predictions")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--v", type=str, required=True, help="comma list of deviations")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--v-m", type=float, default=None, dest="v_m")
    p.add_argument("--plot", action="store_true",
                   help="render figures next to the output file")
    common(p, "csv")

    p = sub.add_parser("sweep", help="dlaw over an (x, y) grid")
    p.add_argument("--x-grid", type=str, required=True, dest="x_grid")
    p.add_argument("--y-grid", type=str, required=True, dest="y_grid")
    p.add_argument("--v", type=str, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--v-m", type=float, default=None, dest="v_m")
    p.add_argument("--plot", action="store_true")
    common(p, "csv")

    p = sub.add_parser("verify", help="randomized inequality suites")
    p.add_argument("--suite", default="lemma8",
                   choices=["lemma8", "lfunc", "xicoeffs", "fejer", "perron", "all"])
    p.add_argument("--samples", type=int, default=10000)
    common(p, "json")

    return top


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in ("x", "y", "u", "k", "v_m", "seed", "samples", "suite",
                 "fmt", "out", "solver_tol", "quad_tol"):
        if hasattr(args, name) and getattr(args, name) is not None:
            setattr(cfg, name, getattr(args, name))
    cfg.plot = bool(getattr(args, "plot", False))
    if args.command in ("dlaw", "sweep"):
        cfg.v_grid = _parse_floats(args.v)
    elif hasattr(args, "v") and args.v is not None:
        cfg.v = float(args.v)
    if args.command == "sweep":
        cfg.x_grid = _parse_floats(args.x_grid)
        cfg.y_grid = _parse_floats(args.y_grid)
    threads = getattr(args, "threads", None)
    if threads is None:
        threads = int(os.environ.get("FRIALAB_THREADS", "0"))
    if threads < 0:
        raise DomainError(f"threads must be >= 0, got {threads}")
    cfg.threads = threads
    return cfg


def _write(payload: bytes, out: str | None) -> None:
    if out is None:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    else:
        with open(out, "wb") as fh:
            fh.write(payload)


def _alpha_record(x: float, y: float) -> dict:
    state = solve_alpha(x, primes_up_to(y))
    alpha_est, phi2_est = ht_asymptotics(state)
    return {
        "x": state.x,
        "y": state.y,
        "u": state.u,
        "u_bar": state.u_bar,
        "pi_y": state.basis.pi_y,
        "alpha": state.alpha,
        "sigma1": state.sigma[0],
        "sigma2": state.sigma[1],
        "sigma3": state.sigma[2],
        "sigma4": state.sigma[3],
        "sigma2_tilde": state.sigma2_tilde,
        "varrho": state.varrho,
        "log_zeta": state.log_zeta,
        "residual": state.residual,
        "alpha_estimate": alpha_est,
        "sigma2_estimate": phi2_est,
    }


def _psi_record(x: float, y: float) -> dict:
    basis = primes_up_to(y)
    state = solve_alpha(x, basis)
    exact = None
    if x <= PSI_EXACT_LIMIT:
        exact = psi_exact(x, basis)
    ht = psi_ht(state)
    dk = psi_dickman(x, y)
    return {
        "x": float(x),
        "y": float(y),
        "psi_exact": exact,
        "psi_saddle": ht,
        "psi_dickman": dk,
        "saddle_over_exact": (ht / exact) if exact else None,
        "dickman_over_exact": (dk / exact) if exact else None,
    }


def _rho_record(cfg: RunConfig) -> dict:
    rec: dict[str, Any] = {}
    if cfg.u is not None:
        rec["u"] = cfg.u
        rec["dickman_rho"] = dickman_rho(cfg.u)
    if cfg.x is not None and cfg.y is not None:
        state = solve_alpha(cfg.x, primes_up_to(cfg.y))
        rec.update(
            {
                "x": state.x,
                "y": state.y,
                "u": state.u,
                "dickman_rho": dickman_rho(state.u),
                "varrho": state.varrho,
            }
        )
    if not rec:
        raise DomainError("rho needs either --u or both --x and --y")
    return rec


def _beta_record(cfg: RunConfig) -> dict:
    state = solve_alpha(cfg.x, primes_up_to(cfg.y))
    bs = solve_beta(state, cfg.v, residual_factor=cfg.solver_tol)
    return {
        "x": state.x,
        "y": state.y,
        "v": bs.v,
        "gamma": bs.gamma,
        "alpha": state.alpha,
        "beta1": bs.beta1,
        "beta2": bs.beta2,
        "e_value": bs.e_value,
        "r_value": bs.r_value,
        "grad_norm": bs.grad_norm,
        "hess20": bs.hess_entries[0],
        "hess11": bs.hess_entries[1],
        "hess02": bs.hess_entries[2],
    }


def _bj_record(cfg: RunConfig) -> dict:
    state = solve_alpha(cfg.x, primes_up_to(cfg.y))
    coeffs = taylor_bj(state, cfg.k)
    return {
        "x": state.x,
        "y": state.y,
        "k": coeffs.k,
        "b": list(coeffs.b),
        "stencil_h": coeffs.stencil_h,
        "error_estimates": list(coeffs.error_estimates),
        "odd_leakage": coeffs.odd_leakage,
    }


def _verify_record(cfg: RunConfig) -> tuple[dict, bool]:
    # quad_tol tightens (never loosens) the identity-check quadratures
    reports = []
    names = [cfg.suite] if cfg.suite != "all" else ["lemma8", "lfunc", "xicoeffs", "fejer", "perron"]
    for name in names:
        if name == "lemma8":
            reports.append(lemma8_suite(cfg.samples, cfg.seed).to_dict())
        elif name == "lfunc":
            reports.append(lfunc_suite(cfg.samples, cfg.seed).to_dict())
        elif name == "xicoeffs":
            table = extract_xi_coeffs(8)
            d = table.d
            sym = float(abs(d - d.T).max())
            neg = float(d[1:, :].min(initial=0.0))
            ok = (
                abs(d[1, 0] - 0.5) <= 1e-8
                and abs(d[0, 1] - 0.5) <= 1e-8
                and d.min() >= -1e-8
                and sym <= 1e-10
            )
            reports.append(
                {
                    "suite": "xicoeffs",
                    "passed": bool(ok),
                    "d10": d[1, 0],
                    "d01": d[0, 1],
                    "min_entry": float(d.min()),
                    "symmetry_defect": sym,
                    "extraction_error": table.extraction_error,
                    "most_negative_tail": neg,
                }
            )
        elif name == "fejer":
            worst = 0.0
            for z in (2.0, 0.5, 1.01):
                for T in (50.0, 200.0):
                    integral, closed = fejer_identity(z, T, tol=min(cfg.quad_tol, 1e-12))
                    worst = max(worst, abs(integral - closed))
            reports.append({"suite": "fejer", "passed": worst <= 1e-10, "worst_defect": worst})
        elif name == "perron":
            ok = True
            worst = 0.0
            for z in (2.0, 0.5, 1.01):
                for T in (50.0, 200.0):
                    val = perron_indicator(z, 1.0, T, tol=min(cfg.quad_tol, 1e-12))
                    target = 1.0 if z >= 1.0 else 0.0
                    bound = z / (T * abs(math.log(z)))
                    excess = abs(val - target) - bound
                    worst = max(worst, excess)
                    ok = ok and excess <= 0.0
            reports.append({"suite": "perron", "passed": ok, "worst_excess": worst})
        else:
            raise DomainError(f"unknown suite {name!r}")
    passed = all(r["passed"] for r in reports)
    return {"suites": reports, "passed": passed}, passed


def run(cfg: RunConfig) -> int:
    """Execute one command; raises frialab errors on failure."""
    if cfg.command == "alpha":
        _write(emit_json(_alpha_record(cfg.x, cfg.y), cfg), cfg.out)
    elif cfg.command == "psi":
        _write(emit_json(_psi_record(cfg.x, cfg.y), cfg), cfg.out)
    elif cfg.command == "rho":
        _write(emit_json(_rho_record(cfg), cfg), cfg.out)
    elif cfg.command == "beta":
        _write(emit_json(_beta_record(cfg), cfg), cfg.out)
    elif cfg.command == "bj":
        _write(emit_json(_bj_record(cfg), cfg), cfg.out)
    elif cfg.command == "dlaw":
        rows = compare(cfg.x, cfg.y, cfg.v_grid, cfg.k, v_m=cfg.v_m)
        _emit_rows(rows, cfg)
        if cfg.plot:
            from .report import plot_comparison

            plot_comparison(rows, _figure_path(cfg.out, "comparison"))
    elif cfg.command == "sweep":
        rows = []
        for x in cfg.x_grid:
            for y in cfg.y_grid:
                rows.extend(compare(x, y, cfg.v_grid, cfg.k, v_m=cfg.v_m))
        _emit_rows(rows, cfg)
        if cfg.plot:
            from .report import plot_sweep

            plot_sweep(rows, _figure_path(cfg.out, "sweep"))
    elif cfg.command == "verify":
        record, passed = _verify_record(cfg)
        _write(emit_json(record, cfg), cfg.out)
        if not passed:
            raise NumericError(f"verification suite {cfg.suite!r} reported violations")
    else:
        raise DomainError(f"unknown command {cfg.command!r}")
    return 0


def _figure_path(out: str | None, stem: str) -> str:
    if out is None:
        return f"frialab_{stem}.png"
    base, _ = os.path.splitext(out)
    return f"{base}_{stem}.png"


def _emit_rows(rows, cfg: RunConfig) -> None:
    dicts = [r.as_dict() for r in rows]
    if cfg.fmt == "csv":
        _write(emit_csv(dicts, _CSV_FIELDS, cfg), cfg.out)
    else:
        _write(emit_json({"rows": dicts}, cfg), cfg.out)


def _error_payload(kind: str, exc: Exception) -> str:
    return json.dumps({"error": kind, "message": str(exc)}) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return run(cfg)
    except (DomainError, CapacityError) as exc:
        sys.stderr.write(_error_payload(type(exc).__name__, exc))
        return 2
    except (SolverError, NumericError) as exc:
        sys.stderr.write(_error_payload(type(exc).__name__, exc))
        return 3
    except FrialabError as exc:
        sys.stderr.write(_error_payload(type(exc).__name__, exc))
        return 3
    except OSError as exc:
        sys.stderr.write(_error_payload("IOError", exc))
        return 4


if __name__ == "__main__":
    sys.exit(main())
