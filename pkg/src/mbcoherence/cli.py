"""Command-line front end.

Exit codes: 0 success, 2 domain/regime error, 3 size guard,
4 discretization failure, 5 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import engine, photon, thermal
from .errors import CoherenceError, DomainError, SizeLimitError
from .external import MAX_EXTERNAL_N
from .states import DensityMatrix, Spectrum, product_state

EXIT_IO = 5
SIG_DIGITS = 12


# -- parsing helpers ----------------------------------------------------------

def _numbers(func):
    # malformed numbers surface as argument errors (exit 2), not tracebacks
    def wrapper(text: str) -> list:
        try:
            return func(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"cannot parse {text!r}: {exc}") from None
    wrapper.__doc__ = func.__doc__
    wrapper.__name__ = func.__name__
    return wrapper


@_numbers
def parse_int_list(text: str) -> list:
    """``"2,5,10"``, ``"2:100"`` (inclusive) or ``"2:100:2"``, mixed by commas."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" in item:
            parts = [int(p) for p in item.split(":")]
            if len(parts) not in (2, 3):
                raise argparse.ArgumentTypeError(f"bad integer range {item!r}")
            step = parts[2] if len(parts) == 3 else 1
            out.extend(range(parts[0], parts[1] + 1, step))
        else:
            out.append(int(item))
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


@_numbers
def parse_float_list(text: str) -> list:
    """``"0.1,0.5"`` or a log range ``"lo:hi:count"``, mixed by commas."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" in item:
            parts = item.split(":")
            if len(parts) != 3:
                raise argparse.ArgumentTypeError(f"log range must be lo:hi:count, got {item!r}")
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
            if not (0 < lo <= hi) or count < 1:
                raise argparse.ArgumentTypeError(f"log range needs 0 < lo <= hi and count >= 1: {item!r}")
            out.extend(np.logspace(math.log10(lo), math.log10(hi), count).tolist())
        else:
            out.append(float(item))
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    return f"{x:.{SIG_DIGITS}g}"


def _json_value(x):
    if x is None or isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if not math.isfinite(x):
        return fmt(x)
    return float(fmt(x))


class Table:
    """Column names plus rows, rendered deterministically as CSV or JSON."""

    def __init__(self, name: str, columns: list, rows: list):
        self.name = name
        self.columns = list(columns)
        self.rows = rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        records = [{c: _json_value(v) for c, v in zip(self.columns, row)} for row in self.rows]
        return json.dumps({"name": self.name, "columns": self.columns, "rows": records}, indent=1) + "\n"

    def render(self, fmt_name: str) -> str:
        return self.to_json() if fmt_name == "json" else self.to_csv()


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def emit(table: Table, args) -> None:
    text = table.render(args.format)
    if args.output:
        write_text(Path(args.output), text)
    else:
        sys.stdout.write(text)


def _map(func, items, jobs: int) -> list:
    # executor.map keeps input order regardless of completion order
    if jobs <= 1 or len(items) <= 1:
        return [func(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))


def _result_cells(res: engine.CoherenceResult) -> list:
    return [res.value, res.log10_value, res.method, res.underflow]


RESULT_COLUMNS = ["value", "log10_value", "method", "underflow"]


# -- spectrum input -------------------------------------------------------------

def _spectrum_from_args(args) -> Spectrum:
    if args.eigenvalues and args.spectrum_file:
        raise DomainError("give either --eigenvalues or --spectrum-file, not both")
    if args.eigenvalues:
        return Spectrum(parse_float_list(args.eigenvalues))
    if args.spectrum_file:
        return Spectrum.from_file(args.spectrum_file)
    raise DomainError("a spectrum is required: use --eigenvalues a,b,c or --spectrum-file PATH")


def _single(spec: Spectrum, n: int, method: str, k=None) -> engine.CoherenceResult:
    if k is not None:
        res = engine.coherence_reduced(spec, n, k)
        if method == "spectral":
            return res
        if method == "exact":
            ex = engine.coherence_exact_product(spec, k)
            return engine.CoherenceResult(ex.value, ex.method, n, k, ex.log10_value)
        raise DomainError("--k is supported with --method spectral or exact only")
    if method == "spectral":
        return engine.coherence_spectral(spec, n)
    if method == "exact":
        return engine.coherence_exact_product(spec, n)
    if method == "oracle":
        if spec.m ** n > 4096 or n > MAX_EXTERNAL_N:
            raise SizeLimitError(f"oracle needs N <= {MAX_EXTERNAL_N} and m^N <= 4096")
        return engine.coherence_oracle(product_state(spec.to_density_matrix(), n), n)
    if method == "asymptote":
        return engine.coherence_closed_form(spec, n)
    if method == "faint":
        eps = 1.0 - spec.lam_max
        value = engine.coherence_faint(eps, n)
        return engine.CoherenceResult(value, "faint", n, n, math.log10(value) if value > 0 else -math.inf)
    raise DomainError(f"unknown method {method!r}")


def _print_result(res: engine.CoherenceResult, fmt_name: str, extra=None) -> None:
    fields = {"value": res.value, "log10_value": res.log10_value, "method": res.method,
              "N": res.n, "k": res.k, "underflow": res.underflow}
    fields.update(extra or {})
    if fmt_name == "json":
        sys.stdout.write(json.dumps({k: _json_value(v) for k, v in fields.items()}) + "\n")
    elif fmt_name == "csv":
        sys.stdout.write(Table("result", list(fields), [list(fields.values())]).to_csv())
    else:
        for key, val in fields.items():
            sys.stdout.write(f"{key} {val if isinstance(val, str) else fmt(val)}\n")


# -- commands ---------------------------------------------------------------------

def cmd_coherence(args) -> int:
    spec = _spectrum_from_args(args)
    res = _single(spec, args.n, args.method, args.k)
    _print_result(res, args.format)
    return 0


def cmd_asymptote(args) -> int:
    spec = _spectrum_from_args(args)
    ln = engine.log_coherence_asymptote(spec, args.n)
    res = engine.CoherenceResult(math.exp(ln) if ln > -690 else 0.0, "asymptote", args.n, args.n,
                                 ln / math.log(10.0))
    _print_result(res, args.format, {"degeneracy": spec.degeneracy})
    return 0


def _thermal_row(item):
    t, ns, m, method = item
    spec = thermal.thermal_spectrum(thermal.ThermalConfig(t, m))
    rows = []
    if method == "spectral":
        for n, res in zip(ns, engine.coherence_spectral_series(spec, ns)):
            rows.append([t, n] + _result_cells(res))
    elif method == "exact":
        for n in ns:
            rows.append([t, n] + _result_cells(engine.coherence_exact_product(spec, n)))
    elif method == "asymptote":
        for n in ns:
            rows.append([t, n] + _result_cells(engine.coherence_closed_form(spec, n)))
    elif method == "faint":
        for n in ns:
            v = thermal.low_T_approx(t, n)
            rows.append([t, n, v, math.log10(v) if v > 0 else -math.inf, "faint", False])
    else:
        raise DomainError(f"unknown method {method!r}")
    return rows


def cmd_thermal(args) -> int:
    ns = parse_int_list(args.n)
    if args.target is not None:
        rows = []
        for w in parse_float_list(args.target):
            for n in ns:
                rows.append([w, n, thermal.admissible_temperature(w, n),
                             thermal.admissible_temperature_simple(w, n)])
        emit(Table("thermal-admissible", ["W_target", "N", "kbT_over_dE", "kbT_over_dE_simple"], rows), args)
        return 0
    if args.kbt is None:
        raise DomainError("thermal needs --kbt (or --target for the admissible temperature)")
    temps = parse_float_list(args.kbt)
    items = [(t, ns, args.levels, args.method) for t in temps]
    rows = [r for chunk in _map(_thermal_row, items, args.jobs) for r in chunk]
    emit(Table("thermal", ["kbT_over_dE", "N"] + RESULT_COLUMNS, rows), args)
    return 0


def _photon_cfg(args, sd: float) -> photon.PhotonConfig:
    density = photon.TabulatedDensity.from_file(args.density_file) if args.density_file else None
    return photon.PhotonConfig(sd, quadrature_points=args.quad_points, density=density)


def _photon_row(item):
    sd, ns, method, quad, density = item
    rows = []
    if method == "faint":
        for n in ns:
            v = photon.faint_jitter_approx(sd, n)
            rows.append([sd, n, v, math.log10(v) if v > 0 else -math.inf, "faint", False])
        return rows
    cfg = photon.PhotonConfig(sd, quadrature_points=quad, density=density)
    spec = photon.photon_spectrum(cfg)
    if method == "spectral":
        results = engine.coherence_spectral_series(spec, ns)
    elif method == "exact":
        results = [engine.coherence_exact_product(spec, n) for n in ns]
    elif method == "asymptote":
        results = [engine.coherence_closed_form(spec, n) for n in ns]
    else:
        raise DomainError(f"unknown method {method!r}")
    return [[sd, n] + _result_cells(res) for n, res in zip(ns, results)]


def cmd_photon(args) -> int:
    ns = parse_int_list(args.n)
    if args.target is not None:
        rows = []
        for w in parse_float_list(args.target):
            for n in ns:
                rows.append([w, n, photon.admissible_jitter(w, n), photon.admissible_jitter_simple(w, n)])
        emit(Table("photon-admissible", ["W_target", "N", "sigma_delta", "sigma_delta_simple"], rows), args)
        return 0
    if args.sigma_delta is None:
        raise DomainError("photon needs --sigma-delta (or --target for the admissible jitter)")
    density = photon.TabulatedDensity.from_file(args.density_file) if args.density_file else None
    items = [(sd, ns, args.method, args.quad_points, density) for sd in parse_float_list(args.sigma_delta)]
    rows = [r for chunk in _map(_photon_row, items, args.jobs) for r in chunk]
    emit(Table("photon", ["sigma_delta", "N"] + RESULT_COLUMNS, rows), args)
    return 0


# -- figure datasets --------------------------------------------------------------

FIG1_N = [2, 3, 5, 10, 20, 50, 100]
FIG1D_N = [2, 10, 50, 100]
FIG1_TARGETS = [0.5, 0.9, 0.99]
FIG1E_TEMPS = [0.3, 0.5, 1.0, 2.0]
FIG2B_N = list(range(2, 11)) + [100]
FIG2_FAINT_N = (2, 10, 100)
FIG2_TARGETS = [0.5, 0.9, 0.99]
FIG2D_SIGMAS = [0.1, 0.2, 0.5, 1.0]


def _fig1b_rows(item):
    t, ns, m = item
    spec = thermal.thermal_spectrum(thermal.ThermalConfig(t, m))
    return [[t, n, res.value, engine.coherence_maximally_mixed(m, n)]
            for n, res in zip(ns, engine.coherence_spectral_series(spec, ns))]


def _fig1d_rows(item):
    t, ns, m = item
    spec = thermal.thermal_spectrum(thermal.ThermalConfig(t, m))
    in_regime = t < 1.0 / thermal.LN2
    return [[t, n, res.value, thermal.low_T_approx(t, n) if in_regime else None]
            for n, res in zip(ns, engine.coherence_spectral_series(spec, ns))]


def _fig1e_rows(item):
    t, ns, m = item
    spec = thermal.thermal_spectrum(thermal.ThermalConfig(t, m))
    rows = []
    for n, res in zip(ns, engine.coherence_spectral_series(spec, ns)):
        ln_as = engine.log_coherence_asymptote(spec, n)
        log10_as = ln_as / math.log(10.0)
        ratio = 10.0 ** (res.log10_value - log10_as)
        asym = math.exp(ln_as)
        rows.append([t, n, res.value, res.log10_value, asym if asym >= engine.UNDERFLOW else 0.0,
                     log10_as, ratio, res.underflow])
    return rows


def fig_thermal_tables(m=4, temps=None, ns=None, zoom=None, ns_d=None, targets=None, ns_c=None,
                       temps_e=None, ns_e=None, jobs=1) -> list:
    temps = temps if temps is not None else thermal.log_temperature_grid(1e-2, 1e2, 81).tolist()
    ns_d = ns_d or ns or FIG1D_N
    ns = ns or FIG1_N
    zoom = zoom if zoom is not None else [round(0.02 * i, 10) for i in range(1, 51)]
    targets = targets or FIG1_TARGETS
    ns_c = ns_c or list(range(2, 101))
    temps_e = temps_e or FIG1E_TEMPS
    ns_e = ns_e or list(range(2, 101))

    b = [r for chunk in _map(_fig1b_rows, [(t, ns, m) for t in temps], jobs) for r in chunk]
    c = [[w, n, thermal.admissible_temperature(w, n), thermal.admissible_temperature_simple(w, n)]
         for w in targets for n in ns_c]
    d = [r for chunk in _map(_fig1d_rows, [(t, ns_d, m) for t in zoom], jobs)
         for r in chunk]
    e = [r for chunk in _map(_fig1e_rows, [(t, ns_e, m) for t in temps_e], jobs) for r in chunk]
    return [
        Table("fig1b", ["kbT_over_dE", "N", "W_C", "W_C_infT"], b),
        Table("fig1c", ["W_target", "N", "kbT_over_dE", "kbT_over_dE_simple"], c),
        Table("fig1d", ["kbT_over_dE", "N", "W_C", "W_C_lowT"], d),
        Table("fig1e", ["kbT_over_dE", "N", "W_C", "log10_W_C", "W_C_asymptote",
                        "log10_W_C_asymptote", "ratio", "underflow"], e),
    ]


def _fig2b_rows(item):
    sd, ns, quad = item
    spec = photon.photon_spectrum(photon.PhotonConfig(sd, quadrature_points=quad))
    rows = []
    for n, res in zip(ns, engine.coherence_spectral_series(spec, ns)):
        faint = None
        if n in FIG2_FAINT_N and sd < photon.FAINT_LIMIT:
            faint = photon.faint_jitter_approx(sd, n)
        rows.append([sd, n, res.value, faint])
    return rows


def _fig2d_rows(item):
    sd, ns, quad = item
    spec = photon.photon_spectrum(photon.PhotonConfig(sd, quadrature_points=quad))
    return [[sd, n, res.value, res.log10_value, res.underflow]
            for n, res in zip(ns, engine.coherence_spectral_series(spec, ns))]


def fig_photon_tables(sigmas=None, ns=None, targets=None, ns_c=None, sigmas_d=None, ns_d=None,
                      quad=200, jobs=1) -> list:
    sigmas = sigmas if sigmas is not None else [0.0] + np.logspace(-2, 1, 61).tolist()
    ns = ns or FIG2B_N
    targets = targets or FIG2_TARGETS
    ns_c = ns_c or list(range(2, 1001))
    sigmas_d = sigmas_d or FIG2D_SIGMAS
    ns_d = ns_d or list(range(2, 101))

    b = [r for chunk in _map(_fig2b_rows, [(s, ns, quad) for s in sigmas], jobs) for r in chunk]
    c = [[w, n, photon.admissible_jitter(w, n), photon.admissible_jitter_simple(w, n)]
         for w in targets for n in ns_c]
    d = [r for chunk in _map(_fig2d_rows, [(s, ns_d, quad) for s in sigmas_d], jobs) for r in chunk]
    return [
        Table("fig2b", ["sigma_delta", "N", "W_C", "W_C_faint"], b),
        Table("fig2c", ["W_target", "N", "sigma_delta", "sigma_delta_simple"], c),
        Table("fig2d", ["sigma_delta", "N", "W_C", "log10_W_C", "underflow"], d),
    ]


def _write_tables(tables, outdir: Path, fmt_name: str) -> None:
    for table in tables:
        path = outdir / f"{table.name}.{fmt_name}"
        write_text(path, table.render(fmt_name))
        sys.stdout.write(f"wrote {path} ({len(table.rows)} rows)\n")


def cmd_fig_thermal(args) -> int:
    tables = fig_thermal_tables(
        m=args.levels,
        temps=parse_float_list(args.kbt) if args.kbt else None,
        ns=parse_int_list(args.n) if args.n else None,
        targets=parse_float_list(args.target) if args.target else None,
        jobs=args.jobs,
    )
    _write_tables(tables, Path(args.output or "."), args.format)
    return 0


def cmd_fig_photon(args) -> int:
    tables = fig_photon_tables(
        sigmas=parse_float_list(args.sigma_delta) if args.sigma_delta else None,
        ns=parse_int_list(args.n) if args.n else None,
        targets=parse_float_list(args.target) if args.target else None,
        quad=args.quad_points,
        jobs=args.jobs,
    )
    _write_tables(tables, Path(args.output or "."), args.format)
    return 0


# -- oracle check -----------------------------------------------------------------

ORACLE_TOL = 1e-10


def run_oracle_check(n_max: int, m_max: int, trials: int, seed: int):
    """Compare oracle and spectral routes on random diagonal product states.

    Returns ``(max_deviation, worst_case)`` where ``worst_case`` is
    ``(spectrum values, N)`` or None when ``trials == 0``.
    """
    if n_max > MAX_EXTERNAL_N:
        raise SizeLimitError(f"oracle check is limited to --n-max <= {MAX_EXTERNAL_N} (got {n_max})")
    if m_max > 3:
        raise SizeLimitError(f"oracle check is limited to --m-max <= 3 (got {m_max})")
    if n_max < 2 or m_max < 1 or trials < 0:
        raise DomainError("need --n-max >= 2, --m-max >= 1 and --trials >= 0")
    rng = np.random.default_rng(seed)
    worst, worst_case = 0.0, None
    for _ in range(trials):
        m = int(rng.integers(1, m_max + 1))
        n = int(rng.integers(2, n_max + 1))
        spec = Spectrum(rng.dirichlet(np.ones(m)))
        rho = product_state(DensityMatrix(np.diag(spec.values)), n)
        dev = abs(engine.coherence_oracle(rho, n).value - engine.coherence_spectral(spec, n).value)
        if worst_case is None or dev > worst:
            worst, worst_case = dev, (spec.values.tolist(), n)
    return worst, worst_case


def cmd_oracle_check(args) -> int:
    worst, case = run_oracle_check(args.n_max, args.m_max, args.trials, args.seed)
    if args.trials == 0:
        sys.stderr.write("warning: --trials 0, nothing was checked\n")
    sys.stdout.write(f"trials {args.trials}\nmax_abs_deviation {fmt(worst)}\n")
    if worst < ORACLE_TOL:
        sys.stdout.write("PASS\n")
        return 0
    spec, n = case
    sys.stdout.write(f"FAIL worst case N={n} eigenvalues={','.join(fmt(x) for x in spec)}\n")
    return 1


# -- argument parser --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mbcoherence",
        description="Many-body coherence of N identical particles with mixed internal states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output_help="output file (default: stdout)"):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", help=output_help)
        p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    def spectrum_args(p):
        p.add_argument("--eigenvalues", help="comma-separated single-particle eigenvalues")
        p.add_argument("--spectrum-file", help="file with one eigenvalue per line")

    p = sub.add_parser("coherence", help="W_C for a single-particle spectrum")
    spectrum_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, help="reduced coherence order (2 <= k <= N)")
    p.add_argument("--method", choices=("spectral", "exact", "oracle", "asymptote", "faint"),
                   default="spectral")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.set_defaults(func=cmd_coherence)

    p = sub.add_parser("asymptote", help="thermodynamic-limit asymptote for a spectrum")
    spectrum_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.set_defaults(func=cmd_asymptote)

    p = sub.add_parser("thermal", help="thermal atoms: W_C vs temperature, or admissible temperature")
    p.add_argument("--kbt", help="k_B T/ΔE values or log range lo:hi:count")
    p.add_argument("--n", default="2,10,100", help="particle numbers, e.g. 2,10 or 2:100")
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--method", choices=("spectral", "exact", "asymptote", "faint"), default="spectral")
    p.add_argument("--target", help="target coherence(s); prints admissible k_B T/ΔE instead")
    common(p)
    p.set_defaults(func=cmd_thermal)

    p = sub.add_parser("photon", help="photon arrival-time jitter: W_C vs σΔ, or admissible jitter")
    p.add_argument("--sigma-delta", help="σΔ values or log range lo:hi:count")
    p.add_argument("--n", default="2,10,100")
    p.add_argument("--quad-points", type=int, default=200)
    p.add_argument("--density-file", help="two-column (t, P(t)) arrival-time density")
    p.add_argument("--method", choices=("spectral", "exact", "asymptote", "faint"), default="spectral")
    p.add_argument("--target", help="target coherence(s); prints admissible σΔ instead")
    common(p)
    p.set_defaults(func=cmd_photon)

    p = sub.add_parser("fig-thermal", help="write the thermal-atom figure datasets")
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--kbt", help="temperature grid for panel (b)")
    p.add_argument("--n", help="particle numbers for panels (b) and (d)")
    p.add_argument("--target", help="target coherences for panel (c)")
    common(p, "output directory (default: current directory)")
    p.set_defaults(func=cmd_fig_thermal)

    p = sub.add_parser("fig-photon", help="write the photon arrival-time figure datasets")
    p.add_argument("--sigma-delta", help="σΔ grid for panel (b)")
    p.add_argument("--n", help="particle numbers for panel (b)")
    p.add_argument("--target", help="target coherences for panel (c)")
    p.add_argument("--quad-points", type=int, default=200)
    common(p, "output directory (default: current directory)")
    p.set_defaults(func=cmd_fig_photon)

    p = sub.add_parser("oracle-check", help="oracle vs spectral equivalence on random states")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CoherenceError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    except argparse.ArgumentTypeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
