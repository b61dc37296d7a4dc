"""Command-line interface.

Four subcommands:

``report``    print the regime/decay-time summary for a parameter set.
``series``    write the coherence/entanglement time series as CSV.
``profile``   write branch/total position densities at one time as CSV.
``validate``  run the numerical cross-check suite and report pass/fail.

Exit codes: 0 success, 1 validation failure, 2 invalid input, 3 I/O
failure. CSV output uses '.' decimals, ',' separators, LF line endings and
13 significant digits, so identical invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import math
import re
import sys

import numpy as np

from . import analytic, experiment, oracle
from .params import ExperimentParams

_FMT = "{:.12e}"  # 13 significant digits

_PARAM_KEYS = ("mass", "gradient", "moment", "sigma", "alpha", "beta")


def _complex_pair(text: str) -> complex:
    try:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    except Exception as exc:
        raise argparse.ArgumentTypeError(
            f"expected 're,im' pair, got {text!r}"
        ) from exc


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("experiment parameters")
    group.add_argument("--mass", type=float, default=1.8e-25, help="particle mass, kg")
    group.add_argument("--gradient", type=float, default=1e3,
                       help="field gradient dB/dz, T/m")
    group.add_argument("--moment", type=float, default=9.2740100783e-24,
                       help="magnetic moment, J/T (default: Bohr magneton)")
    group.add_argument("--sigma", type=float, default=1e-5,
                       help="initial packet width, m")
    group.add_argument("--alpha", type=_complex_pair,
                       default=complex(0.7071067811865476, 0.0), metavar="RE,IM",
                       help="spin-up amplitude (normalized on load)")
    group.add_argument("--beta", type=_complex_pair,
                       default=complex(0.7071067811865476, 0.0), metavar="RE,IM",
                       help="spin-down amplitude (normalized on load)")
    parser.add_argument("--config", metavar="FILE",
                        help="key=value defaults file; flags override it")


def _add_quadrature_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("quadrature overrides")
    group.add_argument("--abs-tol", type=float, default=None,
                       help="absolute tolerance for every quadrature check")
    group.add_argument("--max-subdivisions", type=int, default=2**20)
    group.add_argument("--window-sigmas", type=float, default=12.0)
    group.add_argument("--min-points-per-oscillation", type=float, default=20.0)


# argparse's stock matcher rejects negative numbers in scientific notation
# ("--z-min -5e-5"); widen it.
_NEGATIVE_NUMBER = re.compile(r"^-\d+\.?\d*([eE][-+]?\d+)?$|^-\.\d+([eE][-+]?\d+)?$")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgcoherence",
        description="Spin-position entanglement dynamics of a Stern-Gerlach beam",
    )
    parser._negative_number_matcher = _NEGATIVE_NUMBER
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_report = sub.add_parser("report", help="regime and decay-time summary")
    _add_param_flags(p_report)
    p_report.add_argument("--entropy-convention", choices=("paper", "purity"),
                          default="paper")

    p_series = sub.add_parser("series", help="coherence/entanglement time series CSV")
    _add_param_flags(p_series)
    p_series.add_argument("--t-min", type=float, default=0.0)
    p_series.add_argument("--t-max", type=float, default=None,
                          help="default: five decay times")
    p_series.add_argument("--samples", type=int, default=experiment.DEFAULT_SERIES_POINTS)
    p_series.add_argument("--spacing", choices=("linear", "log"), default="linear")
    p_series.add_argument("-o", "--output", default="series.csv")

    p_profile = sub.add_parser("profile", help="position density profile CSV")
    _add_param_flags(p_profile)
    p_profile.add_argument("--at-time", type=float, required=True, help="sample time, s")
    p_profile.add_argument("--z-min", type=float, default=None)
    p_profile.add_argument("--z-max", type=float, default=None)
    p_profile.add_argument("--samples", type=int, default=experiment.DEFAULT_PROFILE_POINTS)
    p_profile.add_argument("-o", "--output", default="profile.csv")

    p_val = sub.add_parser("validate", help="run the numerical cross-check suite")
    _add_param_flags(p_val)
    _add_quadrature_flags(p_val)

    for sub_parser in (p_report, p_series, p_profile, p_val):
        sub_parser._negative_number_matcher = _NEGATIVE_NUMBER
    return parser


def _apply_config_file(argv: list[str]) -> list[str]:
    """Splice key=value lines of a --config file into the argument list.

    The file entries are inserted right after the subcommand, so flags
    given on the command line come later and win (argparse keeps the last
    occurrence). Keys use the long flag names, with '-' or '_'.
    """
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    injected: list[str] = []
    with open(known.config, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"malformed config line {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            flag = "--" + key.replace("_", "-")
            injected.extend([flag, value])
    if not argv:
        return injected
    return [argv[0], *injected, *argv[1:]]


def _params_from_args(args: argparse.Namespace) -> ExperimentParams:
    return ExperimentParams(
        mass=args.mass,
        field_gradient=args.gradient,
        sigma0=args.sigma,
        magnetic_moment=args.moment,
        alpha=args.alpha,
        beta=args.beta,
    )


def _write_csv(path: str, header: str, columns: list[np.ndarray]) -> None:
    rows = zip(*columns)
    with open(path, "w", encoding="ascii", newline="") as handle:
        handle.write(header + "\n")
        for row in rows:
            handle.write(",".join(_FMT.format(v) for v in row) + "\n")


def _run_report(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    report = analytic.regime_report(params)
    entropy_at_tau = float(
        analytic.linear_entropy(params, report.tau, convention=args.entropy_convention)
    )
    lines = [
        ("chi", f"{report.chi:.6e}", "dimensionless"),
        ("regime", report.regime.value, ""),
        ("tau", f"{report.tau:.9e}", "s"),
        ("tau1", f"{report.tau1:.9e}", "s"),
        ("tau2", f"{report.tau2:.9e}", "s"),
        ("sep_position_at_tau", f"{report.sep_position_at_tau:.6e}", "dimensionless"),
        ("sep_momentum_at_tau", f"{report.sep_momentum_at_tau:.6e}", "dimensionless"),
        (f"linear_entropy_at_tau[{args.entropy_convention}]", f"{entropy_at_tau:.6e}", ""),
    ]
    for name, value, unit in lines:
        suffix = f" {unit}" if unit else ""
        print(f"{name:<34s} = {value}{suffix}")
    return 0


def _run_series(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    t_max = args.t_max
    if t_max is None:
        t_max = 5.0 * analytic.decoherence_time(params)
    series = experiment.coherence_series(params, args.t_min, t_max,
                                         args.samples, args.spacing)
    _write_csv(
        args.output,
        "t_s,coherence,entropy_paper,entropy_purity,sep_position,sep_momentum",
        [series.times, series.coherence, series.entropy_paper,
         series.entropy_purity, series.sep_position, series.sep_momentum],
    )
    return 0


def _run_profile(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    if args.at_time < 0.0:
        raise ValueError("--at-time must be >= 0")
    z_min, z_max = args.z_min, args.z_max
    if z_min is None or z_max is None:
        lo, hi = experiment.default_profile_window(params, args.at_time)
        z_min = lo if z_min is None else z_min
        z_max = hi if z_max is None else z_max
    profile = experiment.density_profile(params, args.at_time, z_min, z_max, args.samples)
    _write_csv(
        args.output,
        "z_m,density_plus,density_minus,density_total",
        [profile.z, profile.density_plus, profile.density_minus, profile.density_total],
    )
    return 0


def _check(name: str, err: float, bound: float, lines: list[str]) -> bool:
    ok = err <= bound
    lines.append(f"{name:<36s} err={err:.3e} bound={bound:.1e} {'PASS' if ok else 'FAIL'}")
    return ok


def _check_failed(name: str, reason: str, lines: list[str]) -> bool:
    lines.append(f"{name:<36s} {reason} FAIL")
    return False


def _run_validate(args: argparse.Namespace) -> int:
    params = _params_from_args(args)

    def spec(default_tol: float) -> oracle.QuadratureSpec:
        return oracle.QuadratureSpec(
            abs_tol=args.abs_tol if args.abs_tol is not None else default_tol,
            max_subdivisions=args.max_subdivisions,
            window_halfwidth_sigmas=args.window_sigmas,
            min_points_per_oscillation=args.min_points_per_oscillation,
        )

    lines: list[str] = []
    all_ok = True

    # Closed-form coherence against the overlap integral.
    try:
        times = np.geomspace(1e-12, 1e-4, 50)
        max_err = 0.0
        max_imag = 0.0
        for t in times:
            value = oracle.overlap_quadrature(params, float(t), spec(1e-9))
            max_err = max(max_err, abs(float(analytic.coherence(params, float(t))) - abs(value)))
            max_imag = max(max_imag, abs(value.imag))
        all_ok &= _check("overlap_vs_closed_form", max_err, 1e-6, lines)
        all_ok &= _check("overlap_imaginary_part", max_imag, 1e-8, lines)
    except oracle.QuadratureConvergenceError as exc:
        all_ok = _check_failed("overlap_vs_closed_form", str(exc), lines)

    # Overlap magnitude at the closed-form decay time.
    try:
        tau = analytic.decoherence_time(params)
        value = oracle.overlap_quadrature(params, tau, spec(1e-9))
        all_ok &= _check("overlap_at_tau_vs_1_over_e",
                         abs(abs(value) - 1.0 / math.e), 1e-6, lines)
    except oracle.QuadratureConvergenceError as exc:
        all_ok = _check_failed("overlap_at_tau_vs_1_over_e", str(exc), lines)

    # Closed-form decay time against bisection over a parameter sweep.
    max_rel = 0.0
    for fm in (0.01, 1.0, 100.0):
        for fg in (0.01, 1.0, 100.0):
            for fs in (0.01, 1.0, 100.0):
                swept = ExperimentParams(
                    mass=params.mass * fm,
                    field_gradient=params.field_gradient * fg,
                    sigma0=params.sigma0 * fs,
                    magnetic_moment=params.magnetic_moment,
                )
                closed = analytic.decoherence_time(swept)
                rooted = oracle.decoherence_time_bisection(swept, tol_rel=1e-10)
                max_rel = max(max_rel, abs(closed - rooted) / rooted)
    all_ok &= _check("tau_closed_form_vs_bisection", max_rel, 1e-6, lines)

    # Kernel propagation against the evolved packets, three times.
    for t in (2e-9, 1e-6, 1e-5):
        name_d = f"kernel_density_match_t={t:g}"
        name_p = f"kernel_phase_constancy_t={t:g}"
        try:
            k = analytic.kinematics(params, t)
            center = k.delta_z_bar
            span = k.sigma_t * math.sqrt(2.0 * math.log(1e3))
            z_grid = np.linspace(center - span, center + span, 21)
            samples = oracle.propagate_via_kernel(params, +1, z_grid, t, spec(1e-5))
            values = np.array([s.value for s in samples])
            density = np.asarray(analytic.packet_density(params, +1, z_grid, t))
            rel = np.abs(np.abs(values) ** 2 - density) / density
            all_ok &= _check(name_d, float(rel.max()), 1e-4, lines)
            closed = np.asarray(analytic.packet_amplitude(params, +1, z_grid, t))
            phases = values / closed
            phases /= np.abs(phases)
            mean_phase = phases.mean()
            mean_phase /= abs(mean_phase)
            spread = float(np.abs(np.angle(phases / mean_phase)).max())
            all_ok &= _check(name_p, spread, 1e-3, lines)
        except oracle.QuadratureConvergenceError as exc:
            all_ok = _check_failed(name_d, str(exc), lines)

    # Normalization of the evolved packets and of the spin-traced density.
    try:
        max_norm_err = 0.0
        for t in (0.0, 2e-9, 1e-6, 1e-5, 1e-4):
            norm, _ = oracle.packet_norm_quadrature(params, +1, t, spec(1e-9))
            max_norm_err = max(max_norm_err, abs(norm - 1.0))
            total, _ = oracle.total_density_norm_quadrature(params, t, spec(1e-9))
            max_norm_err = max(max_norm_err, abs(total - 1.0))
        all_ok &= _check("norm_unity", max_norm_err, 1e-6, lines)
    except oracle.QuadratureConvergenceError as exc:
        all_ok = _check_failed("norm_unity", str(exc), lines)

    for line in lines:
        print(line)
    print("validate:", "all checks passed" if all_ok else "some checks FAILED")
    return 0 if all_ok else 1


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _apply_config_file(argv)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        if args.subcommand == "report":
            return _run_report(args)
        if args.subcommand == "series":
            return _run_series(args)
        if args.subcommand == "profile":
            return _run_profile(args)
        if args.subcommand == "validate":
            return _run_validate(args)
        raise ValueError(f"unknown subcommand {args.subcommand!r}")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
