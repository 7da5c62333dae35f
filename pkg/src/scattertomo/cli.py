"""Command-line front end: deterministic CSV for every computation and figure.

All numeric output uses 12 significant digits and fixed row order, so
identical flags produce byte-identical CSV. Exit codes: 0 success, 2 usage
error, 3 domain error, 4 optimizer non-convergence.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Optional

import numpy as np

from . import closedform, optimize, qfi, scatter, states

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_CONVERGENCE = 4

MODES = {"t": scatter.DetectionMode.TRANSMISSION,
         "r": scatter.DetectionMode.REFLECTION,
         "both": scatter.DetectionMode.BOTH}
MODE_ORDER = ("t", "r", "both")


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return f"{float(x):.12g}"


def _write(lines: list[str], path: Optional[str]) -> None:
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _header(args: argparse.Namespace, columns: list[str]) -> list[str]:
    skip = {"func", "output"}
    parts = []
    for key in sorted(vars(args)):
        if key in skip:
            continue
        val = getattr(args, key)
        if val is not None:
            parts.append(f"{key}={val}")
    return [f"# scattertomo {' '.join(parts)}",
            f"# columns: {','.join(columns)}"]


def _target_bloch(args: argparse.Namespace) -> states.BlochVector:
    polar_given = any(getattr(args, k, None) is not None for k in ("r", "theta", "phi"))
    if polar_given:
        p = states.PolarCoords(args.r or 0.0, args.theta or 0.0, args.phi or 0.0)
        return states.polar_to_bloch(p)
    return states.BlochVector(args.vx, args.vy, args.vz)


def _require_omega(args: argparse.Namespace) -> float:
    if args.strategy != "direct" and args.omega is None:
        raise UsageError(f"--omega is required for strategy {args.strategy}")
    return args.omega if args.omega is not None else 0.0


def _branches(strategy: str, v: states.BlochVector, omega: float,
              mode: scatter.DetectionMode, theta_a: float):
    if strategy == "direct":
        return scatter.direct_branches(v)
    probe = states.ProbeConfig(theta_a=theta_a, entangled=(strategy == "ea"))
    rho = states.bloch_to_density(v)
    return (scatter.apply_channel(rho, probe, omega, mode),
            scatter.channel_derivatives(probe, omega, mode))


def _closed_matrix(strategy: str, v: states.BlochVector, omega: float,
                   mode: scatter.DetectionMode, theta_a: float,
                   basis: str) -> tuple[Optional[np.ndarray], Optional[tuple[int, int]]]:
    """Closed-form matrix where the paper provides one.

    Returns (matrix, restriction). restriction=(2, 2) flags that only the zz
    entry is given (NEA on-axis target); (None, None) when no closed form
    applies (NEA off-axis or polar NEA).
    """
    vec = v.as_array()
    if strategy == "direct":
        if basis == "cartesian":
            h = np.eye(3) + np.outer(vec, vec) / (1.0 - v.norm**2)
            return h, None
        coeffs = closedform.direct_qfi(v.norm)
        return coeffs.matrix(states.bloch_to_polar(v).theta).h, None
    if strategy == "ea":
        if basis == "cartesian":
            return closedform.ea_cartesian(v, omega, mode).h, None
        coeffs = closedform.ea_polar(v.norm, omega, mode)
        return coeffs.matrix(states.bloch_to_polar(v).theta).h, None
    # NEA: the paper's closed form covers only the zz entry on the z axis
    if basis == "cartesian" and abs(v.vx) < 1e-12 and abs(v.vy) < 1e-12:
        h = np.full((3, 3), np.nan)
        h[2, 2] = closedform.nea_qfi(v.vz, theta_a, omega, mode)
        return h, (2, 2)
    return None, None


def cmd_qfi(args: argparse.Namespace) -> int:
    v = _target_bloch(args)
    omega = _require_omega(args)
    mode = MODES[args.mode]
    state, derivs = _branches(args.strategy, v, omega, mode, args.theta_a)
    h_num = qfi.qfi_numeric(state, derivs, eps=args.eps)
    if args.basis == "polar":
        h_num = qfi.cartesian_to_polar(h_num, states.bloch_to_polar(v))
    closed, restriction = _closed_matrix(
        args.strategy, v, omega, mode, args.theta_a, args.basis)

    axes = qfi.AXES if args.basis == "cartesian" else qfi.POLAR_AXES
    lines = _header(args, ["entry", "numeric", "closed_form"])
    max_diff = None
    for i, row in enumerate(axes):
        for j, col in enumerate(axes):
            num = h_num.h[i, j]
            closed_cell = ""
            if closed is not None and (restriction is None or restriction == (i, j)):
                if not math.isnan(closed[i, j]):
                    closed_cell = _fmt(closed[i, j])
                    diff = abs(num - closed[i, j])
                    max_diff = diff if max_diff is None else max(max_diff, diff)
            lines.append(f"{row}{col},{_fmt(num)},{closed_cell}")
    if max_diff is not None:
        lines.append(f"# max_abs_diff: {_fmt(max_diff)}")
    _write(lines, args.output)
    return EXIT_OK


def _polar_param_jacobian(v: states.BlochVector, param: str) -> qfi.Jacobian:
    """Reparameterization Jacobian whose first parameter is a polar coordinate.

    The first row is the tangent vector dual to the coordinate's cartesian
    gradient g (g/|g|^2), so the single-function bound (B H B^T)^-1_11 equals
    g^T H^-1 g; the remaining rows are an orthonormal completion, which the
    bound does not depend on. Errors where the coordinate is undefined.
    """
    vec = v.as_array()
    r = v.norm
    if r < 1e-12:
        raise ValueError(f"polar coordinate {param!r} undefined at the origin")
    rho = math.hypot(vec[0], vec[1])
    if param == "r":
        grad = vec / r
    elif param == "theta":
        if rho < 1e-12:
            raise ValueError("theta gradient undefined on the z axis")
        grad = np.array([vec[0] * vec[2], vec[1] * vec[2], -rho * rho]) / (r * r * rho)
    else:  # phi
        if rho < 1e-12:
            raise ValueError("phi undefined on the z axis")
        grad = np.array([-vec[1], vec[0], 0.0]) / (rho * rho)
    basis = [grad / np.linalg.norm(grad)]
    for axis in np.eye(3):
        w = axis - sum(b * float(b @ axis) for b in basis)
        norm = np.linalg.norm(w)
        if norm > 1e-9:
            basis.append(w / norm)
        if len(basis) == 3:
            break
    rows = np.vstack([grad / float(grad @ grad), basis[1], basis[2]])
    return qfi.Jacobian(rows)


def cmd_bound(args: argparse.Namespace) -> int:
    v = _target_bloch(args)
    omega = _require_omega(args)
    mode = MODES[args.mode]
    state, derivs = _branches(args.strategy, v, omega, mode, args.theta_a)
    h = qfi.qfi_numeric(state, derivs, eps=args.eps)
    if args.param == "matrix":
        bound = qfi.cr_bound(h, args.m_copies, "matrix").bound
        lines = _header(args, ["row", "x", "y", "z"])
        for i, row in enumerate(qfi.AXES):
            lines.append(",".join([row] + [_fmt(bound[i, j]) for j in range(3)]))
    else:
        if args.param in qfi.POLAR_AXES:
            res = qfi.cr_bound(h, args.m_copies, _polar_param_jacobian(v, args.param))
        else:
            res = qfi.cr_bound(h, args.m_copies, args.param)
        lines = _header(args, ["param", "variance_bound"])
        lines.append(f"{args.param},{_fmt(res.bound)}")
    _write(lines, args.output)
    return EXIT_OK


def _sweep_grid(args: argparse.Namespace) -> np.ndarray:
    defaults = {
        "omega": (0.05, 10.0, True),
        "theta-a": (0.0, math.pi, False),
        "vz": (-0.95, 0.95, False),
        "r": (0.0, 0.99, False),
    }
    lo_d, hi_d, log_d = defaults[args.sweep]
    lo = args.start if args.start is not None else lo_d
    hi = args.stop if args.stop is not None else hi_d
    if not (lo < hi):
        raise UsageError("--from must be below --to")
    if log_d and lo > 0:
        return np.geomspace(lo, hi, args.points)
    return np.linspace(lo, hi, args.points)


def cmd_scan(args: argparse.Namespace) -> int:
    mode = MODES[args.mode]
    grid = _sweep_grid(args)
    swept = args.sweep
    lines: list[str]
    if args.strategy == "ea":
        if swept == "omega":
            r = args.r if args.r is not None else 0.0
            lines = _header(args, ["omega", "c_r", "c_theta"])
            for om in grid:
                coeffs = closedform.ea_polar(r, float(om), mode)
                lines.append(f"{_fmt(om)},{_fmt(coeffs.c_r)},{_fmt(coeffs.c_theta)}")
        elif swept == "r":
            omega = _require_omega(args)
            lines = _header(args, ["r", "c_r", "c_theta"])
            for r in grid:
                coeffs = closedform.ea_polar(float(r), omega, mode)
                lines.append(f"{_fmt(r)},{_fmt(coeffs.c_r)},{_fmt(coeffs.c_theta)}")
        elif swept == "vz":
            omega = _require_omega(args)
            lines = _header(args, ["v_z", "qfi_zz"])
            for vz in grid:
                val = float(optimize.ea_zaxis_qfi(float(vz), omega, mode))
                lines.append(f"{_fmt(vz)},{_fmt(val)}")
        else:
            raise UsageError(f"sweep {swept!r} not supported for strategy ea")
    elif args.strategy == "nea":
        omega = args.omega
        theta_a = args.theta_a
        vz = args.vz
        lines = _header(args, [swept.replace("-", "_"), "qfi_zz"])
        for x in grid:
            om = float(x) if swept == "omega" else omega
            ta = float(x) if swept == "theta-a" else theta_a
            vv = float(x) if swept == "vz" else vz
            if om is None:
                raise UsageError("--omega is required for this scan")
            lines.append(f"{_fmt(x)},{_fmt(closedform.nea_qfi(vv, ta, om, mode))}")
    elif args.strategy == "direct":
        if swept != "r":
            raise UsageError("direct estimation only supports --sweep r")
        lines = _header(args, ["r", "c_r", "c_theta"])
        for r in grid:
            coeffs = closedform.direct_qfi(float(r))
            lines.append(f"{_fmt(r)},{_fmt(coeffs.c_r)},{_fmt(coeffs.c_theta)}")
    else:
        raise UsageError(f"unknown strategy {args.strategy!r}")
    _write(lines, args.output)
    return EXIT_OK


def cmd_optimize(args: argparse.Namespace) -> int:
    mode = MODES[args.mode]
    if args.strategy == "nea":
        if args.vz is None:
            raise UsageError("--vz is required for NEA optimization")
        res = optimize.maximize_nea(args.vz, mode=mode, tol=args.tol)
        if not res.converged:
            raise optimize.ConvergenceError("NEA optimization did not converge")
        lines = _header(args, ["theta_a_star", "omega_star", "value",
                               "iterations", "converged"])
        lines.append(",".join([
            _fmt(res.param("theta_a")), _fmt(res.param("omega")),
            _fmt(res.value), str(res.iterations), str(res.converged).lower()]))
    elif args.strategy == "ea":
        r = args.r if args.r is not None else 0.0
        res = optimize.maximize_1d(
            lambda om: float(closedform.ea_cr(r, om, mode)),
            optimize.DEFAULT_OMEGA_BRACKET, tol=args.tol, name="omega")
        if not res.converged:
            raise optimize.ConvergenceError("EA optimization did not converge")
        lines = _header(args, ["omega_star", "value", "iterations", "converged"])
        lines.append(",".join([
            _fmt(res.param("omega")), _fmt(res.value),
            str(res.iterations), str(res.converged).lower()]))
    else:
        raise UsageError("optimize supports strategies nea and ea")
    _write(lines, args.output)
    return EXIT_OK


def _figure_3(args) -> list[str]:
    both = scatter.DetectionMode.BOTH
    lines = _header(args, ["omega", "rescaled_qfi", "m_var_rescaled"])
    for om in np.geomspace(0.05, 10.0, args.points or 601):
        val = float(closedform.ea_cr(0.0, float(om), both))
        lines.append(f"{_fmt(om)},{_fmt(val)},{_fmt(1.0 / val)}")
    return lines


def _figure_surface(args, mode: scatter.DetectionMode) -> list[str]:
    lines = _header(args, ["r", "omega", "rescaled_c_r"])
    omegas = np.geomspace(0.05, 10.0, args.points or 121)
    for r in np.linspace(0.0, 0.98, 15):
        rescale = 1.0 - r * r
        for om in omegas:
            val = rescale * float(closedform.ea_cr(float(r), float(om), mode))
            lines.append(f"{_fmt(r)},{_fmt(om)},{_fmt(val)}")
    return lines


def _figure_6(args) -> list[str]:
    both = scatter.DetectionMode.BOTH
    res = optimize.maximize_1d(
        lambda om: float(closedform.ea_cr(0.0, om, both)),
        optimize.DEFAULT_OMEGA_BRACKET, name="omega")
    omega_both = res.param("omega")
    lines = _header(args, ["r", "m_var_direct", "m_var_both",
                           "m_var_transmission", "m_var_reflection"])
    for r in np.linspace(0.0, 0.98, args.points or 50):
        r = float(r)
        row = [1.0 - r * r,
               closedform.purity_bound(r, omega_both, 1, both)]
        for mode in (scatter.DetectionMode.TRANSMISSION, scatter.DetectionMode.REFLECTION):
            best = optimize.maximize_1d(
                lambda om: float(closedform.ea_cr(r, om, mode)),
                optimize.DEFAULT_OMEGA_BRACKET, name="omega")
            row.append(1.0 / best.value)
        lines.append(",".join([_fmt(r)] + [_fmt(x) for x in row]))
    return lines


def _figure_7(args) -> list[str]:
    columns = ["v_z"]
    for key in MODE_ORDER:
        columns += [f"qfi_{key}", f"theta_a_{key}", f"omega_{key}"]
    lines = _header(args, columns)
    for vz in np.linspace(-0.95, 0.95, args.points or 39):
        cells = [_fmt(vz)]
        for key in MODE_ORDER:
            pt = optimize.nea_envelope_point(float(vz), MODES[key], tol=1e-6)
            cells += [_fmt(pt.best_qfi), _fmt(pt.theta_a_star), _fmt(pt.omega_star)]
        lines.append(",".join(cells))
    return lines


def _figure_8(args) -> list[str]:
    columns = ["v_z"]
    for key in MODE_ORDER:
        columns += [f"nea_{key}", f"ea_{key}"]
    lines = _header(args, columns)
    for vz in np.linspace(0.0, 0.95, args.points or 20):
        cells = [_fmt(vz)]
        for key in MODE_ORDER:
            nea = optimize.nea_envelope_point(float(vz), MODES[key], tol=1e-6)
            ea = optimize.ea_envelope_point(float(vz), MODES[key], tol=1e-8)
            cells += [_fmt(nea.best_qfi), _fmt(ea.best_qfi)]
        lines.append(",".join(cells))
    return lines


def cmd_figure(args: argparse.Namespace) -> int:
    builders = {
        3: _figure_3,
        4: lambda a: _figure_surface(a, scatter.DetectionMode.TRANSMISSION),
        5: lambda a: _figure_surface(a, scatter.DetectionMode.REFLECTION),
        6: _figure_6,
        7: _figure_7,
        8: _figure_8,
    }
    if args.number not in builders:
        raise UsageError("figure number must be one of 3, 4, 5, 6, 7, 8")
    _write(builders[args.number](args), args.output)
    return EXIT_OK


def _add_target_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--vx", type=float, default=0.0, help="target Bloch x component")
    p.add_argument("--vy", type=float, default=0.0, help="target Bloch y component")
    p.add_argument("--vz", type=float, default=0.0, help="target Bloch z component")
    p.add_argument("--r", type=float, default=None, help="target Bloch radius (polar)")
    p.add_argument("--theta", type=float, default=None, help="target polar angle (rad)")
    p.add_argument("--phi", type=float, default=None, help="target azimuth (rad)")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--strategy", choices=("direct", "nea", "ea"), required=True)
    p.add_argument("--mode", choices=tuple(MODES), default="both",
                   help="detection mode (ignored for direct)")
    p.add_argument("--omega", type=float, default=None,
                   help="dimensionless momentum parameter (nea/ea)")
    p.add_argument("--theta-a", dest="theta_a", type=float, default=0.0,
                   help="probe Bloch polar angle (nea)")
    p.add_argument("--output", "-o", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scattertomo",
        description="Tomographic accuracy bounds for a qubit probed by 1D scattering")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qfi", help="print the QFI matrix (numeric and closed form)")
    _add_common_flags(p)
    _add_target_flags(p)
    p.add_argument("--basis", choices=("cartesian", "polar"), default="cartesian")
    p.add_argument("--eps", type=float, default=1e-12)
    p.set_defaults(func=cmd_qfi)

    p = sub.add_parser("bound", help="print a Cramer-Rao bound")
    _add_common_flags(p)
    _add_target_flags(p)
    p.add_argument("--m-copies", dest="m_copies", type=int, default=1)
    p.add_argument("--param", choices=("matrix", "x", "y", "z", "r", "theta", "phi"),
                   default="matrix")
    p.add_argument("--eps", type=float, default=1e-12)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("scan", help="sweep omega / theta_a / v_z / r grids")
    _add_common_flags(p)
    _add_target_flags(p)
    p.add_argument("--sweep", choices=("omega", "theta-a", "vz", "r"), required=True)
    p.add_argument("--from", dest="start", type=float, default=None)
    p.add_argument("--to", dest="stop", type=float, default=None)
    p.add_argument("--points", type=int, default=121)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("optimize", help="maximize QFI over probe controls")
    _add_common_flags(p)
    _add_target_flags(p)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("figure", help="emit the CSV behind a paper figure")
    p.add_argument("number", type=int)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_figure)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except optimize.ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except ValueError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
