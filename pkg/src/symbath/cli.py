"""Command-line entry point: ``symbath steady|evolve|protocol|verify|critical-r``.

Exit codes: 0 success, 2 invalid input, 3 numerical non-convergence.
"""

import argparse
import os
import sys
import tempfile

import numpy as np

from . import dynamics
from .algebra import check_density, max_abs
from .asymptotics import alpha_family, reduced_protocol_state
from .entanglement import PRINTED_CRITICAL_R, RADICANDS, alpha_minus, critical_r, oracle_zero_crossing
from .errors import ConvergenceError, ValidationError
from .generator import EnvironmentParams, build_generator
from .protocol import (
    DEFAULT_ALPHA_STEP,
    FIG1_ALPHA_FLOOR,
    alpha_grid,
    default_r_values,
    figure_points,
    format_float,
    grid_points,
    records_to_csv,
    sweep,
)
from .verification import verify_all

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGED = 0, 2, 3


# --- matrix files ------------------------------------------------------------


def format_complex(z):
    z = complex(z)
    return f"{format_float(z.real)}{'+' if z.imag >= 0 or np.isnan(z.imag) else '-'}{format_float(abs(z.imag))}j"


def matrix_to_text(m):
    m = np.asarray(m)
    lines = [f"# dim={m.shape[0]}"]
    lines.extend(",".join(format_complex(z) for z in row) for row in m)
    return "\n".join(lines) + "\n"


def matrix_from_text(text):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("# dim="):
        raise ValidationError("matrix file must start with a '# dim=<d>' line")
    try:
        d = int(lines[0][len("# dim="):])
        rows = [[complex(cell.strip()) for cell in ln.split(",")] for ln in lines[1:]]
    except ValueError as exc:
        raise ValidationError(f"bad matrix file: {exc}") from None
    if len(rows) != d or any(len(row) != d for row in rows):
        raise ValidationError(f"matrix file declares dim={d} but holds {len(rows)} rows")
    return np.array(rows, dtype=complex)


def write_atomic(path, text):
    """Write via a temp file in the target directory, so errors leave nothing behind."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".symbath-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- argument handling -------------------------------------------------------


def _range(text):
    try:
        parts = [float(x) for x in text.split(":")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must be lo:hi:step, got {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"range must be lo:hi:step, got {text!r}")
    lo, hi, step = parts
    if step <= 0 or lo > hi:
        raise argparse.ArgumentTypeError(f"range needs lo <= hi and step > 0, got {text!r}")
    return lo, hi, step


def _add_params(p, need_alpha=True):
    p.add_argument("--n", type=int, default=2, choices=(1, 2, 3), help="number of qubits")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--b", type=float)
    p.add_argument("--r", type=float, help="shorthand for a=1, b=r")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=1.0)
    if need_alpha:
        p.add_argument("--alpha", type=float, help="initial state from the alpha family")
        p.add_argument("--input", help="initial state from a matrix file")
    p.add_argument("--tol", type=float, default=dynamics.DEFAULT_TOL)
    p.add_argument("--output", help="write the resulting matrix here")


def params_from_args(args):
    if (args.b is None) == (args.r is None):
        raise ValidationError("give exactly one of --b or --r")
    if args.r is not None:
        return EnvironmentParams.from_r(args.r, c=args.c, omega=args.omega)
    return EnvironmentParams(a=args.a, b=args.b, c=args.c, omega=args.omega)


def initial_state(args):
    if (args.alpha is None) == (args.input is None):
        raise ValidationError("give exactly one of --alpha or --input")
    if args.input is not None:
        try:
            with open(args.input) as fh:
                rho = matrix_from_text(fh.read())
        except OSError as exc:
            raise ValidationError(f"cannot read {args.input}: {exc.strerror}") from None
        if rho.shape != (2**args.n, 2**args.n):
            raise ValidationError(f"input is {rho.shape[0]}x{rho.shape[0]}, expected {2**args.n} for n={args.n}")
        return check_density(rho)
    if args.n == 1:
        raise ValidationError("the alpha family needs n = 2 or 3; use --input for one qubit")
    return alpha_family(args.alpha, args.n)


# --- subcommands -------------------------------------------------------------


def cmd_steady(args, out):
    params = params_from_args(args)
    params.require_nondegenerate()
    if args.n == 1 and args.alpha is None and args.input is None:
        rho0 = np.array([[1, 0], [0, 0]], dtype=complex)
    else:
        rho0 = initial_state(args)
    superop = dynamics.vectorize(build_generator(params, args.n))
    result = dynamics.asymptotic_state(superop, rho0, tol=args.tol)
    residual = max_abs(superop.apply(result.state))
    text = matrix_to_text(result.state)
    out.write(text)
    out.write(f"# |L[rho]|_max={residual:.3e} horizon={result.horizon:g} doublings={result.doublings}\n")
    if args.output:
        write_atomic(args.output, text)
    return EXIT_OK


def cmd_evolve(args, out):
    params = params_from_args(args)
    if args.t < 0:
        raise ValidationError(f"--t must be >= 0, got {args.t}")
    rho0 = initial_state(args)
    superop = dynamics.vectorize(build_generator(params, args.n))
    text = matrix_to_text(dynamics.evolve(superop, rho0, args.t))
    out.write(text)
    if args.output:
        write_atomic(args.output, text)
    return EXIT_OK


def _protocol_points(args):
    if args.figure is not None:
        r_values = default_r_values()
        if args.r_range is not None:
            r_values = alpha_grid(*args.r_range)
        return figure_points(args.figure, r_values, args.alpha_step, args.fig1_floor)
    if args.r is not None:
        r_values = [args.r]
    elif args.r_range is not None:
        r_values = alpha_grid(*args.r_range)
    else:
        raise ValidationError("give --figure, --r or --r-range")
    if args.alpha is not None:
        alphas = [args.alpha]
    elif args.alpha_range is not None:
        alphas = alpha_grid(*args.alpha_range)
    else:
        raise ValidationError("give --alpha or --alpha-range (or use --figure)")
    return grid_points(r_values, alphas)


def cmd_protocol(args, out):
    points = _protocol_points(args)
    records = sweep(points, method=args.method, workers=args.workers, cross_check=args.cross_check)
    header = {"figure": args.figure if args.figure is not None else "custom", "mode": args.mode, "method": args.method}
    text = records_to_csv(records, mode=args.mode, header=header)
    if args.output:
        companion = "oracle" if args.mode == "paper" else "paper"
        root, ext = os.path.splitext(args.output)
        write_atomic(args.output, text)
        write_atomic(
            f"{root}.{companion}{ext or '.csv'}",
            records_to_csv(records, mode=companion, header={**header, "mode": companion}),
        )
        out.write(f"wrote {len(records)} rows to {args.output}\n")
    else:
        out.write(text)
    return EXIT_OK


def cmd_verify(args, out):
    claims = args.claims.split(",") if args.claims else None
    report = verify_all(claims=claims, tol=args.tol)
    if not report.entries:
        raise ValidationError(f"no claim matches {args.claims!r}")
    out.write(report.table() + "\n")
    if args.csv:
        write_atomic(args.csv, report.to_csv())
    return EXIT_OK if report.passed else 1


def cmd_critical_r(args, out):
    root = critical_r(args.radicand)
    crossing = oracle_zero_crossing(
        lambda r: reduced_protocol_state(1 / 3, EnvironmentParams.from_r(r))[0], 0.9, 0.999
    )
    out.write(f"bisection root ({args.radicand}): {root:.10f}\n")
    out.write(f"alpha_minus(root): {alpha_minus(root, args.radicand):.10f}\n")
    out.write(f"oracle crossing: {crossing:.10f} (diff {root - crossing:+.3e})\n")
    out.write(f"printed value: {PRINTED_CRITICAL_R} (diff {root - PRINTED_CRITICAL_R:+.3e})\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="symbath", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("steady", help="asymptotic state of an initial state")
    _add_params(p)
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("evolve", help="state at a finite time")
    _add_params(p)
    p.add_argument("--t", type=float, required=True)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("protocol", help="ancilla protocol sweep as CSV")
    p.add_argument("--figure", type=int, choices=(1, 2, 3))
    p.add_argument("--r", type=float)
    p.add_argument("--r-range", type=_range, metavar="LO:HI:STEP")
    p.add_argument("--alpha", type=float)
    p.add_argument("--alpha-range", type=_range, metavar="LO:HI:STEP")
    p.add_argument("--alpha-step", type=float, default=DEFAULT_ALPHA_STEP)
    p.add_argument("--fig1-floor", type=float, default=FIG1_ALPHA_FLOOR, help="lower alpha bound of figure 1")
    p.add_argument("--mode", choices=("paper", "oracle"), default="paper")
    p.add_argument("--method", choices=("analytic", "numeric"), default="analytic")
    p.add_argument("--cross-check", action="store_true", default=None, help="fill the residual column")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", help="CSV path; a companion file holds the other mode")
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("verify", help="run the claim suite")
    p.add_argument("--tol", type=float, help="override every numeric tolerance")
    p.add_argument("--claims", help="comma-separated claim ids or prefixes")
    p.add_argument("--csv", help="also write the report as CSV")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("critical-r", help="critical r where alpha_minus reaches 1/3")
    p.add_argument("--radicand", choices=RADICANDS, default="delta")
    p.set_defaults(func=cmd_critical_r)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    try:
        return args.func(args, out)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
