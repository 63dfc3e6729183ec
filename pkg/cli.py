"""
Command-line surface: meanscale <eval|solve|scan|check-scale|dual|probe> [flags].

Results go to standard output, diagnostics and logs to standard error.
Exit codes: 0 success, 2 invalid input, 3 bracket exhausted, 4 scale
violation, 5 duality residual above tolerance.
"""
import argparse
import logging
import math
import sys
from typing import List, Optional

from config import (
    ALPHA_MAX,
    DEFAULT_SOLVE_TOL,
    EXIT_BRACKET_EXHAUSTED,
    EXIT_DUAL_RESIDUAL,
    EXIT_INVALID,
    EXIT_OK,
    EXIT_SCALE_VIOLATION,
    FAMILY_SETTINGS,
    POTENTIAL_SETTINGS,
)
from duality import (
    ConvexPotential,
    closed_form_arc_generators,
    dual_mean_check,
    exp_potential,
    potential_from_expression,
    quadratic_potential,
)
from errors import BracketExhausted
from generators import (
    Generator,
    make_exponential_generator,
    make_power_generator,
    make_radical_generator,
    qam_eval,
)
from models import Interval
from scales import (
    ScaleFamily,
    check_scale,
    custom_family,
    get_family,
    limit_probe,
    scaled_custom_generator,
    scan,
    solve_parameter,
)
from utils.format import (
    format_dual_record,
    format_limit_probe,
    format_number,
    format_scale_report,
    format_solve_report,
    write_scan_csv,
)
from utils.log import configure_logging, log_dual_details, log_solve_details, verbosity_level

logger = logging.getLogger(__name__)

PROG = "meanscale"


class UsageError(ValueError):
    """Flags that parse individually but do not fit together."""


def _domain(args: argparse.Namespace, defaults: dict) -> Interval:
    low = defaults["domain"][0] if args.low is None else args.low
    high = defaults["domain"][1] if args.high is None else args.high
    return Interval(low=low, high=high)


def _require_expr(args: argparse.Namespace, what: str) -> str:
    if not args.expr:
        raise UsageError(f"--{what} custom needs --expr")
    return args.expr


def resolve_family(args: argparse.Namespace) -> ScaleFamily:
    if args.family == "custom":
        return custom_family(_require_expr(args, "family"), _domain(args, FAMILY_SETTINGS["custom"]))
    return get_family(args.family)


def resolve_generator(args: argparse.Namespace) -> Generator:
    """Generator of a single family member; radical takes alpha > 0 itself, not ln(alpha)."""
    if args.family == "power":
        return make_power_generator(args.alpha)
    if args.family == "exponential":
        return make_exponential_generator(args.alpha)
    if args.family == "radical":
        return make_radical_generator(args.alpha)
    return scaled_custom_generator(_require_expr(args, "family"), _domain(args, FAMILY_SETTINGS["custom"]), args.alpha)


def resolve_potential(args: argparse.Namespace) -> ConvexPotential:
    if args.potential == "exp":
        return exp_potential()
    if args.potential == "quadratic":
        return quadratic_potential()
    settings = POTENTIAL_SETTINGS["custom"]
    base_point = settings["base_point"] if args.base_point is None else args.base_point
    return potential_from_expression(_require_expr(args, "potential"), _domain(args, settings), base_point)


def cmd_eval(args: argparse.Namespace) -> int:
    gen = resolve_generator(args)
    mean = qam_eval(gen, args.x, args.y, stable=not args.naive)
    if not math.isfinite(mean):
        raise OverflowError(f"{gen.name} mean of ({args.x!r}, {args.y!r}) is not finite")
    print(format_number(mean))
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    fam = resolve_family(args)
    report = solve_parameter(fam, args.a, args.b, args.c, tol=args.tol, alpha_max=args.alpha_max)
    log_solve_details(report, args.family)
    sys.stdout.write(format_solve_report(report))
    return EXIT_OK


def cmd_scan(args: argparse.Namespace) -> int:
    fam = resolve_family(args)
    rows = scan(fam, args.a, args.b, args.alpha_min, args.alpha_max, args.steps, log_spaced=args.log)
    if args.out in (None, "-"):
        write_scan_csv(rows, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as f:
            write_scan_csv(rows, f)
        logger.info("Wrote %d rows to %s", len(rows), args.out)
    return EXIT_OK


def cmd_check_scale(args: argparse.Namespace) -> int:
    fam = resolve_family(args)
    report = check_scale(fam, args.a, args.b, args.samples)
    sys.stdout.write(format_scale_report(report))
    if not report.ok:
        first = report.violations[0] if report.violations else None
        if first is not None:
            print(
                f"error: {fam.name} is not a {report.declared.value} between alpha "
                f"{format_number(first.alpha_lo)} and {format_number(first.alpha_hi)}",
                file=sys.stderr,
            )
        return EXIT_SCALE_VIOLATION
    return EXIT_OK


def cmd_dual(args: argparse.Namespace) -> int:
    pot = resolve_potential(args)
    pair = closed_form_arc_generators(pot) if args.closed_form else None
    record = dual_mean_check(pot, args.a, args.b, pair)
    log_dual_details(record, pot.check_tol)
    sys.stdout.write(format_dual_record(record))
    if not record.consistent(pot.check_tol):
        print(
            f"error: dual means of {pot.name} disagree beyond {pot.check_tol:g} "
            f"(eta {record.eta_residual:.3g}, arc {record.arc_residual:.3g})",
            file=sys.stderr,
        )
        return EXIT_DUAL_RESIDUAL
    return EXIT_OK


def cmd_probe(args: argparse.Namespace) -> int:
    fam = resolve_family(args)
    probe = limit_probe(fam, args.a, args.b, args.alpha_big)
    sys.stdout.write(format_limit_probe(probe))
    return EXIT_OK


def _add_family_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--family",
        required=True,
        choices=list(FAMILY_SETTINGS),
        help="; ".join(f"{name}: {settings['help']}" for name, settings in FAMILY_SETTINGS.items()),
    )
    _add_expr_flags(parser, "generator s(u) for --family custom, used as s(alpha*u)")


def _add_expr_flags(parser: argparse.ArgumentParser, expr_help: str) -> None:
    parser.add_argument("--expr", help=f"{expr_help}; variable u, functions exp log sqrt abs pow")
    parser.add_argument("--low", type=float, help="lower end of the custom domain (default -inf)")
    parser.add_argument("--high", type=float, help="upper end of the custom domain (default +inf)")


def _add_pair_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", type=float, required=True, help="left point")
    parser.add_argument("--b", type=float, required=True, help="right point")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Quasi-arithmetic means, their scales and their convex duals.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="log to stderr (-vv for debug)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate m_alpha(x, y)")
    _add_family_flags(p)
    p.add_argument("--alpha", type=float, required=True, help="family parameter (radical: alpha > 0)")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--naive", action="store_true", help="evaluate h^-1((h(x) + h(y))/2) literally")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("solve", help="find alpha with m_alpha(a, b) = c")
    _add_family_flags(p)
    _add_pair_flags(p)
    p.add_argument("--c", type=float, required=True, help="target strictly inside (a, b)")
    p.add_argument("--tol", type=float, default=DEFAULT_SOLVE_TOL, help="absolute tolerance on the mean")
    p.add_argument("--alpha-max", type=float, default=ALPHA_MAX, help="largest |alpha| tried")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("scan", help="write alpha,mean CSV over a parameter range")
    _add_family_flags(p)
    _add_pair_flags(p)
    p.add_argument("--alpha-min", type=float, required=True)
    p.add_argument("--alpha-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--log", action="store_true", help="log-spaced parameters (alpha-min > 0)")
    p.add_argument("--out", help="output path (default standard output)")
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser("check-scale", help="verify that alpha -> m_alpha(a, b) is strictly monotone")
    _add_family_flags(p)
    _add_pair_flags(p)
    p.add_argument("--samples", type=int, default=64)
    p.set_defaults(handler=cmd_check_scale)

    p = sub.add_parser("dual", help="compare the dual means of a convex potential")
    p.add_argument(
        "--potential",
        required=True,
        choices=list(POTENTIAL_SETTINGS),
        help="; ".join(f"{name}: {settings['help']}" for name, settings in POTENTIAL_SETTINGS.items()),
    )
    _add_expr_flags(p, "potential f(u) for --potential custom")
    p.add_argument("--base-point", type=float, help="theta_0 of the arc-length coordinates (default 0)")
    p.add_argument("--closed-form", action="store_true", help="use the built-in closed forms instead of quadrature")
    _add_pair_flags(p)
    p.set_defaults(handler=cmd_dual)

    p = sub.add_parser("probe", help="means at -alpha_big and +alpha_big")
    _add_family_flags(p)
    _add_pair_flags(p)
    p.add_argument("--alpha-big", type=float, default=1e3, help="probe magnitude, in the solver coordinate")
    p.set_defaults(handler=cmd_probe)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (None, 0) else EXIT_INVALID

    configure_logging(verbosity_level(args.verbose))
    try:
        return args.handler(args)
    except BracketExhausted as e:
        logger.debug("bracket exhausted", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BRACKET_EXHAUSTED
    except (ValueError, ArithmeticError, OSError) as e:
        # MeanScaleError and pydantic's ValidationError are ValueErrors
        logger.debug("command failed", exc_info=True)
        message = " ".join(str(e).split())
        print(f"error: {type(e).__name__}: {message}", file=sys.stderr)
        return EXIT_INVALID
