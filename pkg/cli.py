#!/usr/bin/env python3
"""
Fractional Laplacian CLI

Evaluates -(-Laplacian)^(alpha/2) on radial test functions, compares the
operator routes, checks the stable-density diffusion equation and the
one-sided convolution theorems. Tables go to stdout, diagnostics to stderr.
"""

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from colorama import Fore, Style
from colorama import init as colorama_init

from config import ContourSpec, QuadConfig, load_config_file
from corpus import get_function_list, get_test_function
from errors import NumericalError, UnsupportedInput
from fraclap import RouteId, equivalence_report, relative_discrepancy, run_cells, singular_integral_route
from mellin import FracOrder
from onesided import (
    EKernel,
    caputo,
    ekernel_convolution,
    hilbert_derivative,
    riesz_via_caputo,
    riesz_via_riemann_liouville,
)
from sfde import residual_table

COMMANDS = ("apply", "compare", "sfde", "theorems")
OUTPUT_FORMATS = ("csv", "json")

DEFAULT_TOLERANCES = {
    "apply": 1e-5,
    "compare": 1e-5,
    "sfde": 1e-4,
    "theorems": 1e-4,
}

THEOREM_FIXTURE = "bump"

# identity checks have their own thresholds; the convolution checks use --tol
THEOREM_TOLERANCES = {
    "kernel_identity": 1e-8,
    "delta_reduction": 1e-6,
    "hilbert_form": 1e-6,
}
KERNEL_SAMPLES = (0.5, 0.5 + 1.0j, 0.5 + 3.0j)

Row = List[object]


@dataclass
class RunConfig:
    """Validated settings of one CLI run."""

    command: str
    alpha: float = 1.0
    dim: int = 1
    func: str = "gaussian"
    points: List[float] = field(default_factory=lambda: [0.0])
    routes: List[RouteId] = field(default_factory=list)
    out: str = "csv"
    t: float = 1.0
    tol: Optional[float] = None
    contour_c: Optional[float] = None
    contour_height: float = 16.0
    rel_tol: float = QuadConfig.rel_tol
    abs_tol: float = QuadConfig.abs_tol
    verbose: bool = False

    def __post_init__(self):
        """Validate configuration after initialization."""
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command '{self.command}'. Valid commands: {', '.join(COMMANDS)}")
        if self.out not in OUTPUT_FORMATS:
            raise ValueError(f"Output format must be one of {', '.join(OUTPUT_FORMATS)}")
        if not self.points:
            raise ValueError("--x needs at least one point")
        if not all(math.isfinite(x) for x in self.points):
            raise ValueError("Evaluation points must be finite")
        if self.dim < 1:
            raise ValueError("--dim must be at least 1")

        if self.command == "theorems":
            if not 0.0 < self.alpha <= 2.0:
                raise ValueError(f"--alpha must lie in (0, 2] for theorems, got {self.alpha}")
        elif not 0.0 < self.alpha < 2.0:
            raise ValueError(f"--alpha must lie in (0, 2), got {self.alpha}")

        if self.command == "sfde":
            if not self.t > 0:
                raise ValueError(f"--t must be positive, got {self.t} (the initial datum is a delta)")
            if self.dim != 1:
                raise ValueError("sfde runs in one dimension")

        if self.command in ("apply", "compare"):
            get_test_function(self.func)

        if self.tol is None:
            self.tol = DEFAULT_TOLERANCES[self.command]
        if not self.tol > 0:
            raise ValueError("--tol must be positive")
        if not self.contour_height > 0:
            raise ValueError("--contour-height must be positive")
        self.quad_config()

    @property
    def order(self) -> FracOrder:
        return FracOrder(self.alpha, self.dim)

    def quad_config(self) -> QuadConfig:
        return QuadConfig(rel_tol=self.rel_tol, abs_tol=self.abs_tol)

    def contour_spec(self) -> ContourSpec:
        return ContourSpec(
            abscissa=self.contour_c,
            height=self.contour_height,
            max_height=max(400.0, self.contour_height),
        )

    def header(self) -> Dict[str, object]:
        """Provenance written above every table."""
        header = {
            "command": self.command,
            "alpha": self.alpha,
            "dim": self.dim,
            "func": THEOREM_FIXTURE if self.command == "theorems" else self.func,
        }
        if self.routes:
            header["routes"] = ",".join(route.value for route in self.routes)
        if self.command == "sfde":
            header["t"] = self.t
        header["tol"] = self.tol
        header["rel_tol"] = self.rel_tol
        header["abs_tol"] = self.abs_tol
        header["contour_c"] = "auto" if self.contour_c is None else self.contour_c
        header["contour_height"] = self.contour_height
        return header


class CliParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_points(text: str) -> List[float]:
    """Comma-separated list of floats."""
    points = [float(item) for item in text.split(",") if item.strip()]
    if not points:
        raise argparse.ArgumentTypeError("expected a comma-separated list of numbers")
    return points


def parse_routes(text: str) -> List[RouteId]:
    return [RouteId.from_name(item) for item in text.split(",") if item.strip()]


def build_parser() -> CliParser:
    """Build the argument parser with one subcommand per table."""
    parser = CliParser(
        prog="cli.py",
        description="Fractional Laplacian on radial functions",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # One route at one point
  python cli.py apply --route fourier --alpha 1 --func gaussian --x 0

  # Compare every applicable route
  python cli.py compare --alpha 1.5 --func lorentz --x 0,0.5,1,2

  # Stable density against the diffusion equation
  python cli.py sfde --alpha 1.5 --route mellin --x 0,0.5,1,2

  # Convolution theorems and kernel identity
  python cli.py theorems --alpha 0.5 --x 0.5,1,2 --out json
        """,
    )

    common = CliParser(add_help=False)
    common.add_argument("--alpha", type=float, default=1.0, help="Fractional order (default: 1.0)")
    common.add_argument("--dim", type=int, default=1, help="Dimension n (default: 1)")
    common.add_argument(
        "--func",
        default="gaussian",
        help=f"Test function: {', '.join(get_function_list())} (default: gaussian)",
    )
    common.add_argument("--x", type=parse_points, default="0", help="Comma-separated points (default: 0)")
    common.add_argument("--tol", type=float, default=None, help="Pass/fail tolerance")
    common.add_argument(
        "--rel-tol", type=float, default=QuadConfig.rel_tol, help="Quadrature relative tolerance (default: 1e-10)"
    )
    common.add_argument(
        "--abs-tol", type=float, default=QuadConfig.abs_tol, help="Quadrature absolute tolerance (default: 1e-14)"
    )
    common.add_argument("--out", choices=OUTPUT_FORMATS, default="csv", help="Table format (default: csv)")
    common.add_argument("--contour-c", type=float, default=None, help="Inversion abscissa (default: automatic)")
    common.add_argument("--contour-height", type=float, default=16.0, help="Initial contour height (default: 16)")
    common.add_argument("--config", metavar="PATH", help="Flat key = value file with flag defaults")
    common.add_argument("-v", "--verbose", action="store_true", help="Show progress on stderr")

    subparsers = parser.add_subparsers(dest="command", required=True)

    apply_parser = subparsers.add_parser("apply", parents=[common], help="Evaluate one route")
    apply_parser.add_argument("--route", type=RouteId.from_name, default="fourier", help="heat|fourier|singular|mellin|riesz")

    compare_parser = subparsers.add_parser("compare", parents=[common], help="Compare routes pointwise")
    compare_parser.add_argument("--routes", type=parse_routes, default=None, help="Comma list (default: all applicable)")

    sfde_parser = subparsers.add_parser("sfde", parents=[common], help="Residual of dP/dt = L P")
    sfde_parser.add_argument("--route", type=RouteId.from_name, default="singular", help="Route used for L P")
    sfde_parser.add_argument("--t", type=float, default=1.0, help="Time (default: 1)")

    subparsers.add_parser("theorems", parents=[common], help="Convolution theorems and kernel identity")

    return parser


def _flag_value(key: str, value: str):
    if key == "verbose":
        return value.strip().lower() in ("1", "true", "yes", "on")
    return value


def apply_config_defaults(parser: CliParser, settings: Dict[str, str]):
    """Install config-file values as subcommand defaults so explicit flags win."""
    subcommands = [
        action for action in parser._actions if isinstance(action, argparse._SubParsersAction)
    ]
    known = set()
    for action in subcommands:
        for sub in action.choices.values():
            dests = {a.dest for a in sub._actions}
            known |= dests
            sub.set_defaults(
                **{key: _flag_value(key, value) for key, value in settings.items() if key in dests}
            )

    unknown = sorted(set(settings) - known - {"config"})
    if unknown:
        raise ValueError(f"Unknown setting(s) in config file: {', '.join(unknown)}")


def parse_run_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Parse arguments (and an optional --config file) into a RunConfig."""
    parser = build_parser()

    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        apply_config_defaults(parser, load_config_file(known.config))

    args = parser.parse_args(argv)
    route = getattr(args, "route", None)
    routes = getattr(args, "routes", None)
    return RunConfig(
        command=args.command,
        alpha=args.alpha,
        dim=args.dim,
        func=args.func,
        points=list(args.x),
        routes=[route] if route is not None else list(routes or []),
        out=args.out,
        t=getattr(args, "t", 1.0),
        tol=args.tol,
        contour_c=args.contour_c,
        contour_height=args.contour_height,
        rel_tol=args.rel_tol,
        abs_tol=args.abs_tol,
        verbose=args.verbose,
    )


def make_output_callback(verbose: bool) -> Callable[[str, str], None]:
    """Coloured stderr diagnostics; progress only when verbose."""
    colors = {
        "header": Style.BRIGHT,
        "info": Fore.CYAN,
        "success": Fore.GREEN,
        "warning": Fore.YELLOW,
        "error": Fore.RED,
    }

    def output(message: str, msg_type: str = "info"):
        if not verbose and msg_type not in ("warning", "error"):
            return
        color = colors.get(msg_type, "")
        print(f"{color}{message}{Style.RESET_ALL}", file=sys.stderr)

    return output


def format_cell(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_table(
    header: Dict[str, object],
    columns: List[str],
    rows: List[Row],
    out: str,
    stream=None,
):
    """Write a table as CSV with comment provenance, or as one JSON object."""
    stream = stream or sys.stdout
    if out == "json":
        stream.write(json.dumps({"header": header, "columns": columns, "rows": rows}) + "\n")
        return

    for key, value in header.items():
        stream.write(f"# {key}={format_cell(value)}\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(format_cell(value) for value in row) + "\n")


def _check_route(route: RouteId, order: FracOrder):
    if not route.applicable(order):
        raise UnsupportedInput(
            f"Route '{route.value}' does not apply to alpha = {order.alpha}, n = {order.n}"
        )


def cmd_apply(cfg: RunConfig, notify: Callable) -> Tuple[List[str], List[Row], int]:
    """Rows (x, value) for one route."""
    route = cfg.routes[0] if cfg.routes else RouteId.FOURIER
    cfg.routes = [route]
    _check_route(route, cfg.order)
    f = get_test_function(cfg.func).radial(cfg.dim)
    report = equivalence_report(
        f, cfg.order, cfg.points, [route], cfg.quad_config(), cfg.contour_spec(), notify
    )
    rows = [[x, report.values[route][i]] for i, x in enumerate(report.points)]
    return ["x", "value"], rows, 0


def cmd_compare(cfg: RunConfig, notify: Callable) -> Tuple[List[str], List[Row], int]:
    """Rows (x, value per route, max_rel_err); status 2 above --tol."""
    order = cfg.order
    if not cfg.routes:
        cfg.routes = [route for route in RouteId if route.applicable(order)]
    for route in cfg.routes:
        _check_route(route, order)
    f = get_test_function(cfg.func).radial(cfg.dim)
    report = equivalence_report(
        f, order, cfg.points, cfg.routes, cfg.quad_config(), cfg.contour_spec(), notify
    )
    columns = ["x"] + [route.value for route in report.routes] + ["max_rel_err"]

    status = 0
    if report.pairwise_max_rel_err > cfg.tol:
        notify(
            f"⚠️  Routes disagree: max relative error {report.pairwise_max_rel_err:.3e} > {cfg.tol:g}",
            "warning",
        )
        status = 2
    else:
        notify(f"✓ Routes agree within {cfg.tol:g}", "success")
    return columns, report.as_rows(), status


def cmd_sfde(cfg: RunConfig, notify: Callable) -> Tuple[List[str], List[Row], int]:
    """Rows (x, dtP, LP, residual); status 2 above --tol."""
    route = cfg.routes[0] if cfg.routes else RouteId.SINGULAR
    cfg.routes = [route]
    rows = residual_table(
        cfg.alpha, cfg.t, cfg.points, route, cfg.quad_config(), cfg.contour_spec(), notify
    )
    worst = max(row[3] for row in rows)
    status = 0
    if worst > cfg.tol:
        notify(f"⚠️  Residual {worst:.3e} exceeds {cfg.tol:g}", "warning")
        status = 2
    return ["x", "dtP", "LP", "residual"], rows, status


def _theorem_cells(cfg: RunConfig) -> List[Callable[[], Row]]:
    alpha = cfg.alpha
    quad = cfg.quad_config()
    fixture = get_test_function(THEOREM_FIXTURE)
    half_line = fixture.half_line()
    cells = []

    def row(check: str, x, lhs, rhs) -> Row:
        lhs, rhs = complex(lhs), complex(rhs)
        # a vanishing reference has no scale: absolute error there
        error = abs(lhs) if rhs == 0 else relative_discrepancy(lhs, rhs)
        tol = THEOREM_TOLERANCES.get(check, cfg.tol)
        return [check, x, lhs.real, rhs.real, error, tol, "pass" if error <= tol else "fail"]

    kernel = EKernel(alpha)
    if alpha < 2.0:
        for s in KERNEL_SAMPLES:
            cells.append(
                lambda s=s: row("kernel_identity", s.imag if isinstance(s, complex) else 0.0,
                                kernel.mellin_numeric(s, quad), kernel.mellin_closed_form(s))
            )

    for x in cfg.points:
        if alpha < 2.0:
            radial = fixture.radial(1)
            order = FracOrder(alpha, 1)
            cells.append(
                lambda x=x: row("caputo_convolution", x, riesz_via_caputo(half_line, alpha, x, quad),
                                singular_integral_route(radial, order, x, quad))
            )
            cells.append(
                lambda x=x: row("rl_convolution", x, riesz_via_riemann_liouville(half_line, alpha, x, quad),
                                singular_integral_route(radial, order, x, quad))
            )
        else:
            cells.append(
                lambda x=x: row("delta_reduction", x,
                                ekernel_convolution(lambda t: caputo(half_line, 2.0, t), alpha, x, quad),
                                float(fixture.second_derivative(abs(x))))
            )
        if alpha == 1.0:
            cauchy = get_test_function("cauchy").radial(1)
            cells.append(
                lambda x=x: row("hilbert_form", x, hilbert_derivative(cauchy, x, quad),
                                (x * x - 1.0) / (math.pi * (1.0 + x * x) ** 2))
            )
    return cells


def cmd_theorems(cfg: RunConfig, notify: Callable) -> Tuple[List[str], List[Row], int]:
    """Rows (check, x, lhs, rhs, rel_err, tol, status); status 2 if any check fails."""
    cells = _theorem_cells(cfg)
    notify(f"Running {len(cells)} theorem checks at alpha = {cfg.alpha:g}", "info")
    rows = run_cells(cells)
    for result in rows:
        if isinstance(result, Exception):
            raise result

    failed = [r for r in rows if r[-1] == "fail"]
    for r in failed:
        notify(f"✗ {r[0]} at x = {r[1]}: error {r[4]:.3e} above {r[5]:g}", "warning")
    if not failed:
        notify(f"✓ All {len(rows)} checks passed", "success")
    return ["check", "x", "lhs", "rhs", "rel_err", "tol", "status"], rows, 2 if failed else 0


HANDLERS = {
    "apply": cmd_apply,
    "compare": cmd_compare,
    "sfde": cmd_sfde,
    "theorems": cmd_theorems,
}


def main(argv: Optional[Sequence[str]] = None, stream=None) -> int:
    """Main entry point; returns the exit status."""
    colorama_init()

    try:
        cfg = parse_run_config(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except (ValueError, OSError) as e:
        print(f"❌ Configuration Error: {e}", file=sys.stderr)
        return 1

    notify = make_output_callback(cfg.verbose)
    try:
        columns, rows, status = HANDLERS[cfg.command](cfg, notify)
    except NumericalError as e:
        notify(f"❌ Numerical failure {e}", "error")
        return 2
    except ValueError as e:
        notify(f"❌ Invalid input: {e}", "error")
        return 1

    write_table(cfg.header(), columns, rows, cfg.out, stream)
    return status


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\n\n⚠️  Interrupted by user", file=sys.stderr)
        sys.exit(130)
