"""Command-line entry point: python cli.py <command> [flags]."""

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from dotenv import load_dotenv

from config import APP_NAME, VERSION, get_settings
from models.errors import ConfigurationError, ConsistencyError, PfKernelError
from models.measure import MeasureKind
from tools.measures import get_measure
from chains.correlation import correlation_asymmetric, correlation_bruteforce, correlation_hermitian
from chains.kernel import kernel_entries
from chains.partition import build_moment_matrices, monomial_basis, z_bruteforce, z_pfaffian, BRUTEFORCE_MAX_N
from chains.skeworth import construct_family, invert_w, z_from_rs
from agents.sampling_agent import Region, get_sampling_agent, parse_range
from agents.validation_agent import get_validation_agent
from utils.logger import configure_logging, get_logger
from utils.output_writer import FORMATS, ResultTable, format_value


logger = get_logger(__name__)

ENSEMBLES = [kind.value for kind in MeasureKind]
LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]

# None in parsed args means "take it from --config or the settings"
COMMAND_DEFAULTS = {
    "points": None,
    "complex_points": None,
    "grid": None,
    "oracle": False,
    "count": 200_000,
    "bins": "-4:4:32",
    "im_bins": None,
    "target": "real",
}


def _odd(value) -> int:
    try:
        n = int(value)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"invalid integer: {value!r}") from None
    if n < 1 or n % 2 == 0:
        raise argparse.ArgumentTypeError(f"--n must be a positive odd integer, got {n}")
    return n


def _shared_defaults() -> dict:
    settings = get_settings()
    return {
        "ensemble": MeasureKind.HERMITIAN_BETA1.value,
        "weight_file": None,
        "n": 3,
        "nodes_real": settings.nodes_real,
        "nodes_complex": settings.nodes_complex_im,
        "seed": settings.seed,
        "tol": settings.tolerance,
        "out": None,
        "format": "csv",
        "log_level": settings.log_level,
        "progress": False,
    }


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--ensemble", choices=ENSEMBLES, default=None)
    shared.add_argument("--weight-file", default=None, help="x w table for --ensemble custom")
    shared.add_argument("--n", type=_odd, default=None, help="Odd number of eigenvalues N")
    shared.add_argument("--nodes-real", type=int, default=None)
    shared.add_argument("--nodes-complex", type=int, default=None,
                        help="Imaginary-direction nodes of the half-plane rule")
    shared.add_argument("--seed", type=int, default=None)
    shared.add_argument("--tol", type=float, default=None)
    shared.add_argument("--out", default=None, help="Output file (stdout if omitted)")
    shared.add_argument("--format", choices=FORMATS, default=None)
    shared.add_argument("--config", default=None, help="JSON file with flag-equivalent keys")
    shared.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS, default=None)
    shared.add_argument("--progress", action="store_true", default=None)

    parser = argparse.ArgumentParser(prog=APP_NAME, description="Pfaffian kernels for odd-N β=1 ensembles")
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("validate", parents=[shared], help="Random-instance checks of the Pfaffian identities")
    commands.add_parser("partition", parents=[shared], help="Partition function from the moment matrix")
    commands.add_parser("family", parents=[shared], help="Skew-orthogonal polynomials with r_j and s_k")

    kernel = commands.add_parser("kernel", parents=[shared], help="2×2 kernel blocks")
    kernel.add_argument("--points", default=None, help="Comma-separated points; complex as a+bj")
    kernel.add_argument("--grid", default=None, help="lo:hi:k real grid, diagonal blocks only")

    correlate = commands.add_parser("correlate", parents=[shared], help="n-point correlation function")
    correlate.add_argument("--points", default=None, help="Comma-separated real points")
    correlate.add_argument("--complex-points", default=None, help="Comma-separated pair representatives")
    correlate.add_argument("--oracle", action="store_true", default=None, help="Add the quadrature marginal")

    for name, text in (("sample", "Monte Carlo eigenvalue histogram"),
                       ("compare", "Histogram next to the kernel one-point function")):
        sub = commands.add_parser(name, parents=[shared], help=text)
        sub.add_argument("--count", type=int, default=None)
        sub.add_argument("--bins", default=None, help="lo:hi:k along the real axis")
        sub.add_argument("--im-bins", default=None, help="lo:hi:k along the imaginary axis")
        sub.add_argument("--target", choices=["real", "complex"], default=None)
    return parser


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> argparse.Namespace:
    """Flags beat --config, which beats the settings."""
    loaded = {}
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise ConfigurationError(f"config file not found: {path}")
        try:
            loaded = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigurationError(f"{path}: expected a JSON object")
        loaded = {key.replace("-", "_"): value for key, value in loaded.items()}

    defaults = {**_shared_defaults(), **COMMAND_DEFAULTS}
    for key, default in defaults.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, loaded.get(key, default))

    if "n" in loaded and args.n == loaded["n"]:
        try:
            args.n = _odd(args.n)
        except argparse.ArgumentTypeError as exc:
            parser.error(str(exc))
    if args.ensemble not in ENSEMBLES:
        parser.error(f"unknown ensemble {args.ensemble!r}")
    return args


def _parse_numbers(text: Optional[str]) -> list[complex]:
    if not text:
        return []
    try:
        return [complex(token.strip().replace(" ", "")) for token in text.split(",") if token.strip()]
    except ValueError:
        raise ConfigurationError(f"cannot parse points {text!r}") from None


def _measure(args):
    return get_measure(args.ensemble, args.nodes_real, args.nodes_complex, None, args.weight_file)


def _family(args):
    m = _measure(args)
    f = construct_family(m, args.n)
    return m, f, invert_w(f)


def _joined(values) -> str:
    return ";".join(format_value(v.real) if v.imag == 0 else f"{format_value(v.real)}{v.imag:+.17g}j" for v in values)


def cmd_validate(args) -> ResultTable:
    table = ResultTable("validate", ["suite", "cases", "failures", "max_error", "tolerance", "passed"])
    results = get_validation_agent(args.tol).run_all(args.seed)
    for r in results:
        table.add(r.name, r.cases, r.failures, r.max_error, r.tolerance, r.passed)
    table.write(args.out, args.format)
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise ConsistencyError(f"validation failed: {', '.join(failed)}")
    return table


def cmd_partition(args) -> ResultTable:
    m = _measure(args)
    z_pf = z_pfaffian(build_moment_matrices(m, monomial_basis(args.n), args.n))
    if args.n <= BRUTEFORCE_MAX_N:
        z_bf = z_bruteforce(m, args.n)
        gap = abs(z_pf - z_bf) / abs(z_bf)
    else:
        z_bf = gap = None
    table = ResultTable("partition", ["ensemble", "n", "z_pfaffian", "z_bruteforce", "relative_gap"])
    table.add(args.ensemble, args.n, z_pf, z_bf, gap)
    table.write(args.out, args.format)
    return table


def cmd_family(args) -> ResultTable:
    _, f, c = _family(args)
    columns = ["k", "r", "s"] + [f"c{d}" for d in range(f.n)]
    table = ResultTable("family", columns)
    for k in range(f.n):
        r = f.r[k // 2] if k < f.n - 1 else None
        table.add(k, r, f.s[k], *f.coeffs[k])
    logger.info("family n=%d z=%.17g shadow_gap=%.3e", f.n, z_from_rs(f), c.shadow_gap)
    table.write(args.out, args.format)
    return table


def cmd_kernel(args) -> ResultTable:
    m, f, c = _family(args)
    if args.grid:
        lo, hi, k = parse_range(args.grid)
        points = list(np.linspace(lo, hi, k).astype(complex))
        pairs = [(p, p) for p in points]
    else:
        points = _parse_numbers(args.points)
        if not points:
            raise ConfigurationError("kernel needs --points or --grid")
        pairs = [(p, q) for p in points for q in points]

    columns = ["y_re", "y_im", "y2_re", "y2_im"]
    for name in ("ds", "s", "s_neg_swapped", "sni"):
        columns += [f"{name}_re", f"{name}_im"]
    table = ResultTable("kernel", columns)
    for y, y2 in pairs:
        evaluation = kernel_entries(f, c, m, y, y2)
        block = evaluation.block()
        a, b = evaluation.at
        table.add(a.value.real, a.value.imag, b.value.real, b.value.imag,
                  block[0, 0].real, block[0, 0].imag, block[0, 1].real, block[0, 1].imag,
                  block[1, 0].real, block[1, 0].imag, block[1, 1].real, block[1, 1].imag)
    table.write(args.out, args.format)
    return table


def cmd_correlate(args) -> ResultTable:
    m, f, c = _family(args)
    x = [p.real for p in _parse_numbers(args.points)]
    z = _parse_numbers(args.complex_points)
    if m.kind is MeasureKind.REAL_ASYMMETRIC:
        value = correlation_asymmetric(f, c, m, x, z)
    else:
        if z:
            raise ConfigurationError(f"--complex-points needs --ensemble {MeasureKind.REAL_ASYMMETRIC.value}")
        value = correlation_hermitian(f, c, m, x)
    oracle = gap = None
    if args.oracle:
        oracle = correlation_bruteforce(m, args.n, x, z)
        gap = abs(value - oracle) / max(abs(oracle), 1e-300)
    table = ResultTable("correlate", ["ensemble", "n", "real_points", "complex_points", "value", "oracle", "relative_gap"])
    table.add(args.ensemble, args.n, _joined([complex(v) for v in x]), _joined(z), value, oracle, gap)
    table.write(args.out, args.format)
    return table


def _sample(args):
    region = Region.parse(args.bins, args.im_bins)
    agent = get_sampling_agent()
    batch = agent.sample_batch(args.ensemble, args.n, args.count, args.seed, progress=args.progress or None)
    return agent, batch, region


def _histogram_columns(region: Region) -> list[str]:
    return ["bin_lo", "bin_hi"] + (["im_lo", "im_hi"] if region.is_complex else [])


def _cells(histogram, i: int) -> list:
    edges = [histogram.bin_lo[i], histogram.bin_hi[i]]
    if histogram.im_lo is not None:
        edges += [histogram.im_lo[i], histogram.im_hi[i]]
    return edges


def cmd_sample(args) -> ResultTable:
    agent, batch, region = _sample(args)
    histogram = agent.density_estimate(batch, region, args.target)
    table = ResultTable("sample", _histogram_columns(region) + ["density", "stderr"])
    for i in range(region.cell_count):
        table.add(*_cells(histogram, i), histogram.density[i], histogram.stderr[i])
    table.write(args.out, args.format)
    return table


def cmd_compare(args) -> ResultTable:
    m, f, c = _family(args)
    agent, batch, region = _sample(args)
    comparison = agent.compare(batch, region, f, c, m, args.target)
    histogram = comparison.histogram
    table = ResultTable("compare", _histogram_columns(region) + ["density", "stderr", "predicted", "z_score"])
    for i in range(region.cell_count):
        table.add(*_cells(histogram, i), histogram.density[i], histogram.stderr[i],
                  comparison.predicted[i], comparison.z_score[i])
    table.write(args.out, args.format)
    return table


COMMANDS = {
    "validate": cmd_validate,
    "partition": cmd_partition,
    "family": cmd_family,
    "kernel": cmd_kernel,
    "correlate": cmd_correlate,
    "sample": cmd_sample,
    "compare": cmd_compare,
}


def _error_record(kind: str, message: str, command: Optional[str]) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "command": command}) + "\n")


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse argv, run one command and return the exit code.

    0 on success, 2 on a usage error, 1 on any library error or failed
    validation (with one JSON error record on stderr).
    """
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        args = _apply_config(args, parser)
        configure_logging(args.log_level)
        COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except PfKernelError as exc:
        _error_record(exc.kind, str(exc), args.command)
        return 1
    except OSError as exc:
        _error_record(type(exc).__name__, str(exc), args.command)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(run())
