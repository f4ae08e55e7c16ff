"""
Command-line front end: ``kac-roots <command> [flags]``.

Exit codes: 0 on success, 2 on usage or configuration errors, 1 when a
computation or an output file fails.  Data goes to stdout or the files
named by ``--out``/``--summary``/``--svg``; diagnostics go to stderr
through logging.
"""

import argparse
import csv
import json
import logging
import math
import sys
from contextlib import contextmanager
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, TextIO, Tuple

from . import __version__
from .config import (
    IsolationConfig,
    QuadratureConfig,
    RunConfig,
    default_log_level,
    default_threads,
    load_config_file,
)
from .ek_density import DensityQuery, asymptotic_expectation, density, expected_roots
from .ensembles import Distribution, EnsembleSpec
from .errors import ConfigError, KacRootsError, OutputError
from .experiments import (
    BulkWindow,
    run_bulk,
    run_doubles,
    run_edge,
    run_gap,
    run_jensen,
    run_smallball,
    run_truncation,
    simulate,
    smallball_slope,
    summarize_records,
    truncation_keep,
    truncation_margin,
    write_records_csv,
)
from .plotting import Series, emit_svg
from .root_count import RootRange

logger = logging.getLogger(__name__)

PROG = "kac-roots"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

__all__ = ["main", "build_parser", "emit_svg", "configure_logging"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so :func:`main` can print one line and return 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _interval(text: str) -> Tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected A,B but got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two numbers, got {text!r}") from None
    if math.isnan(lo) or math.isnan(hi) or lo > hi:
        raise argparse.ArgumentTypeError(f"expected A <= B, got {text!r}")
    return lo, hi


def _degree_grid(text: str) -> List[int]:
    parts = text.split(":")
    try:
        lo, hi, step = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI:STEP, got {text!r}") from None
    if step < 1 or lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"need 1 <= LO <= HI and STEP >= 1, got {text!r}")
    return list(range(lo, hi + 1, step))


def _float_list(text: str) -> List[float]:
    try:
        values = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("expected at least one number")
    return values


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="FILE.json", help="JSON file whose keys mirror flag names")
    p.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")


def _add_ensemble(p: argparse.ArgumentParser, samples: bool = True) -> None:
    p.add_argument("--degree", type=int, help="polynomial degree n")
    p.add_argument("--dist", default="gaussian", help="gaussian, rademacher, uniform_pm1 or three_point")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    if samples:
        p.add_argument("--samples", type=int, help="number of samples M")
    p.add_argument("--threads", type=int, help="worker processes (default: $KAC_ROOTS_THREADS or 1)")


def build_parser() -> Tuple[argparse.ArgumentParser, Dict[str, argparse.ArgumentParser]]:
    parser = _Parser(prog=PROG, description="Real roots of random Kac polynomials")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands: Dict[str, argparse.ArgumentParser] = {}

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text)
        _add_common(p)
        commands[name] = p
        return p

    p = command("density", "evaluate or integrate the Gaussian real-root density")
    p.add_argument("--degree", type=int, help="polynomial degree n")
    p.add_argument("--from", dest="lo", type=float, help="left end A")
    p.add_argument("--to", dest="hi", type=float, help="right end B")
    p.add_argument("--points", type=int, help="tabulate the density at K equally spaced points")
    p.add_argument("--integrate", action="store_true", help="integrate the density over [A, B]")
    p.add_argument("--tol", type=float, default=1e-10, help="relative tolerance for --integrate")
    p.add_argument("--out", default="-", help="output file (default: stdout)")

    p = command("expect", "expected number of real roots of the Gaussian Kac polynomial")
    p.add_argument("--degree", type=int, help="polynomial degree n")
    p.add_argument("--asymptotic", action="store_true", help="use the asymptotic expansion")
    p.add_argument("--tol", type=float, default=1e-10, help="quadrature relative tolerance")

    p = command("simulate", "per-sample root counts as CSV")
    _add_ensemble(p)
    p.add_argument("--interval", type=_interval, help="count roots in (A, B], given as A,B")
    p.add_argument("--out", help="CSV output file, - for stdout")
    p.add_argument("--summary", help="JSON summary file")

    p = command("compare", "Gaussian and Rademacher mean root counts over a degree grid")
    p.add_argument("--degrees", type=_degree_grid, help="LO:HI:STEP, inclusive")
    p.add_argument("--samples", type=int, help="samples per degree and ensemble")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--threads", type=int, help="worker processes")
    p.add_argument("--out", help="CSV output file, - for stdout")
    p.add_argument("--svg", help="SVG chart of both means")

    p = command("doubles", "near-double roots in the bulk window")
    _add_ensemble(p)
    p.add_argument("--b0inv", type=float, default=0.2, help="window starts at 1 - B0INV")
    p.add_argument("--b1", type=float, default=4.0, help="window ends at 1 - B1 ln(n)/n")
    p.add_argument("--deriv-exponents", type=_float_list, default="8", help="thresholds n**-B for |P'|")
    p.add_argument("--gap-exponent", type=float, default=12.0, help="root gap threshold n**-G")
    p.add_argument("--width-exp", type=int, default=80, help="isolation width 2**-W")
    p.add_argument("--out", help="CSV output file, - for stdout")
    p.add_argument("--summary", help="JSON summary file")

    p = command("smallball", "empirical P(|P(x)| <= gamma)")
    _add_ensemble(p)
    p.add_argument("--x", help="evaluation point (read as a binary float)")
    p.add_argument("--gammas", type=_float_list, help="comma-separated thresholds")
    p.add_argument("--out", default="-", help="CSV output file (default: stdout)")
    p.add_argument("--summary", help="JSON file with the fitted log-log slope")

    p = command("truncate", "root counts of P_n against its truncation P_m")
    _add_ensemble(p)
    p.add_argument("--keep", type=int, help="truncation degree m")
    p.add_argument("--margin", type=float, help="derive m from the margin r instead")
    p.add_argument("--bound-exp", type=float, default=8.0, help="exponent B in m = 4 B ln(n) / r")
    p.add_argument("--interval", type=_interval, help="interval J as A,B")
    p.add_argument("--out", default="-", help="JSON output file (default: stdout)")

    p = command("edge", "mean count on [0, 1 - 1/C) against the Gaussian edge bound")
    _add_ensemble(p)
    p.add_argument("--cap", type=float, help="C > 1")
    p.add_argument("--mirrored", action="store_true", help="also count on (-(1 - 1/C), 0)")
    p.add_argument("--out", default="-", help="JSON output file (default: stdout)")

    p = command("bulk", "mean count on (1 - 1/C, 1] against the Gaussian integral")
    _add_ensemble(p)
    p.add_argument("--cap", type=float, help="C > 1")
    p.add_argument("--out", default="-", help="JSON output file (default: stdout)")

    p = command("jensen", "Jensen bound against exact counts on [-r, r]")
    _add_ensemble(p)
    p.add_argument("--r", type=float, help="inner radius")
    p.add_argument("--R", dest="big_r", type=float, help="circle radius, r < R < 1")
    p.add_argument("--k", type=int, default=0, help="derivative order")
    p.add_argument("--out", default="-", help="JSON output file (default: stdout)")
    return parser, commands


# flag names whose argparse dest differs
_CONFIG_ALIASES = {"from": "lo", "to": "hi", "R": "big_r"}


# Flags whose A,B value may start with a minus sign, which argparse would read as an option.
_PAIR_FLAGS = ("--interval",)


def _attach_pair_values(argv: Sequence[str]) -> List[str]:
    """Rewrite ``--interval -0.5,0.5`` as ``--interval=-0.5,0.5``."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in _PAIR_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") and "," in argv[i + 1]:
            out.append(f"{token}={argv[i + 1]}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    """Parse flags, filling gaps from ``--config``; flags given on the line win."""
    parser, commands = build_parser()
    args = parser.parse_args(_attach_pair_values(argv))
    if args.command is None:
        raise UsageError("a command is required")
    if args.config:
        values = {
            _CONFIG_ALIASES.get(key, key): value
            for key, value in load_config_file(args.config).items()
        }
        allowed = set(vars(args)) - {"command", "config"}
        unknown = sorted(set(values) - allowed)
        if unknown:
            raise ConfigError(f"unknown key {unknown[0]!r}", flag="--config")
        for key, value in values.items():
            if isinstance(value, list):
                values[key] = ",".join(str(v) for v in value)
        commands[args.command].set_defaults(**values)
        args = parser.parse_args(argv)
    return args


def configure_logging(verbosity: int) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        name = default_log_level() or "WARNING"
        level = logging.getLevelName(name)
        if not isinstance(level, int):
            raise ConfigError(f"unknown log level {name!r}", flag="KAC_ROOTS_LOG_LEVEL")
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    pkg_logger = logging.getLogger("kac_roots")
    pkg_logger.handlers[:] = [handler]
    pkg_logger.setLevel(level)


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            flag = "--" + ("from" if name == "lo" else "to" if name == "hi" else name.replace("_", "-"))
            raise ConfigError("is required", flag=flag)


@contextmanager
def _flag(name: str) -> Iterator[None]:
    """Re-raise validation failures as :class:`ConfigError` for ``name``."""
    try:
        yield
    except ConfigError:
        raise
    except (KacRootsError, ValueError) as e:
        raise ConfigError(str(e), flag=name) from None


@contextmanager
def open_output(path: str) -> Iterator[TextIO]:
    if path == "-":
        yield sys.stdout
        return
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as e:
        raise OutputError(path, e.strerror or str(e)) from None
    with fh:
        yield fh


def _write_json(path: str, payload: Dict[str, Any]) -> None:
    with open_output(path) as fh:
        fh.write(json.dumps(payload, indent=2) + "\n")


def _spec(args: argparse.Namespace) -> EnsembleSpec:
    _require(args, "degree")
    with _flag("--dist"):
        dist = Distribution.parse(args.dist)
    with _flag("--degree"):
        return EnsembleSpec(dist, args.degree, args.seed)


def _positive(args: argparse.Namespace, name: str) -> None:
    _require(args, name)
    if getattr(args, name) < 1:
        raise ConfigError(f"must be >= 1, got {getattr(args, name)}", flag="--" + name)


def _half_open(bounds: Optional[Tuple[float, float]]) -> Optional[RootRange]:
    if bounds is None:
        return None
    lo, hi = bounds
    return RootRange.half_open(lo, hi)


def cmd_density(config: RunConfig, args: argparse.Namespace) -> None:
    _require(args, "degree", "lo", "hi")
    if args.points is None and not args.integrate:
        raise ConfigError("one of --points or --integrate is required", flag="--points")
    with _flag("--degree"):
        query = DensityQuery(args.degree, args.lo, args.hi, args.tol)
    if args.integrate:
        result = expected_roots(query, QuadratureConfig(rel_tol=args.tol))
        with open_output(config.out or "-") as fh:
            fh.write(f"{result.value!r}\n")
        return
    if args.points < 1:
        raise ConfigError(f"must be >= 1, got {args.points}", flag="--points")
    if not (math.isfinite(args.lo) and math.isfinite(args.hi)):
        raise ConfigError("tabulation needs finite endpoints", flag="--points")
    k = args.points
    ts = [args.lo] if k == 1 else [args.lo + (args.hi - args.lo) * i / (k - 1) for i in range(k)]
    with open_output(config.out or "-") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "density"])
        for t in ts:
            writer.writerow([repr(t), repr(density(args.degree, t))])


def cmd_expect(config: RunConfig, args: argparse.Namespace) -> None:
    _require(args, "degree")
    if args.asymptotic:
        with _flag("--degree"):
            value = asymptotic_expectation(args.degree)
    else:
        with _flag("--degree"):
            query = DensityQuery.full_line(args.degree, args.tol)
        value = expected_roots(query, QuadratureConfig(rel_tol=args.tol)).value
    print(repr(value))


def cmd_simulate(config: RunConfig, args: argparse.Namespace) -> None:
    spec = _spec(args)
    _positive(args, "samples")
    _require(args, "out")
    query = _half_open(args.interval)
    records = simulate(spec, args.samples, query, threads=config.threads)
    with open_output(args.out) as fh:
        write_records_csv(records, fh)
    if config.summary:
        _write_json(config.summary, summarize_records(records).to_dict(spec))


def cmd_compare(config: RunConfig, args: argparse.Namespace) -> None:
    _require(args, "degrees", "out")
    _positive(args, "samples")
    rows = run_gap(args.degrees, args.samples, args.seed, threads=config.threads)
    with open_output(args.out) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["degree", "mean_gauss", "mean_rad", "gap", "ci_gauss", "ci_rad"])
        for r in rows:
            writer.writerow([r.degree] + [repr(v) for v in (r.mean_gauss, r.mean_rad, r.gap, r.ci_gauss, r.ci_rad)])
    if config.svg:
        emit_svg(
            [
                Series("gaussian", tuple((r.degree, r.mean_gauss) for r in rows)),
                Series("rademacher", tuple((r.degree, r.mean_rad) for r in rows)),
            ],
            config.svg,
            title="Sample means of the number of real roots",
            x_label="degree n",
            y_label="mean real roots",
        )


def cmd_doubles(config: RunConfig, args: argparse.Namespace) -> None:
    spec = _spec(args)
    _positive(args, "samples")
    _require(args, "out")
    window = BulkWindow(args.b0inv, args.b1)
    with _flag("--b0inv"):
        window.bounds(spec.degree)
    with _flag("--width-exp"):
        isolation = IsolationConfig(width_exp=args.width_exp)
    result = run_doubles(
        spec,
        args.samples,
        window,
        args.deriv_exponents,
        args.gap_exponent,
        isolation,
        threads=config.threads,
    )
    with open_output(args.out) as fh:
        write_records_csv(result.records, fh)
    if config.summary:
        _write_json(config.summary, result.summary.to_dict(spec))


def cmd_smallball(config: RunConfig, args: argparse.Namespace) -> None:
    spec = _spec(args)
    _positive(args, "samples")
    _require(args, "x", "gammas")
    if any(g < 0 for g in args.gammas):
        raise ConfigError("thresholds must be nonnegative", flag="--gammas")
    try:
        x = float(args.x)
    except ValueError:
        raise ConfigError(f"expected a number, got {args.x!r}", flag="--x") from None
    if not math.isfinite(x):
        raise ConfigError(f"expected a finite number, got {args.x!r}", flag="--x")
    rows = run_smallball(spec, args.samples, x, args.gammas, threads=config.threads)
    with open_output(config.out or "-") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["gamma", "probability", "hits"])
        for r in rows:
            writer.writerow([repr(r.gamma), repr(r.probability), r.hits])
    if config.summary:
        try:
            slope: Optional[float] = smallball_slope(rows)
        except KacRootsError as e:
            logger.warning("no slope: %s", e)
            slope = None
        _write_json(config.summary, {"spec": spec.to_dict(), "M": args.samples, "x": x, "slope": slope})


def cmd_truncate(config: RunConfig, args: argparse.Namespace) -> None:
    spec = _spec(args)
    _positive(args, "samples")
    _require(args, "interval")
    if (args.keep is None) == (args.margin is None):
        raise ConfigError("give exactly one of --keep or --margin", flag="--keep")
    with _flag("--margin" if args.keep is None else "--keep"):
        keep = args.keep if args.keep is not None else truncation_keep(spec.degree, args.margin, args.bound_exp)
        if not 0 <= keep <= spec.degree:
            raise ConfigError(f"truncation degree {keep} outside [0, {spec.degree}]", flag="--keep")
    margin = truncation_margin(spec.degree, keep, args.bound_exp) if keep >= 1 else None
    result = run_truncation(spec, args.samples, keep, _half_open(args.interval), threads=config.threads)
    _write_json(
        config.out or "-",
        {
            "spec": spec.to_dict(),
            "M": args.samples,
            "keep": result.keep,
            "margin": margin,
            "mean_full": result.mean_full,
            "mean_truncated": result.mean_truncated,
            "difference": result.difference,
            "paired_ci_halfwidth": result.paired.ci_halfwidth,
            "identical_fraction": result.identical_fraction,
        },
    )


def cmd_edge(config: RunConfig, args: argparse.Namespace) -> None:
    spec = _spec(args)
    _positive(args, "samples")
    _require(args, "cap")
    if not args.cap > 1:
        raise ConfigError(f"must be > 1, got {args.cap}", flag="--cap")
    summary = run_edge(spec, args.samples, args.cap, args.mirrored, threads=config.threads)
    _write_json(config.out or "-", summary.to_dict(spec))


def cmd_bulk(config: RunConfig, args: argparse.Namespace) -> None:
    spec = _spec(args)
    _positive(args, "samples")
    _require(args, "cap")
    if not args.cap > 1:
        raise ConfigError(f"must be > 1, got {args.cap}", flag="--cap")
    summary = run_bulk(spec, args.samples, args.cap, threads=config.threads)
    _write_json(config.out or "-", summary.to_dict(spec))


def cmd_jensen(config: RunConfig, args: argparse.Namespace) -> None:
    spec = _spec(args)
    _positive(args, "samples")
    _require(args, "r", "big_r")
    if not 0 < args.r < args.big_r < 1:
        raise ConfigError(f"need 0 < r < R < 1, got r={args.r}, R={args.big_r}", flag="--r")
    summary = run_jensen(spec, args.samples, args.r, args.big_r, args.k, threads=config.threads)
    _write_json(config.out or "-", summary.to_dict(spec))


COMMANDS: Dict[str, Callable[[RunConfig, argparse.Namespace], None]] = {
    "density": cmd_density,
    "expect": cmd_expect,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "doubles": cmd_doubles,
    "smallball": cmd_smallball,
    "truncate": cmd_truncate,
    "edge": cmd_edge,
    "bulk": cmd_bulk,
    "jensen": cmd_jensen,
}


def _run_config(args: argparse.Namespace) -> RunConfig:
    threads = getattr(args, "threads", None)
    if threads is None:
        threads = default_threads()
    return RunConfig(
        command=args.command,
        options=dict(vars(args)),
        threads=threads,
        out=getattr(args, "out", None),
        summary=getattr(args, "summary", None),
        svg=getattr(args, "svg", None),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        configure_logging(args.verbose)
        config = _run_config(args)
        COMMANDS[config.command](config, args)
    except (UsageError, ConfigError) as e:
        print(f"{PROG}: error: {e}", file=sys.stderr)
        return 2
    except KacRootsError as e:
        print(f"{PROG}: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
