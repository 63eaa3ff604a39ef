"""
biharm command line interface.

Exit status: 0 if every check passed, 1 if some check failed (the report
is written anyway), 2 on usage or configuration errors.
"""

# Copyright (C) 2020 The biharm Team

import os
import sys
import json
import logging
import argparse
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from . import adapt
from . import campaign as cp
from . import errors as e
from .config import SampleBudget, budget_to_dict, make_budget
from .constants import ExponentTable, exponent_tables, p_range, parse_dims
from .decay import caccioppoli_check, corner_experiment, decay_fit
from .decay import weighted_caccioppoli
from .enums import Format, IdentityId, Pole, SolveMethod
from .geometry import Polygon2D, convexity_pairs, place_pole
from .identities import SURFACE, IdentityReport, evaluate
from .identities import positivity_chains
from .poly import MultiPoly
from .registry import registry
from .solver import Grid, analytic_data, clamped_data, half_plane_fixtures
from .solver import l2_error, random_cubic, solve_grid
from .types import constants as tconstants
from .types import report as treport
from .version import __version__

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

WORKERS_ENV = "BIHARM_WORKERS"

# header lines of the CSV reports
CSV_HEADERS = {
    IdentityReport: treport.csv_header(),
    ExponentTable: ",".join(tconstants.FIELDS) + "\n",
}


class RunConfig(NamedTuple):
    """The validated parameters of a run, echoed in the report."""

    command: str
    dims: List[int]
    domains: List[str]
    identities: List[str]
    alphas: Optional[List[float]]
    poles: List[str]
    budget: SampleBudget
    seed: int
    output: Optional[str]
    format: Format
    workers: int
    options: Dict[str, Any]

    def echo(self) -> Dict[str, Any]:
        rv = self._asdict()
        rv["budget"] = budget_to_dict(self.budget)
        rv["format"] = self.format.name.lower()
        return rv


class Outcome(NamedTuple):
    results: List[Any]
    passed: bool


# Defaults of the options which can be set in a config file
DEFAULTS: Dict[str, Any] = {
    "dims": None,
    "domains": list(cp.DEFAULT_DOMAINS),
    "identities": "default",
    "alphas": None,
    "poles": ["exterior", "boundary"],
    "budget": None,
    "seed": 0,
    "output": None,
    "format": "json",
    "workers": None,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return EXIT_USAGE if ex.code else EXIT_OK

    _setup_logging(args.verbose - args.quiet)
    try:
        config = make_config(args)
        outcome = COMMANDS[config.command](config)
        write_report(config, outcome)
    except (e.InterfaceError, e.PreconditionError, e.DomainError) as ex:
        logger.error("%s", ex)
        return EXIT_USAGE
    except e.Error as ex:
        logger.error("%s: %s", type(ex).__name__, ex)
        return EXIT_FAILED

    return EXIT_OK if outcome.passed else EXIT_FAILED


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biharm",
        description="Numerical verification of weighted biharmonic"
        " identities.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config", help="JSON file with the run parameters"
    )
    common.add_argument("--output", "-o", help="report file (default stdout)")
    common.add_argument(
        "--format",
        choices=[f.name.lower() for f in Format],
        help="report format (binary only for solve)",
    )
    common.add_argument("--seed", type=int, help="seed of every random draw")
    common.add_argument(
        "--budget", help="quadrature budget, e.g. 'tol=1e-8 order=32'"
    )
    common.add_argument("--workers", type=int, help="parallel workers")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("-q", "--quiet", action="count", default=0)

    p = sub.add_parser(
        "constants", parents=[common], help="exponents and ranges table"
    )
    p.add_argument("--dims", help="dimensions, e.g. '4..12'")
    p.add_argument("--convex", action="store_true", default=None)

    p = sub.add_parser(
        "verify", parents=[common], help="verify the weighted identities"
    )
    p.add_argument("--identity", help="'all', 'default' or a list of names")
    p.add_argument("--domain", help="ball, cube, simplex or a JSON domain")
    p.add_argument("--dim", help="dimensions, e.g. '2,3,4'")
    p.add_argument("--alpha", help="exponents, e.g. '0,1,2'")
    p.add_argument(
        "--pole",
        help="exterior, boundary or a boundary kind"
        f" ({', '.join(x.value for x in Pole)})",
    )

    p = sub.add_parser(
        "positivity", parents=[common], help="positivity at alpha_n"
    )
    p.add_argument("--domain", help="ball or simplex")
    p.add_argument("--dim", help="dimensions, at least 8")
    p.add_argument("--fields", type=int, help="random fields per domain")

    p = sub.add_parser(
        "convexity", parents=[common], help="sign of the surface term"
    )
    p.add_argument("--domain", help="convex domains to test")
    p.add_argument("--dim", help="dimensions")
    p.add_argument("--alpha", help="exponents")
    p.add_argument("--patches", type=int, help="L-shape boundary patches")

    p = sub.add_parser("solve", parents=[common], help="clamped plate solve")
    p.add_argument("--polygon", help="square, l-shape or JSON vertices")
    p.add_argument("--h", type=float, help="grid step")
    p.add_argument(
        "--field", help="boundary data: fixture name, 'zero' or 'cubic'"
    )
    p.add_argument("--method", choices=[m.value for m in SolveMethod])
    p.add_argument("--tol", type=float, help="solver tolerance")

    p = sub.add_parser("decay", parents=[common], help="local energy decay")
    p.add_argument("--fixture", help="analytic fixture name")
    p.add_argument("--runs", type=int, help="L-shape experiments")
    p.add_argument("--h", type=float, help="grid step")
    p.add_argument("--radius", type=float, help="largest radius")
    p.add_argument("--count", type=int, help="number of radii")

    p = sub.add_parser(
        "caccioppoli", parents=[common], help="Caccioppoli ratios"
    )
    p.add_argument("--fixture", help="analytic fixture names")
    p.add_argument("--radii", help="radii, e.g. '0.1,0.2,0.4'")
    p.add_argument("--alpha", help="weight exponent (weighted check)")

    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    """
    Merge the defaults, the config file and the command line flags.
    """
    params = dict(DEFAULTS)
    if args.config:
        params.update(_read_config(args.config))

    flags = {
        "dims": getattr(args, "dims", None) or getattr(args, "dim", None),
        "domains": getattr(args, "domain", None),
        "identities": getattr(args, "identity", None),
        "alphas": getattr(args, "alpha", None),
        "poles": getattr(args, "pole", None),
        "budget": args.budget,
        "seed": args.seed,
        "output": args.output,
        "format": args.format,
        "workers": args.workers,
    }
    params.update({k: v for k, v in flags.items() if v is not None})

    options = {
        k: v
        for k, v in vars(args).items()
        if k not in flags
        and k not in ("config", "command", "verbose", "quiet", "dim")
        and k not in ("domain", "identity", "alpha", "pole")
        and v is not None
    }
    for k, v in params.get("options", {}).items():
        options.setdefault(k, v)

    seed = int(params["seed"])
    budget = make_budget(params["budget"], seed=seed)
    workers = params["workers"]
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)

    try:
        fmt = Format[str(params["format"]).upper()]
    except KeyError:
        raise e.InterfaceError(f"unknown format: {params['format']!r}")
    if fmt is Format.BINARY and args.command != "solve":
        raise e.InterfaceError("the binary format is only used by 'solve'")

    return RunConfig(
        command=args.command,
        dims=_ints(params["dims"]),
        domains=_strings(params["domains"]),
        identities=_identities(params["identities"]),
        alphas=_floats(params["alphas"]),
        poles=_strings(params["poles"]),
        budget=budget,
        seed=seed,
        output=params["output"],
        format=fmt,
        workers=int(workers),
        options=options,
    )


def write_report(config: RunConfig, outcome: Outcome) -> None:
    """
    Write the report in the configured format.

    A JSON report has a header with the version and the timestamp; the
    rest of the document only depends on the config and the seed.
    """
    if config.format is Format.JSON:
        doc = {
            "header": {
                "version": __version__,
                "timestamp": datetime.now(timezone.utc).isoformat(),
            },
            "command": config.command,
            "config": config.echo(),
            "seed": config.seed,
            "passed": outcome.passed,
            "results": [adapt.dump(r) for r in outcome.results],
        }
        text = json.dumps(doc, indent=2, default=_plain) + "\n"
    elif config.format is Format.BINARY:
        if not config.output or len(outcome.results) != 1:
            raise e.InterfaceError("a binary report needs an output file")
        with open(config.output, "wb") as fb:
            fb.write(adapt.dump(outcome.results[0], Format.BINARY))
        logger.info("report written to %s", config.output)
        return
    else:
        parts = [adapt.dump(r, config.format) for r in outcome.results]
        if config.format is Format.CSV and outcome.results:
            header = CSV_HEADERS.get(type(outcome.results[0]))
            if header:
                parts.insert(0, header)
        text = "".join(p if p.endswith("\n") else p + "\n" for p in parts)

    if config.output:
        with open(config.output, "w") as f:
            f.write(text)
        logger.info("report written to %s", config.output)
    else:
        sys.stdout.write(text)


# Commands


def cmd_constants(config: RunConfig) -> Outcome:
    dims = config.dims or list(range(4, 13))
    results: List[Any] = list(exponent_tables(dims))
    if config.format is Format.JSON:
        convex = bool(config.options.get("convex"))
        results.extend(p_range(n, convex) for n in dims)
    return Outcome(results, True)


def cmd_verify(config: RunConfig) -> Outcome:
    dims = config.dims or list(cp.DEFAULT_DIMS)
    if config.alphas is not None:
        for n in dims:
            for a in config.alphas:
                if a >= n and any(p != "exterior" for p in config.poles):
                    raise e.InterfaceError(
                        f"alpha = {a:g} not admissible with a boundary pole"
                        f" in dimension {n}: it must be less than n"
                    )
    cases = cp.plan(
        [IdentityId[name] for name in config.identities],
        dims,
        config.domains,
        config.alphas,
        config.poles,
    )
    camp = cp.run_campaign(cases, config.budget, config.workers)
    results: List[Any] = camp.results
    if config.format is not Format.JSON:
        results = [r.report for r in camp.results if r.report is not None]
    return Outcome(results, camp.passed)


def cmd_positivity(config: RunConfig) -> Outcome:
    dims = config.dims or [8]
    # the clamped fields on the cube exceed the degree cap in 8D
    kinds = [k for k in config.domains if k != "cube"]
    fields = int(config.options.get("fields", 20))
    results = []
    for n in dims:
        for kind in kinds:
            domain = cp.make_domain(kind, n)
            y = place_pole(domain, cp.boundary_pole(kind))
            polys = [
                cp.random_poly(n, 2, config.seed + i) for i in range(fields)
            ]
            results.extend(
                positivity_chains(
                    domain,
                    cp.clamped_fields(domain, polys),
                    y,
                    config.budget,
                    workers=config.workers,
                )
            )
    return Outcome(results, all(r.passed for r in results))


class ConvexityResult(NamedTuple):
    kind: str
    n: int
    alpha: float
    surface: float
    error: float
    passed: bool


class PairResult(NamedTuple):
    polygon: List[List[float]]
    min_pair: float
    passed: bool


def cmd_convexity(config: RunConfig) -> Outcome:
    dims = config.dims or [2, 3, 4]
    results: List[Any] = []
    for n in dims:
        alphas = config.alphas or cp.convexity_alphas(n)
        for kind in config.domains:
            domain = cp.make_domain(kind, n)
            u = cp.clamped_field(domain)
            y = place_pole(domain, cp.boundary_pole(kind))
            for a in alphas:
                if a >= n:
                    continue
                rep = evaluate(
                    IdentityId.I3_1,
                    domain,
                    u,
                    y,
                    a,
                    config.budget,
                    config.workers,
                )
                s, err = rep.terms[SURFACE], rep.errors[SURFACE]
                results.append(
                    ConvexityResult(kind, n, a, s, err, s >= -3.0 * err)
                )

    lshape = Polygon2D.l_shape()
    patches = lshape.boundary_patches(int(config.options.get("patches", 400)))
    pair = convexity_pairs(patches, seed=config.seed)
    results.append(PairResult(lshape.vertices.tolist(), pair, pair < 0))
    return Outcome(results, all(r.passed for r in results))


class SolveSummary(NamedTuple):
    polygon: List[List[float]]
    h: float
    field: str
    method: str
    iterations: int
    residual: float
    converged: bool
    l2_error: Optional[float]


def cmd_solve(config: RunConfig) -> Outcome:
    opts = config.options
    polygon = _polygon(opts.get("polygon", "square"))
    h = float(opts.get("h", 1.0 / 32))
    fname = opts.get("field", "x^3+xy^2")
    method = SolveMethod(opts.get("method", SolveMethod.CG.value))

    grid = Grid(polygon, h)
    exact: Optional[MultiPoly] = None
    if fname == "zero":
        data = clamped_data(grid)
    elif fname == "cubic":
        data = analytic_data(grid, random_cubic(config.seed))
    else:
        exact = _fixture(fname)
        data = analytic_data(grid, exact)

    kwargs = {"tol": float(opts["tol"])} if "tol" in opts else {}
    result = solve_grid(grid, data, method=method, **kwargs)
    if config.format in (Format.CSV, Format.BINARY):
        return Outcome([result], result.converged)

    summary = SolveSummary(
        polygon=polygon.vertices.tolist(),
        h=h,
        field=fname,
        method=method.value,
        iterations=result.iterations,
        residual=result.residual,
        converged=result.converged,
        l2_error=l2_error(result, exact) if exact is not None else None,
    )
    return Outcome([summary], result.converged)


def cmd_decay(config: RunConfig) -> Outcome:
    opts = config.options
    radius = float(opts.get("radius", 0.5))
    count = int(opts.get("count", 5))
    if "fixture" in opts:
        fit = decay_fit(_fixture(opts["fixture"]), (0.0, 0.0), radius, count)
        return Outcome([fit], True)

    runs = int(opts.get("runs", 5))
    h = float(opts.get("h", 1.0 / 128))
    exps = [
        corner_experiment(config.seed + i, h, radius, count)
        for i in range(runs)
    ]
    if config.format is not Format.JSON:
        return Outcome(
            [ex.reentrant for ex in exps], all(x.ordered for x in exps)
        )
    return Outcome(exps, all(x.ordered for x in exps))


class CaccioppoliResult(NamedTuple):
    fixture: str
    alpha: Optional[float]
    radii: List[float]
    ratios: List[float]
    spread: float
    passed: bool


CACCIOPPOLI_RTOL = 0.01


def cmd_caccioppoli(config: RunConfig) -> Outcome:
    opts = config.options
    names = _strings(opts.get("fixture") or ["y^2", "xy^2"])
    radii = _floats(opts.get("radii")) or [0.1, 0.2, 0.4]
    alphas = _floats(config.alphas) or [None]
    results = []
    for name in names:
        v = _fixture(name)
        for a in alphas:
            if a is None:
                ratios = [caccioppoli_check(v, (0.0, 0.0), r) for r in radii]
            else:
                ratios = [
                    weighted_caccioppoli(v, (0.0, 0.0), r, a) for r in radii
                ]
            spread = max(ratios) / min(ratios) - 1.0
            results.append(
                CaccioppoliResult(
                    name, a, radii, ratios, spread, spread <= CACCIOPPOLI_RTOL
                )
            )
    return Outcome(results, all(r.passed for r in results))


COMMANDS: Dict[str, Callable[[RunConfig], Outcome]] = {
    "constants": cmd_constants,
    "verify": cmd_verify,
    "positivity": cmd_positivity,
    "convexity": cmd_convexity,
    "solve": cmd_solve,
    "decay": cmd_decay,
    "caccioppoli": cmd_caccioppoli,
}


@adapt.Dumper.json(ConvexityResult)
@adapt.Dumper.json(PairResult)
@adapt.Dumper.json(SolveSummary)
@adapt.Dumper.json(CaccioppoliResult)
class _RecordDumper(adapt.Dumper):
    def dump(self, obj: Any) -> Dict[str, Any]:
        return obj._asdict()  # type: ignore


# Parsing helpers


def _read_config(path: str) -> Dict[str, Any]:
    try:
        with open(path) as f:
            obj = json.load(f)
    except (OSError, json.JSONDecodeError) as ex:
        raise e.InterfaceError(f"can't read the config {path!r}: {ex}")
    if not isinstance(obj, dict):
        raise e.InterfaceError("the config file should contain an object")
    unknown = set(obj) - set(DEFAULTS) - {"options"}
    if unknown:
        raise e.InterfaceError(
            f"unknown config keys: {', '.join(sorted(unknown))}"
        )
    return obj


def _ints(value: Any) -> List[int]:
    if value is None:
        return []
    if isinstance(value, str):
        return parse_dims(value)
    if isinstance(value, int):
        return [value]
    return [int(v) for v in value]


def _floats(value: Any) -> Optional[List[float]]:
    if value is None:
        return None
    try:
        if isinstance(value, str):
            return [float(v) for v in value.split(",") if v.strip()]
        if isinstance(value, (int, float)):
            return [float(value)]
        return [float(v) for v in value]
    except ValueError:
        raise e.InterfaceError(f"bad numbers list: {value!r}")


def _strings(value: Any) -> List[str]:
    if isinstance(value, str):
        if value.lstrip().startswith(("{", "[")):
            return [value]
        return [v.strip() for v in value.split(",") if v.strip()]
    return [str(v) for v in value]


def _identities(value: Any) -> List[str]:
    names = _strings(value)
    if names == ["all"]:
        return [info.name for info in registry]
    if names == ["default"]:
        return [i.name for i in cp.DEFAULT_IDENTITIES]
    rv = []
    for name in names:
        info = registry.get(name)
        if info is None:
            raise e.InterfaceError(f"unknown identity: {name!r}")
        rv.append(info.name)
    return rv


def _fixture(name: str) -> MultiPoly:
    for f in half_plane_fixtures():
        if f.name == name:
            return f.poly
    names = ", ".join(f.name for f in half_plane_fixtures())
    raise e.InterfaceError(f"unknown fixture {name!r}; available: {names}")


def _polygon(arg: str) -> Polygon2D:
    if arg == "square":
        return Polygon2D.square()
    elif arg in ("l-shape", "lshape"):
        return Polygon2D.l_shape()
    try:
        return Polygon2D(json.loads(arg))
    except json.JSONDecodeError:
        raise e.InterfaceError(f"bad polygon: {arg!r}")


def _plain(obj: Any) -> Any:
    if isinstance(obj, (np.generic, np.ndarray)):
        return obj.tolist()
    if hasattr(obj, "name") and hasattr(obj, "value"):
        return obj.name
    raise TypeError(f"can't serialize {type(obj).__name__}")


def _setup_logging(verbosity: int) -> None:
    level = {-1: logging.ERROR, 0: logging.WARNING, 1: logging.INFO}.get(
        verbosity, logging.DEBUG if verbosity > 1 else logging.CRITICAL
    )
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
