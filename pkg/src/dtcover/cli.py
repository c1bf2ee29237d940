"""
Command line front end: ``dtcover invariant | verify | k3``.

Exit codes: 0 success, 1 configuration or parse error, 2 missing base data,
3 unsupported configuration, 4 an identity check failed.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, NoReturn, Optional, Sequence

from .arith import format_rational, is_prime
from .config import CurveConfig, config_from_family, load_config
from .coverage import formula_coverage
from .errors import (
    ConfigurationError,
    ContextError,
    GraphDomainError,
    MissingDataError,
    SeriesDomainError,
    UnsupportedError,
)
from .invariants import GeometryKind, WeightKind, default_provider
from .k3 import MukaiVector, j_prime_case, j_value
from .parabolic import IDENTITIES, Report, VerifyContext
from .reduction import Certificate, ReductionEngine, ReductionStep

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_MISSING_BASE = 2
EXIT_UNSUPPORTED = 3
EXIT_IDENTITY_FAILED = 4


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as ConfigurationError so they exit with EXIT_CONFIG."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        raise ConfigurationError(f"{self.prog}: {message}")


def _parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )

    curve = argparse.ArgumentParser(add_help=False)
    curve.add_argument(
        "config", nargs="?", default=None, help="JSON configuration file, '-' for stdin"
    )
    curve.add_argument("--family", help="built-in configuration such as I1, I3, A2, theta")
    curve.add_argument(
        "--geometry",
        choices=[kind.value for kind in GeometryKind],
        help="local geometry, required with --family",
    )
    curve.add_argument("--weight", choices=[weight.value for weight in WeightKind])

    parser = _ArgumentParser(
        prog="dtcover",
        description="Exact local DT invariants of nodal rational curves by cyclic covers.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    invariant = commands.add_parser(
        "invariant", parents=[common, curve], help="compute N_{n,gamma}"
    )
    invariant.add_argument("--gamma", required=True, help="multidegree, e.g. 2 or 1,1")
    invariant.add_argument("--n", type=int, default=0)
    invariant.add_argument(
        "--certificate", action="store_true", help="print the reduction certificate"
    )

    verify = commands.add_parser(
        "verify", parents=[common, curve], help="check an identity over a range"
    )
    verify.add_argument("--identity", required=True, choices=IDENTITIES.keys())
    verify.add_argument("--truncation", type=int, default=4)
    verify.add_argument("--n-bound", type=int, default=6)
    verify.add_argument("--n", type=_int_list, default=[0, 1], help="n values, e.g. 0,1")
    verify.add_argument("--h-sheet", type=int, default=0)
    verify.add_argument("--certificate", action="store_true")

    k3 = commands.add_parser("k3", parents=[common], help="J(0, m c1(L), n) on a K3")
    k3.add_argument("--d", type=int, required=True, help="L^2 = 2d - 2")
    k3.add_argument("--m", type=int, required=True, help="multiplicity of c1(L)")
    k3.add_argument("--n", type=int, default=0)
    k3.add_argument(
        "--conjectural",
        action="store_true",
        help="evaluate outside the proven range (composite m > 10)",
    )
    return parser.parse_args(argv)


def _configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


def _load(args: argparse.Namespace) -> CurveConfig:
    if args.family:
        if args.config is not None:
            raise ConfigurationError("pass a configuration file or --family, not both")
        if args.geometry is None:
            raise ConfigurationError("--family needs --geometry")
        config = config_from_family(args.family, GeometryKind(args.geometry))
    elif args.config is None or args.config == "-":
        config = load_config(sys.stdin)
    else:
        config = load_config(args.config)
    if args.family is None and args.geometry is not None:
        if GeometryKind(args.geometry) is not config.kind:
            raise ConfigurationError("--geometry disagrees with the configuration file")
    if args.weight is not None:
        config = config.with_weight(WeightKind(args.weight))
    return config


def _emit(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _render_step(step: ReductionStep, depth: int = 0) -> List[str]:
    pad = "  " * depth
    line = (
        f"{pad}N1({step.gamma.label()}) = {format_rational(step.value)}"
        f"  [l={step.length}, g={step.genus if step.genus is not None else '-'}, {step.rule}"
    )
    if step.m is not None:
        line += f", m={step.m}, cut {step.cut_edge}"
    lines = [line + "]"]
    for lift in step.lifts:
        lines.append(
            f"{pad}  lift {lift.cls.label()} x{lift.orbit_size}: {format_rational(lift.value)}"
        )
    for child in step.children:
        lines.extend(_render_step(child, depth + 1))
    return lines


def _render_certificate(certificate: Certificate) -> List[str]:
    lines = [f"rule: {certificate.rule}"]
    if certificate.note:
        lines.append(f"note: {certificate.note}")
    for k, value in certificate.terms:
        lines.append(f"k={k}: N1 = {format_rational(value)}")
    for assumption in certificate.assumptions:
        lines.append(f"assumes: {assumption}")
    for step in certificate.steps:
        lines.extend(_render_step(step))
        traces = [" -> ".join(f"(l={l}, g={g})" for l, g in path) for path in step.paths()]
        lines.append("trace: " + " | ".join(traces))
    return lines


def cmd_invariant(args: argparse.Namespace) -> int:
    config = _load(args)
    gamma = config.parse_class(args.gamma)
    engine = ReductionEngine(config.kind, config.weight, default_provider(config.provider()))
    evaluation = engine.evaluate(config.graph, gamma, args.n)
    coverage = formula_coverage(config.graph, gamma, config.kind, config.weight)
    certificate = evaluation.certificate
    if args.json:
        payload: Dict[str, Any] = {
            "gamma": gamma.label(),
            "n": args.n,
            "value": format_rational(evaluation.value),
            "coverage": coverage.to_dict(),
        }
        if args.certificate:
            payload["certificate"] = certificate.to_dict()
        _emit(payload)
        return EXIT_OK
    text = format_rational(evaluation.value)
    if certificate.rule.startswith("vanishing:"):
        text += f" ({certificate.note})"
    print(text)
    if args.certificate:
        for line in _render_certificate(certificate):
            print(line)
        print(f"coverage: {coverage.statement.value} (proven={coverage.proven})")
    return EXIT_OK


def _report_line(report: Report) -> str:
    return (
        f"{report.verdict} {report.identity} {report.subject}: "
        f"lhs={format_rational(report.lhs)} rhs={format_rational(report.rhs)}"
    )


def cmd_verify(args: argparse.Namespace) -> int:
    if args.identity == "euler-counterexample" and args.config is None and not args.family:
        # the counterexample lives on a single (-1,-1)-curve; no input is read
        config = config_from_family("A1", GeometryKind.SUPER_RIGID)
    else:
        config = _load(args)
    context = VerifyContext(
        config.graph,
        config.kind,
        config.weight,
        config.provider(),
        truncation=args.truncation,
        n_bound=args.n_bound,
        n_values=tuple(args.n),
        h_sheet=args.h_sheet,
    )
    reports = IDENTITIES.get(args.identity)(context)
    passed = sum(report.passed for report in reports)
    ok = passed == len(reports)
    if args.json:
        _emit(
            {
                "identity": args.identity,
                "passed": passed,
                "total": len(reports),
                "verdict": "PASS" if ok else "FAIL",
                "reports": [report.to_dict() for report in reports],
            }
        )
    else:
        for report in reports:
            print(_report_line(report))
            if args.certificate:
                print("  " + json.dumps(report.certificate, sort_keys=True))
        print(f"{args.identity}: {passed}/{len(reports)} passed")
    return EXIT_OK if ok else EXIT_IDENTITY_FAILED


def cmd_k3(args: argparse.Namespace) -> int:
    if args.d < 1 or args.m < 1:
        raise ConfigurationError("k3 needs d >= 1 and m >= 1")
    result = j_value(MukaiVector(0, args.m, args.d, args.n))
    if result.conjectural and not args.conjectural:
        raise UnsupportedError(
            f"m = {args.m} is outside the proven range; pass --conjectural to evaluate"
        )
    value = result.value
    if args.n == 0 and is_prime(args.m):
        value = j_prime_case(args.d, args.m)
    if args.json:
        _emit(result.to_dict())
    else:
        print(format_rational(value) + (" (conjectural)" if result.conjectural else ""))
    return EXIT_OK


COMMANDS = {"invariant": cmd_invariant, "verify": cmd_verify, "k3": cmd_k3}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _parse_args(argv)
        _configure_logging(args.verbose)
        return COMMANDS[args.command](args)
    except MissingDataError as error:
        print(f"error: missing base data: {error}", file=sys.stderr)
        return EXIT_MISSING_BASE
    except UnsupportedError as error:
        print(f"error: unsupported: {error}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ConfigurationError, GraphDomainError, SeriesDomainError, ContextError) as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
