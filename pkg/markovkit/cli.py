"""Command-line surface.

Exit codes:
    0  success (an inconclusive certificate is still a success)
    1  validation failure or usage error
    2  hypothesis check negative (``--require`` unmet, sections not constructible)
    3  internal error (unintended collision, failed re-verification, unexpected exception)
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from markovkit import __version__
from markovkit.config import (
    CERTIFICATE_SUFFIX,
    DEFAULT_DEPTH,
    DEFAULT_SCHEDULE,
    DEFAULT_THREAD_LIMIT,
    Settings,
)
from markovkit.errors import (
    ConstructionFailed,
    DiagramInvalid,
    DiagramSyntaxError,
    DuplicateName,
    IndexOutOfRange,
    MarkovError,
    PreconditionFailed,
    UnintendedCollision,
    UnknownReference,
    UnsupportedFormat,
)
from markovkit.models.diagram import MarkovDiagram
from markovkit.models.verdicts import Certificate
from markovkit.services.builtins import BuiltinLibrary
from markovkit.services.diagram_checks import DiagramValidator
from markovkit.services.dsl import DiagramCodec
from markovkit.services.expansion import DecompositionChecker, ExpansionEngine
from markovkit.services.export import EXPORT_FORMATS, Exporter
from markovkit.services.metrics import LimitMetrics
from markovkit.services.theorems import TheoremChecker

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NEGATIVE = 2
EXIT_INTERNAL = 3

REQUIREMENTS = ("connected", "locally-connected", "disjoint-arcs", "menger")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the validation-failure code instead of argparse's 2."""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _load(args: argparse.Namespace) -> MarkovDiagram:
    if args.builtin:
        return BuiltinLibrary.get(args.builtin)
    if not args.path:
        raise UsageError("give a diagram file or --builtin NAME")
    path = Path(args.path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}")
    return DiagramCodec.parse(text)


def _write(out: Optional[str], filename: str, text: str | bytes) -> Path:
    directory = Path(out or ".")
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / filename
    if isinstance(text, bytes):
        target.write_bytes(text)
    else:
        target.write_text(text, encoding="utf-8")
    return target


def cmd_validate(args: argparse.Namespace) -> int:
    diagram = _load(args)
    report = DiagramValidator.validate_diagram(diagram)
    print(
        f"{diagram.name}: valid={report.valid} elementary={report.elementary} "
        f"complete={report.complete}"
    )
    for row in report.coverage:
        gluings = ", ".join(f"{k}={'/'.join(v) or '-'}" for k, v in row.gluings.items())
        suffix = f"  [{gluings}]" if gluings else ""
        print(f"  {row.signature} -> {row.production or '-'}{suffix}")
    for violation in report.failures():
        print(f"{violation.code}: {violation.message}")
    if args.json:
        print(report.model_dump_json(indent=2))
    ok = report.valid and (not report.elementary or report.complete)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_expand(args: argparse.Namespace) -> int:
    diagram = _load(args)
    levels = ExpansionEngine(diagram).expand(args.depth)
    verdicts = DecompositionChecker(diagram).verify_levels(levels)

    print(Exporter.level_table(levels).to_string(index=False))
    for verdict in verdicts:
        status = "ok" if verdict.ok else f"FAILED ({len(verdict.violations)})"
        print(f"decomposition {verdict.level - 1} <- {verdict.level}: {status}")
        for violation in verdict.violations[:10]:
            print(f"  {violation.code}: {violation.message}")

    if args.out:
        for state in levels:
            text = Exporter.export_graph(
                state.graph,
                args.format,
                name=diagram.name,
                level=state.index,
                palette=diagram.palette,
            )
            _write(args.out, f"{diagram.name}.level{state.index}.{args.format}", text)
        dump = DiagramCodec.serialize_levels(diagram, levels)
        _write(args.out, f"{diagram.name}.levels.json", dump)
        _write(args.out, f"{diagram.name}.levels.csv", Exporter.levels_csv(levels))
        print(f"wrote {len(levels)} levels to {args.out}")

    return EXIT_OK if all(v.ok for v in verdicts) else EXIT_INTERNAL


def _requirement_met(certificate: Certificate, requirement: str) -> bool:
    if requirement == "menger":
        return certificate.label == "MengerCurve"
    wanted = {
        "connected": "connected",
        "locally-connected": "locallyConnected",
        "disjoint-arcs": "disjointArcs",
    }[requirement]
    return wanted in certificate.properties


def cmd_check(args: argparse.Namespace) -> int:
    diagram = _load(args)
    try:
        schedule = LimitMetrics.parse_schedule(args.schedule, args.kappa)
    except (PreconditionFailed, ValueError) as e:
        raise UsageError(f"bad schedule: {e}")
    certificate = TheoremChecker.certify(
        diagram,
        args.depth,
        schedule=schedule,
        with_metrics=not args.no_metrics,
        timestamp=args.timestamp,
    )
    text = DiagramCodec.serialize_certificate(certificate)
    if args.out:
        target = _write(args.out, f"{diagram.name}{CERTIFICATE_SUFFIX}", text)
        if args.pdf:
            _write(args.out, f"{diagram.name}.pdf", Exporter.render_certificate_pdf(certificate))
        print(f"{diagram.name}: {certificate.label} ({', '.join(certificate.properties) or '-'})")
        print(f"certificate written to {target}")
    else:
        sys.stdout.write(text)

    unmet = [r for r in args.require if not _requirement_met(certificate, r)]
    for requirement in unmet:
        print(f"required property not certified: {requirement}", file=sys.stderr)
    return EXIT_NEGATIVE if unmet else EXIT_OK


def cmd_sections(args: argparse.Namespace) -> int:
    diagram = _load(args)
    report = DiagramValidator.validate_diagram(diagram)
    if not report.valid:
        raise DiagramInvalid(report)
    verdict = TheoremChecker.check_dap(diagram, report)
    if verdict.conclusion != "DAP":
        codes = sorted({f.code for f in verdict.failures})
        raise PreconditionFailed(f"disjoint arcs hypotheses fail: {', '.join(codes)}")

    levels = ExpansionEngine(diagram, report).expand(args.level + 1)
    pair = TheoremChecker.build_sections(diagram, levels, args.level, report)
    check = TheoremChecker.verify_sections(levels, pair)
    text = json.dumps(
        {"pair": pair.model_dump(mode="json"), "check": check.model_dump(mode="json")},
        indent=2,
    )
    if args.out:
        _write(args.out, f"{diagram.name}.sections{args.level}.json", text + "\n")
    else:
        print(text)
    pairings = sorted(set(pair.pairings.values()))
    print(
        f"{diagram.name}: sections at level {args.level} "
        f"{'verified' if check.ok else 'FAILED verification'} (pairings: {', '.join(pairings)})",
        file=sys.stderr,
    )
    return EXIT_OK if check.ok else EXIT_INTERNAL


def cmd_threads(args: argparse.Namespace) -> int:
    diagram = _load(args)
    levels = ExpansionEngine(diagram).expand(args.depth)
    enumeration = LimitMetrics.enumerate_threads(levels, args.depth, args.limit)
    for thread in enumeration.threads:
        print(" <- ".join(str(point) for point in reversed(thread.points)))
    if enumeration.truncated:
        print(
            f"LimitExceeded: showing {len(enumeration.threads)} of {enumeration.total} threads",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    diagram = _load(args)
    if args.level == 1:
        graph = diagram.start
    else:
        graph = ExpansionEngine(diagram).expand(args.level)[-1].graph
    text = Exporter.export_graph(
        graph, args.format, name=diagram.name, level=args.level, palette=diagram.palette
    )
    if args.out:
        target = _write(args.out, f"{diagram.name}.level{args.level}.{args.format}", text)
        print(f"wrote {target}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="markovkit", description="Markov compacta diagram engine and checker")
    parser.add_argument("--version", action="version", version=f"markovkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    source = _Parser(add_help=False)
    source.add_argument("path", nargs="?", help="diagram file (.mdgm)")
    source.add_argument("--builtin", choices=BuiltinLibrary.names(), help="builtin diagram")

    p = sub.add_parser("validate", parents=[source], help="validate a diagram")
    p.add_argument("--json", action="store_true", help="also print the full report")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("expand", parents=[source], help="expand levels and re-verify them")
    p.add_argument("--depth", type=_positive, default=DEFAULT_DEPTH)
    p.add_argument("--out", help="directory for level exports")
    p.add_argument("--format", choices=EXPORT_FORMATS, default="dot")
    p.set_defaults(handler=cmd_expand)

    p = sub.add_parser("check", parents=[source], help="certify a diagram")
    p.add_argument("--depth", type=_positive, default=DEFAULT_DEPTH)
    p.add_argument("--schedule", default=DEFAULT_SCHEDULE, help="halving|constant|list:k1,k2,...")
    p.add_argument("--kappa", default="1", help="kappa_1 as a rational, e.g. 1/2")
    p.add_argument("--require", action="append", choices=REQUIREMENTS, default=[])
    p.add_argument("--out", help="directory for the certificate")
    p.add_argument("--pdf", action="store_true", help="also write a PDF report (needs --out)")
    p.add_argument("--no-metrics", action="store_true", help="skip the metric summary")
    p.add_argument("--timestamp", action="store_true", help="record the issue time")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("sections", parents=[source], help="build disjoint sections")
    p.add_argument("--level", type=_positive, default=1)
    p.add_argument("--out", help="directory for the witness")
    p.set_defaults(handler=cmd_sections)

    p = sub.add_parser("threads", parents=[source], help="enumerate threads")
    p.add_argument("--depth", type=_positive, default=DEFAULT_DEPTH)
    p.add_argument("--limit", type=_positive, default=DEFAULT_THREAD_LIMIT)
    p.set_defaults(handler=cmd_threads)

    p = sub.add_parser("export", parents=[source], help="export one level")
    p.add_argument("--level", type=_positive, default=1)
    p.add_argument("--format", choices=EXPORT_FORMATS, default="dot")
    p.add_argument("--out", help="output directory (stdout when omitted)")
    p.set_defaults(handler=cmd_export)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
        return args.handler(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (DiagramSyntaxError, DuplicateName, UnknownReference, UnsupportedFormat) as e:
        print(str(e), file=sys.stderr)
        return EXIT_INVALID
    except DiagramInvalid as e:
        print(f"invalid diagram: {e}", file=sys.stderr)
        for violation in e.report.failures():
            print(f"  {violation.code}: {violation.message}", file=sys.stderr)
        return EXIT_INVALID
    except (ConstructionFailed, PreconditionFailed) as e:
        print(str(e), file=sys.stderr)
        return EXIT_NEGATIVE
    except IndexOutOfRange as e:
        print(f"IndexOutOfRange: {e}", file=sys.stderr)
        return EXIT_INVALID
    except UnintendedCollision as e:
        print(str(e), file=sys.stderr)
        return EXIT_INTERNAL
    except MarkovError as e:
        print(str(e), file=sys.stderr)
        return EXIT_INTERNAL
    except Exception:
        logger.exception("Unexpected error")
        return EXIT_INTERNAL


def main(argv: Optional[Sequence[str]] = None):
    settings = Settings.from_env(default_log_level="WARNING")
    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
