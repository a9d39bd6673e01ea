"""
main is the signet command line entry point. It parses the global flags
and the command, loads the run configuration and maps failures to exit
codes: 0 on success, 1 on fatal errors, 2 on partial runs
"""

import argparse
import sys
from typing import Any, Dict, List, Optional, Tuple

from signet.cli import commands
from signet.cli.cli_config import load_run_config
from signet.core.errors import ConfigError, PipelineError, SignetError
from signet.core.logging import logging, set_quiet
from signet.core.types import (
    ErrorPolicy,
    ExportFormat,
    GatewayMode,
    PairScope,
    PremiseSource,
    Weighting,
)

ON_OFF = {"on": True, "off": False}

# argparse destination -> configuration path
OVERRIDES: Dict[str, Tuple[str, ...]] = {
    "mode": ("mode",),
    "out": ("paths", "output_dir"),
    "corpus": ("paths", "corpus"),
    "fixtures": ("paths", "fixtures"),
    "on_error": ("on_error",),
    "workers": ("max_workers",),
    "premise": ("ingestion", "premise"),
    "threshold": ("ingestion", "stock_filter", "threshold"),
    "alias_table": ("entities", "alias_table"),
    "classes": ("relations", "classes"),
    "context": ("relations", "context", "enabled"),
    "pair_scope": ("relations", "pair_scope"),
    "llm_classes": ("explanation", "classes"),
    "summaries": ("explanation", "summaries"),
    "window": ("network", "window"),
    "stride": ("network", "stride"),
    "tau": ("network", "tau"),
    "weighting": ("network", "weighting"),
    "include_isolated": ("network", "include_isolated"),
    "event_date": ("network", "event_date"),
    "zsc": ("zsc_enabled",),
    "llm": ("explanation", "enabled"),
}


def _on_off(value: str) -> bool:
    try:
        return ON_OFF[value]
    except KeyError as exc:
        raise argparse.ArgumentTypeError(
            f"expected on or off, got '{value}'"
        ) from exc


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    """
    Turns the flags given on the command line into configuration values

    :param args: Parsed arguments
    :return: Nested configuration overrides
    """
    overrides: Dict[str, Any] = {}
    for dest, path in OVERRIDES.items():
        value = getattr(args, dest, None)
        if value is None:
            continue
        node = overrides
        for key in path[:-1]:
            node = node.setdefault(key, {})
        node[path[-1]] = value
    return overrides


def _corpus_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--corpus", type=str, help="Line-delimited news corpus"
    )
    parser.add_argument(
        "--on-error",
        dest="on_error",
        choices=[str(policy) for policy in ErrorPolicy],
        help="Stop on the first failed item or skip it",
    )


def _pipeline_flags(parser: argparse.ArgumentParser) -> None:
    _corpus_flags(parser)
    parser.add_argument("--fixtures", type=str, help="Replay fixture file")
    parser.add_argument(
        "--alias-table", dest="alias_table", type=str, help="Alias table"
    )
    parser.add_argument(
        "--workers", type=int, help="Items processed concurrently"
    )
    parser.add_argument(
        "--premise",
        choices=[str(premise) for premise in PremiseSource],
        help="Text fed to the models",
    )


def _zsc_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--classes", type=int, choices=[3, 4], help="Relation classes"
    )
    parser.add_argument(
        "--context", type=_on_off, help="Topic tagging (on|off)"
    )
    parser.add_argument(
        "--pair-scope",
        dest="pair_scope",
        choices=[str(scope) for scope in PairScope],
        help="Classify all pairs or only pairs touching an item ticker",
    )


def _llm_flags(parser: argparse.ArgumentParser, prefix: str = "") -> None:
    parser.add_argument(
        f"--{prefix}classes",
        dest="llm_classes",
        type=int,
        choices=[3, 4],
        help="Classes offered to the LLM",
    )
    parser.add_argument(
        "--summaries", type=_on_off, help="Per pair summaries (on|off)"
    )


def _network_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--window", type=str, help="Window length, e.g. 30d")
    parser.add_argument("--stride", type=str, help="Window stride, e.g. 30d")
    parser.add_argument(
        "--weighting",
        choices=[str(weighting) for weighting in Weighting],
        help="Edge weighting rule",
    )
    parser.add_argument(
        "--include-isolated",
        dest="include_isolated",
        action="store_true",
        default=None,
        help="Keep entities without edges as nodes",
    )
    parser.add_argument(
        "--event-date",
        dest="event_date",
        type=str,
        help="UTC date splitting before and after snapshots",
    )


def _tau_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--tau", type=float, help="Smallest weight magnitude kept"
    )


def build_parser() -> argparse.ArgumentParser:
    """
    Builds the argument parser of every command

    :return: Parser
    """
    parser = argparse.ArgumentParser(
        prog="signet",
        description="Signed business networks from news",
    )
    parser.add_argument("--config", type=str, help="YAML configuration")
    parser.add_argument(
        "--mode",
        choices=[str(mode) for mode in GatewayMode],
        help="Gateway mode",
    )
    parser.add_argument("--out", type=str, help="Output directory")
    parser.add_argument(
        "--quiet", action="store_true", help="Only log warnings and errors"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="Normalize or fetch a corpus")
    _corpus_flags(ingest)
    ingest.add_argument("--url", type=str, help="News endpoint to fetch")
    ingest.add_argument("--output", type=str, help="Corpus file written")
    ingest.set_defaults(func=commands.cmd_ingest)

    filter_parser = sub.add_parser("filter", help="Drop stock market news")
    _pipeline_flags(filter_parser)
    filter_parser.add_argument(
        "--threshold", type=float, help="Stock label score threshold"
    )
    filter_parser.set_defaults(func=commands.cmd_filter)

    extract = sub.add_parser("extract", help="Zero-shot relation pipeline")
    _pipeline_flags(extract)
    _zsc_flags(extract)
    extract.set_defaults(func=commands.cmd_extract)

    explain = sub.add_parser("explain", help="LLM explanation pipeline")
    _pipeline_flags(explain)
    _llm_flags(explain)
    explain.set_defaults(func=commands.cmd_explain)

    build = sub.add_parser("build", help="Build network snapshots")
    build.add_argument(
        "--observations",
        action="append",
        type=str,
        help="Observation file, may be repeated",
    )
    _network_flags(build)
    _tau_flag(build)
    build.set_defaults(func=commands.cmd_build)

    diff = sub.add_parser("diff", help="Compare two snapshots")
    diff.add_argument("--before", type=str, required=True)
    diff.add_argument("--after", type=str, required=True)
    diff.add_argument("--output", type=str, help="Diff file written")
    _tau_flag(diff)
    diff.set_defaults(func=commands.cmd_diff)

    analyze = sub.add_parser("analyze", help="Structural balance analytics")
    analyze.add_argument("--snapshot", type=str, required=True)
    _tau_flag(analyze)
    analyze.set_defaults(func=commands.cmd_analyze)

    predict = sub.add_parser("predict", help="Predict a missing edge sign")
    predict.add_argument("--snapshot", type=str, required=True)
    predict.add_argument(
        "--pair", type=str, required=True, help="Entity ids as a,b"
    )
    _tau_flag(predict)
    predict.set_defaults(func=commands.cmd_predict)

    export = sub.add_parser("export", help="Export a snapshot")
    export.add_argument("--snapshot", type=str, required=True)
    export.add_argument(
        "--format",
        choices=[str(export_format) for export_format in ExportFormat],
        default=str(ExportFormat.JSON),
    )
    export.add_argument("--output", type=str, help="File written")
    export.set_defaults(func=commands.cmd_export)

    for name, func, help_text in (
        ("run", commands.cmd_run, "Run the whole pipeline"),
        ("record", commands.cmd_record_run, "Run live and record fixtures"),
    ):
        run = sub.add_parser(name, help=help_text)
        _pipeline_flags(run)
        _zsc_flags(run)
        _llm_flags(run, prefix="llm-")
        _network_flags(run)
        _tau_flag(run)
        run.add_argument("--zsc", type=_on_off, help="ZSC pipeline (on|off)")
        run.add_argument("--llm", type=_on_off, help="LLM pipeline (on|off)")
        run.set_defaults(func=func)

    entities = sub.add_parser("entities", help="Alias table tools")
    entities_sub = entities.add_subparsers(
        dest="entities_command", required=True
    )
    validate = entities_sub.add_parser(
        "validate", help="Report alias conflicts"
    )
    validate.add_argument(
        "--alias-table", dest="alias_table", type=str, help="Alias table"
    )
    validate.set_defaults(func=commands.cmd_entities_validate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Runs a signet command

    :param argv: Arguments, sys.argv when None
    :return: Exit code
    """
    args = build_parser().parse_args(argv)
    set_quiet(args.quiet)

    try:
        config = load_run_config(args.config, overrides_from_args(args))
        return args.func(config, args)
    except ConfigError as exc:
        logging.error("Usage error: %s", exc)
    except PipelineError as exc:
        logging.error("Pipeline failed: %s", exc)
    except (SignetError, OSError, ValueError) as exc:
        logging.error("Command '%s' failed: %s", args.command, exc)
    return commands.EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
