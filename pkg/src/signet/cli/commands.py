"""
commands implements the signet commands on top of the pipeline
components. Every command returns its exit code: 0 on success, 2 when
items were skipped under the skip policy
"""

import argparse
import json
import os
import sys
from typing import Dict, List, Optional, Tuple

from signet.balance.analytics import (
    analyze_snapshot,
    discretize,
    predict_edge_sign,
)
from signet.cli.cli_config import RunConfig
from signet.core.errors import ConfigError
from signet.core.jsonl import read_jsonl, write_jsonl
from signet.core.logging import logging
from signet.core.report import RunReport
from signet.core.types import (
    Capability,
    ErrorPolicy,
    GatewayMode,
    PremiseSource,
)
from signet.core.utils import canonical_json
from signet.core.worker_pool import WorkerPool
from signet.entities.alias_table import (
    DEFAULT_ALIAS_TABLE,
    AliasTable,
    validate_alias_table,
)
from signet.explanation.explainer import (
    llm_observations,
    run_llm_pipeline,
    summarize_all,
)
from signet.explanation.models import PairExplanation, ParseDiagnostic
from signet.gateway.backends import Gateway
from signet.gateway.fixtures import ReplayFixture
from signet.ingestion.fetcher import fetch_corpus
from signet.ingestion.news import Corpus, load_corpus, write_corpus
from signet.ingestion.stock_filter import filter_stock_news
from signet.metrics.metrics import MetricsManager
from signet.network.aggregation import build_snapshot, build_temporal
from signet.network.diff import diff_snapshots
from signet.network.export import (
    export_diff,
    export_snapshot,
    load_snapshot,
    snapshot_name,
)
from signet.network.models import NetworkSnapshot, TemporalNetwork, Window
from signet.relations.extractor import extract_relations
from signet.relations.models import EntityPair, RelationObservation

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_PARTIAL = 2


class RunContext:
    """
    RunContext holds what the stages of one command share: the report,
    the metrics, the worker pool and a lazily built gateway
    """

    def __init__(self, config: RunConfig, handle_signals: bool = False):
        self.config = config
        self.report = RunReport(config_digest=config.digest())
        self.metrics = MetricsManager(config.metrics)
        self.pool = WorkerPool(
            max_workers=config.max_workers, handle_signals=handle_signals
        )
        self._gateway: Optional[Gateway] = None
        self._table: Optional[AliasTable] = None

    @property
    def gateway(self) -> Gateway:
        """
        Property that holds the gateway, built on first use
        """
        if self._gateway is None:
            fixture = None
            if self.config.mode != GatewayMode.LIVE:
                if not self.config.paths.fixtures:
                    raise ConfigError(
                        "fixtures", f"{self.config.mode} mode needs fixtures"
                    )
                fixture = ReplayFixture(self.config.paths.fixtures)
            self._gateway = Gateway(
                self.config.gateway, fixture, metrics=self.metrics
            )
        return self._gateway

    @property
    def table(self) -> AliasTable:
        """
        Property that holds the alias table, loaded on first use
        """
        if self._table is None:
            self._table = AliasTable.load(self.config.entities.alias_table)
        return self._table

    def output(self, *parts: str) -> str:
        """
        Get a path in the output directory, creating its directory

        :param parts: Path components below the output directory
        :return: Path
        """
        path = os.path.join(self.config.paths.output_dir, *parts)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        return path

    def write(self, name: str, data: bytes | str) -> str:
        """
        Writes one output file

        :param name: Path below the output directory
        :param data: File content
        :return: Path written
        """
        path = self.output(*name.split("/"))
        if isinstance(data, str):
            data = data.encode("utf-8")
        with open(path, "wb") as output_file:
            output_file.write(data)
        logging.debug("Wrote '%s'", path)
        return path

    def finish(self) -> int:
        """
        Writes the report and the metrics and releases the gateway

        :return: Exit code
        """
        if self._gateway is not None:
            self._gateway.close()

        self.write("report.json", self.report.to_json() + "\n")
        for stage, counts in self.report.stages.items():
            self.metrics.record_stage(
                stage,
                counts.items_out,
                self.report.timings.get(stage, 0.0),
            )
        self.metrics.save_metrics(self.config.paths.output_dir)

        if self.report.partial:
            logging.warning(
                "Run completed with %s skipped error(s)",
                len(self.report.errors),
            )
            return EXIT_PARTIAL
        return EXIT_OK


def _print(text: str) -> None:
    sys.stdout.write(text + "\n")


def _load_corpus(ctx: RunContext) -> Corpus:
    config = ctx.config
    errors = []
    with ctx.report.timed("ingest"):
        corpus = load_corpus(config.paths.corpus, config.on_error, errors)
    for error in errors:
        ctx.report.record_error(error)
    ctx.report.record_stage("ingest", len(corpus) + len(errors), len(corpus))
    return corpus


def _filter(ctx: RunContext, corpus: Corpus) -> Tuple[Corpus, Corpus]:
    config = ctx.config
    if not config.ingestion.stock_filter.enabled:
        return corpus, Corpus()

    errors = None if config.on_error == ErrorPolicy.FAIL else []
    with ctx.report.timed("filter"):
        kept, dropped = filter_stock_news(
            corpus,
            ctx.gateway.zsc,
            config=config.ingestion.stock_filter,
            premise=config.ingestion.premise,
            pool=ctx.pool,
            errors=errors,
        )
    for error in errors or []:
        ctx.report.record_error(error)
    ctx.report.record_stage("filter", len(corpus), len(kept))
    return kept, dropped


def _extract(ctx: RunContext, corpus: Corpus) -> List[RelationObservation]:
    config = ctx.config
    with ctx.report.timed("classify"):
        return extract_relations(
            corpus,
            ctx.table,
            ctx.gateway,
            config=config.relations,
            premise=config.ingestion.premise,
            include_unresolved=config.entities.include_unresolved,
            pool=ctx.pool,
            on_error=config.on_error,
            report=ctx.report,
        )


def _explain(
    ctx: RunContext, corpus: Corpus
) -> Tuple[List[PairExplanation], List[RelationObservation]]:
    config = ctx.config
    diagnostics: List[ParseDiagnostic] = []
    with ctx.report.timed("explain"):
        explanations = run_llm_pipeline(
            corpus,
            ctx.table,
            ctx.gateway.llm,
            config=config.explanation,
            include_summary=(
                config.ingestion.premise == PremiseSource.HEADLINE_SUMMARY
            ),
            pool=ctx.pool,
            on_error=config.on_error,
            report=ctx.report,
            diagnostics=diagnostics,
        )
    write_jsonl(ctx.output("explanations.jsonl"), explanations)
    write_jsonl(ctx.output("diagnostics.jsonl"), diagnostics)

    if config.explanation.summaries:
        with ctx.report.timed("summarize"):
            summaries = summarize_all(
                explanations,
                ctx.gateway.llm,
                on_error=config.on_error,
                report=ctx.report,
            )
        write_jsonl(ctx.output("summaries.jsonl"), summaries)

    observations = llm_observations(
        explanations,
        config.explanation.score_policy,
        include_unresolved=config.entities.include_unresolved,
    )
    return explanations, observations


def _build(
    ctx: RunContext, observations: List[RelationObservation]
) -> TemporalNetwork:
    network_config = ctx.config.network
    observations = [
        observation
        for observation in observations
        if observation.method in network_config.methods
    ]
    with ctx.report.timed("build"):
        network = build_temporal(
            observations,
            network_config.window,
            network_config.stride,
            weighting=network_config.weighting,
            include_isolated=network_config.include_isolated,
        )
    for snapshot in network.snapshots:
        ctx.write(
            f"snapshots/{snapshot_name(snapshot)}", export_snapshot(snapshot)
        )
    ctx.report.record_stage(
        "build",
        len(observations),
        sum(len(snapshot.edges) for snapshot in network.snapshots),
    )

    if network_config.event_date is not None and network.snapshots:
        _split(ctx, observations, network)
    return network


def _split(
    ctx: RunContext,
    observations: List[RelationObservation],
    network: TemporalNetwork,
) -> None:
    network_config = ctx.config.network
    event = network_config.event_date
    first, last = network.snapshots[0].window, network.snapshots[-1].window
    try:
        before_window = Window(start=first.start, end=event)
        after_window = Window(start=event, end=last.end)
    except ValueError as exc:
        raise ConfigError(
            "network.event_date", f"outside the network windows: {exc}"
        ) from exc

    snapshots = {}
    for name, window in (("before", before_window), ("after", after_window)):
        snapshots[name] = build_snapshot(
            observations,
            window,
            network_config.weighting,
            network_config.include_isolated,
        )
        ctx.write(f"snapshot_{name}.json", export_snapshot(snapshots[name]))

    diff = diff_snapshots(
        snapshots["before"], snapshots["after"], network_config.tau
    )
    ctx.write("diff.json", export_diff(diff))
    logging.info(
        "Event split at %s: %s added, %s removed, %s sign flip(s)",
        event,
        len(diff.added),
        len(diff.removed),
        len(diff.sign_flips),
    )


def _analyze(ctx: RunContext, snapshots: List[NetworkSnapshot]) -> None:
    tau = ctx.config.network.tau
    with ctx.report.timed("analyze"):
        records = [analyze_snapshot(snapshot, tau) for snapshot in snapshots]
    ctx.write("balance.json", canonical_json({"snapshots": records}) + "\n")


def cmd_pipeline(config: RunConfig, handle_signals: bool = False) -> int:
    """
    Runs the whole pipeline and writes every output of a run

    :param config: Run configuration
    :param handle_signals: True to cancel pending items on SIGINT/SIGTERM
    :return: Exit code
    """
    config.validate_run()
    ctx = RunContext(config, handle_signals)
    corpus = _load_corpus(ctx)
    kept, dropped = _filter(ctx, corpus)
    write_corpus(kept, ctx.output("corpus.jsonl"))
    write_corpus(dropped, ctx.output("dropped.jsonl"))

    observations = []
    if config.zsc_enabled:
        observations.extend(_extract(ctx, kept))
    if config.explanation.enabled:
        observations.extend(_explain(ctx, kept)[1])
    write_jsonl(ctx.output("observations.jsonl"), observations)

    network = _build(ctx, observations)
    _analyze(ctx, list(network.snapshots))
    return ctx.finish()


def cmd_record(config: RunConfig, handle_signals: bool = False) -> int:
    """
    Runs the pipeline against live endpoints while appending every
    exchange to the fixture file. Any failure is fatal

    :param config: Run configuration
    :param handle_signals: True to cancel pending items on SIGINT/SIGTERM
    :return: Exit code
    """
    config = config.model_copy(
        update={"mode": GatewayMode.RECORD, "on_error": ErrorPolicy.FAIL},
        deep=True,
    )
    config.gateway.set_mode(GatewayMode.RECORD)
    return cmd_pipeline(config, handle_signals)


def cmd_ingest(config: RunConfig, args: argparse.Namespace) -> int:
    """
    Normalizes a corpus file, or fetches one from a news endpoint
    """
    ctx = RunContext(config)
    output = args.output or ctx.output("corpus.jsonl")
    if args.url:
        fetch = config.ingestion.fetch.model_copy(
            update={"endpoint": args.url}
        )
        errors = []
        with ctx.report.timed("ingest"):
            corpus = fetch_corpus(
                output, fetch, on_error=config.on_error, errors=errors
            )
        for error in errors:
            ctx.report.record_error(error)
        ctx.report.record_stage(
            "ingest", len(corpus) + len(errors), len(corpus)
        )
    else:
        config.validate_run(capabilities=[])
        corpus = _load_corpus(ctx)
        write_corpus(corpus, output)
    _print(f"{len(corpus)} item(s) written to {output}")
    return ctx.finish()


def cmd_filter(config: RunConfig, _: argparse.Namespace) -> int:
    """
    Splits a corpus into stock news and relationship news
    """
    config.validate_run(capabilities=[Capability.ZSC])
    ctx = RunContext(config)
    kept, dropped = _filter(ctx, _load_corpus(ctx))
    write_corpus(kept, ctx.output("corpus.jsonl"))
    write_corpus(dropped, ctx.output("dropped.jsonl"))
    _print(f"kept {len(kept)}, dropped {len(dropped)}")
    return ctx.finish()


def cmd_extract(config: RunConfig, _: argparse.Namespace) -> int:
    """
    Extracts zero-shot relation observations from a filtered corpus
    """
    config.validate_run(capabilities=[Capability.NER, Capability.ZSC])
    ctx = RunContext(config)
    observations = _extract(ctx, _load_corpus(ctx))
    write_jsonl(ctx.output("observations.jsonl"), observations)
    _print(f"{len(observations)} observation(s)")
    return ctx.finish()


def cmd_explain(config: RunConfig, _: argparse.Namespace) -> int:
    """
    Explains the relationships of a filtered corpus with the LLM
    """
    config.validate_run(capabilities=[Capability.LLM])
    ctx = RunContext(config)
    explanations, observations = _explain(ctx, _load_corpus(ctx))
    write_jsonl(ctx.output("llm_observations.jsonl"), observations)
    _print(f"{len(explanations)} explanation(s)")
    return ctx.finish()


def _read_observations(
    args: argparse.Namespace,
) -> List[RelationObservation]:
    observations = []
    for path in args.observations or []:
        observations.extend(read_jsonl(path, RelationObservation))
    return observations


def cmd_build(config: RunConfig, args: argparse.Namespace) -> int:
    """
    Builds the snapshots of observation files
    """
    if not args.observations:
        raise ConfigError("observations", "no observation file")
    ctx = RunContext(config)
    network = _build(ctx, _read_observations(args))
    for snapshot in network.snapshots:
        _print(
            f"{snapshot.window}: {len(snapshot.nodes)} node(s),"
            f" {len(snapshot.edges)} edge(s)"
        )
    return ctx.finish()


def cmd_diff(config: RunConfig, args: argparse.Namespace) -> int:
    """
    Compares two snapshot files
    """
    diff = diff_snapshots(
        load_snapshot(args.before),
        load_snapshot(args.after),
        config.network.tau,
    )
    data = export_diff(diff)
    if args.output:
        with open(args.output, "wb") as diff_file:
            diff_file.write(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    return EXIT_OK


def cmd_analyze(config: RunConfig, args: argparse.Namespace) -> int:
    """
    Prints the balance analytics of a snapshot file
    """
    record = analyze_snapshot(
        load_snapshot(args.snapshot), config.network.tau
    )
    _print(canonical_json(record))
    return EXIT_OK


def cmd_predict(config: RunConfig, args: argparse.Namespace) -> int:
    """
    Prints the balance prediction of a pair without an edge
    """
    graph = discretize(load_snapshot(args.snapshot), config.network.tau)
    prediction = predict_edge_sign(graph, EntityPair.parse(args.pair))
    _print(canonical_json(prediction.model_dump(mode="json")))
    return EXIT_OK


def cmd_export(_: RunConfig, args: argparse.Namespace) -> int:
    """
    Exports a snapshot file as json, dot or graphml
    """
    data = export_snapshot(load_snapshot(args.snapshot), args.format)
    if args.output:
        with open(args.output, "wb") as export_file:
            export_file.write(data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    return EXIT_OK


def cmd_run(config: RunConfig, _: argparse.Namespace) -> int:
    """
    Runs the end-to-end pipeline
    """
    return cmd_pipeline(config, handle_signals=True)


def cmd_record_run(config: RunConfig, _: argparse.Namespace) -> int:
    """
    Runs the end-to-end pipeline in record mode
    """
    return cmd_record(config, handle_signals=True)


def cmd_entities_validate(
    config: RunConfig, args: argparse.Namespace
) -> int:
    """
    Prints the conflicts of an alias table file
    """
    path = args.alias_table or config.entities.alias_table
    path = path or DEFAULT_ALIAS_TABLE
    try:
        with open(path, encoding="utf-8") as table_file:
            records: List[Dict] = json.load(table_file)
        table = AliasTable.from_records(records)
    except (OSError, ValueError, TypeError) as exc:
        raise ConfigError("alias_table", f"{path}: {exc}") from exc

    conflicts = validate_alias_table(table)
    for conflict in conflicts:
        _print(str(conflict))
    if conflicts:
        logging.error("%s conflict(s) in '%s'", len(conflicts), path)
        return EXIT_FATAL

    _print(f"{len(table)} entities, no conflict")
    return EXIT_OK
