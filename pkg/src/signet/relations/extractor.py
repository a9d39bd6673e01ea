"""
extractor implements the zero-shot relation extraction pipeline: stock
filter, organization recognition, entity resolution, pair enumeration,
topic tagging and relation classification
"""

import itertools
from typing import Dict, Iterable, List, Optional, Set, Tuple

from signet.core.errors import FATAL_ERRORS, PipelineError
from signet.core.logging import logging
from signet.core.report import RunReport
from signet.core.types import (
    THREE_CLASSES,
    ErrorPolicy,
    Method,
    PairScope,
    PremiseSource,
    RelationLabel,
)
from signet.core.worker_pool import WorkerPool
from signet.entities.alias_table import AliasTable
from signet.entities.resolver import ResolvedMention, resolve
from signet.gateway.backends import Gateway, ZscBackend
from signet.ingestion.ingestion_config import StockFilterConfig
from signet.ingestion.news import Corpus, NewsItem
from signet.ingestion.stock_filter import filter_stock_news
from signet.relations.models import (
    ContextTag,
    EntityPair,
    HypothesisTemplate,
    RelationObservation,
)
from signet.relations.relations_config import (
    DEFAULT_CONTEXT_TEMPLATE,
    RelationConfig,
)


def enumerate_pairs(
    resolved: Iterable[ResolvedMention | str],
    focal: Optional[Set[str]] = None,
) -> List[EntityPair]:
    """
    Enumerates the unordered pairs of distinct entities

    :param resolved: Resolved mentions, or entity ids
    :param focal: When given, only pairs touching one of these ids
    :return: Pairs in lexicographic order
    """
    ids = sorted(
        {
            item if isinstance(item, str) else item.entity_id
            for item in resolved
        }
    )
    return [
        EntityPair(a=a, b=b)
        for a, b in itertools.combinations(ids, 2)
        if focal is None or a in focal or b in focal
    ]


def focal_entities(item: NewsItem, table: AliasTable) -> Set[str]:
    """
    Get the entities listed under the tickers of an item

    :param item: News item
    :param table: Alias table
    :return: Entity ids
    """
    return {
        entity_id
        for entity_id in (table.ticker_entity(t) for t in item.tickers)
        if entity_id is not None
    }


def display_names(resolved: Iterable[ResolvedMention]) -> Dict[str, str]:
    """
    Get the surface of the first mention of every entity

    :param resolved: Resolved mentions, in text order
    :return: Display name by entity id
    """
    names: Dict[str, str] = {}
    for mention in resolved:
        names.setdefault(mention.entity_id, mention.mention.surface)
    return names


def extract_context(
    headline: str,
    zsc: ZscBackend,
    topic_labels: List[str],
    hypothesis_template: str = DEFAULT_CONTEXT_TEMPLATE,
) -> ContextTag:
    """
    Tags a headline with its best scoring topic

    :param headline: Headline
    :param zsc: Zero-shot backend
    :param topic_labels: Candidate topics
    :param hypothesis_template: Hypothesis with one {} placeholder
    :return: Best topic and its score
    """
    if not topic_labels:
        raise ValueError("topic_labels must be non-empty")

    result = zsc.zsc(headline, hypothesis_template, topic_labels)
    return ContextTag(label=result.top_label, score=result.top_score)


def classify_relation(
    item: NewsItem,
    pair: EntityPair,
    template: HypothesisTemplate,
    zsc: ZscBackend,
    names: Optional[Dict[str, str]] = None,
    classes: Optional[List[RelationLabel]] = None,
    premise: PremiseSource = PremiseSource.HEADLINE,
    context: Optional[ContextTag] = None,
    multi_label: bool = False,
    unresolved: bool = False,
) -> RelationObservation:
    """
    Classifies the relationship of a pair in one item. One hypothesis is
    instantiated per class with the document display names

    :param item: News item mentioning both entities
    :param pair: Entity pair
    :param template: Relation hypothesis template
    :param zsc: Zero-shot backend
    :param names: Display names by entity id, ids when missing
    :param classes: Candidate classes, positive/negative/neutral
    :param premise: Text classified
    :param context: Topic tag attached to the observation
    :param multi_label: Score classes independently
    :param unresolved: True when an endpoint is not in the alias table
    :return: Observation with the top class and its score
    :raises PipelineError: If the backend fails
    """
    names = names or {}
    classes = classes or THREE_CLASSES
    name_a, name_b = names.get(pair.a, pair.a), names.get(pair.b, pair.b)
    try:
        result = zsc.zsc(
            item.premise(premise),
            template.instantiate(name_a, name_b),
            [str(label) for label in classes],
            multi_label=multi_label,
        )
    except FATAL_ERRORS:
        raise
    except Exception as exc:
        raise PipelineError("classify", item.id, exc, pair.key) from exc

    return RelationObservation(
        pair=pair,
        label=RelationLabel.from_string(result.top_label),
        score=result.top_score,
        doc_id=item.id,
        published_at=item.published_at,
        context=context,
        method=Method.ZSC,
        display_names=(name_a, name_b),
        unresolved=unresolved,
    )


def _extract_item(
    item: NewsItem,
    table: AliasTable,
    gateway: Gateway,
    config: RelationConfig,
    premise: PremiseSource,
    include_unresolved: bool,
) -> Tuple[List[RelationObservation], List[PipelineError]]:
    try:
        mentions = gateway.ner.ner(item.premise(premise))
    except FATAL_ERRORS:
        raise
    except Exception as exc:
        raise PipelineError("ner", item.id, exc) from exc

    resolved = [resolve(mention, table) for mention in mentions]
    if not include_unresolved:
        resolved = [mention for mention in resolved if mention.resolved]

    focal = None
    if config.pair_scope == PairScope.FOCAL:
        focal = focal_entities(item, table)

    pairs = enumerate_pairs(resolved, focal)
    if not pairs:
        return [], []

    context = None
    if config.context.enabled:
        try:
            context = extract_context(
                item.headline,
                gateway.zsc,
                config.context.labels,
                config.context.hypothesis_template,
            )
        except FATAL_ERRORS:
            raise
        except Exception as exc:
            raise PipelineError("context", item.id, exc) from exc

    names = display_names(resolved)
    unresolved = {m.entity_id for m in resolved if not m.resolved}
    template = HypothesisTemplate(text=config.hypothesis_template)
    observations, errors = [], []
    for pair in pairs:
        try:
            observations.append(
                classify_relation(
                    item,
                    pair,
                    template,
                    gateway.zsc,
                    names=names,
                    classes=config.class_labels,
                    premise=premise,
                    context=context,
                    multi_label=config.multi_label,
                    unresolved=bool(unresolved & {pair.a, pair.b}),
                )
            )
        except PipelineError as exc:
            errors.append(exc)

    return observations, errors


def _handle(
    error: PipelineError,
    on_error: ErrorPolicy,
    report: Optional[RunReport],
) -> None:
    if on_error == ErrorPolicy.FAIL:
        raise error
    logging.error("%s", error)
    if report is not None:
        report.record_error(error)


def extract_relations(
    corpus: Corpus,
    table: AliasTable,
    gateway: Gateway,
    config: Optional[RelationConfig] = None,
    premise: PremiseSource = PremiseSource.HEADLINE,
    include_unresolved: bool = True,
    pool: Optional[WorkerPool] = None,
    on_error: ErrorPolicy = ErrorPolicy.FAIL,
    report: Optional[RunReport] = None,
) -> List[RelationObservation]:
    """
    Extracts relation observations from an already filtered corpus.
    Items run concurrently; observations are assembled in corpus order,
    then pair order

    :param corpus: Filtered corpus
    :param table: Alias table
    :param gateway: Model gateway
    :param config: Relation extraction settings
    :param premise: Text fed to the recognizer and classifier
    :param include_unresolved: False to drop unresolved mentions
    :param pool: Worker pool, sequential when absent
    :param on_error: fail on the first error, or skip failed items
    :param report: Report receiving counts and skipped errors
    :return: Observations
    """
    config = config or RelationConfig()
    pool = pool or WorkerPool(max_workers=1)
    outcomes = pool.map(
        lambda item: _extract_item(
            item, table, gateway, config, premise, include_unresolved
        ),
        corpus.items,
    )

    observations = []
    for item, outcome in zip(corpus.items, outcomes):
        if not outcome.ok:
            if isinstance(outcome.error, FATAL_ERRORS):
                raise outcome.error
            error = outcome.error
            if not isinstance(error, PipelineError):
                error = PipelineError("extract", item.id, error)
            _handle(error, on_error, report)
            continue

        item_observations, errors = outcome.result
        for error in errors:
            _handle(error, on_error, report)
        observations.extend(item_observations)

    if report is not None:
        report.record_stage("classify", len(corpus), len(observations))
    logging.info(
        "Extracted %s observation(s) from %s item(s)",
        len(observations),
        len(corpus),
    )
    return observations


def run_zsc_pipeline(
    corpus: Corpus,
    table: AliasTable,
    gateway: Gateway,
    config: Optional[RelationConfig] = None,
    stock_filter: Optional[StockFilterConfig] = None,
    premise: PremiseSource = PremiseSource.HEADLINE,
    include_unresolved: bool = True,
    pool: Optional[WorkerPool] = None,
    on_error: ErrorPolicy = ErrorPolicy.FAIL,
    report: Optional[RunReport] = None,
) -> List[RelationObservation]:
    """
    Runs the zero-shot pipeline: stock filter, then relation extraction
    over the kept items

    :param corpus: Corpus
    :param table: Alias table
    :param gateway: Model gateway
    :param config: Relation extraction settings
    :param stock_filter: Stock filter settings, enabled by default
    :param premise: Text fed to the filter, recognizer and classifier
    :param include_unresolved: False to drop unresolved mentions
    :param pool: Worker pool, sequential when absent
    :param on_error: fail on the first error, or skip failed items
    :param report: Report receiving counts and skipped errors
    :return: Observations in corpus order, then pair order
    """
    stock_filter = stock_filter or StockFilterConfig()
    kept = corpus
    if stock_filter.enabled:
        errors = None if on_error == ErrorPolicy.FAIL else []
        kept, _ = filter_stock_news(
            corpus,
            gateway.zsc,
            config=stock_filter,
            premise=premise,
            pool=pool,
            errors=errors,
        )
        for error in errors or []:
            if report is not None:
                report.record_error(error)
        if report is not None:
            report.record_stage("filter", len(corpus), len(kept))

    return extract_relations(
        kept,
        table,
        gateway,
        config=config,
        premise=premise,
        include_unresolved=include_unresolved,
        pool=pool,
        on_error=on_error,
        report=report,
    )
